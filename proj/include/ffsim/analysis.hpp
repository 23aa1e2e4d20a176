#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ffsim/events.hpp"
#include "ffsim/util.hpp"

namespace ffsim {

/// Room occupancy N(t) reconstructed from entry and exit events as a
/// right-continuous step function, with exact integrals over any interval.
class OccupancyIntegral {
 public:
  explicit OccupancyIntegral(const EventLog& log) {
    std::vector<std::pair<double, int>> deltas;
    for (const Event& e : log.events) {
      if (e.kind == EventKind::entry) deltas.emplace_back(e.time, 1);
      else if (e.kind == EventKind::exit) deltas.emplace_back(e.time, -1);
    }
    std::sort(deltas.begin(), deltas.end());
    std::int64_t n = 0;
    long double acc = 0.0L;
    for (std::size_t i = 0; i < deltas.size();) {
      double t = deltas[i].first;
      std::int64_t d = 0;
      for (; i < deltas.size() && deltas[i].first == t; ++i) d += deltas[i].second;
      if (!times_.empty())
        acc += static_cast<long double>(n) * (t - times_.back());
      n += d;
      FFSIM_CHECK(n >= 0, "more exits than entries");
      times_.push_back(t);
      counts_.push_back(n);
      cumint_.push_back(static_cast<double>(acc));
    }
  }

  /// N(t); zero before the first event, constant after the last.
  std::int64_t count_at(double t) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0;
    return counts_[static_cast<std::size_t>(it - times_.begin()) - 1];
  }

  /// Integral of N over [a, b]. Exact: N is piecewise constant.
  double integral(double a, double b) const {
    FFSIM_CHECK(b >= a, "integral interval reversed");
    return antiderivative(b) - antiderivative(a);
  }

  double mean(double a, double b) const {
    FFSIM_CHECK(b > a, "mean needs a non-empty interval");
    return integral(a, b) / (b - a);
  }

 private:
  double antiderivative(double t) const {
    auto it = std::upper_bound(times_.begin(), times_.end(), t);
    if (it == times_.begin()) return 0.0;
    std::size_t i = static_cast<std::size_t>(it - times_.begin()) - 1;
    return cumint_[i] + static_cast<double>(counts_[i]) * (t - times_[i]);
  }

  std::vector<double> times_;
  std::vector<std::int64_t> counts_;
  std::vector<double> cumint_;
};

/// One completed crossing. n_mean is the time average of the room occupancy
/// over the crossing (the agent itself included), the x coordinate of the
/// travel-time curve.
struct TravelRecord {
  std::int64_t agent = -1;
  int group = -1;
  double t_in = 0.0;
  double t_out = 0.0;
  double travel_time = 0.0;
  double n_mean = 0.0;
};

/// Completed crossings that entered strictly after the warmup cutoff,
/// sorted by exit time. Occupancy averages see the whole log, warmup
/// included; censored agents never appear but still contribute to N(t).
/// Throws ParseError on an exit without a matching entry or a duplicate.
inline std::vector<TravelRecord> travel_records(const EventLog& log, double warmup) {
  OccupancyIntegral occupancy(log);
  std::map<std::int64_t, std::pair<double, int>> open;  // id -> (t_in, group)
  std::vector<TravelRecord> records;
  for (const Event& e : log.events) {
    if (e.kind == EventKind::entry) {
      if (!open.emplace(e.agent, std::make_pair(e.time, e.group)).second)
        throw ParseError("agent " + std::to_string(e.agent) + " enters twice");
    } else if (e.kind == EventKind::exit) {
      auto it = open.find(e.agent);
      if (it == open.end())
        throw ParseError("agent " + std::to_string(e.agent) + " exits without entry");
      auto [t_in, group] = it->second;
      open.erase(it);
      if (!(e.time > t_in))
        throw ParseError("agent " + std::to_string(e.agent) + " exits at or before entry");
      if (!(t_in > warmup)) continue;
      TravelRecord r;
      r.agent = e.agent;
      r.group = group;
      r.t_in = t_in;
      r.t_out = e.time;
      r.travel_time = e.time - t_in;
      r.n_mean = occupancy.mean(t_in, e.time);
      records.push_back(r);
    }
  }
  std::sort(records.begin(), records.end(), [](const TravelRecord& a, const TravelRecord& b) {
    return std::tie(a.t_out, a.agent) < std::tie(b.t_out, b.agent);
  });
  return records;
}

// ---------------------------------------------------------------------------
// Travel-time curve: TT as a function of the occupancy average.
// ---------------------------------------------------------------------------

/// Least-squares fit of travel_time ~ intercept + slope * max(n_mean - breakpoint, 0).
/// The intercept is the free-flow travel time; slope is the delay per extra
/// agent beyond the breakpoint. The slope is undefined until the predictor
/// varies (all records on one side of the hinge leave only the mean, which
/// still estimates the free-flow time).
struct PiecewiseFit {
  std::size_t count = 0;
  std::size_t congested = 0;  // records with n_mean above the breakpoint
  double intercept = 0.0;
  double slope = 0.0;
  bool slope_defined = false;
  double r_squared = 1.0;  // 1 when the data has no variance to explain
};

inline PiecewiseFit fit_piecewise(const std::vector<TravelRecord>& records,
                                  double breakpoint) {
  PiecewiseFit fit;
  fit.count = records.size();
  if (records.empty()) return fit;
  long double sp = 0.0L, sy = 0.0L;
  for (const TravelRecord& r : records) {
    double p = std::max(r.n_mean - breakpoint, 0.0);
    if (p > 0.0) ++fit.congested;
    sp += p;
    sy += r.travel_time;
  }
  const long double n = static_cast<long double>(records.size());
  const long double p_bar = sp / n, y_bar = sy / n;
  long double spp = 0.0L, spy = 0.0L, syy = 0.0L;
  for (const TravelRecord& r : records) {
    long double dp = std::max(r.n_mean - breakpoint, 0.0) - p_bar;
    long double dy = r.travel_time - y_bar;
    spp += dp * dp;
    spy += dp * dy;
    syy += dy * dy;
  }
  if (spp > 0.0L) {
    fit.slope = static_cast<double>(spy / spp);
    fit.intercept = static_cast<double>(y_bar - (spy / spp) * p_bar);
    fit.slope_defined = true;
    if (syy > 0.0L) fit.r_squared = static_cast<double>((spy * spy) / (spp * syy));
  } else {
    fit.intercept = static_cast<double>(y_bar);
    if (syy > 0.0L) fit.r_squared = 0.0;
  }
  return fit;
}

/// Quantile of pre-sorted data by linear interpolation of order statistics
/// (the common spreadsheet definition: h = (n-1) q).
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  FFSIM_CHECK(!sorted.empty(), "quantile of empty data");
  FFSIM_CHECK(q >= 0.0 && q <= 1.0, "quantile level outside [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * q;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

/// One row of the binned travel-time curve: records with
/// bin_lo <= n_mean < bin_hi, either pooled (group -1) or one group.
/// Quantiles are computed pooled only; per-group rows carry the mean alone.
struct CurveBin {
  double bin_lo = 0.0;
  double bin_hi = 0.0;
  int group = -1;
  std::size_t count = 0;
  double mean_tt = 0.0;           // meaningful only when count > 0
  std::vector<double> quantiles;  // empty on per-group and on empty rows
};

/// Bins the records by n_mean. Bins run contiguously from the lowest to the
/// highest occupied bin; each yields a pooled row followed by one row per
/// group, zero counts included, so curves stay aligned across groups.
inline std::vector<CurveBin> curve_summary(const std::vector<TravelRecord>& records,
                                           double bin_width,
                                           const std::vector<double>& levels,
                                           std::size_t group_count) {
  FFSIM_CHECK(bin_width > 0.0, "bin width must be > 0");
  std::map<std::pair<long long, int>, std::vector<double>> cells;  // (bin, group)
  for (const TravelRecord& r : records) {
    auto bin = static_cast<long long>(std::floor(r.n_mean / bin_width));
    cells[{bin, -1}].push_back(r.travel_time);
    cells[{bin, r.group}].push_back(r.travel_time);
  }
  std::vector<CurveBin> out;
  if (cells.empty()) return out;
  const long long bin_min = cells.begin()->first.first;
  const long long bin_max = cells.rbegin()->first.first;
  for (long long bin = bin_min; bin <= bin_max; ++bin) {
    for (int group = -1; group < static_cast<int>(group_count); ++group) {
      CurveBin row;
      row.bin_lo = static_cast<double>(bin) * bin_width;
      row.bin_hi = static_cast<double>(bin + 1) * bin_width;
      row.group = group;
      auto it = cells.find({bin, group});
      if (it != cells.end()) {
        std::vector<double>& tts = it->second;
        row.count = tts.size();
        long double sum = 0.0L;
        for (double tt : tts) sum += tt;
        row.mean_tt = static_cast<double>(sum / static_cast<long double>(tts.size()));
        if (group == -1) {
          std::sort(tts.begin(), tts.end());
          for (double q : levels) row.quantiles.push_back(quantile_sorted(tts, q));
        }
      }
      out.push_back(std::move(row));
    }
  }
  return out;
}

/// Per-group travel-time summary: pooled row (group -1) first, then one row
/// per group index present.
struct GroupStats {
  int group = -1;
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
};

inline std::vector<GroupStats> group_travel_stats(const std::vector<TravelRecord>& records) {
  std::map<int, std::vector<double>> by_group;
  for (const TravelRecord& r : records) {
    by_group[-1].push_back(r.travel_time);
    by_group[r.group].push_back(r.travel_time);
  }
  std::vector<GroupStats> out;
  for (auto& [group, tts] : by_group) {
    std::sort(tts.begin(), tts.end());
    GroupStats s;
    s.group = group;
    s.count = tts.size();
    long double sum = 0.0L;
    for (double tt : tts) sum += tt;
    s.mean = static_cast<double>(sum / static_cast<long double>(tts.size()));
    s.median = quantile_sorted(tts, 0.5);
    s.q25 = quantile_sorted(tts, 0.25);
    s.q75 = quantile_sorted(tts, 0.75);
    out.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Table writers. Comma separated, one header line, shortest round-trip
// number formatting throughout, so identical inputs give identical bytes.
// A group value of -1 is written as the label "all".
// ---------------------------------------------------------------------------

namespace detail {
inline std::string group_label(int group, const std::vector<std::string>& labels) {
  if (group < 0) return "all";
  FFSIM_CHECK(static_cast<std::size_t>(group) < labels.size(), "group index out of range");
  return labels[static_cast<std::size_t>(group)];
}
}  // namespace detail

/// Records of several runs side by side; the run column tells them apart.
struct RunRecords {
  std::string run;
  std::vector<TravelRecord> records;
};

inline void write_travel_records(std::ostream& out, const std::vector<RunRecords>& runs,
                                 const std::vector<std::string>& labels) {
  out << "run,agent,group,t_in,t_out,travel_time,n_mean\n";
  for (const RunRecords& rr : runs) {
    for (const TravelRecord& r : rr.records) {
      out << rr.run << ',' << r.agent << ',' << detail::group_label(r.group, labels)
          << ',' << format_double(r.t_in) << ',' << format_double(r.t_out) << ','
          << format_double(r.travel_time) << ',' << format_double(r.n_mean) << '\n';
    }
  }
}

inline void write_curve_summary(std::ostream& out, const std::vector<CurveBin>& bins,
                                const std::vector<std::string>& labels,
                                const std::vector<double>& levels) {
  out << "bin_lo,bin_hi,group,count,mean_tt";
  for (double q : levels) out << ",q" << format_double(q * 100.0);
  out << '\n';
  for (const CurveBin& b : bins) {
    out << format_double(b.bin_lo) << ',' << format_double(b.bin_hi) << ','
        << detail::group_label(b.group, labels) << ',' << b.count << ',';
    if (b.count > 0) out << format_double(b.mean_tt);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      out << ',';
      if (i < b.quantiles.size()) out << format_double(b.quantiles[i]);
    }
    out << '\n';
  }
}

/// Fits the pooled records and every group, one row each. The v0 column is
/// room_length_m over the intercept, the speed of an unhindered crossing;
/// it stays empty when the intercept is not positive. The slope column
/// stays empty while undefined.
inline void write_fits(std::ostream& out, const std::vector<TravelRecord>& records,
                       const std::vector<std::string>& labels, double breakpoint,
                       double room_length_m) {
  out << "group,records,congested,intercept,slope,r_squared,v0\n";
  std::vector<int> groups = {-1};
  for (std::size_t g = 0; g < labels.size(); ++g) groups.push_back(static_cast<int>(g));
  for (int g : groups) {
    std::vector<TravelRecord> subset;
    for (const TravelRecord& r : records)
      if (g == -1 || r.group == g) subset.push_back(r);
    PiecewiseFit fit = fit_piecewise(subset, breakpoint);
    out << detail::group_label(g, labels) << ',' << fit.count << ',' << fit.congested << ',';
    if (fit.count > 0) out << format_double(fit.intercept);
    out << ',';
    if (fit.slope_defined) out << format_double(fit.slope);
    out << ',';
    if (fit.count > 0) out << format_double(fit.r_squared);
    out << ',';
    if (fit.count > 0 && fit.intercept > 0.0)
      out << format_double(room_length_m / fit.intercept);
    out << '\n';
  }
}

inline void write_tt_by_tout(std::ostream& out, std::vector<TravelRecord> records,
                             const std::vector<std::string>& labels) {
  std::sort(records.begin(), records.end(), [](const TravelRecord& a, const TravelRecord& b) {
    return std::tie(a.group, a.t_out, a.travel_time, a.agent) <
           std::tie(b.group, b.t_out, b.travel_time, b.agent);
  });
  out << "group,t_out,travel_time\n";
  for (const TravelRecord& r : records) {
    out << detail::group_label(r.group, labels) << ',' << format_double(r.t_out) << ','
        << format_double(r.travel_time) << '\n';
  }
}

inline void write_group_stats(std::ostream& out, const std::vector<GroupStats>& stats,
                              const std::vector<std::string>& labels) {
  out << "group,count,mean,median,q25,q75\n";
  for (const GroupStats& s : stats) {
    out << detail::group_label(s.group, labels) << ',' << s.count << ','
        << format_double(s.mean) << ',' << format_double(s.median) << ','
        << format_double(s.q25) << ',' << format_double(s.q75) << '\n';
  }
}

}  // namespace ffsim
