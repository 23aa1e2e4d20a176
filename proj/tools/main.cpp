// ffsim: floor-field pedestrian flow simulator.
//
// Commands:
//   run      one simulation -> events.csv, config.ini, manifest.json
//   sweep    replications per inflow level -> one directory per run
//   analyze  event logs -> travel-time tables
//
// Exit status: 0 success, 1 invalid arguments or config values,
// 2 missing or malformed files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ffsim/analysis.hpp"
#include "ffsim/config.hpp"
#include "ffsim/engine.hpp"
#include "ffsim/events.hpp"
#include "ffsim/manifest.hpp"
#include "ffsim/version.hpp"

namespace fs = std::filesystem;

namespace {

ffsim::SimConfig load_config(const std::string& path) {
  if (path.empty()) return ffsim::SimConfig{};
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  return ffsim::parse_config(in);
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::vector<std::string> command_line(int argc, char** argv) {
  return std::vector<std::string>(argv, argv + argc);
}

struct RunFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> alpha;
  std::optional<double> duration;
  std::string out_dir = "out";
};

int cmd_run(const RunFlags& flags, const std::vector<std::string>& argv) {
  ffsim::SimConfig cfg = load_config(flags.config_path);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.alpha) cfg.inflow_alpha = *flags.alpha;
  if (flags.duration) cfg.duration = *flags.duration;
  cfg = ffsim::validate_config(cfg);

  ffsim::EventLog log = ffsim::run(cfg);

  fs::create_directories(flags.out_dir);
  const fs::path out(flags.out_dir);
  ffsim::write_events((out / "events.csv").string(), log);
  write_text_file(out / "config.ini", ffsim::config_to_string(cfg));
  ffsim::RunManifest manifest;
  manifest.created = ffsim::iso8601_utc_now();
  manifest.command = argv;
  manifest.seeds = {cfg.seed};
  manifest.config_ini = ffsim::config_to_string(cfg);
  manifest.outputs = {"events.csv", "config.ini"};
  ffsim::write_manifest((out / "manifest.json").string(), manifest);

  std::int64_t exits = 0;
  for (const ffsim::Event& e : log.events)
    if (e.kind == ffsim::EventKind::exit) ++exits;
  std::cout << "run: " << log.events.size() << " events, " << exits
            << " complete crossings -> " << (out / "events.csv").string() << "\n";
  return 0;
}

struct SweepFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::vector<double> alphas;
  std::size_t replications = 20;
  std::optional<double> duration;
  std::string out_dir = "out";
};

std::string alpha_dir_name(double alpha) { return "alpha_" + ffsim::format_double(alpha); }

std::string rep_dir_name(std::size_t rep) {
  std::string n = std::to_string(rep);
  while (n.size() < 3) n.insert(n.begin(), '0');
  return "rep_" + n;
}

int cmd_sweep(const SweepFlags& flags, const std::vector<std::string>& argv) {
  ffsim::SimConfig base = load_config(flags.config_path);
  if (flags.seed) base.seed = *flags.seed;
  if (flags.duration) base.duration = *flags.duration;
  base = ffsim::validate_config(base);
  std::vector<double> alphas = flags.alphas;
  if (alphas.empty()) alphas = {1.0, 1.5, 1.8, 2.0, 2.3, 2.7, 3.0};

  const fs::path out(flags.out_dir);
  fs::create_directories(out);
  const std::string created = ffsim::iso8601_utc_now();

  std::vector<std::string> run_outputs;
  std::size_t delivered_for_alpha = 0;
  ffsim::run_sweep(base, alphas, flags.replications, [&](const ffsim::SweepRun& r) {
    const fs::path dir = out / alpha_dir_name(r.alpha) / rep_dir_name(r.rep_index);
    fs::create_directories(dir);
    ffsim::SimConfig run_cfg = base;
    run_cfg.inflow_alpha = r.alpha;
    run_cfg.seed = r.seed;
    ffsim::write_events((dir / "events.csv").string(), r.log);
    write_text_file(dir / "config.ini", ffsim::config_to_string(run_cfg));
    ffsim::RunManifest m;
    m.created = created;
    m.command = argv;
    m.seeds = {r.seed};
    m.config_ini = ffsim::config_to_string(run_cfg);
    m.outputs = {"events.csv", "config.ini"};
    ffsim::write_manifest((dir / "manifest.json").string(), m);
    run_outputs.push_back(alpha_dir_name(r.alpha) + "/" + rep_dir_name(r.rep_index) +
                          "/events.csv");
    ++delivered_for_alpha;
    if (delivered_for_alpha == flags.replications) {
      std::cout << "sweep: alpha " << ffsim::format_double(r.alpha) << ": "
                << flags.replications << " runs done\n";
      delivered_for_alpha = 0;
    }
  });

  ffsim::RunManifest top;
  top.created = created;
  top.command = argv;
  top.seeds = {base.seed};
  top.config_ini = ffsim::config_to_string(base);
  top.outputs = run_outputs;
  ffsim::write_manifest((out / "manifest.json").string(), top);
  std::cout << "sweep: " << run_outputs.size() << " event logs -> " << out.string() << "\n";
  return 0;
}

struct AnalyzeFlags {
  std::string input_path;
  std::string config_path;
  std::optional<double> warmup;
  std::optional<double> bin_width;
  std::string out_dir = "analysis";
};

int cmd_analyze(const AnalyzeFlags& flags, const std::vector<std::string>& argv) {
  ffsim::SimConfig cfg = ffsim::validate_config(load_config(flags.config_path));
  const double warmup = flags.warmup.value_or(cfg.warmup);
  const double bin_width = flags.bin_width.value_or(cfg.analysis.bin_width);
  if (!(warmup >= 0.0)) throw std::invalid_argument("warmup must be >= 0");
  if (!(bin_width > 0.0)) throw std::invalid_argument("bin-width must be > 0");

  std::vector<std::pair<std::string, fs::path>> inputs;  // (run name, file)
  const fs::path in(flags.input_path);
  if (!fs::exists(in)) throw std::runtime_error("no such path '" + in.string() + "'");
  if (fs::is_directory(in)) {
    for (const auto& entry : fs::recursive_directory_iterator(in)) {
      if (entry.is_regular_file() && entry.path().filename() == "events.csv")
        inputs.emplace_back(entry.path().lexically_relative(in).generic_string(),
                            entry.path());
    }
    std::sort(inputs.begin(), inputs.end());
    if (inputs.empty())
      throw std::runtime_error("no events.csv files under '" + in.string() + "'");
  } else {
    inputs.emplace_back(in.generic_string(), in);
  }

  std::vector<std::string> labels;
  std::vector<ffsim::RunRecords> runs;
  std::vector<ffsim::TravelRecord> pooled;
  for (const auto& [name, path] : inputs) {
    ffsim::EventLog log = ffsim::read_events(path.string());
    std::vector<int> remap(log.group_labels.size());
    for (std::size_t g = 0; g < log.group_labels.size(); ++g) {
      const std::string& label = log.group_labels[g];
      auto it = std::find(labels.begin(), labels.end(), label);
      if (it == labels.end()) {
        labels.push_back(label);
        remap[g] = static_cast<int>(labels.size() - 1);
      } else {
        remap[g] = static_cast<int>(it - labels.begin());
      }
    }
    ffsim::RunRecords rr;
    rr.run = name;
    rr.records = ffsim::travel_records(log, warmup);
    for (ffsim::TravelRecord& r : rr.records)
      if (r.group >= 0) r.group = remap[static_cast<std::size_t>(r.group)];
    pooled.insert(pooled.end(), rr.records.begin(), rr.records.end());
    runs.push_back(std::move(rr));
  }

  fs::create_directories(flags.out_dir);
  const fs::path out(flags.out_dir);
  const auto& levels = cfg.analysis.quantile_levels;
  auto open = [&](const char* base) {
    std::ofstream f(out / base);
    if (!f) throw std::runtime_error("cannot open '" + (out / base).string() + "' for writing");
    return f;
  };
  {
    auto f = open("travel_records.csv");
    ffsim::write_travel_records(f, runs, labels);
  }
  {
    auto f = open("curve_summary.csv");
    ffsim::write_curve_summary(
        f, ffsim::curve_summary(pooled, bin_width, levels, labels.size()), labels, levels);
  }
  {
    auto f = open("fits.csv");
    ffsim::write_fits(f, pooled, labels, cfg.analysis.breakpoint,
                      cfg.geometry.room_length_m());
  }
  {
    auto f = open("tt_by_tout.csv");
    ffsim::write_tt_by_tout(f, pooled, labels);
  }
  {
    auto f = open("steady_state.csv");
    ffsim::write_group_stats(f, ffsim::group_travel_stats(pooled), labels);
  }
  ffsim::RunManifest m;
  m.created = ffsim::iso8601_utc_now();
  m.command = argv;
  m.config_ini = ffsim::config_to_string(cfg);
  m.outputs = {"travel_records.csv", "curve_summary.csv", "fits.csv", "tt_by_tout.csv",
               "steady_state.csv"};
  ffsim::write_manifest((out / "manifest.json").string(), m);

  std::cout << "analyze: " << pooled.size() << " records from " << inputs.size()
            << " log(s) -> " << out.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floor-field pedestrian flow simulator"};
  app.set_version_flag("--version", ffsim::kVersion);
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App* run_cmd = app.add_subcommand("run", "Run one simulation");
  run_cmd->add_option("--config", run_flags.config_path, "Config file (defaults apply if omitted)");
  run_cmd->add_option("--seed", run_flags.seed, "Seed override");
  run_cmd->add_option("--alpha", run_flags.alpha, "Inflow rate override [agents/s]");
  run_cmd->add_option("--duration", run_flags.duration, "Simulated seconds override");
  run_cmd->add_option("--out", run_flags.out_dir, "Output directory")->capture_default_str();

  SweepFlags sweep_flags;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Run replications per inflow level");
  sweep_cmd->add_option("--config", sweep_flags.config_path, "Config file (defaults apply if omitted)");
  sweep_cmd->add_option("--seed", sweep_flags.seed, "Base seed override");
  sweep_cmd->add_option("--alpha", sweep_flags.alphas,
                        "Inflow level, repeatable (default 1 1.5 1.8 2 2.3 2.7 3)");
  sweep_cmd->add_option("--replications", sweep_flags.replications, "Runs per inflow level")
      ->capture_default_str();
  sweep_cmd->add_option("--duration", sweep_flags.duration, "Simulated seconds override");
  sweep_cmd->add_option("--out", sweep_flags.out_dir, "Output directory")->capture_default_str();

  AnalyzeFlags analyze_flags;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Build travel-time tables from event logs");
  analyze_cmd->add_option("path", analyze_flags.input_path,
                          "events.csv file, or directory searched for events.csv files")
      ->required();
  analyze_cmd->add_option("--config", analyze_flags.config_path,
                          "Config file for defaults and room geometry");
  analyze_cmd->add_option("--warmup", analyze_flags.warmup,
                          "Keep crossings entering strictly after this time [s]");
  analyze_cmd->add_option("--bin-width", analyze_flags.bin_width, "Occupancy bin width [agents]");
  analyze_cmd->add_option("--out", analyze_flags.out_dir, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const std::vector<std::string> argv_copy = command_line(argc, argv);
    if (run_cmd->parsed()) return cmd_run(run_flags, argv_copy);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, argv_copy);
    return cmd_analyze(analyze_flags, argv_copy);
  } catch (const std::invalid_argument& e) {
    std::cerr << "ffsim: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "ffsim: " << e.what() << "\n";
    return 2;
  }
}
