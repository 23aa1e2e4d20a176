#pragma once

#include <array>
#include <charconv>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ffsim {

/// Malformed input file (config, event log, table). Distinct from
/// std::invalid_argument, which marks semantically invalid values; the
/// command-line tool maps the two to different exit codes.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Internal consistency violations are programming errors; they always throw,
// also in release builds.
#define FFSIM_CHECK(cond, msg)                                        \
  do {                                                                \
    if (!(cond)) throw std::logic_error(std::string("ffsim: ") + (msg)); \
  } while (0)

/// Fixed-capacity vector for small hot-loop collections (Moore neighbourhoods,
/// conflict contender sets). Never allocates.
template <typename T, std::size_t Cap>
class InlineVec {
 public:
  void push_back(const T& v) {
    FFSIM_CHECK(size_ < Cap, "InlineVec capacity exceeded");
    data_[size_++] = v;
  }
  const T& operator[](std::size_t i) const { return data_[i]; }
  T& operator[](std::size_t i) { return data_[i]; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  const T* begin() const { return data_.data(); }
  const T* end() const { return data_.data() + size_; }
  T* begin() { return data_.data(); }
  T* end() { return data_.data() + size_; }
  const T& back() const { return data_[size_ - 1]; }
  void clear() { size_ = 0; }

 private:
  std::array<T, Cap> data_{};
  std::size_t size_ = 0;
};

/// Shortest round-trip decimal form of a double. Used for every number the
/// tool writes, so output files are byte-stable across runs and platforms.
inline std::string format_double(double v) {
  std::array<char, 40> buf;
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  FFSIM_CHECK(res.ec == std::errc(), "to_chars failed");
  return std::string(buf.data(), res.ptr);
}

inline bool parse_double(std::string_view s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

inline bool parse_int64(std::string_view s, long long& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc() && res.ptr == last;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

}  // namespace ffsim
