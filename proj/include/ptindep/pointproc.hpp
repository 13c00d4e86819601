#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace ptindep {

/**
 * A finite point process realization: strictly increasing event times in
 * [0, window_end]. Only constructible through make_point_process, so every
 * instance satisfies the ordering and window invariants.
 */
class PointProcess {
 public:
  /// Empty process on [0, 0.1].
  PointProcess() = default;

  std::span<const double> times() const noexcept { return times_; }
  double window_end() const noexcept { return window_end_; }
  std::size_t count() const noexcept { return times_.size(); }
  bool empty() const noexcept { return times_.empty(); }
  double operator[](std::size_t i) const noexcept { return times_[i]; }

  friend bool operator==(const PointProcess&, const PointProcess&) = default;

 private:
  friend PointProcess make_point_process(std::vector<double> times, double window_end);
  friend PointProcess make_sorted_unchecked(std::vector<double> times, double window_end);

  std::vector<double> times_;
  double window_end_ = 0.1;
};

/**
 * Validate and sort `times`. Throws Error{InvalidArgument} when
 * window_end <= 0, Error{OutOfWindow} for t outside [0, window_end] and
 * Error{DuplicateTime} when two times coincide.
 */
PointProcess make_point_process(std::vector<double> times, double window_end);

/// Simulator fast path: caller guarantees strictly increasing, in-window times.
PointProcess make_sorted_unchecked(std::vector<double> times, double window_end);

struct BivariatePair {
  PointProcess first;
  PointProcess second;

  friend bool operator==(const BivariatePair&, const BivariatePair&) = default;
};

/// Throws Error{InvalidArgument} if the components' windows differ.
BivariatePair make_pair(PointProcess first, PointProcess second);

/// n >= 2 i.i.d. trials sharing one observation window.
class BivariateSample {
 public:
  explicit BivariateSample(std::vector<BivariatePair> pairs);

  std::size_t size() const noexcept { return pairs_.size(); }
  double window_end() const noexcept { return pairs_.front().first.window_end(); }
  const BivariatePair& operator[](std::size_t i) const noexcept { return pairs_[i]; }
  const std::vector<BivariatePair>& pairs() const noexcept { return pairs_; }

  auto begin() const noexcept { return pairs_.begin(); }
  auto end() const noexcept { return pairs_.end(); }

  friend bool operator==(const BivariateSample&, const BivariateSample&) = default;

 private:
  std::vector<BivariatePair> pairs_;
};

// Text format: header "# window_end=<T>", then one process per line with
// times separated by single spaces, X_i^1 and X_i^2 alternating. An empty
// line is an empty process.

void write_sample(std::ostream& out, const BivariateSample& sample);
BivariateSample read_sample(std::istream& in);

void save_sample(const std::string& path, const BivariateSample& sample);
BivariateSample load_sample(const std::string& path);

/// Shortest decimal string that parses back to exactly `value`.
std::string format_real(double value);

}  // namespace ptindep
