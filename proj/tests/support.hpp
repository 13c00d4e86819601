#pragma once

// Test-only generators and brute-force oracles. Nothing here calls the
// fast paths it is used to check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <limits>
#include <vector>

#include "ptindep/kernels.hpp"
#include "ptindep/pointproc.hpp"
#include "ptindep/rng.hpp"
#include "ptindep/simulate.hpp"

namespace testing {

using namespace ptindep;

inline PointProcess pp(std::vector<double> times, double window_end = 0.1) {
  return make_point_process(std::move(times), window_end);
}

inline BivariatePair pair_of(std::vector<double> a, std::vector<double> b, double T = 0.1) {
  return {pp(std::move(a), T), pp(std::move(b), T)};
}

/// Random process with up to max_points uniform times, occasionally snapped
/// to a coarse grid so that boundary cases (|u - v| == delta) show up.
inline PointProcess random_process(Rng& rng, std::size_t max_points, double T = 0.1) {
  const auto k = static_cast<std::size_t>(rng.index(max_points + 1));
  std::vector<double> times;
  const bool grid = rng.index(3) == 0;
  while (times.size() < k) {
    double t = grid ? static_cast<double>(rng.index(101)) * T / 100 : rng.uniform() * T;
    bool dup = false;
    for (double s : times) dup |= s == t;
    if (!dup) times.push_back(t);
  }
  return make_point_process(std::move(times), T);
}

inline BivariateSample random_sample(Rng& rng, std::size_t n, std::size_t max_points = 6) {
  std::vector<BivariatePair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    auto a = random_process(rng, max_points);
    pairs.push_back({std::move(a), random_process(rng, max_points)});
  }
  return BivariateSample(std::move(pairs));
}

inline BivariateSample null_sample(std::uint64_t seed, std::size_t n,
                                   Experiment e = Experiment::A) {
  Rng rng(seed);
  return simulate_sample(experiment_config(e), n, rng);
}

inline std::uint64_t brute_coincidences(const PointProcess& a, const PointProcess& b,
                                        double delta) {
  std::uint64_t c = 0;
  for (double u : a.times())
    for (double v : b.times()) c += std::abs(u - v) <= delta;
  return c;
}

/// Direct double sum of h over ordered pairs of distinct trials.
inline double brute_u(const std::vector<BivariatePair>& y, const Kernel& h) {
  const std::size_t n = y.size();
  long double s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) s += h(y[i], y[j]);
  return static_cast<double>(s / (static_cast<long double>(n) * (n - 1)));
}

inline double brute_u(const BivariateSample& x, const Kernel& h) { return brute_u(x.pairs(), h); }

/// Literal triple loop over ordered triples of distinct indices.
inline double brute_sigma2(const BivariateSample& x, const Kernel& h) {
  const std::size_t n = x.size();
  long double s = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (i != j && i != k && j != k) s += static_cast<long double>(h(x[i], x[j])) * h(x[i], x[k]);
  return static_cast<double>(4 * s / (static_cast<long double>(n) * (n - 1) * (n - 2)));
}

/// True when `got` lies within one step of the order statistics around
/// `want`: between the closest distinct support values below and above it.
/// When eta * N is an integer the Monte Carlo quantile converges to either
/// neighbouring atom, so a one-sided step is not enough.
inline bool within_one_step(const std::vector<double>& support, double want, double got,
                            double tol = 1e-9) {
  double below = -std::numeric_limits<double>::infinity();
  double above = std::numeric_limits<double>::infinity();
  const double slack = tol * (1 + std::abs(want));
  for (double x : support) {
    if (x < want - slack) below = std::max(below, x);
    if (x > want + slack) above = std::min(above, x);
  }
  if (std::isinf(below)) below = want;
  if (std::isinf(above)) above = want;
  return got >= below - slack && got <= above + slack;
}

/// The two limits a Monte Carlo eta-quantile can settle on: inf{v : F(v) >= eta}
/// and inf{v : F(v) > eta} for the equally weighted `support`.
inline std::pair<double, double> quantile_limits(std::vector<double> support, double eta) {
  std::sort(support.begin(), support.end());
  const double n = static_cast<double>(support.size());
  double lo = support.back(), hi = support.back();
  for (std::size_t k = support.size(); k-- > 0;) {
    const double f = static_cast<double>(k + 1) / n;
    if (f >= eta - 1e-12) lo = support[k];
    if (f > eta + 1e-12) hi = support[k];
  }
  return {lo, hi};
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / (1 + std::abs(want));
}

inline double mean(const std::vector<double>& v) {
  long double s = 0;
  for (double x : v) s += x;
  return static_cast<double>(s / v.size());
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  long double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return static_cast<double>(s / (v.size() - 1));
}

}  // namespace testing
