#include "ptindep/resampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "ptindep/error.hpp"
#include "ptindep/parallel.hpp"
#include "ptindep/summation.hpp"

namespace ptindep {

namespace {

void require_trials(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::DegenerateSample, "resampling needs n >= 2");
}

void require_alpha(double alpha) {
  if (!(alpha > 0 && alpha < 1))
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
}

double scaled(double u, std::size_t n) { return std::sqrt(static_cast<double>(n)) * u; }

}  // namespace

Assignment draw_permutation(std::size_t n, Rng& rng) {
  require_trials(n);
  Assignment a = Assignment::identity(n);
  a.kind = AssignmentKind::Permutation;
  for (std::size_t i = n - 1; i > 0; --i) {
    const auto j = static_cast<std::size_t>(rng.index(i + 1));
    std::swap(a.second[i], a.second[j]);
  }
  return a;
}

Assignment draw_bootstrap(std::size_t n, Rng& rng) {
  require_trials(n);
  Assignment a;
  a.kind = AssignmentKind::Bootstrap;
  a.first.resize(n);
  a.second.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    a.first[k] = static_cast<Index>(rng.index(n));
    a.second[k] = static_cast<Index>(rng.index(n));
  }
  return a;
}

Assignment draw_trial_shuffle(std::size_t n, Rng& rng) {
  require_trials(n);
  Assignment a;
  a.kind = AssignmentKind::TrialShuffle;
  a.first.resize(n);
  a.second.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto cell = rng.index(n * (n - 1));
    const auto row = cell / (n - 1);
    const auto col = cell % (n - 1);
    a.first[k] = static_cast<Index>(row);
    a.second[k] = static_cast<Index>(col < row ? col : col + 1);
  }
  return a;
}

Assignment draw_assignment(Scheme scheme, std::size_t n, Rng& rng) {
  return scheme == Scheme::Permutation ? draw_permutation(n, rng) : draw_bootstrap(n, rng);
}

double scaled_statistic(const CrossMatrix<double>& matrix, const Assignment& assignment) {
  return scaled(u_statistic(matrix, assignment), assignment.size());
}

ResampledDistribution resampled_distribution(const CrossMatrix<double>& matrix, Scheme scheme,
                                             std::size_t draws, std::uint64_t seed,
                                             unsigned workers) {
  if (draws < 1) throw Error(ErrorKind::InvalidArgument, "need at least one draw");
  const auto n = static_cast<std::size_t>(matrix.size());
  require_trials(n);
  ResampledDistribution dist;
  dist.scheme = scheme;
  dist.draws = draws;
  dist.statistics.resize(draws);
  parallel_for(draws, workers, [&](std::size_t b) {
    Rng rng(derive_seed(seed, {b}));
    dist.statistics[b] = scaled_statistic(matrix, draw_assignment(scheme, n, rng));
  });
  if (scheme == Scheme::Permutation) {
    dist.statistics.push_back(scaled_statistic(matrix, Assignment::identity(n)));
    dist.includes_original = true;
  }
  return dist;
}

ResampledDistribution resampled_distribution(const BivariateSample& sample, const Kernel& kernel,
                                             Scheme scheme, std::size_t draws,
                                             std::uint64_t seed, unsigned workers) {
  if (kernel.is_linear())
    return resampled_distribution(cross_matrix(sample, kernel.phi()), scheme, draws, seed,
                                  workers);
  if (draws < 1) throw Error(ErrorKind::InvalidArgument, "need at least one draw");
  const std::size_t n = sample.size();
  ResampledDistribution dist;
  dist.scheme = scheme;
  dist.draws = draws;
  dist.statistics.resize(draws);
  parallel_for(draws, workers, [&](std::size_t b) {
    Rng rng(derive_seed(seed, {b}));
    dist.statistics[b] =
        scaled(u_statistic_direct(sample, kernel, draw_assignment(scheme, n, rng)), n);
  });
  if (scheme == Scheme::Permutation) {
    dist.statistics.push_back(scaled(u_statistic_direct(sample, kernel), n));
    dist.includes_original = true;
  }
  return dist;
}

ResampledDistribution distribution_from_assignments(const CrossMatrix<double>& matrix,
                                                    Scheme scheme,
                                                    std::span<const Assignment> assignments) {
  const auto n = static_cast<std::size_t>(matrix.size());
  ResampledDistribution dist;
  dist.scheme = scheme;
  dist.draws = assignments.size();
  for (const auto& a : assignments) {
    a.validate(n);
    dist.statistics.push_back(scaled_statistic(matrix, a));
  }
  if (scheme == Scheme::Permutation) {
    dist.statistics.push_back(scaled_statistic(matrix, Assignment::identity(n)));
    dist.includes_original = true;
  }
  return dist;
}

double order_statistic(std::span<const double> sorted, std::size_t rank) {
  if (rank < 1 || rank > sorted.size())
    throw Error(ErrorKind::RankOutOfRange, "rank " + std::to_string(rank) + " outside [1, " +
                                               std::to_string(sorted.size()) + "]");
  return sorted[rank - 1];
}

std::size_t ceil_rank(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::ceil(x));
}

std::size_t floor_rank(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= 1e-9 * std::max(1.0, std::abs(x))) return static_cast<std::size_t>(r);
  return static_cast<std::size_t>(std::floor(x));
}

namespace {

CriticalPair ranked_critical(std::vector<double> values, double alpha) {
  require_alpha(alpha);
  std::sort(values.begin(), values.end());
  const auto count = static_cast<double>(values.size());
  CriticalPair q;
  q.alpha = alpha;
  q.upper = order_statistic(values, ceil_rank((1 - alpha) * count));
  q.lower = order_statistic(values, floor_rank(alpha * count) + 1);
  return q;
}

}  // namespace

CriticalPair mc_bootstrap_critical(const ResampledDistribution& dist, double alpha) {
  if (dist.scheme != Scheme::Bootstrap || dist.includes_original)
    throw Error(ErrorKind::InvalidArgument, "expected a bootstrap distribution");
  return ranked_critical(dist.statistics, alpha);
}

CriticalPair mc_permutation_critical(const ResampledDistribution& dist, double alpha) {
  if (dist.scheme != Scheme::Permutation || !dist.includes_original)
    throw Error(ErrorKind::InvalidArgument,
                "expected a permutation distribution pooling the observed statistic");
  return ranked_critical(dist.statistics, alpha);
}

double generalized_quantile(std::span<const double> values, double eta) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t rank =
      std::max<std::size_t>(1, ceil_rank(eta * static_cast<double>(sorted.size())));
  return order_statistic(sorted, rank);
}

CriticalPair exact_critical(const ResampledDistribution& dist, double alpha) {
  require_alpha(alpha);
  return {generalized_quantile(dist.statistics, 1 - alpha),
          generalized_quantile(dist.statistics, alpha), alpha};
}

ResampledDistribution exact_permutation_distribution(const BivariateSample& sample,
                                                     const Kernel& kernel) {
  const std::size_t n = sample.size();
  if (n > 8) throw Error(ErrorKind::TooLarge, "exact permutation enumeration needs n <= 8");
  ResampledDistribution dist;
  dist.scheme = Scheme::Permutation;
  dist.includes_original = true;

  Assignment a = Assignment::identity(n);
  a.kind = AssignmentKind::Permutation;
  std::optional<CrossMatrix<double>> matrix;
  if (kernel.is_linear()) matrix.emplace(cross_matrix(sample, kernel.phi()));
  do {
    dist.statistics.push_back(matrix ? scaled_statistic(*matrix, a)
                                     : scaled(u_statistic_direct(sample, kernel, a), n));
  } while (std::next_permutation(a.second.begin(), a.second.end()));
  dist.draws = dist.statistics.size() - 1;
  return dist;
}

ResampledDistribution exact_bootstrap_distribution(const BivariateSample& sample,
                                                   const Kernel& kernel) {
  const std::size_t n = sample.size();
  if (n > 4) throw Error(ErrorKind::TooLarge, "exact bootstrap enumeration needs n <= 4");
  ResampledDistribution dist;
  dist.scheme = Scheme::Bootstrap;

  std::optional<CrossMatrix<double>> matrix;
  if (kernel.is_linear()) matrix.emplace(cross_matrix(sample, kernel.phi()));
  Assignment a;
  a.kind = AssignmentKind::Bootstrap;
  a.first.assign(n, 0);
  a.second.assign(n, 0);
  // Odometer over the 2n digits (first[0..n), second[0..n)) in base n.
  const auto base = static_cast<Index>(n);
  while (true) {
    dist.statistics.push_back(matrix ? scaled_statistic(*matrix, a)
                                     : scaled(u_statistic_direct(sample, kernel, a), n));
    std::size_t digit = 0;
    for (; digit < 2 * n; ++digit) {
      Index& d = digit < n ? a.first[digit] : a.second[digit - n];
      if (++d < base) break;
      d = 0;
    }
    if (digit == 2 * n) break;
  }
  dist.draws = dist.statistics.size();
  return dist;
}

double wasserstein2(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty())
    throw Error(ErrorKind::InvalidArgument, "wasserstein2 needs nonempty inputs");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const std::size_t m = x.size(), k = y.size();
  KahanSum integral;
  std::size_t i = 0, j = 0;
  double u = 0;
  while (i < m && j < k) {
    // Breakpoints (i+1)/m and (j+1)/k compared in integers.
    const std::size_t lhs = (i + 1) * k, rhs = (j + 1) * m;
    const double next = lhs <= rhs ? static_cast<double>(i + 1) / static_cast<double>(m)
                                   : static_cast<double>(j + 1) / static_cast<double>(k);
    const double d = x[i] - y[j];
    integral += (next - u) * d * d;
    u = next;
    if (lhs <= rhs) ++i;
    if (rhs <= lhs) ++j;
  }
  return std::sqrt(std::max(0.0, integral.value()));
}

double total_variation(std::span<const double> a, std::span<const double> b, double tol) {
  if (a.empty() || b.empty())
    throw Error(ErrorKind::InvalidArgument, "total_variation needs nonempty inputs");
  std::vector<std::pair<double, int>> all;
  all.reserve(a.size() + b.size());
  for (double v : a) all.emplace_back(v, 0);
  for (double v : b) all.emplace_back(v, 1);
  std::sort(all.begin(), all.end());
  const double wa = 1.0 / static_cast<double>(a.size());
  const double wb = 1.0 / static_cast<double>(b.size());
  KahanSum tv;
  std::size_t start = 0;
  while (start < all.size()) {
    std::size_t end = start;
    double mass = 0;
    while (end < all.size() &&
           all[end].first - all[start].first <= tol * (1 + std::abs(all[start].first))) {
      mass += all[end].second == 0 ? wa : -wb;
      ++end;
    }
    tv += std::abs(mass);
    start = end;
  }
  return 0.5 * tv.value();
}

}  // namespace ptindep
