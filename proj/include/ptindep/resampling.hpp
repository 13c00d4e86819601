#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ptindep/kernels.hpp"
#include "ptindep/pointproc.hpp"
#include "ptindep/rng.hpp"
#include "ptindep/ustat.hpp"

namespace ptindep {

enum class Scheme { Permutation, Bootstrap };

/// Uniform bijection: first = identity, second shuffled (Fisher-Yates).
Assignment draw_permutation(std::size_t n, Rng& rng);
/// n i.i.d. index pairs, both coordinates uniform and independent.
Assignment draw_bootstrap(std::size_t n, Rng& rng);
/// n i.i.d. index pairs uniform on the n (n-1) cells with first != second.
Assignment draw_trial_shuffle(std::size_t n, Rng& rng);

Assignment draw_assignment(Scheme scheme, std::size_t n, Rng& rng);

/**
 * Resampled values of sqrt(n) U_n. For the permutation scheme the observed
 * statistic is appended as the last entry (includes_original), so
 * statistics.size() == draws + 1.
 */
struct ResampledDistribution {
  Scheme scheme = Scheme::Bootstrap;
  std::vector<double> statistics;
  bool includes_original = false;
  std::size_t draws = 0;
};

/// sqrt(n) U_n of the assigned sample, linear fast path.
double scaled_statistic(const CrossMatrix<double>& matrix, const Assignment& assignment);

/**
 * Monte Carlo distribution with `draws` fresh assignments. Draw b uses the
 * sub-stream derive_seed(seed, {b}), so the result does not depend on
 * `workers`.
 */
ResampledDistribution resampled_distribution(const CrossMatrix<double>& matrix, Scheme scheme,
                                             std::size_t draws, std::uint64_t seed,
                                             unsigned workers = 1);

/// As above; general kernels cost O(n^2) kernel evaluations per draw.
ResampledDistribution resampled_distribution(const BivariateSample& sample, const Kernel& kernel,
                                             Scheme scheme, std::size_t draws,
                                             std::uint64_t seed, unsigned workers = 1);

/// Distribution over caller-supplied assignments (the observed statistic
/// is still appended for the permutation scheme).
ResampledDistribution distribution_from_assignments(const CrossMatrix<double>& matrix,
                                                    Scheme scheme,
                                                    std::span<const Assignment> assignments);

struct CriticalPair {
  double upper = 0;
  double lower = 0;
  double alpha = 0;
};

/// 1-based ascending order statistic. Throws Error{RankOutOfRange}.
double order_statistic(std::span<const double> sorted, std::size_t rank);

/// ceil(x) and floor(x) that absorb representation error of products like 0.95 * 200.
std::size_t ceil_rank(double x);
std::size_t floor_rank(double x);

/// Upper rank ceil((1-alpha) B), lower rank floor(alpha B) + 1, over the B draws.
CriticalPair mc_bootstrap_critical(const ResampledDistribution& dist, double alpha);

/// Same ranks over the B + 1 pooled values (draws plus the observed statistic).
CriticalPair mc_permutation_critical(const ResampledDistribution& dist, double alpha);

/// Generalized-inverse quantile inf{v : F(v) >= eta} of equally weighted values.
double generalized_quantile(std::span<const double> values, double eta);

/// (q_{1-alpha}, q_alpha) of an exact, equally weighted distribution.
CriticalPair exact_critical(const ResampledDistribution& dist, double alpha);

/// All n! permutations, identity first. Throws Error{TooLarge} for n > 8.
ResampledDistribution exact_permutation_distribution(const BivariateSample& sample,
                                                     const Kernel& kernel);

/// All n^(2n) bootstrap assignments. Throws Error{TooLarge} for n > 4.
ResampledDistribution exact_bootstrap_distribution(const BivariateSample& sample,
                                                   const Kernel& kernel);

/// L2-Wasserstein distance between two empirical distributions, integrated
/// exactly over the merged grid of quantile breakpoints.
double wasserstein2(std::span<const double> a, std::span<const double> b);

/**
 * Total-variation distance between two empirical distributions; values
 * closer than tol * (1 + |v|) are treated as the same atom.
 */
double total_variation(std::span<const double> a, std::span<const double> b, double tol = 1e-9);

}  // namespace ptindep
