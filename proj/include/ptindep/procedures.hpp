#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "ptindep/kernels.hpp"
#include "ptindep/pointproc.hpp"
#include "ptindep/resampling.hpp"
#include "ptindep/ustat.hpp"

namespace ptindep {

enum class Tail { Upper, Lower, TwoSided };

enum class Method { CLT, Bootstrap, Permutation, TrialShuffle, GaussianApproximation };

const char* to_string(Tail tail) noexcept;
const char* to_string(Method method) noexcept;
/// "upper" | "lower" | "two"
Tail parse_tail(const std::string& text);
/// "clt" | "boot" | "perm" | "ts" | "ga"
Method parse_method(const std::string& text);

/**
 * Outcome of one independence test.
 *
 * For the resampling methods `critical` holds the order-statistic critical
 * values at level alpha (alpha / 2 for two-sided tests); for CLT
 * `normal_quantile` holds Phi^{-1}(1 - alpha) (or 1 - alpha / 2). A CLT test
 * whose variance estimate is not positive is reported with available = false
 * and never rejects.
 */
struct TestDecision {
  Method method = Method::Permutation;
  Tail tail = Tail::Upper;
  double statistic = 0;
  std::optional<CriticalPair> critical;
  std::optional<double> normal_quantile;
  std::optional<double> p_value;
  bool available = true;
  bool reject = false;
  double alpha = 0.05;
  std::size_t draws = 0;
  std::uint64_t seed = 0;
  std::optional<double> sigma_hat_squared;
  std::string notes;
};

/// The rejection rule applied to the stored statistic and critical values.
bool recompute_reject(const TestDecision& decision);

double normal_cdf(double x);
/// Standard normal quantile for p in (0, 1); absolute error below 1e-12.
double normal_quantile(double p);

TestDecision clt_test(const BivariateSample& sample, const Kernel& kernel, double alpha,
                      Tail tail);
TestDecision clt_test(const CrossMatrix<double>& matrix, double alpha, Tail tail);

TestDecision bootstrap_test(const BivariateSample& sample, const Kernel& kernel, double alpha,
                            Tail tail, std::size_t draws, std::uint64_t seed,
                            unsigned workers = 1);
TestDecision bootstrap_test(const CrossMatrix<double>& matrix, double alpha, Tail tail,
                            std::size_t draws, std::uint64_t seed, unsigned workers = 1);

/// Also reports the p-value over the B + 1 pooled statistics.
TestDecision permutation_test(const BivariateSample& sample, const Kernel& kernel, double alpha,
                              Tail tail, std::size_t draws, std::uint64_t seed,
                              unsigned workers = 1);
TestDecision permutation_test(const CrossMatrix<double>& matrix, double alpha, Tail tail,
                              std::size_t draws, std::uint64_t seed, unsigned workers = 1);

/// Decision from an already computed distribution (the statistic is sqrt(n) U_n).
TestDecision decide(Method method, const ResampledDistribution& dist, double statistic,
                    double alpha, Tail tail);

/// Fraction of shuffled counts >= the observed count.
double trial_shuffle_p_value(std::span<const double> shuffled, double observed);

/// B raw coincidence totals over trial-shuffled samples; draw b uses derive_seed(seed, {b}).
std::vector<double> trial_shuffle_counts(const CrossMatrix<double>& coincidences,
                                         std::size_t draws, std::uint64_t seed,
                                         unsigned workers = 1);

/// Upper-tailed only; rejects when the Monte Carlo p-value is <= alpha.
TestDecision trial_shuffle_test(const BivariateSample& sample, double delay, double alpha,
                                std::size_t draws, std::uint64_t seed, unsigned workers = 1);
/// `coincidences` must be the coincidence-count cross matrix.
TestDecision trial_shuffle_test(const CrossMatrix<double>& coincidences, double alpha,
                                std::size_t draws, std::uint64_t seed, unsigned workers = 1);

/// The Gaussian-approximation test of the comparison study relies on an
/// external construction and is not provided. Always throws Error{NotImplemented}.
TestDecision gaussian_approximation_test(const BivariateSample& sample, double delay,
                                         double alpha);

}  // namespace ptindep
