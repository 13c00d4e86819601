#include "ptindep/procedures.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "ptindep/error.hpp"
#include "ptindep/parallel.hpp"
#include "ptindep/summation.hpp"

namespace ptindep {

const char* to_string(Tail tail) noexcept {
  switch (tail) {
    case Tail::Upper: return "upper";
    case Tail::Lower: return "lower";
    case Tail::TwoSided: return "two";
  }
  return "?";
}

const char* to_string(Method method) noexcept {
  switch (method) {
    case Method::CLT: return "CLT";
    case Method::Bootstrap: return "B";
    case Method::Permutation: return "P";
    case Method::TrialShuffle: return "TS";
    case Method::GaussianApproximation: return "GA";
  }
  return "?";
}

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

void require_alpha(double alpha) {
  if (!(alpha > 0 && alpha < 1))
    throw Error(ErrorKind::InvalidArgument, "alpha must lie in (0, 1)");
}

double level_for(Tail tail, double alpha) { return tail == Tail::TwoSided ? alpha / 2 : alpha; }

bool reject_against(double statistic, double upper, double lower, Tail tail) {
  switch (tail) {
    case Tail::Upper: return statistic > upper;
    case Tail::Lower: return statistic < lower;
    case Tail::TwoSided: return statistic > upper || statistic < lower;
  }
  return false;
}

}  // namespace

Tail parse_tail(const std::string& text) {
  const auto t = lower(text);
  if (t == "upper") return Tail::Upper;
  if (t == "lower") return Tail::Lower;
  if (t == "two" || t == "two-sided" || t == "twosided") return Tail::TwoSided;
  throw Error(ErrorKind::InvalidArgument, "tail must be upper, lower or two");
}

Method parse_method(const std::string& text) {
  const auto t = lower(text);
  if (t == "clt") return Method::CLT;
  if (t == "boot" || t == "b" || t == "bootstrap") return Method::Bootstrap;
  if (t == "perm" || t == "p" || t == "permutation") return Method::Permutation;
  if (t == "ts" || t == "trial-shuffle") return Method::TrialShuffle;
  if (t == "ga") return Method::GaussianApproximation;
  throw Error(ErrorKind::InvalidArgument, "unknown method '" + text + "'");
}

bool recompute_reject(const TestDecision& d) {
  if (!d.available) return false;
  switch (d.method) {
    case Method::CLT: {
      const double z = d.normal_quantile.value();
      return reject_against(d.statistic, z, -z, d.tail);
    }
    case Method::Bootstrap:
    case Method::Permutation:
      return reject_against(d.statistic, d.critical->upper, d.critical->lower, d.tail);
    case Method::TrialShuffle:
      return d.p_value.value() <= d.alpha;
    case Method::GaussianApproximation:
      break;
  }
  return false;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0 && p < 1)) throw Error(ErrorKind::InvalidArgument, "quantile level outside (0, 1)");
  // Acklam's rational approximation followed by one Halley step.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  } else if (p <= 1 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
  } else {
    const double q = std::sqrt(-2 * std::log1p(-p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
  }
  // Residual Phi(x) - p; above the median it is formed from the upper tail,
  // where 1 - p is exact and erfc keeps full relative precision.
  const double e = p <= 0.5 ? normal_cdf(x) - p
                            : (1 - p) - 0.5 * std::erfc(x / std::numbers::sqrt2);
  const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(0.5 * x * x);
  return x - u / (1 + 0.5 * x * u);
}

TestDecision clt_test(const CrossMatrix<double>& matrix, double alpha, Tail tail) {
  require_alpha(alpha);
  const auto n = static_cast<std::size_t>(matrix.size());
  if (n < 3) throw Error(ErrorKind::TooFewTrials, "CLT test needs n >= 3");
  TestDecision d;
  d.method = Method::CLT;
  d.tail = tail;
  d.alpha = alpha;
  d.normal_quantile = normal_quantile(1 - level_for(tail, alpha));
  const double u = u_statistic(matrix, Assignment::identity(n));
  const double sigma2 = sigma_hat_squared(kernel_matrix(matrix));
  d.sigma_hat_squared = sigma2;
  try {
    d.statistic = studentize(u, sigma2, n);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NonpositiveVariance) throw;
    d.available = false;
    d.reject = false;
    d.notes = "unavailable: nonpositive variance estimate";
    return d;
  }
  d.reject = recompute_reject(d);
  return d;
}

TestDecision clt_test(const BivariateSample& sample, const Kernel& kernel, double alpha,
                      Tail tail) {
  if (kernel.is_linear()) return clt_test(cross_matrix(sample, kernel.phi()), alpha, tail);
  require_alpha(alpha);
  if (sample.size() < 3) throw Error(ErrorKind::TooFewTrials, "CLT test needs n >= 3");
  TestDecision d;
  d.method = Method::CLT;
  d.tail = tail;
  d.alpha = alpha;
  d.normal_quantile = normal_quantile(1 - level_for(tail, alpha));
  const double sigma2 = sigma_hat_squared(sample, kernel);
  d.sigma_hat_squared = sigma2;
  if (!(sigma2 > 0)) {
    d.available = false;
    d.notes = "unavailable: nonpositive variance estimate";
    return d;
  }
  d.statistic = studentize(u_statistic_direct(sample, kernel), sigma2, sample.size());
  d.reject = recompute_reject(d);
  return d;
}

TestDecision decide(Method method, const ResampledDistribution& dist, double statistic,
                    double alpha, Tail tail) {
  require_alpha(alpha);
  TestDecision d;
  d.method = method;
  d.tail = tail;
  d.alpha = alpha;
  d.statistic = statistic;
  d.draws = dist.draws;
  const double level = level_for(tail, alpha);
  d.critical = dist.scheme == Scheme::Permutation ? mc_permutation_critical(dist, level)
                                                  : mc_bootstrap_critical(dist, level);
  d.critical->alpha = alpha;

  std::size_t at_least = 0, at_most = 0;
  for (double v : dist.statistics) {
    if (v >= statistic) ++at_least;
    if (v <= statistic) ++at_most;
  }
  const auto total = static_cast<double>(dist.statistics.size());
  const double p_upper = static_cast<double>(at_least) / total;
  const double p_lower = static_cast<double>(at_most) / total;
  switch (tail) {
    case Tail::Upper: d.p_value = p_upper; break;
    case Tail::Lower: d.p_value = p_lower; break;
    case Tail::TwoSided: d.p_value = std::min(1.0, 2 * std::min(p_upper, p_lower)); break;
  }
  d.reject = recompute_reject(d);
  return d;
}

TestDecision bootstrap_test(const CrossMatrix<double>& matrix, double alpha, Tail tail,
                            std::size_t draws, std::uint64_t seed, unsigned workers) {
  const auto n = static_cast<std::size_t>(matrix.size());
  const auto dist = resampled_distribution(matrix, Scheme::Bootstrap, draws, seed, workers);
  auto d = decide(Method::Bootstrap, dist, scaled_statistic(matrix, Assignment::identity(n)),
                  alpha, tail);
  d.seed = seed;
  return d;
}

TestDecision bootstrap_test(const BivariateSample& sample, const Kernel& kernel, double alpha,
                            Tail tail, std::size_t draws, std::uint64_t seed,
                            unsigned workers) {
  if (kernel.is_linear())
    return bootstrap_test(cross_matrix(sample, kernel.phi()), alpha, tail, draws, seed, workers);
  const auto dist =
      resampled_distribution(sample, kernel, Scheme::Bootstrap, draws, seed, workers);
  const double stat = std::sqrt(static_cast<double>(sample.size())) *
                      u_statistic_direct(sample, kernel);
  auto d = decide(Method::Bootstrap, dist, stat, alpha, tail);
  d.seed = seed;
  return d;
}

TestDecision permutation_test(const CrossMatrix<double>& matrix, double alpha, Tail tail,
                              std::size_t draws, std::uint64_t seed, unsigned workers) {
  const auto dist = resampled_distribution(matrix, Scheme::Permutation, draws, seed, workers);
  auto d = decide(Method::Permutation, dist, dist.statistics.back(), alpha, tail);
  d.seed = seed;
  return d;
}

TestDecision permutation_test(const BivariateSample& sample, const Kernel& kernel, double alpha,
                              Tail tail, std::size_t draws, std::uint64_t seed,
                              unsigned workers) {
  if (kernel.is_linear())
    return permutation_test(cross_matrix(sample, kernel.phi()), alpha, tail, draws, seed,
                            workers);
  const auto dist =
      resampled_distribution(sample, kernel, Scheme::Permutation, draws, seed, workers);
  auto d = decide(Method::Permutation, dist, dist.statistics.back(), alpha, tail);
  d.seed = seed;
  return d;
}

double trial_shuffle_p_value(std::span<const double> shuffled, double observed) {
  if (shuffled.empty()) throw Error(ErrorKind::InvalidArgument, "no shuffled counts");
  const auto hits = std::count_if(shuffled.begin(), shuffled.end(),
                                  [observed](double c) { return c >= observed; });
  return static_cast<double>(hits) / static_cast<double>(shuffled.size());
}

std::vector<double> trial_shuffle_counts(const CrossMatrix<double>& coincidences,
                                         std::size_t draws, std::uint64_t seed,
                                         unsigned workers) {
  const auto n = static_cast<std::size_t>(coincidences.size());
  if (n < 2) throw Error(ErrorKind::DegenerateSample, "trial shuffling needs n >= 2");
  std::vector<double> counts(draws);
  parallel_for(draws, workers, [&](std::size_t b) {
    Rng rng(derive_seed(seed, {b}));
    const auto a = draw_trial_shuffle(n, rng);
    KahanSum c;
    for (std::size_t k = 0; k < n; ++k) c += coincidences(a.first[k], a.second[k]);
    counts[b] = c.value();
  });
  return counts;
}

TestDecision trial_shuffle_test(const CrossMatrix<double>& coincidences, double alpha,
                                std::size_t draws, std::uint64_t seed, unsigned workers) {
  require_alpha(alpha);
  if (draws < 1) throw Error(ErrorKind::InvalidArgument, "need at least one draw");
  TestDecision d;
  d.method = Method::TrialShuffle;
  d.tail = Tail::Upper;
  d.alpha = alpha;
  d.draws = draws;
  d.seed = seed;
  d.statistic = coincidences.diag_sum();
  d.p_value = trial_shuffle_p_value(trial_shuffle_counts(coincidences, draws, seed, workers),
                                    d.statistic);
  d.reject = recompute_reject(d);
  return d;
}

TestDecision trial_shuffle_test(const BivariateSample& sample, double delay, double alpha,
                                std::size_t draws, std::uint64_t seed, unsigned workers) {
  return trial_shuffle_test(cross_matrix(sample, coincidence_function(delay)), alpha, draws,
                            seed, workers);
}

TestDecision gaussian_approximation_test(const BivariateSample&, double, double) {
  throw Error(ErrorKind::NotImplemented,
              "the Gaussian-approximation (GA) comparison test depends on an external "
              "construction and is not part of this library");
}

}  // namespace ptindep
