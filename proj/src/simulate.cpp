#include "ptindep/simulate.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <vector>

#include "ptindep/error.hpp"

namespace ptindep {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, what);
}

bool nonneg(double x) { return x >= 0 && std::isfinite(x); }
bool positive(double x) { return x > 0 && std::isfinite(x); }

// Number of points s in `accepted` with 0 < t - s <= width.
std::size_t count_recent(const std::vector<double>& accepted, double t, double width) {
  std::size_t k = 0;
  for (auto it = accepted.rbegin(); it != accepted.rend(); ++it) {
    const double gap = t - *it;
    if (gap > width) break;
    if (gap > 0) ++k;
  }
  return k;
}

// Moves points of `moving` that coincide with a point of `fixed` (or with a
// neighbour) by one ulp, so that the union is strictly ordered.
std::vector<double> merge_distinct(std::vector<double> moving, const std::vector<double>& fixed,
                                   double window_end) {
  for (double& t : moving) {
    const double dir = t >= window_end ? -std::numeric_limits<double>::infinity()
                                       : std::numeric_limits<double>::infinity();
    while (std::binary_search(fixed.begin(), fixed.end(), t)) t = std::nextafter(t, dir);
  }
  std::vector<double> merged;
  merged.reserve(moving.size() + fixed.size());
  std::sort(moving.begin(), moving.end());
  std::merge(moving.begin(), moving.end(), fixed.begin(), fixed.end(),
             std::back_inserter(merged));
  return merged;
}

std::vector<double> hom_poisson_times(double rate, double window_end, Rng& rng) {
  std::vector<double> times;
  if (rate <= 0) return times;
  double t = rng.exponential(rate);
  while (t <= window_end) {
    if (times.empty() || t > times.back()) times.push_back(t);
    t += rng.exponential(rate);
  }
  return times;
}

// Inversion of the cumulative intensity slope * t^2 / 2.
std::vector<double> inhom_linear_times(double slope, double window_end, Rng& rng) {
  std::vector<double> times;
  if (slope <= 0) return times;
  const double total = 0.5 * slope * window_end * window_end;
  double s = rng.exponential(1.0);
  while (s <= total) {
    const double t = std::min(window_end, std::sqrt(2.0 * s / slope));
    if (times.empty() || t > times.back()) times.push_back(t);
    s += rng.exponential(1.0);
  }
  return times;
}

std::vector<double> base_times(const InjectionBase& base, double window_end, Rng& rng) {
  return std::visit(
      [&](const auto& m) -> std::vector<double> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, HomPoisson>)
          return hom_poisson_times(m.rate, window_end, rng);
        else
          return inhom_linear_times(m.slope, window_end, rng);
      },
      base);
}

}  // namespace

void validate(const SimConfig& config) {
  require(positive(config.window_end), "window_end must be positive");
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, HomPoisson>) {
          require(nonneg(m.rate), "rate must be >= 0");
        } else if constexpr (std::is_same_v<T, InhomPoissonLinear>) {
          require(nonneg(m.slope), "slope must be >= 0");
        } else if constexpr (std::is_same_v<T, HawkesRefractory>) {
          require(nonneg(m.spontaneous) && nonneg(m.inhibition), "rates must be >= 0");
          require(positive(m.refractory), "refractory period must be > 0");
        } else if constexpr (std::is_same_v<T, InjectionHom>) {
          require(nonneg(m.independent_rate) && nonneg(m.common_rate), "rates must be >= 0");
        } else if constexpr (std::is_same_v<T, InjectionInhom>) {
          require(nonneg(m.independent_slope) && nonneg(m.common_rate), "rates must be >= 0");
        } else {
          require(nonneg(m.spontaneous) && nonneg(m.interaction) && nonneg(m.inhibition),
                  "rates must be >= 0");
          require(positive(m.interaction_period) && positive(m.refractory),
                  "interaction and refractory periods must be > 0");
        }
      },
      config.model);
}

PointProcess simulate_hom_poisson(double rate, double window_end, Rng& rng) {
  return make_sorted_unchecked(hom_poisson_times(rate, window_end, rng), window_end);
}

PointProcess simulate_inhom_poisson_linear(double slope, double window_end, Rng& rng) {
  return make_sorted_unchecked(inhom_linear_times(slope, window_end, rng), window_end);
}

PointProcess simulate_hawkes_refractory(double spontaneous, double inhibition, double refractory,
                                        double window_end, Rng& rng) {
  std::vector<double> accepted;
  if (spontaneous <= 0) return make_sorted_unchecked(std::move(accepted), window_end);
  // Thinning against the constant bound mu; the intensity never exceeds it.
  for (double t = rng.exponential(spontaneous); t <= window_end;
       t += rng.exponential(spontaneous)) {
    const auto blocked = static_cast<double>(count_recent(accepted, t, refractory));
    const double intensity = std::max(0.0, spontaneous - inhibition * blocked);
    if (intensity <= 0) continue;
    if (intensity < spontaneous && rng.uniform() * spontaneous >= intensity) continue;
    if (accepted.empty() || t > accepted.back()) accepted.push_back(t);
  }
  return make_sorted_unchecked(std::move(accepted), window_end);
}

BivariatePair simulate_injection(const InjectionBase& base, double common_rate,
                                 double window_end, Rng& rng) {
  auto ind1 = base_times(base, window_end, rng);
  auto ind2 = base_times(base, window_end, rng);
  const auto common = hom_poisson_times(common_rate, window_end, rng);
  return {make_sorted_unchecked(merge_distinct(std::move(ind1), common, window_end), window_end),
          make_sorted_unchecked(merge_distinct(std::move(ind2), common, window_end), window_end)};
}

BivariatePair simulate_bivariate_hawkes(const BivariateHawkes& p, double window_end, Rng& rng) {
  std::vector<double> accepted[2];
  const double inf = std::numeric_limits<double>::infinity();
  double t = 0;
  while (true) {
    // Bound for times after t: mu + eta * (points of the other coordinate
    // still inside their interaction period). It only drops when such a
    // point leaves, at s + u.
    double bound[2];
    double next_change = inf;
    for (int j = 0; j < 2; ++j) {
      std::size_t live = 0;
      for (double s : accepted[1 - j]) {
        if (s + p.interaction_period > t) {
          ++live;
          next_change = std::min(next_change, s + p.interaction_period);
        }
      }
      bound[j] = p.spontaneous + p.interaction * static_cast<double>(live);
    }
    const double total = bound[0] + bound[1];
    if (total <= 0) break;

    const double candidate = t + rng.exponential(total);
    if (candidate > next_change && next_change < window_end) {
      t = next_change;
      continue;
    }
    if (candidate > window_end) break;
    t = candidate;

    const int j = rng.uniform() * total < bound[0] ? 0 : 1;
    const auto own = static_cast<double>(count_recent(accepted[j], t, p.refractory));
    const auto other =
        static_cast<double>(count_recent(accepted[1 - j], t, p.interaction_period));
    const double intensity =
        std::max(0.0, p.spontaneous - p.inhibition * own + p.interaction * other);
    if (intensity <= 0) continue;
    if (rng.uniform() * bound[j] >= intensity) continue;
    if (accepted[j].empty() || t > accepted[j].back()) accepted[j].push_back(t);
  }
  return {make_sorted_unchecked(std::move(accepted[0]), window_end),
          make_sorted_unchecked(std::move(accepted[1]), window_end)};
}

BivariatePair simulate_pair(const SimConfig& config, Rng& rng) {
  const double T = config.window_end;
  return std::visit(
      [&](const auto& m) -> BivariatePair {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, HomPoisson>) {
          auto a = simulate_hom_poisson(m.rate, T, rng);
          return {std::move(a), simulate_hom_poisson(m.rate, T, rng)};
        } else if constexpr (std::is_same_v<M, InhomPoissonLinear>) {
          auto a = simulate_inhom_poisson_linear(m.slope, T, rng);
          return {std::move(a), simulate_inhom_poisson_linear(m.slope, T, rng)};
        } else if constexpr (std::is_same_v<M, HawkesRefractory>) {
          auto a = simulate_hawkes_refractory(m.spontaneous, m.inhibition, m.refractory, T, rng);
          return {std::move(a),
                  simulate_hawkes_refractory(m.spontaneous, m.inhibition, m.refractory, T, rng)};
        } else if constexpr (std::is_same_v<M, InjectionHom>) {
          return simulate_injection(HomPoisson{m.independent_rate}, m.common_rate, T, rng);
        } else if constexpr (std::is_same_v<M, InjectionInhom>) {
          return simulate_injection(InhomPoissonLinear{m.independent_slope}, m.common_rate, T,
                                    rng);
        } else {
          return simulate_bivariate_hawkes(m, T, rng);
        }
      },
      config.model);
}

BivariateSample simulate_sample(const SimConfig& config, std::size_t n, Rng& rng) {
  validate(config);
  std::vector<BivariatePair> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pairs.push_back(simulate_pair(config, rng));
  return BivariateSample(std::move(pairs));
}

SimConfig experiment_config(Experiment experiment, double window_end) {
  switch (experiment) {
    case Experiment::A: return {HomPoisson{60}, window_end};
    case Experiment::B: return {InhomPoissonLinear{60}, window_end};
    case Experiment::C: return {HawkesRefractory{60, 120, 0.001}, window_end};
    case Experiment::D: return {InjectionHom{54, 6}, window_end};
    case Experiment::E: return {InjectionInhom{54, 6}, window_end};
    case Experiment::F: {
      const double mu = 54, eta = 6;
      return {BivariateHawkes{mu, eta, 0.005, 0.001, 50 * (2 * mu + eta)}, window_end};
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown experiment");
}

bool is_null_experiment(Experiment experiment) noexcept {
  return experiment == Experiment::A || experiment == Experiment::B ||
         experiment == Experiment::C;
}

char to_char(Experiment experiment) noexcept {
  return static_cast<char>('A' + static_cast<int>(experiment));
}

Experiment parse_experiment(const std::string& text) {
  if (text.size() == 1) {
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    if (c >= 'A' && c <= 'F') return static_cast<Experiment>(c - 'A');
  }
  throw Error(ErrorKind::InvalidArgument, "experiment must be one of A..F, got '" + text + "'");
}

}  // namespace ptindep
