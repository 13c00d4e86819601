#pragma once

#include <cstddef>
#include <string>
#include <variant>

#include "ptindep/pointproc.hpp"
#include "ptindep/rng.hpp"

namespace ptindep {

// Rates are in events per second, durations in seconds.

struct HomPoisson {
  double rate = 0;
};

/// Intensity t -> slope * t on [0, T].
struct InhomPoissonLinear {
  double slope = 0;
};

/// Intensity max(0, mu - nu * N([t - r, t))): Poisson with dead time when nu >= mu.
struct HawkesRefractory {
  double spontaneous = 0;  // mu
  double inhibition = 0;   // nu
  double refractory = 0;   // r
};

/// X^j = X_ind^j U X_com with homogeneous independent parts.
struct InjectionHom {
  double independent_rate = 0;
  double common_rate = 0;
};

/// X^j = X_ind^j U X_com with linear-intensity independent parts.
struct InjectionInhom {
  double independent_slope = 0;
  double common_rate = 0;
};

/**
 * Two coupled refractory processes. Each point of one coordinate adds
 * `interaction` to the other coordinate's intensity for `interaction_period`
 * seconds; each point inhibits its own coordinate by `inhibition` for
 * `refractory` seconds.
 */
struct BivariateHawkes {
  double spontaneous = 0;         // mu
  double interaction = 0;         // eta
  double interaction_period = 0;  // u
  double refractory = 0;          // r
  double inhibition = 0;          // nu
};

using Model = std::variant<HomPoisson, InhomPoissonLinear, HawkesRefractory, InjectionHom,
                           InjectionInhom, BivariateHawkes>;

struct SimConfig {
  Model model;
  double window_end = 0.1;
};

/// Throws Error{InvalidArgument} on negative rates or nonpositive durations.
void validate(const SimConfig& config);

PointProcess simulate_hom_poisson(double rate, double window_end, Rng& rng);
PointProcess simulate_inhom_poisson_linear(double slope, double window_end, Rng& rng);
PointProcess simulate_hawkes_refractory(double spontaneous, double inhibition, double refractory,
                                        double window_end, Rng& rng);

/// Independent part of an injection model.
using InjectionBase = std::variant<HomPoisson, InhomPoissonLinear>;

BivariatePair simulate_injection(const InjectionBase& base, double common_rate,
                                 double window_end, Rng& rng);

BivariatePair simulate_bivariate_hawkes(const BivariateHawkes& params, double window_end,
                                        Rng& rng);

/// One trial. Univariate models give two independent draws of the same law.
BivariatePair simulate_pair(const SimConfig& config, Rng& rng);

/// n i.i.d. trials drawn sequentially from `rng`.
BivariateSample simulate_sample(const SimConfig& config, std::size_t n, Rng& rng);

// The six simulation set-ups of the size/power study.
enum class Experiment { A, B, C, D, E, F };

SimConfig experiment_config(Experiment experiment, double window_end = 0.1);

/// Null-hypothesis experiments (A, B, C) simulate independent coordinates.
bool is_null_experiment(Experiment experiment) noexcept;

char to_char(Experiment experiment) noexcept;
/// Accepts 'A'..'F' (case-insensitive). Throws Error{InvalidArgument}.
Experiment parse_experiment(const std::string& text);

}  // namespace ptindep
