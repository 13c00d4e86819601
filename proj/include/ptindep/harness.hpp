#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ptindep/procedures.hpp"
#include "ptindep/simulate.hpp"

namespace ptindep {

/// One cell of the size/power study.
struct ExperimentSpec {
  Experiment experiment = Experiment::A;
  std::size_t n_trials = 20;
  double delta = 0.01;
  double alpha = 0.05;
  std::vector<Method> methods{Method::Permutation};
  Tail tail = Tail::Upper;
  std::size_t draws = 10000;  // B
  std::size_t n_sims = 5000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double window_end = 0.1;
  bool record_time = true;
};

/// Throws Error{InvalidArgument} (or NotImplemented for GA) on a bad spec.
void validate(const ExperimentSpec& spec);

struct Interval {
  double low = 0;
  double high = 1;
};

/// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::size_t successes, std::size_t trials, double confidence = 0.95);

struct MethodResult {
  Method method = Method::Permutation;
  std::size_t rejections = 0;
  std::size_t unavailable = 0;
  std::size_t n_effective = 0;  // n_sims - unavailable
  double rate = 0;
  double ci_low = 0;
  double ci_high = 1;

  friend bool operator==(const MethodResult&, const MethodResult&) = default;
};

struct ExperimentResult {
  Experiment experiment = Experiment::A;
  std::size_t n_trials = 0;
  double delta = 0;
  double alpha = 0;
  std::size_t draws = 0;
  std::size_t n_sims = 0;
  std::uint64_t seed = 0;
  std::vector<MethodResult> methods;
  double wall_seconds = 0;

  const MethodResult& at(Method method) const;

  friend bool operator==(const ExperimentResult&, const ExperimentResult&) = default;
};

/**
 * Simulate n_sims datasets and test each with every requested method.
 * Dataset d is simulated from derive_seed(seed, {experiment, d}); method m
 * draws from derive_seed(dataset_seed, {m}), so all methods see the same
 * data and the result is independent of `workers`. Per-dataset failures are
 * tallied as unavailable.
 */
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// One result per delay; every delay is evaluated on the same simulated datasets.
std::vector<ExperimentResult> run_delta_sweep(const ExperimentSpec& spec,
                                              std::span<const double> deltas);

/// One run_experiment per trial count, sharing the master seed.
std::vector<ExperimentResult> run_n_sweep(const ExperimentSpec& spec,
                                          std::span<const std::size_t> trial_counts);

std::string csv_header();
void write_csv(std::ostream& out, std::span<const ExperimentResult> results, bool header = true);
/// Parses write_csv output; consecutive rows of one experiment are regrouped.
std::vector<ExperimentResult> read_csv(std::istream& in);

struct DiagnosticSpec {
  std::vector<std::size_t> n_values{10, 30, 100};
  std::size_t reps = 50;
  std::size_t draws = 2000;
  std::size_t reference_size = 5000;
  double delta = 0.01;
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

struct DiagnosticRow {
  std::size_t n = 0;
  double mean_d2 = 0;
  double sd_d2 = 0;
};

/**
 * Under the homogeneous Poisson null, average over `reps` datasets of the
 * Wasserstein-2 distance between the Monte Carlo bootstrap distribution of
 * sqrt(n) U_n and a reference distribution of sqrt(n) U_n pooled over
 * `reference_size` fresh null datasets.
 */
std::vector<DiagnosticRow> diag_bootstrap_convergence(const DiagnosticSpec& spec);

std::string diagnostic_csv_header();
void write_diagnostic_csv(std::ostream& out, const DiagnosticSpec& spec,
                          std::span<const DiagnosticRow> rows);

}  // namespace ptindep
