#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "ptindep/error.hpp"
#include "ptindep/harness.hpp"
#include "support.hpp"

using namespace ptindep;

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec s;
  s.experiment = Experiment::D;
  s.n_trials = 15;
  s.delta = 0.005;
  s.methods = {Method::CLT, Method::Bootstrap, Method::Permutation, Method::TrialShuffle};
  s.draws = 200;
  s.n_sims = 40;
  s.seed = 99;
  s.record_time = false;
  return s;
}

}  // namespace

TEST_CASE("Wilson interval") {
  const double z = 1.959963984540054;
  auto oracle = [&](double k, double n) {
    const double p = k / n, denom = 1 + z * z / n;
    const double centre = (p + z * z / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    return Interval{centre - half, centre + half};
  };
  for (auto [k, n] : {std::pair{0, 10}, {5, 10}, {10, 10}, {37, 2000}, {1, 3}}) {
    const auto got = wilson_interval(k, n);
    const auto want = oracle(k, n);
    CHECK(got.low == doctest::Approx(std::max(0.0, want.low)).epsilon(1e-12));
    CHECK(got.high == doctest::Approx(std::min(1.0, want.high)).epsilon(1e-12));
  }
  CHECK(wilson_interval(0, 10).low == 0);
  CHECK(wilson_interval(0, 10).high == doctest::Approx(z * z / (10 + z * z)).epsilon(1e-12));
  const auto none = wilson_interval(0, 0);
  CHECK(none.low == 0);
  CHECK(none.high == 1);
}

TEST_CASE("Wilson interval coverage") {
  Rng rng(61);
  int covered = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    std::size_t k = 0;
    for (int i = 0; i < 500; ++i) k += rng.uniform() < 0.05;
    const auto ci = wilson_interval(k, 500);
    covered += ci.low <= 0.05 && 0.05 <= ci.high;
  }
  MESSAGE("coverage " << covered / 1000.0);
  CHECK(std::abs(covered / 1000.0 - 0.95) <= 0.02);
}

TEST_CASE("experiment results are internally consistent") {
  auto spec = small_spec();
  spec.n_trials = 4;  // small n makes the CLT variance estimate vanish on some datasets
  spec.experiment = Experiment::A;
  spec.delta = 0.001;
  const auto r = run_experiment(spec);
  CHECK(r.methods.size() == 4);
  for (const auto& m : r.methods) {
    CHECK(m.n_effective + m.unavailable == spec.n_sims);
    CHECK(m.rate == (m.n_effective ? static_cast<double>(m.rejections) / m.n_effective : 0.0));
    CHECK(m.ci_low <= m.rate);
    CHECK(m.rate <= m.ci_high);
    if (m.method != Method::CLT) CHECK(m.unavailable == 0);
  }
  CHECK(r.at(Method::CLT).unavailable > 0);
  CHECK_THROWS_AS(r.at(Method::GaussianApproximation), Error);
}

TEST_CASE("experiments are reproducible and independent of the worker count") {
  auto spec = small_spec();
  const auto one = run_experiment(spec);
  CHECK(run_experiment(spec) == one);
  spec.workers = 4;
  CHECK(run_experiment(spec) == one);
  spec.seed = 100;
  CHECK_FALSE(run_experiment(spec) == one);

  auto single = small_spec();
  single.n_sims = 1;
  single.methods = {Method::Permutation};
  CHECK(run_experiment(single) == run_experiment(single));
}

TEST_CASE("sweeps reuse the datasets of a single experiment") {
  const auto spec = small_spec();
  const double one_delta[] = {spec.delta};
  const auto sweep = run_delta_sweep(spec, one_delta);
  REQUIRE(sweep.size() == 1);
  CHECK(sweep[0] == run_experiment(spec));

  const double deltas[] = {0.001, 0.005, 0.02};
  const auto multi = run_delta_sweep(spec, deltas);
  REQUIRE(multi.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    auto s = spec;
    s.delta = deltas[k];
    CHECK(multi[k] == run_experiment(s));
  }

  const std::size_t ns[] = {8, 15};
  const auto by_n = run_n_sweep(spec, ns);
  REQUIRE(by_n.size() == 2);
  CHECK(by_n[1] == run_experiment(spec));
  CHECK(by_n[0].n_trials == 8);
}

TEST_CASE("CSV round trip") {
  CHECK(csv_header() ==
        "experiment,n,delta,alpha,method,B,sims,rejections,unavailable,rate,ci_low,ci_high,seed,"
        "wall_seconds");
  auto spec = small_spec();
  spec.record_time = true;
  const double deltas[] = {0.001, 0.0123456789};
  const auto results = run_delta_sweep(spec, deltas);
  std::stringstream out;
  write_csv(out, results);
  const std::string text = out.str();
  CHECK(text.rfind(csv_header() + "\n", 0) == 0);
  CHECK(text.find(',', 0) != std::string::npos);
  const auto back = read_csv(out);
  REQUIRE(back.size() == results.size());
  for (std::size_t k = 0; k < results.size(); ++k) CHECK(back[k] == results[k]);

  std::stringstream bad("experiment,n\nA,1\n");
  CHECK_THROWS_AS(read_csv(bad), Error);
}

TEST_CASE("spec validation") {
  auto spec = small_spec();
  spec.n_trials = 1;
  CHECK_THROWS_AS(validate(spec), Error);
  spec = small_spec();
  spec.alpha = 1;
  CHECK_THROWS_AS(validate(spec), Error);
  spec = small_spec();
  spec.n_sims = 0;
  CHECK_THROWS_AS(validate(spec), Error);
  spec = small_spec();
  spec.methods = {Method::GaussianApproximation};
  CHECK_THROWS_AS(validate(spec), Error);
  spec = small_spec();
  spec.workers = 0;
  CHECK_THROWS_AS(validate(spec), Error);
}

TEST_CASE("bootstrap convergence diagnostic") {
  DiagnosticSpec tiny;
  tiny.n_values = {2};
  tiny.reps = 1;
  tiny.draws = 1;
  tiny.reference_size = 50;
  const auto rows = diag_bootstrap_convergence(tiny);
  REQUIRE(rows.size() == 1);
  CHECK(std::isfinite(rows[0].mean_d2));
  CHECK(rows[0].mean_d2 >= 0);

  DiagnosticSpec small;
  small.n_values = {5, 20};
  small.reps = 4;
  small.draws = 200;
  small.reference_size = 300;
  const auto a = diag_bootstrap_convergence(small);
  small.workers = 4;
  const auto b = diag_bootstrap_convergence(small);
  REQUIRE(a.size() == 2);
  for (std::size_t k = 0; k < 2; ++k) {
    CHECK(a[k].n == small.n_values[k]);
    CHECK(a[k].mean_d2 == b[k].mean_d2);
    CHECK(a[k].sd_d2 == b[k].sd_d2);
  }
  std::stringstream out;
  write_diagnostic_csv(out, small, a);
  CHECK(out.str().rfind(diagnostic_csv_header() + "\n", 0) == 0);
}
