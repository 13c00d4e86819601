#include "ptindep/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "ptindep/error.hpp"
#include "ptindep/parallel.hpp"
#include "ptindep/resampling.hpp"
#include "ptindep/summation.hpp"

namespace ptindep {

namespace {

enum class Outcome : unsigned char { Accept, Reject, Unavailable };

Outcome run_method(Method method, const CrossMatrix<double>& matrix, const ExperimentSpec& spec,
                   std::uint64_t seed) {
  try {
    TestDecision d;
    switch (method) {
      case Method::CLT: d = clt_test(matrix, spec.alpha, spec.tail); break;
      case Method::Bootstrap:
        d = bootstrap_test(matrix, spec.alpha, spec.tail, spec.draws, seed);
        break;
      case Method::Permutation:
        d = permutation_test(matrix, spec.alpha, spec.tail, spec.draws, seed);
        break;
      case Method::TrialShuffle: d = trial_shuffle_test(matrix, spec.alpha, spec.draws, seed); break;
      case Method::GaussianApproximation: return Outcome::Unavailable;
    }
    if (!d.available) return Outcome::Unavailable;
    return d.reject ? Outcome::Reject : Outcome::Accept;
  } catch (const Error&) {
    return Outcome::Unavailable;
  }
}

MethodResult tally(Method method, std::size_t rejections, std::size_t unavailable,
                   std::size_t sims) {
  MethodResult r;
  r.method = method;
  r.rejections = rejections;
  r.unavailable = unavailable;
  r.n_effective = sims - unavailable;
  r.rate = r.n_effective == 0 ? 0.0
                              : static_cast<double>(rejections) /
                                    static_cast<double>(r.n_effective);
  const auto ci = wilson_interval(rejections, r.n_effective);
  r.ci_low = ci.low;
  r.ci_high = ci.high;
  return r;
}

std::vector<ExperimentResult> run_grid(const ExperimentSpec& spec,
                                       std::span<const double> deltas) {
  validate(spec);
  for (double delta : deltas)
    if (!(delta >= 0)) throw Error(ErrorKind::InvalidArgument, "delta must be >= 0");
  const auto start = std::chrono::steady_clock::now();
  const SimConfig config = experiment_config(spec.experiment, spec.window_end);
  const std::size_t n_methods = spec.methods.size();
  const std::size_t per_dataset = deltas.size() * n_methods;
  std::vector<Outcome> outcomes(spec.n_sims * per_dataset, Outcome::Unavailable);

  parallel_for(spec.n_sims, spec.workers, [&](std::size_t d) {
    const std::uint64_t dataset_seed =
        derive_seed(spec.seed, {static_cast<std::uint64_t>(spec.experiment), d});
    Outcome* slot = outcomes.data() + d * per_dataset;
    try {
      Rng rng(dataset_seed);
      const auto sample = simulate_sample(config, spec.n_trials, rng);
      for (std::size_t k = 0; k < deltas.size(); ++k) {
        const auto matrix = cross_matrix(sample, coincidence_function(deltas[k]));
        for (std::size_t m = 0; m < n_methods; ++m) {
          const auto method = spec.methods[m];
          const auto seed = derive_seed(dataset_seed, {static_cast<std::uint64_t>(method)});
          slot[k * n_methods + m] = run_method(method, matrix, spec, seed);
        }
      }
    } catch (const Error&) {
      std::fill(slot, slot + per_dataset, Outcome::Unavailable);
    }
  });

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::vector<ExperimentResult> results;
  for (std::size_t k = 0; k < deltas.size(); ++k) {
    ExperimentResult r;
    r.experiment = spec.experiment;
    r.n_trials = spec.n_trials;
    r.delta = deltas[k];
    r.alpha = spec.alpha;
    r.draws = spec.draws;
    r.n_sims = spec.n_sims;
    r.seed = spec.seed;
    r.wall_seconds = spec.record_time ? elapsed : 0.0;
    for (std::size_t m = 0; m < n_methods; ++m) {
      std::size_t rejections = 0, unavailable = 0;
      for (std::size_t d = 0; d < spec.n_sims; ++d) {
        const auto o = outcomes[d * per_dataset + k * n_methods + m];
        rejections += o == Outcome::Reject;
        unavailable += o == Outcome::Unavailable;
      }
      r.methods.push_back(tally(spec.methods[m], rejections, unavailable, spec.n_sims));
    }
    results.push_back(std::move(r));
  }
  return results;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    out.push_back(line.substr(pos, next - pos));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

template <class T>
T parse_number(const std::string& text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size())
    throw Error(ErrorKind::ParseError, "bad CSV field '" + text + "'");
  return value;
}

}  // namespace

void validate(const ExperimentSpec& spec) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::InvalidArgument, what);
  };
  require(spec.n_trials >= 2, "n must be >= 2");
  require(spec.alpha > 0 && spec.alpha < 1, "alpha must lie in (0, 1)");
  require(spec.n_sims >= 1, "sims must be >= 1");
  require(spec.draws >= 1, "B must be >= 1");
  require(spec.delta >= 0, "delta must be >= 0");
  require(!spec.methods.empty(), "at least one method is required");
  require(spec.workers >= 1, "workers must be >= 1");
  for (auto m : spec.methods)
    if (m == Method::GaussianApproximation)
      throw Error(ErrorKind::NotImplemented, "the GA method is not available");
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0) return {0, 1};
  const double z = normal_quantile(0.5 + confidence / 2);
  const auto n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1 + z2 / n;
  const double center = (p + z2 / (2 * n)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
  return {std::clamp(std::min(center - half, p), 0.0, 1.0),
          std::clamp(std::max(center + half, p), 0.0, 1.0)};
}

const MethodResult& ExperimentResult::at(Method method) const {
  for (const auto& m : methods)
    if (m.method == method) return m;
  throw Error(ErrorKind::InvalidArgument, std::string("no result for method ") + to_string(method));
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  const double delta = spec.delta;
  return run_grid(spec, std::span<const double>(&delta, 1)).front();
}

std::vector<ExperimentResult> run_delta_sweep(const ExperimentSpec& spec,
                                              std::span<const double> deltas) {
  if (deltas.empty()) throw Error(ErrorKind::InvalidArgument, "no delays given");
  return run_grid(spec, deltas);
}

std::vector<ExperimentResult> run_n_sweep(const ExperimentSpec& spec,
                                          std::span<const std::size_t> trial_counts) {
  std::vector<ExperimentResult> results;
  for (auto n : trial_counts) {
    auto s = spec;
    s.n_trials = n;
    results.push_back(run_experiment(s));
  }
  return results;
}

std::string csv_header() {
  return "experiment,n,delta,alpha,method,B,sims,rejections,unavailable,rate,ci_low,ci_high,"
         "seed,wall_seconds";
}

void write_csv(std::ostream& out, std::span<const ExperimentResult> results, bool header) {
  if (header) out << csv_header() << '\n';
  for (const auto& r : results) {
    for (const auto& m : r.methods) {
      out << to_char(r.experiment) << ',' << r.n_trials << ',' << format_real(r.delta) << ','
          << format_real(r.alpha) << ',' << to_string(m.method) << ',' << r.draws << ','
          << r.n_sims << ',' << m.rejections << ',' << m.unavailable << ','
          << format_real(m.rate) << ',' << format_real(m.ci_low) << ','
          << format_real(m.ci_high) << ',' << r.seed << ',' << format_real(r.wall_seconds)
          << '\n';
    }
  }
}

std::vector<ExperimentResult> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != csv_header())
    throw Error(ErrorKind::ParseError, "missing or unexpected CSV header");
  std::vector<ExperimentResult> results;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 14) throw Error(ErrorKind::ParseError, "expected 14 CSV fields");
    ExperimentResult r;
    r.experiment = parse_experiment(f[0]);
    r.n_trials = parse_number<std::size_t>(f[1]);
    r.delta = parse_number<double>(f[2]);
    r.alpha = parse_number<double>(f[3]);
    r.draws = parse_number<std::size_t>(f[5]);
    r.n_sims = parse_number<std::size_t>(f[6]);
    r.seed = parse_number<std::uint64_t>(f[12]);
    r.wall_seconds = parse_number<double>(f[13]);
    MethodResult m;
    m.method = parse_method(f[4]);
    m.rejections = parse_number<std::size_t>(f[7]);
    m.unavailable = parse_number<std::size_t>(f[8]);
    m.n_effective = r.n_sims - m.unavailable;
    m.rate = parse_number<double>(f[9]);
    m.ci_low = parse_number<double>(f[10]);
    m.ci_high = parse_number<double>(f[11]);

    const bool same_group = !results.empty() && [&] {
      const auto& b = results.back();
      return b.experiment == r.experiment && b.n_trials == r.n_trials && b.delta == r.delta &&
             b.alpha == r.alpha && b.draws == r.draws && b.n_sims == r.n_sims &&
             b.seed == r.seed && b.wall_seconds == r.wall_seconds &&
             std::none_of(b.methods.begin(), b.methods.end(),
                          [&](const MethodResult& x) { return x.method == m.method; });
    }();
    if (same_group) {
      results.back().methods.push_back(m);
    } else {
      r.methods.push_back(m);
      results.push_back(std::move(r));
    }
  }
  return results;
}

std::vector<DiagnosticRow> diag_bootstrap_convergence(const DiagnosticSpec& spec) {
  if (spec.reps < 1 || spec.draws < 1 || spec.reference_size < 1)
    throw Error(ErrorKind::InvalidArgument, "reps, B and reference size must be >= 1");
  const SimConfig config = experiment_config(Experiment::A);
  const auto phi = coincidence_function(spec.delta);
  std::vector<DiagnosticRow> rows;
  for (std::size_t n : spec.n_values) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "n must be >= 2");
    const double root_n = std::sqrt(static_cast<double>(n));

    std::vector<double> reference(spec.reference_size);
    parallel_for(spec.reference_size, spec.workers, [&](std::size_t p) {
      Rng rng(derive_seed(spec.seed, {n, 0, p}));
      const auto sample = simulate_sample(config, n, rng);
      reference[p] = root_n * u_statistic(cross_matrix(sample, phi), Assignment::identity(n));
    });

    std::vector<double> distances(spec.reps);
    parallel_for(spec.reps, spec.workers, [&](std::size_t r) {
      const auto rep_seed = derive_seed(spec.seed, {n, 1, r});
      Rng rng(rep_seed);
      const auto sample = simulate_sample(config, n, rng);
      const auto dist = resampled_distribution(cross_matrix(sample, phi), Scheme::Bootstrap,
                                               spec.draws, derive_seed(rep_seed, {1}));
      distances[r] = wasserstein2(dist.statistics, reference);
    });

    KahanSum sum;
    for (double d : distances) sum += d;
    const double mean = sum.value() / static_cast<double>(spec.reps);
    KahanSum sq;
    for (double d : distances) sq += (d - mean) * (d - mean);
    const double sd =
        spec.reps > 1 ? std::sqrt(sq.value() / static_cast<double>(spec.reps - 1)) : 0.0;
    rows.push_back({n, mean, sd});
  }
  return rows;
}

std::string diagnostic_csv_header() { return "n,reps,B,pool,delta,mean_d2,sd_d2,seed"; }

void write_diagnostic_csv(std::ostream& out, const DiagnosticSpec& spec,
                          std::span<const DiagnosticRow> rows) {
  out << diagnostic_csv_header() << '\n';
  for (const auto& r : rows)
    out << r.n << ',' << spec.reps << ',' << spec.draws << ',' << spec.reference_size << ','
        << format_real(spec.delta) << ',' << format_real(r.mean_d2) << ','
        << format_real(r.sd_d2) << ',' << spec.seed << '\n';
}

}  // namespace ptindep
