// Command-line front end: simulate data, run one test, or run the
// size/power study and its diagnostics, writing CSV.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "ptindep/ptindep.hpp"

namespace {

using namespace ptindep;

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::istringstream field(item);
    field.imbue(std::locale::classic());
    T value{};
    if (!(field >> value) || !field.eof())
      throw Error(ErrorKind::InvalidArgument, "bad list item '" + item + "'");
    out.push_back(value);
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty list");
  return out;
}

std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_method(item));
  return out;
}

// Writes to `path`, or stdout when the path is "-".
template <class Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot open '" + path + "'");
  fn(out);
}

struct StudyOptions {
  std::string experiment = "A";
  std::size_t n = 20;
  double delta = 0.01;
  double alpha = 0.05;
  std::string methods = "perm";
  std::string tail = "upper";
  std::size_t draws = 10000;
  std::size_t sims = 5000;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string out = "-";
  bool no_timing = false;

  ExperimentSpec spec() const {
    ExperimentSpec s;
    s.experiment = parse_experiment(experiment);
    s.n_trials = n;
    s.delta = delta;
    s.alpha = alpha;
    s.methods = parse_methods(methods);
    s.tail = parse_tail(tail);
    s.draws = draws;
    s.n_sims = sims;
    s.seed = seed;
    s.workers = workers;
    s.record_time = !no_timing;
    return s;
  }
};

void add_study_options(CLI::App* cmd, StudyOptions& o, bool with_n, bool with_delta) {
  cmd->add_option("--exp", o.experiment, "Experiment A..F")->capture_default_str();
  if (with_n) cmd->add_option("--n", o.n, "Number of trials")->capture_default_str();
  if (with_delta) cmd->add_option("--delta", o.delta, "Coincidence delay (s)")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Test level")->capture_default_str();
  cmd->add_option("--methods", o.methods, "Comma list of clt,boot,perm,ts")->capture_default_str();
  cmd->add_option("--tail", o.tail, "upper, lower or two")->capture_default_str();
  cmd->add_option("--B", o.draws, "Monte Carlo draws per test")->capture_default_str();
  cmd->add_option("--sims", o.sims, "Simulated datasets")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--workers", o.workers, "Worker threads")->capture_default_str();
  cmd->add_option("--out", o.out, "Output CSV path, '-' for stdout")->capture_default_str();
  cmd->add_flag("--no-timing", o.no_timing, "Write wall_seconds as 0 for byte-stable output");
}

std::string decision_csv_header() {
  return "method,tail,n,delta,statistic,critical_upper,critical_lower,p_value,reject,available,"
         "alpha,B,seed";
}

std::string opt_real(const std::optional<double>& v) { return v ? format_real(*v) : ""; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Independence tests for paired point processes"};
  app.require_subcommand(1);

  // simulate
  std::string model = "A";
  std::size_t sim_n = 20;
  double sim_T = 0.1;
  std::uint64_t sim_seed = 1;
  std::string sim_out = "-";
  auto* simulate = app.add_subcommand("simulate", "Write a simulated paired sample");
  simulate->add_option("--model", model, "Experiment model A..F")->capture_default_str();
  simulate->add_option("--n", sim_n, "Number of trials")->capture_default_str();
  simulate->add_option("--T", sim_T, "Window end (s)")->capture_default_str();
  simulate->add_option("--seed", sim_seed, "Seed")->capture_default_str();
  simulate->add_option("--out", sim_out, "Output path, '-' for stdout")->capture_default_str();

  // test
  std::string test_in;
  std::string test_method = "perm";
  double test_delta = 0.01, test_alpha = 0.05;
  std::string test_tail = "upper";
  std::size_t test_draws = 10000;
  std::uint64_t test_seed = 1;
  unsigned test_workers = 1;
  bool test_header = false;
  auto* test = app.add_subcommand("test", "Test one recorded sample");
  test->add_option("--in", test_in, "Paired-sample text file")->required();
  test->add_option("--method", test_method, "clt, boot, perm or ts")->capture_default_str();
  test->add_option("--delta", test_delta, "Coincidence delay (s)")->capture_default_str();
  test->add_option("--alpha", test_alpha, "Test level")->capture_default_str();
  test->add_option("--tail", test_tail, "upper, lower or two")->capture_default_str();
  test->add_option("--B", test_draws, "Monte Carlo draws")->capture_default_str();
  test->add_option("--seed", test_seed, "Seed")->capture_default_str();
  test->add_option("--workers", test_workers, "Worker threads")->capture_default_str();
  test->add_flag("--header", test_header, "Print the CSV header line first");

  StudyOptions exp_opts;
  auto* experiment = app.add_subcommand("experiment", "Estimate size/power for one setting");
  add_study_options(experiment, exp_opts, true, true);

  StudyOptions sweep_d_opts;
  sweep_d_opts.n = 50;
  std::string deltas = "0.001,0.005,0.01,0.02";
  auto* sweep_delta = app.add_subcommand("sweep-delta", "Power over several delays, same data");
  add_study_options(sweep_delta, sweep_d_opts, true, false);
  sweep_delta->add_option("--deltas", deltas, "Comma list of delays")->capture_default_str();

  StudyOptions sweep_n_opts;
  std::string ns = "10,20,50,100";
  auto* sweep_n = app.add_subcommand("sweep-n", "Size/power over several trial counts");
  add_study_options(sweep_n, sweep_n_opts, false, true);
  sweep_n->add_option("--ns", ns, "Comma list of trial counts")->capture_default_str();

  DiagnosticSpec diag;
  std::string diag_ns = "10,30,100";
  std::string diag_out = "-";
  auto* diag_cmd = app.add_subcommand("diag-bootstrap", "Wasserstein-2 bootstrap diagnostic");
  diag_cmd->add_option("--ns", diag_ns, "Comma list of trial counts")->capture_default_str();
  diag_cmd->add_option("--reps", diag.reps, "Datasets per n")->capture_default_str();
  diag_cmd->add_option("--B", diag.draws, "Bootstrap draws")->capture_default_str();
  diag_cmd->add_option("--pool", diag.reference_size, "Reference null datasets")
      ->capture_default_str();
  diag_cmd->add_option("--delta", diag.delta, "Coincidence delay (s)")->capture_default_str();
  diag_cmd->add_option("--seed", diag.seed, "Master seed")->capture_default_str();
  diag_cmd->add_option("--workers", diag.workers, "Worker threads")->capture_default_str();
  diag_cmd->add_option("--out", diag_out, "Output CSV path, '-' for stdout")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) {
      Rng rng(sim_seed);
      const auto sample = simulate_sample(experiment_config(parse_experiment(model), sim_T),
                                          sim_n, rng);
      with_output(sim_out, [&](std::ostream& out) { write_sample(out, sample); });
    } else if (*test) {
      const auto sample = load_sample(test_in);
      const auto method = parse_method(test_method);
      const auto tail = parse_tail(test_tail);
      const auto matrix = cross_matrix(sample, coincidence_function(test_delta));
      TestDecision d;
      switch (method) {
        case Method::CLT: d = clt_test(matrix, test_alpha, tail); break;
        case Method::Bootstrap:
          d = bootstrap_test(matrix, test_alpha, tail, test_draws, test_seed, test_workers);
          break;
        case Method::Permutation:
          d = permutation_test(matrix, test_alpha, tail, test_draws, test_seed, test_workers);
          break;
        case Method::TrialShuffle:
          if (tail != Tail::Upper)
            throw Error(ErrorKind::InvalidArgument, "trial shuffling is upper-tailed only");
          d = trial_shuffle_test(matrix, test_alpha, test_draws, test_seed, test_workers);
          break;
        case Method::GaussianApproximation:
          d = gaussian_approximation_test(sample, test_delta, test_alpha);
          break;
      }
      std::optional<double> upper, lower;
      if (d.critical) {
        upper = d.critical->upper;
        lower = d.critical->lower;
      } else if (d.normal_quantile) {
        upper = *d.normal_quantile;
        lower = -*d.normal_quantile;
      }
      if (test_header) std::cout << decision_csv_header() << '\n';
      std::cout << to_string(d.method) << ',' << to_string(d.tail) << ',' << sample.size() << ','
                << format_real(test_delta) << ','
                << (d.available ? format_real(d.statistic) : std::string()) << ','
                << opt_real(upper) << ',' << opt_real(lower) << ',' << opt_real(d.p_value) << ','
                << (d.reject ? 1 : 0) << ',' << (d.available ? 1 : 0) << ','
                << format_real(d.alpha) << ',' << d.draws << ',' << d.seed << '\n';
      std::cerr << to_string(d.method) << " test (" << to_string(d.tail) << "), n = "
                << sample.size() << ", delta = " << test_delta << ": ";
      if (!d.available)
        std::cerr << d.notes << '\n';
      else
        std::cerr << "statistic " << d.statistic << (d.reject ? ", reject" : ", do not reject")
                  << " independence at level " << d.alpha << '\n';
    } else if (*experiment) {
      const auto r = run_experiment(exp_opts.spec());
      with_output(exp_opts.out,
                  [&](std::ostream& out) { write_csv(out, std::span(&r, 1)); });
    } else if (*sweep_delta) {
      const auto list = parse_list<double>(deltas);
      const auto r = run_delta_sweep(sweep_d_opts.spec(), list);
      with_output(sweep_d_opts.out, [&](std::ostream& out) { write_csv(out, r); });
    } else if (*sweep_n) {
      const auto list = parse_list<std::size_t>(ns);
      const auto r = run_n_sweep(sweep_n_opts.spec(), list);
      with_output(sweep_n_opts.out, [&](std::ostream& out) { write_csv(out, r); });
    } else if (*diag_cmd) {
      diag.n_values = parse_list<std::size_t>(diag_ns);
      const auto rows = diag_bootstrap_convergence(diag);
      with_output(diag_out, [&](std::ostream& out) { write_diagnostic_csv(out, diag, rows); });
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
