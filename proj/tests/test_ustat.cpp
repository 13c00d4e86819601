#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "ptindep/error.hpp"
#include "ptindep/resampling.hpp"
#include "ptindep/ustat.hpp"
#include "support.hpp"

using namespace ptindep;
using testing::pair_of;
using testing::pp;

namespace {

PairFunction constant_phi(double c) {
  return {[c](const PointProcess&, const PointProcess&) { return c; }, "const"};
}

std::vector<Kernel> linear_kernels() {
  return {coincidence_kernel(0.005), coincidence_kernel(0.02),
          linear_kernel(weighted_function([](double u, double v) { return std::sin(40 * u) * v; },
                                          "sin"))};
}

}  // namespace

TEST_CASE("cross matrix") {
  const BivariateSample s({pair_of({0.1}, {0.1}, 1), pair_of({0.5}, {0.9}, 1)});
  const auto m = cross_matrix(s, coincidence_function(0.05));
  CHECK(m.values() == (Eigen::MatrixXd(2, 2) << 1, 0, 0, 0).finished());
  CHECK(m.grand_sum() == 1);
  CHECK(m.diag_sum() == 1);

  Rng rng(21);
  const auto r = testing::random_sample(rng, 7);
  const auto c = cross_matrix(r, constant_phi(2.5));
  CHECK((c.values().array() == 2.5).all());
  CHECK(c.grand_sum() == 2.5 * 49);
}

TEST_CASE("U-statistic examples") {
  Rng rng(22);
  const auto s2 = testing::random_sample(rng, 2);
  for (const auto& h : linear_kernels()) {
    CHECK(u_statistic(s2, h) == doctest::Approx(h(s2[0], s2[1])).epsilon(1e-12));
    CHECK(u_statistic_direct(s2, h) == h(s2[0], s2[1]));
  }
  const auto s = testing::random_sample(rng, 9);
  CHECK(u_statistic(s, constant_kernel(3.25)) == doctest::Approx(3.25).epsilon(1e-14));
  CHECK(u_statistic(s, constant_kernel(0)) == 0);
}

TEST_CASE("fast path matches the direct double sum for every assignment kind") {
  Rng rng(23);
  for (int c = 0; c < 40; ++c) {
    const std::size_t n = 2 + rng.index(19);
    const auto s = testing::random_sample(rng, n, 8);
    for (const auto& h : linear_kernels()) {
      const auto m = cross_matrix(s, h.phi());
      Assignment arbitrary;
      for (std::size_t k = 0; k < n; ++k) {
        arbitrary.first.push_back(static_cast<Index>(rng.index(n)));
        arbitrary.second.push_back(static_cast<Index>(rng.index(n)));
      }
      const std::vector<Assignment> assignments{Assignment::identity(n), draw_permutation(n, rng),
                                                draw_bootstrap(n, rng), draw_trial_shuffle(n, rng),
                                                arbitrary};
      for (const auto& a : assignments) {
        const double direct = testing::brute_u(assigned_sample(s, a).pairs(), h);
        CHECK(std::abs(u_statistic(m, a) - direct) <= 1e-10 * (1 + std::abs(direct)));
        CHECK(std::abs(u_statistic_direct(s, h, a) - direct) <= 1e-10 * (1 + std::abs(direct)));
      }
    }
  }
}

TEST_CASE("assignment validation") {
  Assignment a;
  a.first = {0, 1};
  a.second = {0, 2};
  CHECK_THROWS_AS(a.validate(2), Error);
  a.second = {0};
  CHECK_THROWS_AS(a.validate(2), Error);
  a.kind = AssignmentKind::Permutation;
  a.second = {0, 0};
  CHECK_THROWS_AS(a.validate(2), Error);
}

TEST_CASE("U averages to zero over all permutations") {
  Rng rng(24);
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto s = testing::random_sample(rng, n, 10);
    for (const auto& h : linear_kernels()) {
      const auto m = cross_matrix(s, h.phi());
      Assignment a = Assignment::identity(n);
      a.kind = AssignmentKind::Permutation;
      long double sum = 0;
      std::size_t count = 0;
      do {
        sum += u_statistic(m, a);
        ++count;
      } while (std::next_permutation(a.second.begin(), a.second.end()));
      CHECK(std::abs(static_cast<double>(sum / count)) <= 1e-10);
    }
  }
}

TEST_CASE("bootstrap centering over all coordinate quadruples") {
  Rng rng(25);
  std::vector<Kernel> kernels = linear_kernels();
  kernels.push_back(product_count_kernel());
  for (std::size_t n : {2, 3, 4, 5}) {
    const auto s = testing::random_sample(rng, n, 6);
    for (const auto& h : kernels) {
      long double sum = 0;
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t c = 0; c < n; ++c)
            for (std::size_t d = 0; d < n; ++d)
              sum += h(s[a].first, s[b].second, s[c].first, s[d].second);
      CHECK(std::abs(static_cast<double>(sum / std::pow(n, 4))) <= 1e-10);
    }
  }
}

TEST_CASE("variance estimate") {
  Rng rng(26);
  const auto s = testing::random_sample(rng, 8);
  CHECK(sigma_hat_squared(s, constant_kernel(0)) == 0);
  CHECK(sigma_hat_squared(s, constant_kernel(1.5)) == doctest::Approx(4 * 2.25).epsilon(1e-14));
  CHECK_THROWS_AS(sigma_hat_squared(testing::random_sample(rng, 2), constant_kernel(1)), Error);

  for (int c = 0; c < 30; ++c) {
    const auto s4 = testing::random_sample(rng, 4, 10);
    for (const auto& h : linear_kernels()) {
      const double want = testing::brute_sigma2(s4, h);
      CHECK(std::abs(sigma_hat_squared(s4, h) - want) <= 1e-10 * (1 + std::abs(want)));
    }
    const auto s12 = testing::random_sample(rng, 12, 6);
    const auto h = product_count_kernel();
    const double want = testing::brute_sigma2(s12, h);
    CHECK(std::abs(sigma_hat_squared(s12, h) - want) <= 1e-10 * (1 + std::abs(want)));
  }
}

TEST_CASE("direct and row-sum variance forms agree") {
  for (std::size_t n : {3, 10, 60, 301}) {
    const auto s = testing::null_sample(27 + n, n, Experiment::D);
    const auto h = kernel_matrix(s, coincidence_kernel(0.01));
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0);
    const double direct = sigma_hat_squared_direct(h);
    const double rowsum = sigma_hat_squared_rowsum(h);
    CHECK(std::abs(direct - rowsum) <= 1e-10 * (1 + std::abs(direct)));
  }
}

TEST_CASE("studentized statistic") {
  CHECK(studentize(0, 2, 10) == 0);
  CHECK_THROWS_AS(studentize(1, 0, 10), Error);
  try {
    studentize(1, -1e-3, 10);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonpositiveVariance);
  }
  Rng rng(28);
  const auto s = testing::random_sample(rng, 5);
  CHECK_THROWS_AS(s_n_statistic(s, constant_kernel(0)), Error);

  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto x = testing::null_sample(100 + seed, 10);
    const auto h = coincidence_kernel(0.01);
    const double u = testing::brute_u(x, h);
    const double s2 = testing::brute_sigma2(x, h);
    if (s2 <= 0) continue;
    CHECK(s_n_statistic(x, h) == doctest::Approx(std::sqrt(10.0) * u / std::sqrt(s2)).epsilon(1e-10));
  }
}

TEST_CASE("U-statistic settles as n grows under injected dependence") {
  // Nested prefixes of one sample per seed; the mean successive change shrinks.
  const std::size_t ladder[] = {10, 20, 50, 100, 200};
  const auto h = coincidence_kernel(0.01);
  std::vector<double> diff(4, 0.0);
  double last = 0;
  const int seeds = 40;
  for (int seed = 0; seed < seeds; ++seed) {
    const auto full = testing::null_sample(300 + seed, 200, Experiment::D);
    std::vector<double> u;
    for (std::size_t n : ladder) {
      std::vector<BivariatePair> prefix(full.pairs().begin(), full.pairs().begin() + n);
      u.push_back(u_statistic(BivariateSample(std::move(prefix)), h));
    }
    for (std::size_t k = 0; k < 4; ++k) diff[k] += std::abs(u[k + 1] - u[k]) / seeds;
    last += u.back() / seeds;
  }
  for (std::size_t k = 0; k + 1 < 4; ++k) CHECK(diff[k + 1] < diff[k]);
  CHECK(last > 0);
}

TEST_CASE("variance estimate is unbiased under the null") {
  const auto h = coincidence_kernel(0.01);
  const std::size_t reps = 10000;
  std::vector<double> est;
  for (std::size_t r = 0; r < reps; ++r)
    est.push_back(sigma_hat_squared(testing::null_sample(derive_seed(7, {r}), 10), h));

  // Target 4 E[g(X)^2], g(x) = E[h(x, X)], from one large sample. Row means
  // estimate g(X_i); subtracting their sampling variance removes the noise bias.
  const std::size_t big = 2000;
  const auto hm = kernel_matrix(testing::null_sample(8, big), h);
  std::vector<double> terms;
  for (Index i = 0; i < static_cast<Index>(big); ++i) {
    double sum = 0, sq = 0;
    for (Index j = 0; j < static_cast<Index>(big); ++j) {
      if (j == i) continue;
      sum += hm(i, j);
      sq += hm(i, j) * hm(i, j);
    }
    const double m = big - 1.0;
    const double g = sum / m;
    const double within = (sq - m * g * g) / (m - 1);
    terms.push_back(4 * (g * g - within / m));
  }
  const double proxy = testing::mean(terms);
  const double se = std::sqrt(testing::variance(est) / reps + testing::variance(terms) / big);
  MESSAGE("mean sigma2 = " << testing::mean(est) << ", proxy = " << proxy << ", se = " << se);
  CHECK(std::abs(testing::mean(est) - proxy) <= 3 * se);
}
