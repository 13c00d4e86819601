#include "ptindep/ustat.hpp"

#include <string>

namespace ptindep {

CrossMatrix<double> cross_matrix(const BivariateSample& sample, const PairFunction& phi) {
  const auto n = static_cast<Index>(sample.size());
  MatrixX<double> values(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) values(i, j) = phi(sample[i].first, sample[j].second);
  return CrossMatrix<double>(std::move(values));
}

Assignment Assignment::identity(std::size_t n) {
  Assignment a;
  a.kind = AssignmentKind::Identity;
  a.first.resize(n);
  a.second.resize(n);
  for (std::size_t k = 0; k < n; ++k) a.first[k] = a.second[k] = static_cast<Index>(k);
  return a;
}

void Assignment::validate(std::size_t n) const {
  if (first.size() != second.size())
    throw Error(ErrorKind::InvalidArgument, "assignment coordinates differ in length");
  for (std::size_t k = 0; k < first.size(); ++k) {
    if (first[k] < 0 || second[k] < 0 || static_cast<std::size_t>(first[k]) >= n ||
        static_cast<std::size_t>(second[k]) >= n)
      throw Error(ErrorKind::InvalidArgument, "assignment index out of range");
  }
  // The fast paths rely on these shapes: identity first coordinate, and a
  // bijective (Permutation) or identity second coordinate.
  if (kind != AssignmentKind::Identity && kind != AssignmentKind::Permutation) return;
  if (first.size() != n) throw Error(ErrorKind::InvalidArgument, "assignment must have n trials");
  std::vector<bool> seen(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const auto b = static_cast<std::size_t>(second[k]);
    if (static_cast<std::size_t>(first[k]) != k || seen[b] ||
        (kind == AssignmentKind::Identity && b != k))
      throw Error(ErrorKind::InvalidArgument, "assignment does not match its kind");
    seen[b] = true;
  }
}

BivariateSample assigned_sample(const BivariateSample& sample, const Assignment& assignment) {
  assignment.validate(sample.size());
  std::vector<BivariatePair> pairs;
  pairs.reserve(assignment.size());
  for (std::size_t k = 0; k < assignment.size(); ++k)
    pairs.push_back({sample[static_cast<std::size_t>(assignment.first[k])].first,
                     sample[static_cast<std::size_t>(assignment.second[k])].second});
  return BivariateSample(std::move(pairs));
}

double u_statistic_direct(const BivariateSample& sample, const Kernel& kernel) {
  return u_statistic_direct(sample, kernel, Assignment::identity(sample.size()));
}

double u_statistic_direct(const BivariateSample& sample, const Kernel& kernel,
                          const Assignment& assignment) {
  assignment.validate(sample.size());
  const std::size_t n = assignment.size();
  if (n < 2) throw Error(ErrorKind::DegenerateSample, "U-statistic needs n >= 2");
  auto x1 = [&](std::size_t k) -> const PointProcess& {
    return sample[static_cast<std::size_t>(assignment.first[k])].first;
  };
  auto x2 = [&](std::size_t k) -> const PointProcess& {
    return sample[static_cast<std::size_t>(assignment.second[k])].second;
  };
  KahanSum sum;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) sum += kernel(x1(i), x2(i), x1(j), x2(j));
  const auto nn = static_cast<double>(n);
  return sum.value() / (nn * (nn - 1));
}

double u_statistic(const BivariateSample& sample, const Kernel& kernel) {
  if (kernel.is_linear())
    return u_statistic(cross_matrix(sample, kernel.phi()), Assignment::identity(sample.size()));
  return u_statistic_direct(sample, kernel);
}

MatrixX<double> kernel_matrix(const BivariateSample& sample, const Kernel& kernel) {
  if (kernel.is_linear()) return kernel_matrix(cross_matrix(sample, kernel.phi()));
  const auto n = static_cast<Index>(sample.size());
  MatrixX<double> h = MatrixX<double>::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j)
        h(i, j) = kernel(sample[static_cast<std::size_t>(i)], sample[static_cast<std::size_t>(j)]);
  return h;
}

double sigma_hat_squared(const BivariateSample& sample, const Kernel& kernel) {
  if (sample.size() < 3) throw Error(ErrorKind::TooFewTrials, "variance estimate needs n >= 3");
  return sigma_hat_squared(kernel_matrix(sample, kernel));
}

double studentize(double u, double sigma2, std::size_t n) {
  if (!(sigma2 > 0))
    throw Error(ErrorKind::NonpositiveVariance,
                "estimated variance " + format_real(sigma2) + " is not positive");
  return std::sqrt(static_cast<double>(n)) * u / std::sqrt(sigma2);
}

double s_n_statistic(const BivariateSample& sample, const Kernel& kernel) {
  if (sample.size() < 3) throw Error(ErrorKind::TooFewTrials, "S_n needs n >= 3");
  if (kernel.is_linear()) {
    const auto matrix = cross_matrix(sample, kernel.phi());
    const double u = u_statistic(matrix, Assignment::identity(sample.size()));
    return studentize(u, sigma_hat_squared(kernel_matrix(matrix)), sample.size());
  }
  return studentize(u_statistic_direct(sample, kernel), sigma_hat_squared(sample, kernel),
                    sample.size());
}

}  // namespace ptindep
