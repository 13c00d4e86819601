#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ptindep/error.hpp"
#include "ptindep/kernels.hpp"
#include "ptindep/pointproc.hpp"
#include "ptindep/summation.hpp"

namespace ptindep {

using Index = Eigen::Index;

template <class Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/**
 * values(i, j) = phi(X_i^1, X_j^2) with its compensated grand and diagonal
 * sums. Immutable once built; every linear-kernel resampling scheme reads
 * only this matrix.
 */
template <class Scalar = double>
class CrossMatrix {
 public:
  using Matrix = MatrixX<Scalar>;

  explicit CrossMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols())
      throw Error(ErrorKind::InvalidArgument, "cross matrix must be square");
    BasicKahanSum<Scalar> grand, diag;
    for (Index j = 0; j < values_.cols(); ++j)
      for (Index i = 0; i < values_.rows(); ++i) grand += values_(i, j);
    for (Index i = 0; i < values_.rows(); ++i) diag += values_(i, i);
    grand_sum_ = grand.value();
    diag_sum_ = diag.value();
  }

  Index size() const noexcept { return values_.rows(); }
  const Matrix& values() const noexcept { return values_; }
  Scalar operator()(Index i, Index j) const { return values_(i, j); }
  Scalar grand_sum() const noexcept { return grand_sum_; }
  Scalar diag_sum() const noexcept { return diag_sum_; }

 private:
  Matrix values_;
  Scalar grand_sum_{0};
  Scalar diag_sum_{0};
};

/// O(n^2) evaluations of phi.
CrossMatrix<double> cross_matrix(const BivariateSample& sample, const PairFunction& phi);

enum class AssignmentKind { Identity, Permutation, Bootstrap, TrialShuffle, Arbitrary };

/**
 * Resampled trial k is (X^1_{first[k]}, X^2_{second[k]}), zero-based.
 * `kind` records how the indices were drawn; Permutation promises `first` is
 * the identity and `second` a bijection.
 */
struct Assignment {
  AssignmentKind kind = AssignmentKind::Arbitrary;
  std::vector<Index> first;
  std::vector<Index> second;

  std::size_t size() const noexcept { return first.size(); }

  static Assignment identity(std::size_t n);
  /// Throws Error{InvalidArgument} on mismatched lengths or bad indices.
  void validate(std::size_t n) const;
};

/// Materialize the resampled sample (copies the point processes).
BivariateSample assigned_sample(const BivariateSample& sample, const Assignment& assignment);

/// (1 / (n (n-1))) sum over i != j of h(Y_i, Y_j), evaluated kernel by kernel.
double u_statistic_direct(const BivariateSample& sample, const Kernel& kernel);
double u_statistic_direct(const BivariateSample& sample, const Kernel& kernel,
                          const Assignment& assignment);

/**
 * Linear-kernel U-statistic of an assigned sample from the cross matrix:
 *   U = (sum_k Phi[a_k][b_k] - (1/n) sum_{k,k'} Phi[a_k][b_k']) / (n - 1).
 * O(n) for identity and permutations (the double sum is the grand sum),
 * O(n^2) otherwise through row/column multiplicities.
 */
template <class Scalar>
Scalar u_statistic(const CrossMatrix<Scalar>& matrix, const Assignment& assignment) {
  const auto n = static_cast<Index>(assignment.size());
  if (n < 2) throw Error(ErrorKind::DegenerateSample, "U-statistic needs n >= 2");
  const auto& phi = matrix.values();

  Scalar matched{0}, total{0};
  if (assignment.kind == AssignmentKind::Identity) {
    matched = matrix.diag_sum();
    total = matrix.grand_sum();
  } else {
    BasicKahanSum<Scalar> diag;
    for (Index k = 0; k < n; ++k) diag += phi(assignment.first[k], assignment.second[k]);
    matched = diag.value();
    if (assignment.kind == AssignmentKind::Permutation && n == matrix.size()) {
      total = matrix.grand_sum();
    } else {
      const Index m = matrix.size();
      std::vector<Scalar> row_mult(static_cast<std::size_t>(m), Scalar{0});
      std::vector<Scalar> col_mult(static_cast<std::size_t>(m), Scalar{0});
      for (Index k = 0; k < n; ++k) {
        row_mult[static_cast<std::size_t>(assignment.first[k])] += Scalar{1};
        col_mult[static_cast<std::size_t>(assignment.second[k])] += Scalar{1};
      }
      BasicKahanSum<Scalar> acc;
      for (Index j = 0; j < m; ++j) {
        const Scalar cj = col_mult[static_cast<std::size_t>(j)];
        if (cj == Scalar{0}) continue;
        BasicKahanSum<Scalar> column;
        for (Index i = 0; i < m; ++i) {
          const Scalar ri = row_mult[static_cast<std::size_t>(i)];
          if (ri != Scalar{0}) column += ri * phi(i, j);
        }
        acc += cj * column.value();
      }
      total = acc.value();
    }
  }
  return (matched - total / static_cast<Scalar>(n)) / static_cast<Scalar>(n - 1);
}

/// U_n of the observed sample: cross-matrix path for linear kernels, direct otherwise.
double u_statistic(const BivariateSample& sample, const Kernel& kernel);

/// H(i, j) = h(X_i, X_j) for i != j, zero diagonal.
template <class Scalar>
MatrixX<Scalar> kernel_matrix(const CrossMatrix<Scalar>& matrix) {
  const auto& phi = matrix.values();
  const auto n = phi.rows();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> d = phi.diagonal();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ones =
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Ones(n);
  MatrixX<Scalar> h =
      Scalar(0.5) * ((d * ones.transpose() + ones * d.transpose()) - (phi + phi.transpose()));
  h.diagonal().setZero();
  return h;
}

MatrixX<double> kernel_matrix(const BivariateSample& sample, const Kernel& kernel);

/**
 * Unbiased variance estimate
 *   4 / (n (n-1) (n-2)) * sum over distinct i, j, k of H(i, j) H(i, k)
 * by the literal triple loop. H must have a zero diagonal.
 */
template <class Derived>
typename Derived::Scalar sigma_hat_squared_direct(const Eigen::MatrixBase<Derived>& h) {
  using Scalar = typename Derived::Scalar;
  const Index n = h.rows();
  if (n < 3) throw Error(ErrorKind::TooFewTrials, "variance estimate needs n >= 3");
  BasicKahanSum<Scalar> sum;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const Scalar hij = h(i, j);
      if (hij == Scalar{0}) continue;
      for (Index k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        sum += hij * h(i, k);
      }
    }
  const auto nn = static_cast<Scalar>(n);
  return Scalar(4) * sum.value() / (nn * (nn - 1) * (nn - 2));
}

/// Same quantity in O(n^2): sum_i [(sum_j H_ij)^2 - sum_j H_ij^2].
template <class Derived>
typename Derived::Scalar sigma_hat_squared_rowsum(const Eigen::MatrixBase<Derived>& h) {
  using Scalar = typename Derived::Scalar;
  const Index n = h.rows();
  if (n < 3) throw Error(ErrorKind::TooFewTrials, "variance estimate needs n >= 3");
  BasicKahanSum<Scalar> sum;
  for (Index i = 0; i < n; ++i) {
    BasicKahanSum<Scalar> row, squares;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      row += h(i, j);
      squares += h(i, j) * h(i, j);
    }
    const Scalar r = row.value();
    sum += r * r;
    sum += -squares.value();
  }
  const auto nn = static_cast<Scalar>(n);
  return Scalar(4) * sum.value() / (nn * (nn - 1) * (nn - 2));
}

/// Sample size up to which sigma_hat_squared uses the triple loop.
inline constexpr Index kDirectVarianceLimit = 300;

template <class Derived>
typename Derived::Scalar sigma_hat_squared(const Eigen::MatrixBase<Derived>& h) {
  return h.rows() <= kDirectVarianceLimit ? sigma_hat_squared_direct(h)
                                          : sigma_hat_squared_rowsum(h);
}

/// May be negative for small n. Throws Error{TooFewTrials} when n < 3.
double sigma_hat_squared(const BivariateSample& sample, const Kernel& kernel);

/// sqrt(n) U / sqrt(sigma2). Throws Error{NonpositiveVariance} when sigma2 <= 0.
double studentize(double u, double sigma2, std::size_t n);

double s_n_statistic(const BivariateSample& sample, const Kernel& kernel);

}  // namespace ptindep
