#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>

#include "ptindep/pointproc.hpp"

namespace ptindep {

/// Number of cross pairs (u, v), u in x1, v in x2, with |u - v| <= delay.
/// Linear in the number of points plus the number of matches.
std::uint64_t coincidence_count(const PointProcess& x1, const PointProcess& x2, double delay);

/// Sum of weight(u, v) over all cross pairs.
double weighted_count(const PointProcess& x1, const PointProcess& x2,
                      const std::function<double(double, double)>& weight);

/// A function phi of one trial's two coordinates.
struct PairFunction {
  std::function<double(const PointProcess&, const PointProcess&)> eval;
  std::string label;

  double operator()(const PointProcess& x1, const PointProcess& x2) const { return eval(x1, x2); }
};

PairFunction coincidence_function(double delay);
PairFunction weighted_function(std::function<double(double, double)> weight, std::string label);

/// Symmetric kernel on two trials, (x1, x2) and (y1, y2), given coordinate-wise.
using GeneralKernelFn = std::function<double(const PointProcess& x1, const PointProcess& x2,
                                             const PointProcess& y1, const PointProcess& y2)>;

/**
 * Kernel h of the U-statistic. The Linear kind
 *   h(x, y) = (phi(x1, x2) + phi(y1, y2) - phi(x1, y2) - phi(y1, x2)) / 2
 * is stored through phi, which lets the resampling code work on the cross
 * matrix phi(X_i^1, X_j^2) alone. General kernels are opaque.
 */
class Kernel {
 public:
  struct Linear {
    PairFunction phi;
  };
  struct General {
    GeneralKernelFn eval;
  };

  static Kernel linear(PairFunction phi);
  static Kernel general(GeneralKernelFn eval, std::string label);

  bool is_linear() const noexcept { return std::holds_alternative<Linear>(kind_); }
  /// Precondition: is_linear().
  const PairFunction& phi() const { return std::get<Linear>(kind_).phi; }
  const std::string& label() const noexcept { return label_; }

  double operator()(const PointProcess& x1, const PointProcess& x2, const PointProcess& y1,
                    const PointProcess& y2) const;
  double operator()(const BivariatePair& x, const BivariatePair& y) const {
    return (*this)(x.first, x.second, y.first, y.second);
  }

 private:
  Kernel(std::variant<Linear, General> kind, std::string label)
      : kind_(std::move(kind)), label_(std::move(label)) {}

  std::variant<Linear, General> kind_;
  std::string label_;
};

Kernel linear_kernel(PairFunction phi);

/// Linear kernel of the coincidence count with the given delay.
Kernel coincidence_kernel(double delay);

/**
 * h((x1, x2), (y1, y2)) = f(x1, y1) * f(x2, y2) with f(a, b) = #a #b (#a - #b).
 * Symmetric and empirically centered, but not of the linear form.
 */
Kernel product_count_kernel();

/// h == c. Symmetric; only centered for c == 0.
Kernel constant_kernel(double c);

/**
 * Sum of h((x^1_{i1}, x^2_{i2}), (x^1_{j1}, x^2_{j2})) over all n^4 index
 * quadruples. Vanishes when h is empirically centered. O(n^4) evaluations.
 */
double check_empirical_centering(const Kernel& h, const BivariateSample& sample);

}  // namespace ptindep
