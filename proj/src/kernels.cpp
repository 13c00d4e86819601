#include "ptindep/kernels.hpp"

#include "ptindep/error.hpp"
#include "ptindep/summation.hpp"

namespace ptindep {

std::uint64_t coincidence_count(const PointProcess& x1, const PointProcess& x2, double delay) {
  const auto a = x1.times();
  const auto b = x2.times();
  std::uint64_t count = 0;
  // [lo, hi) holds the v with |u - v| <= delay; both ends only move right
  // because u - v and v - u are monotone in u under rounding.
  std::size_t lo = 0, hi = 0;
  for (double u : a) {
    while (lo < b.size() && b[lo] < u && u - b[lo] > delay) ++lo;
    if (hi < lo) hi = lo;
    while (hi < b.size() && (b[hi] < u || b[hi] - u <= delay)) ++hi;
    count += hi - lo;
  }
  return count;
}

double weighted_count(const PointProcess& x1, const PointProcess& x2,
                      const std::function<double(double, double)>& weight) {
  KahanSum sum;
  for (double u : x1.times())
    for (double v : x2.times()) sum += weight(u, v);
  return sum.value();
}

PairFunction coincidence_function(double delay) {
  if (!(delay >= 0)) throw Error(ErrorKind::InvalidArgument, "delay must be >= 0");
  return {[delay](const PointProcess& x1, const PointProcess& x2) {
            return static_cast<double>(coincidence_count(x1, x2, delay));
          },
          "coincidence(delta=" + format_real(delay) + ")"};
}

PairFunction weighted_function(std::function<double(double, double)> weight, std::string label) {
  return {[w = std::move(weight)](const PointProcess& x1, const PointProcess& x2) {
            return weighted_count(x1, x2, w);
          },
          std::move(label)};
}

Kernel Kernel::linear(PairFunction phi) {
  std::string label = "linear[" + phi.label + "]";
  return Kernel(Linear{std::move(phi)}, std::move(label));
}

Kernel Kernel::general(GeneralKernelFn eval, std::string label) {
  return Kernel(General{std::move(eval)}, std::move(label));
}

double Kernel::operator()(const PointProcess& x1, const PointProcess& x2, const PointProcess& y1,
                          const PointProcess& y2) const {
  if (const auto* lin = std::get_if<Linear>(&kind_)) {
    const auto& phi = lin->phi;
    // Grouped so that swapping x and y gives a bit-identical result.
    return 0.5 * ((phi(x1, x2) + phi(y1, y2)) - (phi(x1, y2) + phi(y1, x2)));
  }
  return std::get<General>(kind_).eval(x1, x2, y1, y2);
}

Kernel linear_kernel(PairFunction phi) { return Kernel::linear(std::move(phi)); }

Kernel coincidence_kernel(double delay) { return linear_kernel(coincidence_function(delay)); }

Kernel product_count_kernel() {
  auto f = [](const PointProcess& a, const PointProcess& b) {
    const auto na = static_cast<double>(a.count());
    const auto nb = static_cast<double>(b.count());
    return na * nb * (na - nb);
  };
  return Kernel::general(
      [f](const PointProcess& x1, const PointProcess& x2, const PointProcess& y1,
          const PointProcess& y2) { return f(x1, y1) * f(x2, y2); },
      "product-count");
}

Kernel constant_kernel(double c) {
  return Kernel::general([c](const PointProcess&, const PointProcess&, const PointProcess&,
                             const PointProcess&) { return c; },
                         "constant(" + format_real(c) + ")");
}

double check_empirical_centering(const Kernel& h, const BivariateSample& sample) {
  const std::size_t n = sample.size();
  KahanSum sum;
  for (std::size_t i1 = 0; i1 < n; ++i1)
    for (std::size_t i2 = 0; i2 < n; ++i2)
      for (std::size_t j1 = 0; j1 < n; ++j1)
        for (std::size_t j2 = 0; j2 < n; ++j2)
          sum += h(sample[i1].first, sample[i2].second, sample[j1].first, sample[j2].second);
  return sum.value();
}

}  // namespace ptindep
