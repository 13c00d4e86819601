#pragma once

#include <cmath>

namespace ptindep {

/// Neumaier-compensated running sum.
template <class Scalar>
class BasicKahanSum {
 public:
  BasicKahanSum& operator+=(Scalar x) noexcept {
    using std::abs;
    const Scalar t = sum_ + x;
    if (abs(sum_) >= abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    return *this;
  }

  Scalar value() const noexcept { return sum_ + comp_; }

 private:
  Scalar sum_{0};
  Scalar comp_{0};
};

using KahanSum = BasicKahanSum<double>;

}  // namespace ptindep
