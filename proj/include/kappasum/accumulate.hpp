#pragma once

#include <cmath>
#include <complex>

namespace kappasum {

/// Neumaier's variant of Kahan summation, which also survives addends larger
/// than the running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// Compensated sum of complex values, real and imaginary parts separately.
class ComplexCompensatedSum {
 public:
  void add(const std::complex<double>& z) noexcept {
    re_.add(z.real());
    im_.add(z.imag());
  }

  std::complex<double> value() const noexcept { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

}  // namespace kappasum
