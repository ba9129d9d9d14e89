#pragma once

#include "kappasum/core.hpp"
#include "kappasum/limits.hpp"
#include "kappasum/riesz.hpp"

#include <vector>

namespace kappasum {

/// Order of the greedy sum; 0 gives the plain greedy sum.
struct Kappa {
  double value;

  explicit Kappa(double v);  // requires a finite v >= 0
};

/// Magnitude threshold epsilon > 0.
struct Threshold {
  double epsilon;

  explicit Threshold(double v);
};

/// Sum over |a_s| > eps of a_s * (1 - eps/|a_s|)^kappa, in enumeration order.
PartialResult kappa_partial(const ArraySource& source, Kappa kappa, Threshold epsilon);

/// Greedy kappa-sum: kappa_partial along a decreasing epsilon ladder.
SumResult kappa_sum(const ArraySource& source, Kappa kappa, const EpsSchedule& schedule,
                    double tol, const LadderOptions& options = {});

/// The entries above eps written as a Riesz series with lambda_s = 1/|a_s|.
struct RieszFragment {
  std::vector<Index> indices;
  std::vector<Complex> coefficients;
  std::vector<double> lambdas;  // nondecreasing

  RieszSeries series() const;
};

/// Evaluate the result at omega = 1/eps to reproduce kappa_partial.
RieszFragment to_riesz(const ArraySource& source, Threshold epsilon);

}  // namespace kappasum
