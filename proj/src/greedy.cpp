#include "kappasum/greedy.hpp"

#include "kappasum/accumulate.hpp"

#include <cmath>
#include <stdexcept>

namespace kappasum {

Kappa::Kappa(double v) : value(v) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("kappa must be a finite value >= 0");
}

Threshold::Threshold(double v) : epsilon(v) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("epsilon must be positive and finite");
}

PartialResult kappa_partial(const ArraySource& source, Kappa kappa, Threshold epsilon) {
  if (epsilon.epsilon >= source.magnitude_bound()) return {};

  const auto terms = source.terms_above(epsilon.epsilon);
  ComplexCompensatedSum sum;
  for (const Term& t : terms) {
    const double base = 1.0 - epsilon.epsilon / t.magnitude();
    const double weight = kappa.value == 0.0 ? 1.0 : std::pow(base, kappa.value);
    sum.add(t.value() * weight);
  }
  return {sum.value(), terms.size()};
}

SumResult kappa_sum(const ArraySource& source, Kappa kappa, const EpsSchedule& schedule, double tol,
                    const LadderOptions& options) {
  const auto epsilons = schedule.values();
  return run_ladder(
      epsilons, [&](double eps) { return kappa_partial(source, kappa, Threshold(eps)); }, tol,
      options);
}

RieszSeries RieszFragment::series() const { return RieszSeries::from_pairs(coefficients, lambdas); }

RieszFragment to_riesz(const ArraySource& source, Threshold epsilon) {
  RieszFragment out;
  const auto terms = source.terms_above(epsilon.epsilon);
  out.indices.reserve(terms.size());
  out.coefficients.reserve(terms.size());
  out.lambdas.reserve(terms.size());
  for (const Term& t : terms) {
    out.indices.push_back(t.index());
    out.coefficients.push_back(t.value());
    out.lambdas.push_back(1.0 / t.magnitude());
  }
  return out;
}

}  // namespace kappasum
