#include "kappasum/riesz.hpp"

#include "kappasum/accumulate.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <utility>

namespace kappasum {

RieszSeries::RieszSeries(CoefficientFn coefficient, LambdaFn lambda, std::string name)
    : coefficient_(std::move(coefficient)), lambda_(std::move(lambda)), name_(std::move(name)) {
  if (!coefficient_ || !lambda_) throw std::invalid_argument("RieszSeries: empty function");
}

RieszSeries RieszSeries::from_pairs(std::vector<Complex> coefficients, std::vector<double> lambdas,
                                    std::string name) {
  if (coefficients.size() != lambdas.size()) {
    throw std::invalid_argument("RieszSeries: coefficient and lambda counts differ");
  }
  const auto a = std::make_shared<const std::vector<Complex>>(std::move(coefficients));
  const auto l = std::make_shared<const std::vector<double>>(std::move(lambdas));
  RieszSeries series([a](std::uint64_t n) { return (*a)[n - 1]; },
                     [l](std::uint64_t n) { return (*l)[n - 1]; }, std::move(name));
  series.length_ = a->size();
  series.allows_ties_ = true;
  return series;
}

Cutoff::Cutoff(double value) : omega(value) {
  if (!(value > 0.0) || !std::isfinite(value)) throw std::invalid_argument("omega must be positive");
}

PartialResult riesz_partial(const RieszSeries& series, double kappa, Cutoff omega,
                            std::uint64_t max_terms) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be >= 0");

  const auto length = series.length();
  ComplexCompensatedSum sum;
  std::uint64_t count = 0;
  double previous = 0.0;
  for (std::uint64_t n = 1; !length || n <= *length; ++n) {
    const double lambda = series.lambda(n);
    if (!(lambda > 0.0)) {
      throw std::domain_error(series.name() + ": lambda_" + std::to_string(n) + " is not positive");
    }
    if (n > 1 && (lambda < previous || (lambda == previous && !series.allows_ties()))) {
      throw std::domain_error(series.name() + ": lambdas not increasing at n = " + std::to_string(n));
    }
    if (!(lambda < omega.omega)) break;
    if (count == max_terms) {
      throw BudgetExceeded(series.name() + ": more lambdas below " + std::to_string(omega.omega) + " than allowed",
                           max_terms);
    }
    const double base = 1.0 - lambda / omega.omega;
    const double weight = kappa == 0.0 ? 1.0 : std::pow(base, kappa);
    sum.add(series.coefficient(n) * weight);
    ++count;
    previous = lambda;
  }
  return {sum.value(), count};
}

SumResult riesz_limit(const RieszSeries& series, double kappa, const OmegaSchedule& schedule,
                      double tol, const LadderOptions& options, std::uint64_t max_terms) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("kappa must be >= 0");
  const auto omegas = schedule.values();
  return run_ladder(
      omegas,
      [&](double omega) { return riesz_partial(series, kappa, Cutoff(omega), max_terms); },
      tol, options);
}

}  // namespace kappasum
