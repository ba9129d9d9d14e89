#pragma once

#include "kappasum/core.hpp"
#include "kappasum/limits.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kappasum {

/*!
  Paired data (a_n, lambda_n), n >= 1, for a Riesz mean.

  lambda_n must increase to infinity. Series built with from_pairs() may be
  finite and may repeat a lambda (equal magnitudes map to equal lambdas); the
  order is still nondecreasing. Violations surface as std::domain_error during
  evaluation.
*/
class RieszSeries {
 public:
  using CoefficientFn = std::function<Complex(std::uint64_t)>;
  using LambdaFn = std::function<double(std::uint64_t)>;

  RieszSeries(CoefficientFn coefficient, LambdaFn lambda, std::string name = "series");

  /// Finite series; entries past the end are treated as absent.
  static RieszSeries from_pairs(std::vector<Complex> coefficients, std::vector<double> lambdas,
                                std::string name = "fragment");

  Complex coefficient(std::uint64_t n) const { return coefficient_(n); }
  double lambda(std::uint64_t n) const { return lambda_(n); }
  std::optional<std::uint64_t> length() const noexcept { return length_; }
  bool allows_ties() const noexcept { return allows_ties_; }
  const std::string& name() const noexcept { return name_; }

 private:
  CoefficientFn coefficient_;
  LambdaFn lambda_;
  std::string name_;
  std::optional<std::uint64_t> length_;
  bool allows_ties_ = false;
};

struct Cutoff {
  double omega;

  explicit Cutoff(double value);  // requires a positive finite value
};

/// Sum of (1 - lambda_n/omega)^kappa * a_n over lambda_n < omega.
PartialResult riesz_partial(const RieszSeries& series, double kappa, Cutoff omega,
                            std::uint64_t max_terms = kDefaultTermCap);

SumResult riesz_limit(const RieszSeries& series, double kappa, const OmegaSchedule& schedule,
                      double tol, const LadderOptions& options = {},
                      std::uint64_t max_terms = kDefaultTermCap);

}  // namespace kappasum
