#pragma once

#include "kappasum/core.hpp"
#include "kappasum/limits.hpp"
#include "kappasum/riesz.hpp"

#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kappasum {

class UnknownSeries : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BadParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/*!
  Names a reference array.

  Accepted forms:
    alt-harmonic          a_n = (-1)^(n+1) / n
    eta:<s>               a_n = (-1)^(n+1) n^(-s), s > 0
    geom:<r>              a_n = r^n, 0 < r < 1
    grandi                a_n = (-1)^(n+1), Riesz coefficients only
    finite:<path>         CSV file with header index,re,im
    product:<left>,<right>  product array; <left> may not contain a comma
*/
struct SeriesSpec {
  std::string name;
  std::vector<double> params;
  std::string path;
  std::vector<SeriesSpec> factors;

  static SeriesSpec parse(std::string_view text);  // UnknownSeries, BadParameter
  std::string to_string() const;
};

Source make_reference(const SeriesSpec& spec, std::uint64_t max_terms = kDefaultTermCap);

/// Coefficients a_n of a sequence spec, for use with a RieszSeries.
RieszSeries::CoefficientFn reference_coefficients(const SeriesSpec& spec);

/*!
  Ordinary sum of a convergent spec, computed in long double from partial sums
  with repeated averaging of consecutive partials for alternating series. It
  shares no code with the summation methods under test. Products return the
  product of the factor oracles.
*/
Complex oracle_value(const SeriesSpec& spec);

std::vector<Term> read_finite_csv(std::istream& in);
std::vector<Term> load_finite_csv(const std::string& path);
void write_finite_csv(std::ostream& out, std::span<const Term> terms);

struct HarnessOptions {
  EpsSchedule schedule{};
  // Constituent sums are detected at detect_ratio * tol.
  double detect_ratio = 0.3;
  std::uint64_t max_terms = kDefaultTermCap;
  bool parallel = false;
};

struct Theorem2Report {
  bool pass = false;
  std::string left;
  std::string right;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double kappa_product = 0.0;
  double tol = 0.0;
  SumResult left_sum;
  SumResult right_sum;
  SumResult product_sum;
  Complex expected{};  // left_sum.value * right_sum.value
  double discrepancy = 0.0;
  std::vector<std::string> diagnostics;
};

/// Checks that the (k1+k2+1)-sum of the product equals the product of the
/// k1- and k2-sums, within tol * (1 + |AB|).
Theorem2Report theorem2_harness(const SeriesSpec& left, double kappa1, const SeriesSpec& right,
                                double kappa2, double tol, const HarnessOptions& options = {});

struct ConsistencyReport {
  bool pass = false;
  std::string series;
  double kappa_low = 0.0;
  double kappa_high = 0.0;
  double tol = 0.0;
  SumResult low_sum;
  SumResult high_sum;
  double discrepancy = 0.0;
  std::vector<std::string> diagnostics;
};

/// Checks that a converging kappa_low-sum is matched by the kappa_high-sum.
ConsistencyReport consistency_harness(const SeriesSpec& spec, double kappa_low, double kappa_high,
                                      double tol, const HarnessOptions& options = {});

}  // namespace kappasum
