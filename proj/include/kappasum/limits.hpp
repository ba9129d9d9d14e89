#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kappasum {

using Complex = std::complex<double>;

enum class Status { Converged, NotConverged, Divergent, BudgetExceeded };

/// "converged", "not_converged", "divergent", "budget_exceeded".
std::string_view to_string(Status status) noexcept;

/// Value of one weighted partial sum and the number of terms it included.
struct PartialResult {
  Complex value{};
  std::uint64_t n_terms = 0;
};

struct TraceStep {
  double parameter = 0.0;  // epsilon or omega
  Complex partial{};
  std::uint64_t n_terms = 0;
};

struct SumResult {
  Complex value{};
  double error_estimate = 0.0;
  Status status = Status::NotConverged;
  std::vector<TraceStep> trace;
  std::string diagnostic;  // set when the ladder was cut short
};

/// Thresholds eps_k = eps0 * ratio^k for k < max_steps.
struct EpsSchedule {
  double eps0 = 0.1;
  double ratio = 0.5;
  std::size_t max_steps = 30;

  void validate() const;  // std::invalid_argument
  std::vector<double> values() const;
};

/// Cutoffs omega_k = omega0 * growth^k for k < max_steps.
struct OmegaSchedule {
  // Doubling 32/3 never reaches an integer.
  double omega0 = 32.0 / 3.0;
  double growth = 2.0;
  std::size_t max_steps = 30;

  void validate() const;
  std::vector<double> values() const;
};

struct DetectOptions {
  bool accelerate = false;
  double divergence_ceiling = 1e12;
};

struct LimitEstimate {
  Complex value{};
  double error_estimate = 0.0;
  Status status = Status::NotConverged;
};

/*!
  Classifies a trace of partial sums.

  Converged when the last two deltas each satisfy |S_k - S_{k-1}| <=
  tol * (1 + |S_k|). Divergent when the last entry is non-finite or beyond the
  ceiling, or when the final five deltas keep one direction with nondecreasing
  size. Otherwise NotConverged. The error estimate is the last delta, widened
  to cover the Aitken correction when acceleration is on.
*/
LimitEstimate detect_limit(std::span<const Complex> trace, double tol,
                           const DetectOptions& options = {});

/// Aitken delta-squared transform; output has trace.size() - 2 entries.
std::vector<Complex> aitken(std::span<const Complex> trace);

struct LadderOptions {
  bool stop_on_convergence = true;
  bool accelerate = false;
  // Evaluate steps concurrently in batches; results are merged in order.
  bool parallel = false;
};

using PartialFn = std::function<PartialResult(double parameter)>;

/*!
  Evaluates `evaluate` at each parameter in order and classifies the trace.

  A BudgetExceeded from a step ends the ladder there. If at least three steps
  completed, the shortened trace is classified as usual; otherwise the status
  is BudgetExceeded.
*/
SumResult run_ladder(std::span<const double> parameters, const PartialFn& evaluate, double tol,
                     const LadderOptions& options = {});

}  // namespace kappasum
