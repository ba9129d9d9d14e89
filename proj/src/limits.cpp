#include "kappasum/limits.hpp"

#include "kappasum/core.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

namespace kappasum {

std::string_view to_string(Status status) noexcept {
  switch (status) {
    case Status::Converged: return "converged";
    case Status::NotConverged: return "not_converged";
    case Status::Divergent: return "divergent";
    case Status::BudgetExceeded: return "budget_exceeded";
  }
  return "unknown";
}

namespace {

std::vector<double> geometric_ladder(double start, double factor, std::size_t steps) {
  std::vector<double> out;
  out.reserve(steps);
  for (std::size_t k = 0; k < steps; ++k) {
    out.push_back(start * std::pow(factor, static_cast<double>(k)));
  }
  return out;
}

bool finite(const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void EpsSchedule::validate() const {
  if (!(eps0 > 0.0) || !std::isfinite(eps0)) throw std::invalid_argument("eps0 must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("ratio must lie in (0, 1)");
  if (max_steps < 3) throw std::invalid_argument("an epsilon ladder needs at least 3 steps");
  const double last = eps0 * std::pow(ratio, static_cast<double>(max_steps - 1));
  if (!(last > 0.0)) throw std::invalid_argument("epsilon ladder underflows to zero");
}

std::vector<double> EpsSchedule::values() const {
  validate();
  return geometric_ladder(eps0, ratio, max_steps);
}

void OmegaSchedule::validate() const {
  if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw std::invalid_argument("omega0 must be positive");
  if (!(growth > 1.0) || !std::isfinite(growth)) throw std::invalid_argument("growth must exceed 1");
  if (max_steps < 3) throw std::invalid_argument("an omega ladder needs at least 3 steps");
  const double last = omega0 * std::pow(growth, static_cast<double>(max_steps - 1));
  if (!std::isfinite(last)) throw std::invalid_argument("omega ladder overflows");
}

std::vector<double> OmegaSchedule::values() const {
  validate();
  return geometric_ladder(omega0, growth, max_steps);
}

std::vector<Complex> aitken(std::span<const Complex> trace) {
  if (trace.size() < 3) throw std::invalid_argument("aitken needs at least 3 entries");
  std::vector<Complex> out;
  out.reserve(trace.size() - 2);
  for (std::size_t k = 0; k + 2 < trace.size(); ++k) {
    const Complex s0 = trace[k], s1 = trace[k + 1], s2 = trace[k + 2];
    const Complex denominator = s2 - 2.0 * s1 + s0;
    if (std::abs(denominator) < 1e-300) {
      out.push_back(s2);
    } else {
      const Complex step = s2 - s1;
      out.push_back(s2 - step * step / denominator);
    }
  }
  return out;
}

LimitEstimate detect_limit(std::span<const Complex> trace, double tol, const DetectOptions& options) {
  if (trace.size() < 3) throw std::invalid_argument("detect_limit needs at least 3 entries");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");

  const std::size_t n = trace.size();
  const Complex last = trace[n - 1];
  const Complex d1 = last - trace[n - 2];
  const Complex d0 = trace[n - 2] - trace[n - 3];

  LimitEstimate est{last, std::abs(d1), Status::NotConverged};
  if (!finite(last) || std::abs(last) > options.divergence_ceiling) {
    est.status = Status::Divergent;
    return est;
  }

  bool settled = std::abs(d1) <= tol * (1.0 + std::abs(last)) &&
                 std::abs(d0) <= tol * (1.0 + std::abs(trace[n - 2]));
  if (options.accelerate) {
    const Complex accelerated = aitken(trace).back();
    if (finite(accelerated)) {
      const double correction = std::abs(accelerated - last);
      est.value = accelerated;
      est.error_estimate = std::max(est.error_estimate, correction);
      settled = settled && correction <= tol * (1.0 + std::abs(last));
    }
  }
  if (settled) {
    est.status = Status::Converged;
    return est;
  }

  // Five deltas in one direction, none shrinking: the partials run away.
  if (n >= 6) {
    bool growing = true;
    for (std::size_t k = n - 4; k < n && growing; ++k) {
      const Complex prev = trace[k - 1] - trace[k - 2];
      const Complex cur = trace[k] - trace[k - 1];
      growing = std::abs(prev) > 0.0 && std::abs(cur) >= std::abs(prev) &&
                (cur * std::conj(prev)).real() > 0.0;
    }
    if (growing) est.status = Status::Divergent;
  }
  return est;
}

SumResult run_ladder(std::span<const double> parameters, const PartialFn& evaluate, double tol,
                     const LadderOptions& options) {
  if (parameters.size() < 3) throw std::invalid_argument("a ladder needs at least 3 steps");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw std::invalid_argument("tolerance must be positive");

  const DetectOptions detect{options.accelerate};
  SumResult result;
  std::vector<Complex> partials;
  bool budget_hit = false;
  bool stop = false;

  const std::size_t batch =
      options.parallel ? std::clamp<std::size_t>(std::thread::hardware_concurrency(), 2, 8) : 1;

  for (std::size_t begin = 0; begin < parameters.size() && !stop; begin += batch) {
    const std::size_t end = std::min(parameters.size(), begin + batch);
    std::vector<std::future<PartialResult>> pending;
    if (batch > 1) {
      for (std::size_t k = begin; k < end; ++k) {
        pending.push_back(std::async(std::launch::async, evaluate, parameters[k]));
      }
    }
    for (std::size_t k = begin; k < end && !stop; ++k) {
      PartialResult partial;
      try {
        partial = batch > 1 ? pending[k - begin].get() : evaluate(parameters[k]);
      } catch (const BudgetExceeded& e) {
        budget_hit = true;
        result.diagnostic = e.what();
        stop = true;
        break;
      }
      result.trace.push_back({parameters[k], partial.value, partial.n_terms});
      partials.push_back(partial.value);

      if (!finite(partial.value) || std::abs(partial.value) > detect.divergence_ceiling) {
        stop = true;
      } else if (options.stop_on_convergence && partials.size() >= 3 &&
                 detect_limit(partials, tol, detect).status == Status::Converged) {
        stop = true;
      }
    }
  }

  if (partials.size() < 3) {
    result.value = partials.empty() ? Complex{} : partials.back();
    result.error_estimate = std::numeric_limits<double>::infinity();
    result.status = budget_hit ? Status::BudgetExceeded : Status::Divergent;
    return result;
  }

  const LimitEstimate est = detect_limit(partials, tol, detect);
  result.value = est.value;
  result.error_estimate = est.error_estimate;
  result.status = est.status;
  return result;
}

}  // namespace kappasum
