#pragma once

#include "kappasum/corpus.hpp"
#include "kappasum/limits.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace kappasum::cli {

// Process exit codes.
inline constexpr int kExitConverged = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;  // not converged, divergent, or failed verification
inline constexpr int kExitBudget = 3;

int exit_code(Status status) noexcept;

/// OutputRecord: status, value {re, im}, error_estimate, steps[]. Numbers use
/// 17 significant digits; non-finite numbers and the first delta are null.
std::string sum_json(const SumResult& result);

/// One row per step: step,<parameter_name>,n_terms,partial_re,partial_im,delta.
std::string steps_csv(const SumResult& result, std::string_view parameter_name);

std::string report_json(const Theorem2Report& report);
std::string report_json(const ConsistencyReport& report);

/// Runs the command line (without the program name). Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kappasum::cli
