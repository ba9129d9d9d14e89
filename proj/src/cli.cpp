#include "kappasum/cli.hpp"

#include "kappasum/greedy.hpp"
#include "kappasum/riesz.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <memory>
#include <ostream>
#include <sstream>

namespace kappasum::cli {

int exit_code(Status status) noexcept {
  switch (status) {
    case Status::Converged: return kExitConverged;
    case Status::NotConverged:
    case Status::Divergent: return kExitNumeric;
    case Status::BudgetExceeded: return kExitBudget;
  }
  return kExitUsage;
}

namespace {

std::string number(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (const char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

std::string complex_json(const Complex& z) {
  return "{\"re\":" + number(z.real()) + ",\"im\":" + number(z.imag()) + "}";
}

// Compact form used inside verification reports.
std::string sum_summary_json(const SumResult& r) {
  std::string out = "{\"status\":" + json_string(to_string(r.status)) + ",\"value\":" + complex_json(r.value) +
                    ",\"error_estimate\":" + number(r.error_estimate) +
                    ",\"n_steps\":" + std::to_string(r.trace.size());
  if (!r.trace.empty()) {
    out += ",\"final_parameter\":" + number(r.trace.back().parameter) +
           ",\"final_n_terms\":" + std::to_string(r.trace.back().n_terms);
  }
  return out + "}";
}

std::string diagnostics_json(const std::vector<std::string>& diagnostics) {
  std::string out = "[";
  for (std::size_t i = 0; i < diagnostics.size(); ++i) {
    if (i) out += ",";
    out += json_string(diagnostics[i]);
  }
  return out + "]";
}

}  // namespace

std::string sum_json(const SumResult& result) {
  std::string out = "{\"status\":" + json_string(to_string(result.status)) + ",\"value\":" +
                    complex_json(result.value) + ",\"error_estimate\":" + number(result.error_estimate) +
                    ",\"steps\":[";
  for (std::size_t k = 0; k < result.trace.size(); ++k) {
    const TraceStep& s = result.trace[k];
    if (k) out += ",";
    out += "{\"parameter\":" + number(s.parameter) + ",\"n_terms\":" + std::to_string(s.n_terms) +
           ",\"partial\":" + complex_json(s.partial) + ",\"delta\":" +
           (k == 0 ? std::string("null") : number(std::abs(s.partial - result.trace[k - 1].partial))) + "}";
  }
  return out + "]}";
}

std::string steps_csv(const SumResult& result, std::string_view parameter_name) {
  std::string out = "step," + std::string(parameter_name) + ",n_terms,partial_re,partial_im,delta\n";
  for (std::size_t k = 0; k < result.trace.size(); ++k) {
    const TraceStep& s = result.trace[k];
    out += std::to_string(k) + "," + number(s.parameter) + "," + std::to_string(s.n_terms) + "," +
           number(s.partial.real()) + "," + number(s.partial.imag()) + "," +
           (k == 0 ? std::string() : number(std::abs(s.partial - result.trace[k - 1].partial))) + "\n";
  }
  return out;
}

std::string report_json(const Theorem2Report& r) {
  return "{\"theorem\":\"product\",\"pass\":" + std::string(r.pass ? "true" : "false") +
         ",\"left\":" + json_string(r.left) + ",\"right\":" + json_string(r.right) + ",\"kappa1\":" + number(r.kappa1) +
         ",\"kappa2\":" + number(r.kappa2) + ",\"kappa_product\":" + number(r.kappa_product) +
         ",\"tol\":" + number(r.tol) + ",\"left_sum\":" + sum_summary_json(r.left_sum) +
         ",\"right_sum\":" + sum_summary_json(r.right_sum) + ",\"product_sum\":" + sum_summary_json(r.product_sum) +
         ",\"expected\":" + complex_json(r.expected) + ",\"discrepancy\":" + number(r.discrepancy) +
         ",\"diagnostics\":" + diagnostics_json(r.diagnostics) + "}";
}

std::string report_json(const ConsistencyReport& r) {
  return "{\"theorem\":\"consistency\",\"pass\":" + std::string(r.pass ? "true" : "false") +
         ",\"series\":" + json_string(r.series) + ",\"kappa_low\":" + number(r.kappa_low) +
         ",\"kappa_high\":" + number(r.kappa_high) + ",\"tol\":" + number(r.tol) +
         ",\"low_sum\":" + sum_summary_json(r.low_sum) + ",\"high_sum\":" + sum_summary_json(r.high_sum) +
         ",\"discrepancy\":" + number(r.discrepancy) + ",\"diagnostics\":" + diagnostics_json(r.diagnostics) + "}";
}

namespace {

struct LadderFlags {
  std::size_t steps = 30;
  double tol = 1e-6;
  std::string format = "json";
  bool accelerate = false;
  bool parallel = false;
  bool full_ladder = false;
  std::uint64_t max_terms = kDefaultTermCap;

  LadderOptions options() const { return {!full_ladder, accelerate, parallel}; }
};

const auto kOpenUnitInterval = CLI::Validator(
    [](std::string& s) -> std::string {
      const double r = std::stod(s);
      return (r > 0.0 && r < 1.0) ? std::string() : "value must lie strictly between 0 and 1";
    },
    "(0,1)");

const auto kAtLeastThree = CLI::Range(std::size_t{3}, std::size_t{1} << 20);

void add_common_flags(CLI::App* cmd, LadderFlags& f) {
  cmd->add_option("--steps", f.steps, "Maximum ladder steps")->check(kAtLeastThree)->capture_default_str();
  cmd->add_option("--tol", f.tol, "Convergence tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  cmd->add_option("--max-terms", f.max_terms, "Term cap per threshold query")->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_flag("--accelerate", f.accelerate, "Report the Aitken-accelerated value");
  cmd->add_flag("--parallel", f.parallel, "Evaluate ladder steps concurrently");
  cmd->add_flag("--full-ladder", f.full_ladder, "Evaluate every step instead of stopping at convergence");
}

int emit(const SumResult& result, const LadderFlags& f, std::string_view parameter_name, std::ostream& out,
         std::ostream& err) {
  if (f.format == "csv") {
    out << steps_csv(result, parameter_name);
  } else {
    out << sum_json(result) << "\n";
  }
  if (!result.diagnostic.empty()) err << "note: " << result.diagnostic << "\n";
  return exit_code(result.status);
}

RieszSeries::LambdaFn make_lambdas(const std::string& kind, const SeriesSpec& spec) {
  if (kind == "linear") return [](std::uint64_t n) { return static_cast<double>(n); };
  if (kind == "log") return [](std::uint64_t n) { return std::log(static_cast<double>(n) + 1.0); };
  if (spec.name == "grandi") throw BadParameter("reciprocal-magnitude lambdas need magnitudes tending to 0");
  auto coefficients = reference_coefficients(spec);
  return [coefficients](std::uint64_t n) { return 1.0 / std::abs(coefficients(n)); };
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Greedy kappa-sums and Riesz means of numeric arrays", "kappasum"};
  app.require_subcommand(1);

  // sum
  LadderFlags sum_flags;
  std::string sum_series;
  double sum_kappa = 0.0, sum_eps0 = 0.1, sum_ratio = 0.5;
  auto* sum = app.add_subcommand("sum", "Greedy kappa-sum of a reference array");
  sum->add_option("--series", sum_series, "Series spec")->required();
  sum->add_option("--kappa", sum_kappa, "Order kappa >= 0")->required()->check(CLI::NonNegativeNumber);
  sum->add_option("--eps0", sum_eps0, "First threshold")->check(CLI::PositiveNumber)->capture_default_str();
  sum->add_option("--ratio", sum_ratio, "Threshold ratio")->check(kOpenUnitInterval)->capture_default_str();
  add_common_flags(sum, sum_flags);

  // product
  LadderFlags prod_flags;
  std::string prod_left, prod_right;
  double prod_kappa = 0.0, prod_eps0 = 0.1, prod_ratio = 0.5;
  auto* product = app.add_subcommand("product", "Greedy kappa-sum of the product of two arrays");
  product->add_option("--left", prod_left, "Left series spec")->required();
  product->add_option("--right", prod_right, "Right series spec")->required();
  product->add_option("--kappa", prod_kappa, "Order kappa >= 0")->required()->check(CLI::NonNegativeNumber);
  product->add_option("--eps0", prod_eps0, "First threshold")->check(CLI::PositiveNumber)->capture_default_str();
  product->add_option("--ratio", prod_ratio, "Threshold ratio")->check(kOpenUnitInterval)->capture_default_str();
  add_common_flags(product, prod_flags);

  // riesz
  LadderFlags riesz_flags;
  std::string riesz_series, riesz_lambda = "linear";
  double riesz_kappa = 0.0;
  OmegaSchedule omega_defaults;
  double riesz_omega0 = omega_defaults.omega0, riesz_growth = omega_defaults.growth;
  auto* riesz = app.add_subcommand("riesz", "Riesz mean of a sequence over an omega ladder");
  riesz->add_option("--series", riesz_series, "Sequence spec (grandi allowed)")->required();
  riesz->add_option("--lambda", riesz_lambda, "Lambda sequence")
      ->check(CLI::IsMember({"linear", "log", "reciprocal-magnitude"}))
      ->capture_default_str();
  riesz->add_option("--kappa", riesz_kappa, "Order kappa >= 0")->required()->check(CLI::NonNegativeNumber);
  riesz->add_option("--omega0", riesz_omega0, "First cutoff")->check(CLI::PositiveNumber)->capture_default_str();
  riesz->add_option("--growth", riesz_growth, "Cutoff growth factor (> 1)")
      ->check(CLI::Range(1.0, 1e300))
      ->capture_default_str();
  add_common_flags(riesz, riesz_flags);

  // verify
  auto* verify = app.add_subcommand("verify", "Run a theorem harness");
  verify->require_subcommand(1);
  HarnessOptions harness;
  double verify_tol = 1e-6;
  std::size_t verify_steps = harness.schedule.max_steps;
  double verify_eps0 = harness.schedule.eps0, verify_ratio = harness.schedule.ratio;
  auto add_harness_flags = [&](CLI::App* cmd) {
    cmd->add_option("--tol", verify_tol, "Agreement tolerance")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--eps0", verify_eps0, "First threshold")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--ratio", verify_ratio, "Threshold ratio")->check(kOpenUnitInterval)->capture_default_str();
    cmd->add_option("--steps", verify_steps, "Maximum ladder steps")->check(kAtLeastThree)->capture_default_str();
    cmd->add_option("--max-terms", harness.max_terms, "Term cap per threshold query")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--detect-ratio", harness.detect_ratio, "Detection tolerance as a fraction of --tol")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_flag("--parallel", harness.parallel, "Run the constituent sums concurrently");
  };

  std::string v_series;
  double v_kappa_low = 0.0, v_kappa_high = 1.0;
  auto* consistency = verify->add_subcommand("consistency", "kappa_low-sum and kappa_high-sum agree");
  consistency->add_option("--series", v_series, "Series spec (product:<a>,<b> allowed)")->required();
  consistency->add_option("--kappa-low", v_kappa_low, "Lower order")->required()->check(CLI::NonNegativeNumber);
  consistency->add_option("--kappa-high", v_kappa_high, "Higher order")->required()->check(CLI::NonNegativeNumber);
  add_harness_flags(consistency);

  std::string v_left, v_right;
  double v_kappa1 = 0.0, v_kappa2 = 0.0;
  auto* vproduct = verify->add_subcommand("product", "Product sum equals the product of sums");
  vproduct->add_option("--left", v_left, "Left series spec")->required();
  vproduct->add_option("--right", v_right, "Right series spec")->required();
  vproduct->add_option("--kappa1", v_kappa1, "Order of the left sum")->required()->check(CLI::NonNegativeNumber);
  vproduct->add_option("--kappa2", v_kappa2, "Order of the right sum")->required()->check(CLI::NonNegativeNumber);
  add_harness_flags(vproduct);

  std::vector<const char*> argv{"kappasum"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitConverged : kExitUsage;
  }

  try {
    if (*sum) {
      const Source source = make_reference(SeriesSpec::parse(sum_series), sum_flags.max_terms);
      const EpsSchedule schedule{sum_eps0, sum_ratio, sum_flags.steps};
      return emit(kappa_sum(*source, Kappa(sum_kappa), schedule, sum_flags.tol, sum_flags.options()), sum_flags,
                  "epsilon", out, err);
    }
    if (*product) {
      const Source source =
          product_array(make_reference(SeriesSpec::parse(prod_left), prod_flags.max_terms),
                        make_reference(SeriesSpec::parse(prod_right), prod_flags.max_terms), prod_flags.max_terms);
      const EpsSchedule schedule{prod_eps0, prod_ratio, prod_flags.steps};
      return emit(kappa_sum(*source, Kappa(prod_kappa), schedule, prod_flags.tol, prod_flags.options()),
                  prod_flags, "epsilon", out, err);
    }
    if (*riesz) {
      const SeriesSpec spec = SeriesSpec::parse(riesz_series);
      if (!(riesz_growth > 1.0)) throw std::invalid_argument("--growth must exceed 1");
      const RieszSeries series(reference_coefficients(spec), make_lambdas(riesz_lambda, spec),
                               spec.to_string());
      const OmegaSchedule schedule{riesz_omega0, riesz_growth, riesz_flags.steps};
      return emit(riesz_limit(series, riesz_kappa, schedule, riesz_flags.tol, riesz_flags.options(),
                              riesz_flags.max_terms),
                  riesz_flags, "omega", out, err);
    }
    harness.schedule = EpsSchedule{verify_eps0, verify_ratio, verify_steps};
    if (*consistency) {
      const auto report =
          consistency_harness(SeriesSpec::parse(v_series), v_kappa_low, v_kappa_high, verify_tol, harness);
      out << report_json(report) << "\n";
      return report.pass ? kExitConverged : kExitNumeric;
    }
    const auto report = theorem2_harness(SeriesSpec::parse(v_left), v_kappa1, SeriesSpec::parse(v_right),
                                         v_kappa2, verify_tol, harness);
    out << report_json(report) << "\n";
    return report.pass ? kExitConverged : kExitNumeric;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace kappasum::cli
