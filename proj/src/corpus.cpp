#include "kappasum/corpus.hpp"

#include "kappasum/greedy.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace kappasum {

namespace {

constexpr std::uint64_t kOracleTerms = 1'000'000;
constexpr int kAveragingLevels = 8;

double parse_real(std::string_view text, std::string_view what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw BadParameter(std::string(what) + ": cannot parse '" + std::string(text) + "' as a number");
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double alternating_sign(std::uint64_t n) { return (n % 2 == 1) ? 1.0 : -1.0; }

// Validated parameter accessors.
double eta_exponent(const SeriesSpec& spec) {
  const double s = spec.params.at(0);
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw BadParameter("eta:s needs s > 0 (magnitudes must tend to 0), got " + spec.to_string());
  }
  return s;
}

double geom_ratio(const SeriesSpec& spec) {
  const double r = spec.params.at(0);
  if (!(r > 0.0 && r < 1.0)) throw BadParameter("geom:r needs 0 < r < 1, got " + spec.to_string());
  return r;
}

long double averaged_alternating_sum(long double s) {
  // Keep the last kAveragingLevels partials and average neighbours repeatedly.
  std::vector<long double> tail;
  long double partial = 0.0L;
  for (std::uint64_t n = 1; n <= kOracleTerms; ++n) {
    const long double term = ((n % 2 == 1) ? 1.0L : -1.0L) * std::pow(static_cast<long double>(n), -s);
    partial += term;
    if (n + kAveragingLevels > kOracleTerms) tail.push_back(partial);
  }
  while (tail.size() > 1) {
    for (std::size_t i = 0; i + 1 < tail.size(); ++i) tail[i] = 0.5L * (tail[i] + tail[i + 1]);
    tail.pop_back();
  }
  return tail.front();
}

}  // namespace

// ---------------------------------------------------------------- SeriesSpec

SeriesSpec SeriesSpec::parse(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

  SeriesSpec spec;
  spec.name = std::string(head);
  if (head == "alt-harmonic" || head == "grandi") {
    if (colon != std::string_view::npos) throw BadParameter(spec.name + " takes no parameters");
  } else if (head == "eta" || head == "geom") {
    if (colon == std::string_view::npos) throw BadParameter(spec.name + " needs a parameter, e.g. " + spec.name + ":0.5");
    spec.params.push_back(parse_real(trim(rest), spec.name));
  } else if (head == "finite") {
    if (rest.empty()) throw BadParameter("finite needs a path, e.g. finite:terms.csv");
    spec.path = std::string(rest);
  } else if (head == "product") {
    const auto comma = rest.find(',');
    if (comma == std::string_view::npos) throw BadParameter("product needs two specs: product:<left>,<right>");
    spec.factors.push_back(parse(rest.substr(0, comma)));
    spec.factors.push_back(parse(rest.substr(comma + 1)));
  } else {
    throw UnknownSeries("unknown series '" + std::string(text) + "'");
  }
  return spec;
}

std::string SeriesSpec::to_string() const {
  if (name == "finite") return "finite:" + path;
  if (name == "product") return "product:" + factors.at(0).to_string() + "," + factors.at(1).to_string();
  std::string out = name;
  for (double p : params) {
    std::ostringstream os;
    os << p;
    out += ":" + os.str();
  }
  return out;
}

// ---------------------------------------------------------------- references

RieszSeries::CoefficientFn reference_coefficients(const SeriesSpec& spec) {
  if (spec.name == "alt-harmonic") {
    return [](std::uint64_t n) { return Complex(alternating_sign(n) / static_cast<double>(n)); };
  }
  if (spec.name == "eta") {
    const double s = eta_exponent(spec);
    return [s](std::uint64_t n) { return Complex(alternating_sign(n) * std::pow(static_cast<double>(n), -s)); };
  }
  if (spec.name == "geom") {
    const double r = geom_ratio(spec);
    return [r](std::uint64_t n) { return Complex(std::pow(r, static_cast<double>(n))); };
  }
  if (spec.name == "grandi") {
    return [](std::uint64_t n) { return Complex(alternating_sign(n)); };
  }
  throw BadParameter(spec.to_string() + " is not a sequence");
}

Source make_reference(const SeriesSpec& spec, std::uint64_t max_terms) {
  if (spec.name == "grandi") {
    throw BadParameter("grandi has constant magnitudes and no finite threshold sets");
  }
  if (spec.name == "finite") return finite_array(load_finite_csv(spec.path), "finite:" + spec.path);
  if (spec.name == "product") {
    return product_array(make_reference(spec.factors.at(0), max_terms),
                         make_reference(spec.factors.at(1), max_terms), max_terms);
  }
  auto coefficients = reference_coefficients(spec);
  // Cheap check of the nonincreasing-magnitude precondition at the head.
  double previous = std::abs(coefficients(1));
  for (std::uint64_t n = 2; n <= 64; ++n) {
    const double m = std::abs(coefficients(n));
    if (m > previous) throw BadParameter(spec.to_string() + ": magnitudes increase at n = " + std::to_string(n));
    previous = m;
  }
  return sequence_array(std::move(coefficients), spec.to_string(), max_terms);
}

Complex oracle_value(const SeriesSpec& spec) {
  if (spec.name == "alt-harmonic") return Complex(static_cast<double>(averaged_alternating_sum(1.0L)));
  if (spec.name == "eta") {
    return Complex(static_cast<double>(averaged_alternating_sum(static_cast<long double>(eta_exponent(spec)))));
  }
  if (spec.name == "geom") {
    const long double r = geom_ratio(spec);
    long double sum = 0.0L;
    long double term = r;
    while (term > 1e-30L * sum || sum == 0.0L) {
      sum += term;
      term *= r;
    }
    return Complex(static_cast<double>(sum));
  }
  if (spec.name == "finite") {
    long double re = 0.0L, im = 0.0L;
    for (const Term& t : load_finite_csv(spec.path)) {
      re += t.value().real();
      im += t.value().imag();
    }
    return {static_cast<double>(re), static_cast<double>(im)};
  }
  if (spec.name == "product") return oracle_value(spec.factors.at(0)) * oracle_value(spec.factors.at(1));
  throw BadParameter(spec.to_string() + " has no ordinary sum");
}

// ---------------------------------------------------------------- CSV

std::vector<Term> read_finite_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("finite CSV: empty input");
  const auto header = split(line, ',');
  if (header.size() != 3 || header[0] != "index" || header[1] != "re" || header[2] != "im") {
    throw std::invalid_argument("finite CSV: header must be 'index,re,im'");
  }

  std::vector<Term> terms;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    const std::string where = "finite CSV line " + std::to_string(line_no);
    if (fields.size() != 3) throw std::invalid_argument(where + ": expected 3 fields");
    std::uint64_t index = 0;
    const auto f = fields[0];
    const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), index);
    if (ec != std::errc{} || ptr != f.data() + f.size() || f.empty()) {
      throw std::invalid_argument(where + ": index must be a nonnegative integer");
    }
    const double re = parse_real(fields[1], where);
    const double im = parse_real(fields[2], where);
    terms.emplace_back(Index(index), Complex(re, im));
  }
  return terms;
}

std::vector<Term> load_finite_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw BadParameter("cannot open '" + path + "'");
  return read_finite_csv(in);
}

void write_finite_csv(std::ostream& out, std::span<const Term> terms) {
  out << "index,re,im\n";
  const auto old = out.precision(17);
  for (const Term& t : terms) {
    out << t.index().leaf() << ',' << t.value().real() << ',' << t.value().imag() << '\n';
  }
  out.precision(old);
}

// ---------------------------------------------------------------- harnesses

namespace {

struct SumJob {
  Source source;
  double kappa;
};

std::vector<SumResult> run_sums(const std::vector<SumJob>& jobs, double tol, const HarnessOptions& options) {
  const LadderOptions ladder{};
  auto run = [&](const SumJob& job) {
    return kappa_sum(*job.source, Kappa(job.kappa), options.schedule, tol, ladder);
  };
  std::vector<SumResult> out;
  if (options.parallel) {
    std::vector<std::future<SumResult>> pending;
    for (const auto& job : jobs) pending.push_back(std::async(std::launch::async, run, std::cref(job)));
    for (auto& f : pending) out.push_back(f.get());
  } else {
    for (const auto& job : jobs) out.push_back(run(job));
  }
  return out;
}

void note_unconverged(std::vector<std::string>& diagnostics, std::string_view label, double kappa,
                      const SumResult& r) {
  if (r.status == Status::Converged) return;
  std::ostringstream os;
  os << std::setprecision(17) << label << " (kappa " << kappa << ") ended " << to_string(r.status)
     << " after " << r.trace.size() << " steps, last delta " << r.error_estimate;
  if (!r.diagnostic.empty()) os << ": " << r.diagnostic;
  diagnostics.push_back(os.str());
}

double detect_tol(double tol, const HarnessOptions& options) {
  if (!(tol > 0.0) || !std::isfinite(tol)) throw std::invalid_argument("tolerance must be positive");
  if (!(options.detect_ratio > 0.0)) throw std::invalid_argument("detect_ratio must be positive");
  return tol * options.detect_ratio;
}

}  // namespace

Theorem2Report theorem2_harness(const SeriesSpec& left, double kappa1, const SeriesSpec& right, double kappa2,
                                double tol, const HarnessOptions& options) {
  (void)Kappa{kappa1};
  (void)Kappa{kappa2};
  const double inner_tol = detect_tol(tol, options);

  Theorem2Report report;
  report.left = left.to_string();
  report.right = right.to_string();
  report.kappa1 = kappa1;
  report.kappa2 = kappa2;
  report.kappa_product = kappa1 + kappa2 + 1.0;
  report.tol = tol;

  const Source a = make_reference(left, options.max_terms);
  const Source b = make_reference(right, options.max_terms);
  const Source ab = product_array(a, b, options.max_terms);
  auto sums = run_sums({{a, kappa1}, {b, kappa2}, {ab, report.kappa_product}}, inner_tol, options);
  report.left_sum = std::move(sums[0]);
  report.right_sum = std::move(sums[1]);
  report.product_sum = std::move(sums[2]);

  note_unconverged(report.diagnostics, "left sum", kappa1, report.left_sum);
  note_unconverged(report.diagnostics, "right sum", kappa2, report.right_sum);
  note_unconverged(report.diagnostics, "product sum", report.kappa_product, report.product_sum);

  report.expected = report.left_sum.value * report.right_sum.value;
  report.discrepancy = std::abs(report.product_sum.value - report.expected);
  const bool close = report.discrepancy <= tol * (1.0 + std::abs(report.expected));
  if (!close) {
    std::ostringstream os;
    os << std::setprecision(17) << "|P - AB| = " << report.discrepancy << " exceeds "
       << tol * (1.0 + std::abs(report.expected));
    report.diagnostics.push_back(os.str());
  }
  report.pass = report.diagnostics.empty();
  return report;
}

ConsistencyReport consistency_harness(const SeriesSpec& spec, double kappa_low, double kappa_high, double tol,
                                      const HarnessOptions& options) {
  (void)Kappa{kappa_low};
  (void)Kappa{kappa_high};
  if (!(kappa_low < kappa_high)) throw std::invalid_argument("kappa_low must be below kappa_high");
  const double inner_tol = detect_tol(tol, options);

  ConsistencyReport report;
  report.series = spec.to_string();
  report.kappa_low = kappa_low;
  report.kappa_high = kappa_high;
  report.tol = tol;

  const Source source = make_reference(spec, options.max_terms);
  auto sums = run_sums({{source, kappa_low}, {source, kappa_high}}, inner_tol, options);
  report.low_sum = std::move(sums[0]);
  report.high_sum = std::move(sums[1]);

  note_unconverged(report.diagnostics, "low sum", kappa_low, report.low_sum);
  note_unconverged(report.diagnostics, "high sum", kappa_high, report.high_sum);

  report.discrepancy = std::abs(report.high_sum.value - report.low_sum.value);
  const double allowed = tol * (1.0 + std::abs(report.low_sum.value));
  if (report.discrepancy > allowed) {
    std::ostringstream os;
    os << std::setprecision(17) << "|high - low| = " << report.discrepancy << " exceeds " << allowed;
    report.diagnostics.push_back(os.str());
  }
  report.pass = report.diagnostics.empty();
  return report;
}

}  // namespace kappasum
