#include "doctest.h"

#include "kappasum/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace kappasum;

namespace {

RieszSeries ones() {
  return RieszSeries([](std::uint64_t) { return Complex(1.0); }, [](std::uint64_t n) { return double(n); },
                     "ones");
}

RieszSeries grandi() {
  return RieszSeries([](std::uint64_t n) { return Complex(n % 2 == 1 ? 1.0 : -1.0); },
                     [](std::uint64_t n) { return double(n); }, "grandi");
}

RieszSeries halves() {
  return RieszSeries([](std::uint64_t n) { return Complex(std::ldexp(1.0, -int(n))); },
                     [](std::uint64_t n) { return double(n); }, "halves");
}

// Direct evaluation of the weighted sum in long double.
std::complex<long double> direct(const RieszSeries& s, double kappa, double omega) {
  std::complex<long double> sum = 0;
  for (std::uint64_t n = 1; s.lambda(n) < omega; ++n) {
    const long double w = std::pow(1.0L - (long double)s.lambda(n) / omega, (long double)kappa);
    sum += std::complex<long double>(s.coefficient(n)) * w;
  }
  return sum;
}

}  // namespace

TEST_CASE("riesz_partial examples") {
  const auto a = riesz_partial(ones(), 1.0, Cutoff(3.0));
  CHECK(a.value.real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.n_terms == 2);

  const auto b = riesz_partial(ones(), 0.0, Cutoff(3.5));
  CHECK(b.value == Complex(3.0));
  CHECK(b.n_terms == 3);

  const auto c = riesz_partial(grandi(), 1.0, Cutoff(4.0));
  CHECK(c.value.real() == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(c.n_terms == 3);
}

TEST_CASE("strict cutoff") {
  CHECK(riesz_partial(ones(), 0.0, Cutoff(3.0)).value == Complex(2.0));
  CHECK(riesz_partial(ones(), 0.0, Cutoff(3.0)).n_terms == 2);
  CHECK(riesz_partial(ones(), 0.0, Cutoff(1.0)).n_terms == 0);
}

TEST_CASE("argument validation") {
  CHECK_THROWS_AS(Cutoff(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Cutoff(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(Cutoff{INFINITY}, std::invalid_argument);
  CHECK_THROWS_AS(riesz_partial(ones(), -0.5, Cutoff(3.0)), std::invalid_argument);

  const RieszSeries flat([](std::uint64_t) { return Complex(1.0); }, [](std::uint64_t n) { return n < 3 ? double(n) : 2.0; });
  CHECK_THROWS_AS(riesz_partial(flat, 1.0, Cutoff(10.0)), std::domain_error);
  const RieszSeries zero([](std::uint64_t) { return Complex(1.0); }, [](std::uint64_t n) { return double(n) - 1.0; });
  CHECK_THROWS_AS(riesz_partial(zero, 1.0, Cutoff(10.0)), std::domain_error);

  CHECK_THROWS_AS(riesz_partial(ones(), 1.0, Cutoff(1e6), 1000), BudgetExceeded);
}

TEST_CASE("finite series from pairs") {
  const auto s = RieszSeries::from_pairs({1.0, -2.0, 4.0}, {0.5, 0.5, 2.0});
  CHECK(s.allows_ties());
  CHECK(s.length() == 3u);
  CHECK(riesz_partial(s, 0.0, Cutoff(1.0)).value == Complex(-1.0));
  CHECK(riesz_partial(s, 0.0, Cutoff(100.0)).value == Complex(3.0));
  CHECK(riesz_partial(s, 0.0, Cutoff(100.0)).n_terms == 3);
  CHECK_THROWS_AS(RieszSeries::from_pairs({1.0}, {1.0, 2.0}), std::invalid_argument);
  const auto unsorted = RieszSeries::from_pairs({1.0, 1.0}, {2.0, 1.0});
  CHECK_THROWS_AS(riesz_partial(unsorted, 1.0, Cutoff(5.0)), std::domain_error);
}

TEST_CASE("riesz_limit") {
  const auto h = riesz_limit(halves(), 1.0, OmegaSchedule{}, 1e-6);
  CHECK(h.status == Status::Converged);
  CHECK(std::abs(h.value - 1.0) < 1e-5);

  OmegaSchedule to_1e5{32.0 / 3.0, 2.0, 14};
  const auto g1 = riesz_limit(grandi(), 1.0, to_1e5, 1e-3);
  CHECK(g1.status == Status::Converged);
  CHECK(std::abs(g1.value - 0.5) < 1e-3);
  LadderOptions full;
  full.stop_on_convergence = false;
  const auto g0 = riesz_limit(grandi(), 0.0, to_1e5, 1e-3, full);
  CHECK(g0.status == Status::NotConverged);

  const auto d = riesz_limit(ones(), 1.0, OmegaSchedule{}, 1e-6);
  CHECK(d.status == Status::Divergent);
}

TEST_CASE("riesz_limit on a lattice-aligned ladder") {
  // With omega = 10 * 2^k every cutoff is an integer, the term at lambda = omega
  // is excluded, and the kappa = 1 mean of 2^-n carries an error of 2/omega.
  const int steps = 15;
  const auto r = riesz_limit(halves(), 1.0, OmegaSchedule{10.0, 2.0, std::size_t(steps)}, 1e-8);
  CHECK(r.status == Status::NotConverged);
  REQUIRE(r.trace.size() == std::size_t(steps));
  for (const TraceStep& step : r.trace) {
    const double omega = step.parameter;
    const double n = omega - 1.0;
    const double closed = 1.0 - std::pow(2.0, -n) - (2.0 - (n + 2.0) * std::pow(2.0, -n)) / omega;
    CHECK(step.partial.real() == doctest::Approx(closed).epsilon(1e-14));
  }
}

TEST_CASE("property: weights lie in [0, 1) and approach 1") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const double kappa = std::uniform_real_distribution<double>(0.0, 4.0)(rng);
    const double omega = std::uniform_real_distribution<double>(1.5, 200.0)(rng);
    const std::uint64_t n = 1 + rng() % std::uint64_t(omega - 0.5);
    if (double(n) >= omega) continue;
    // A single-entry series isolates the weight of entry n.
    const RieszSeries single([n](std::uint64_t m) { return Complex(m == n ? 1.0 : 0.0); },
                             [](std::uint64_t m) { return double(m); });
    const double w = riesz_partial(single, kappa, Cutoff(omega)).value.real();
    CHECK(w >= 0.0);
    CHECK(w < 1.0);
    const double far = riesz_partial(single, kappa, Cutoff(omega * 1e3)).value.real();
    CHECK(far > w - 1e-15);
    CHECK(far >= 1.0 - std::max(kappa, 1.0) * double(n) / (omega * 1e3) - 1e-12);
  }
}

TEST_CASE("property: kappa = 0 is the plain partial sum") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 100; ++trial) {
    const double omega = std::uniform_real_distribution<double>(0.5, 500.0)(rng);
    const auto p = riesz_partial(grandi(), 0.0, Cutoff(omega));
    const std::uint64_t count = omega > 1.0 ? std::uint64_t(std::ceil(omega)) - 1 : 0;
    CHECK(p.n_terms == count);
    CHECK(p.value == Complex(double(count % 2)));
  }
}

TEST_CASE("property: partials agree with direct evaluation") {
  std::mt19937_64 rng(33);
  const RieszSeries alt([](std::uint64_t n) { return Complex((n % 2 == 1 ? 1.0 : -1.0) / double(n), 0.5 / double(n * n)); },
                        [](std::uint64_t n) { return std::log(double(n) + 1.0); });
  for (int trial = 0; trial < 100; ++trial) {
    const double kappa = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
    const double omega = std::uniform_real_distribution<double>(0.5, 8.0)(rng);
    const auto got = riesz_partial(alt, kappa, Cutoff(omega)).value;
    const auto want = direct(alt, kappa, omega);
    CHECK(std::abs(got - Complex(double(want.real()), double(want.imag()))) < 1e-12);
  }
}

TEST_CASE("property: continuity in omega for kappa > 0") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 100; ++trial) {
    const double kappa = std::uniform_real_distribution<double>(0.25, 3.0)(rng);
    const std::uint64_t n = 1 + rng() % 500;
    const double delta = 1e-7;
    const double lam = double(n);
    const auto below = riesz_partial(grandi(), kappa, Cutoff(lam - delta)).value;
    const auto above = riesz_partial(grandi(), kappa, Cutoff(lam + delta)).value;
    // Entering weight is (delta/lam)^kappa; the other weights move by O(delta).
    const double bound = std::pow(delta / lam, kappa) + 2.0 * kappa * delta * double(n);
    CHECK(std::abs(above - below) <= bound + 1e-12);
  }
}
