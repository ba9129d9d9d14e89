#include "doctest.h"

#include "kappasum/core.hpp"
#include "kappasum/limits.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>

using namespace kappasum;

TEST_CASE("schedules") {
  const auto eps = EpsSchedule{}.values();
  REQUIRE(eps.size() == 30);
  CHECK(eps[0] == 0.1);
  CHECK(eps[3] == 0.1 * 0.125);
  for (std::size_t k = 1; k < eps.size(); ++k) CHECK(eps[k] < eps[k - 1]);

  const auto omega = OmegaSchedule{10.0, 2.0, 15}.values();
  REQUIRE(omega.size() == 15);
  CHECK(omega[14] == 10.0 * 16384.0);
  for (std::size_t k = 1; k < omega.size(); ++k) CHECK(omega[k] > omega[k - 1]);

  CHECK_THROWS_AS((EpsSchedule{0.1, 1.0, 30}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((EpsSchedule{0.1, 0.0, 30}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((EpsSchedule{-0.1, 0.5, 30}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((EpsSchedule{0.1, 0.5, 2}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((OmegaSchedule{10.0, 1.0, 30}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((OmegaSchedule{0.0, 2.0, 30}.validate()), std::invalid_argument);
}

TEST_CASE("detect_limit examples") {
  const std::vector<Complex> constant(3, Complex(1.0));
  const auto c = detect_limit(constant, 1e-8);
  CHECK(c.status == Status::Converged);
  CHECK(c.value == Complex(1.0));
  CHECK(c.error_estimate == 0.0);

  std::vector<Complex> geometric;
  for (int k = 0; k <= 20; ++k) geometric.emplace_back(1.0 - std::ldexp(1.0, -k));
  const auto g = detect_limit(geometric, 1e-5);
  CHECK(g.status == Status::Converged);
  CHECK(std::abs(g.value - 1.0) < 1e-5);
  CHECK(g.error_estimate <= 1e-5);

  std::vector<Complex> growing;
  for (int k = 0; k <= 10; ++k) growing.emplace_back(double(k));
  const auto d = detect_limit(growing, 1e-5);
  CHECK(d.status == Status::Divergent);
  CHECK(d.value == Complex(10.0));
  CHECK(d.error_estimate == 1.0);

  CHECK_THROWS_AS(detect_limit(std::vector<Complex>(2, Complex(1.0)), 1e-8), std::invalid_argument);
}

TEST_CASE("detect_limit classifies bounded oscillation as not converged") {
  std::vector<Complex> grandi;
  for (int k = 0; k < 30; ++k) grandi.emplace_back(k % 2 == 0 ? 1.0 : 0.0);
  CHECK(detect_limit(grandi, 1e-6).status == Status::NotConverged);
}

TEST_CASE("detect_limit needs two passing deltas") {
  const std::vector<Complex> one_pass = {0.0, 1.0, 1.0};
  CHECK(detect_limit(one_pass, 1e-3).status == Status::NotConverged);
  const std::vector<Complex> two_pass = {0.0, 1.0, 1.0, 1.0};
  CHECK(detect_limit(two_pass, 1e-3).status == Status::Converged);
}

TEST_CASE("detect_limit ceiling and non-finite values") {
  const std::vector<Complex> huge = {1.0, 1.0, 2e12};
  CHECK(detect_limit(huge, 1e-3).status == Status::Divergent);
  const std::vector<Complex> bad = {1.0, 1.0, Complex(NAN, 0.0)};
  CHECK(detect_limit(bad, 1e-3).status == Status::Divergent);
  DetectOptions lower;
  lower.divergence_ceiling = 10.0;
  const std::vector<Complex> moderate = {20.0, 20.0, 20.0};
  CHECK(detect_limit(moderate, 1e-3, lower).status == Status::Divergent);
}

TEST_CASE("aitken") {
  std::vector<Complex> geometric;
  for (int k = 0; k <= 20; ++k) geometric.emplace_back(1.0 - std::ldexp(1.0, -k));
  const auto acc = aitken(geometric);
  REQUIRE(acc.size() == geometric.size() - 2);
  for (const Complex& v : acc) CHECK(v == Complex(1.0));

  const std::vector<Complex> constant(5, Complex(0.25, -1.0));
  for (const Complex& v : aitken(constant)) CHECK(v == Complex(0.25, -1.0));

  CHECK_THROWS_AS(aitken(std::vector<Complex>(2)), std::invalid_argument);
}

TEST_CASE("acceleration widens the error estimate to cover the correction") {
  std::vector<Complex> geometric;
  for (int k = 0; k <= 12; ++k) geometric.emplace_back(1.0 - std::ldexp(1.0, -k));
  DetectOptions accel;
  accel.accelerate = true;
  const auto plain = detect_limit(geometric, 1e-2);
  const auto fast = detect_limit(geometric, 1e-2, accel);
  CHECK(fast.value == Complex(1.0));
  CHECK(std::abs(plain.value - 1.0) > 0.0);
  CHECK(fast.error_estimate >= std::abs(fast.value - geometric.back()));
}

TEST_CASE("property: unit-modulus rotation never changes the status") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<Complex> rotations = {Complex(-1.0, 0.0), Complex(0.0, 1.0), std::polar(1.0, 0.7),
                                          std::polar(1.0, -2.3)};
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Complex> trace;
    const int n = 3 + int(rng() % 20);
    const double r = std::uniform_real_distribution<double>(0.1, 2.5)(rng);
    Complex s(u(rng), u(rng));
    for (int k = 0; k < n; ++k) {
      trace.push_back(s);
      s += Complex(u(rng), u(rng)) * std::pow(r, double(k)) * (trial % 4 == 0 ? 1e-7 : 1.0);
    }
    const double tol = std::pow(10.0, -double(1 + rng() % 8));
    for (bool accelerate : {false, true}) {
      DetectOptions options;
      options.accelerate = accelerate;
      const auto base = detect_limit(trace, tol, options);
      for (const Complex& c : rotations) {
        std::vector<Complex> rotated;
        for (const Complex& v : trace) rotated.push_back(c * v);
        CHECK(detect_limit(rotated, tol, options).status == base.status);
      }
    }
  }
}

TEST_CASE("property: converged value lies within the error estimate of the last entry") {
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Complex> trace;
    Complex s(u(rng), u(rng));
    const double r = std::uniform_real_distribution<double>(0.05, 0.9)(rng);
    for (int k = 0; k < 25; ++k) {
      trace.push_back(s);
      s += Complex(u(rng), 0.3 * u(rng)) * std::pow(-r, double(k));
    }
    for (bool accelerate : {false, true}) {
      DetectOptions options;
      options.accelerate = accelerate;
      const double tol = 1e-4;
      const auto e = detect_limit(trace, tol, options);
      if (e.status != Status::Converged) continue;
      CHECK(std::abs(e.value - trace.back()) <= e.error_estimate);
      CHECK(e.error_estimate <= tol * (1.0 + std::abs(e.value)));
    }
  }
}

TEST_CASE("run_ladder") {
  const std::vector<double> params = {1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
  std::atomic<int> calls = 0;
  const PartialFn geometric = [&](double eps) {
    ++calls;
    return PartialResult{Complex(1.0 - eps), std::uint64_t(1.0 / eps)};
  };
  const auto early = run_ladder(params, geometric, 0.2);
  CHECK(early.status == Status::Converged);
  CHECK(early.trace.size() < params.size());
  CHECK(calls == int(early.trace.size()));

  LadderOptions full;
  full.stop_on_convergence = false;
  const auto all = run_ladder(params, geometric, 0.2, full);
  REQUIRE(all.trace.size() == params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    CHECK(all.trace[k].parameter == params[k]);
    CHECK(all.trace[k].partial == Complex(1.0 - params[k]));
  }

  LadderOptions parallel = full;
  parallel.parallel = true;
  const auto par = run_ladder(params, geometric, 0.2, parallel);
  REQUIRE(par.trace.size() == all.trace.size());
  for (std::size_t k = 0; k < params.size(); ++k) CHECK(par.trace[k].partial == all.trace[k].partial);
  CHECK(par.value == all.value);
  CHECK(par.status == all.status);
}

TEST_CASE("run_ladder budget handling") {
  const std::vector<double> params = {1.0, 0.5, 0.25, 0.125, 0.0625};
  const PartialFn capped_late = [](double eps) {
    if (eps < 0.2) throw kappasum::BudgetExceeded("too many", 4);
    return PartialResult{Complex(double(eps > 0.6)), 1};
  };
  const auto late = run_ladder(params, capped_late, 1e-6);
  CHECK(late.trace.size() == 3);
  CHECK(late.status == Status::NotConverged);
  CHECK(!late.diagnostic.empty());

  const PartialFn capped_early = [](double eps) {
    if (eps < 0.7) throw kappasum::BudgetExceeded("too many", 4);
    return PartialResult{Complex(1.0), 1};
  };
  const auto early = run_ladder(params, capped_early, 1e-6);
  CHECK(early.status == Status::BudgetExceeded);
  CHECK(early.trace.size() == 1);
  CHECK(std::isinf(early.error_estimate));
}

TEST_CASE("status names") {
  CHECK(to_string(Status::Converged) == "converged");
  CHECK(to_string(Status::NotConverged) == "not_converged");
  CHECK(to_string(Status::Divergent) == "divergent");
  CHECK(to_string(Status::BudgetExceeded) == "budget_exceeded");
}
