#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "smm/diagnostics.hpp"
#include "smm/errors.hpp"
#include "smm/rng.hpp"
#include "smm/synthetic.hpp"

using namespace smm;

TEST_SUITE("diagnostics") {

TEST_CASE("acf matches the naive double loop") {
  SplitMix64 rng(8);
  std::vector<double> x(10000);
  double carry = 0.0;
  for (auto& v : x) {
    carry = 0.6 * carry + (rng.next_double() - 0.5);
    v = carry;
  }
  const auto curve = acf_returns(x, 100);
  const auto direct = oracle::naive_acf(x, 100);
  for (int tau = 1; tau <= 100; ++tau)
    CHECK(oracle::rel_err(curve.at_lag(tau), direct[static_cast<std::size_t>(tau - 1)]) < 1e-10);

  std::vector<double> sq(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) sq[k] = x[k] * x[k];
  const auto curve2 = acf_squared(x, 50);
  const auto direct2 = oracle::naive_acf(sq, 50);
  for (int tau = 1; tau <= 50; ++tau)
    CHECK(oracle::rel_err(curve2.at_lag(tau), direct2[static_cast<std::size_t>(tau - 1)]) <
          1e-10);
}

TEST_CASE("antisymmetric deterministic series against the oracle") {
  std::vector<double> x;
  for (int k = 0; k < 500; ++k) x.push_back(k % 2 == 0 ? 1.0 : -1.0);
  x[100] = 3.0;   // break exact periodicity so the variance is healthy
  const auto curve = acf_returns(x, 20);
  const auto direct = oracle::naive_acf(x, 20);
  for (int tau = 1; tau <= 20; ++tau)
    CHECK(curve.at_lag(tau) == doctest::Approx(direct[static_cast<std::size_t>(tau - 1)])
                                    .epsilon(1e-12));
}

TEST_CASE("iid states stay inside the white-noise band") {
  SplitMix64 rng(2);
  std::vector<double> x(100000);
  for (auto& v : x) v = static_cast<double>(rng.next_u64() % 5) - 2.0;
  const double band = white_noise_band(x.size());
  const auto returns_curve = acf_returns(x, 100);
  const auto squared_curve = acf_squared(x, 100);
  for (int tau = 1; tau <= 100; ++tau) {
    CHECK(std::fabs(returns_curve.at_lag(tau)) < band);
    CHECK(std::fabs(squared_curve.at_lag(tau)) < band);
  }
}

TEST_CASE("degenerate series raise zero-variance errors") {
  const std::vector<double> constant(500, 2.0);
  CHECK_THROWS_AS(acf_returns(constant, 10), NumericError);
  std::vector<double> alternating;
  for (int k = 0; k < 500; ++k) alternating.push_back(k % 2 == 0 ? 0.5 : -0.5);
  CHECK_THROWS_AS(acf_squared(alternating, 10), NumericError);   // squares constant
  CHECK_NOTHROW(acf_returns(alternating, 10));
}

TEST_CASE("short series and bad lags are usage errors") {
  const std::vector<double> x{1.0, 2.0, 0.5};
  CHECK_THROWS_AS(acf_returns(x, 5), UsageError);
  CHECK_THROWS_AS(acf_returns(x, 0), UsageError);
}

TEST_CASE("values stay within [-1, 1]") {
  SplitMix64 rng(9);
  std::vector<double> x(5000);
  double carry = 0.0;
  for (auto& v : x) {
    carry = 0.95 * carry + (rng.next_double() - 0.5);
    v = carry;
  }
  const auto curve = acf_returns(x, 200);
  for (double v : curve.values) {
    CHECK(v <= 1.0);
    CHECK(v >= -1.0);
  }
}

TEST_CASE("day-boundary exclusion drops straddling pairs") {
  // Two days with strong correlation inside days and a sign flip at the
  // boundary; excluding boundary pairs must change the lag-1 value.
  std::vector<double> x;
  for (int k = 0; k < 50; ++k) x.push_back(1.0 + 0.01 * k);
  for (int k = 0; k < 50; ++k) x.push_back(-1.0 - 0.01 * k);
  AcfOptions incl;
  AcfOptions excl;
  excl.exclude_day_boundaries = true;
  excl.day_starts = {0, 50};
  const auto with_pairs = acf_returns(x, 5, incl);
  const auto without_pairs = acf_returns(x, 5, excl);
  CHECK(with_pairs.at_lag(1) != without_pairs.at_lag(1));

  // Oracle for the excluded variant: naive loops per day, same scaling.
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  for (int tau = 1; tau <= 5; ++tau) {
    double num = 0.0;
    std::size_t pairs = 0;
    for (std::size_t lo : {0ul, 50ul}) {
      for (std::size_t t = lo; t + static_cast<std::size_t>(tau) < lo + 50; ++t) {
        num += (x[t] - mean) * (x[t + static_cast<std::size_t>(tau)] - mean);
        ++pairs;
      }
    }
    const double scale = static_cast<double>(x.size() - static_cast<std::size_t>(tau)) /
                         static_cast<double>(pairs);
    CHECK(without_pairs.at_lag(tau) == doctest::Approx(num * scale / var).epsilon(1e-12));
  }
}

TEST_CASE("mse of identical and offset curves") {
  AcfCurve a;
  a.tau_max = 100;
  a.n = 1000;
  a.values.assign(100, 0.25);
  CHECK(mse_acf(a, a) == 0.0);
  AcfCurve b = a;
  for (auto& v : b.values) v += 0.1;
  CHECK(mse_acf(a, b) == doctest::Approx(0.01).epsilon(1e-12));

  SplitMix64 rng(77);
  AcfCurve c = a;
  for (auto& v : c.values) v = rng.next_double();
  double direct = 0.0;
  for (std::size_t k = 0; k < 100; ++k)
    direct += (a.values[k] - c.values[k]) * (a.values[k] - c.values[k]);
  direct /= 100.0;
  CHECK(mse_acf(a, c) == doctest::Approx(direct).epsilon(1e-12));

  AcfCurve short_curve;
  short_curve.tau_max = 50;
  short_curve.values.assign(50, 0.0);
  CHECK_THROWS_AS(mse_acf(a, short_curve), UsageError);
}

TEST_CASE("single-point sweeps return that point as the argmin") {
  auto spec = synthetic_preset("clustered-wismc");
  spec.horizon = 30000;
  const auto data = generate_synthetic(spec);
  SweepConfig cfg;
  cfg.replications = 2;
  cfg.seed = 5;
  cfg.tau_max = 30;
  cfg.warmup_minutes = 200;

  const auto m_result = sweep_m(data, {10}, cfg);
  CHECK(m_result.points.size() == 1);
  CHECK(m_result.argmin == 0);
  CHECK(m_result.param_at_argmin() == 10.0);
  CHECK(!m_result.points[0].failed);
  CHECK(m_result.points[0].mse >= 0.0);

  const auto l_result = sweep_lambda(data, {0.97}, cfg);
  CHECK(l_result.argmin == 0);
  CHECK(!l_result.points[0].failed);
}

TEST_CASE("sweeps are deterministic given the same seed") {
  auto spec = synthetic_preset("clustered-wismc");
  spec.horizon = 20000;
  const auto data = generate_synthetic(spec);
  SweepConfig cfg;
  cfg.replications = 2;
  cfg.seed = 11;
  cfg.tau_max = 20;
  cfg.warmup_minutes = 100;
  const auto a = sweep_lambda(data, {0.9, 0.97}, cfg);
  const auto b = sweep_lambda(data, {0.9, 0.97}, cfg);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t k = 0; k < a.points.size(); ++k) {
    CHECK(a.points[k].mse == b.points[k].mse);
    CHECK(a.points[k].seed == b.points[k].seed);
  }
  CHECK(a.argmin == b.argmin);
}

TEST_CASE("oversized windows degenerate gracefully and lambda may reach one") {
  auto spec = synthetic_preset("clustered-wismc");
  spec.horizon = 20000;
  const auto data = generate_synthetic(spec);
  SweepConfig cfg;
  cfg.replications = 1;
  cfg.seed = 19;
  cfg.tau_max = 20;
  cfg.warmup_minutes = 100;

  // m far beyond the jump count: the index collapses to a full-history
  // average but the point still records a finite MSE.
  const auto m_result = sweep_m(data, {5, 1000000}, cfg);
  CHECK(!m_result.points[1].failed);
  CHECK(std::isfinite(m_result.points[1].mse));

  const auto l_result = sweep_lambda(data, {0.97, 1.0}, cfg);
  CHECK(!l_result.points[1].failed);
  CHECK(std::isfinite(l_result.points[1].mse));
}

TEST_CASE("a failing grid point is recorded, not fatal") {
  auto spec = synthetic_preset("clustered-wismc");
  spec.horizon = 15000;
  const auto data = generate_synthetic(spec);
  SweepConfig cfg;
  cfg.replications = 1;
  cfg.seed = 23;
  cfg.tau_max = 20;
  cfg.warmup_minutes = 100;
  // m = 0 violates the index precondition for that point only.
  const auto result = sweep_m(data, {0, 10}, cfg);
  CHECK(result.points[0].failed);
  CHECK(!result.points[0].error.empty());
  CHECK(!result.points[1].failed);
  CHECK(result.argmin == 1);
}

}  // TEST_SUITE
