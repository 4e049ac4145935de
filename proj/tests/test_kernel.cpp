#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "smm/errors.hpp"
#include "smm/kernel.hpp"
#include "smm/simulate.hpp"
#include "smm/synthetic.hpp"

using namespace smm;

namespace {

MarkovRenewalSample sample_of(std::vector<int> j, std::vector<std::int64_t> t, int num_states,
                              std::int64_t end_time = -1) {
  MarkovRenewalSample s;
  s.num_states = num_states;
  s.states = std::move(j);
  s.times = std::move(t);
  s.segment_starts = {0};
  s.end_time = end_time >= 0 ? end_time : s.times.back() + 1;
  return s;
}

MarkovRenewalSample trajectory_sample(const Trajectory& traj) {
  MarkovRenewalSample s;
  s.num_states = traj.num_states;
  s.states = traj.states;
  s.times = traj.times;
  s.segment_starts = {0};
  s.end_time = traj.horizon;
  return s;
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("two-transition hand count") {
  // J = [1, 2, 1], T = [0, 3, 5]: one 1->2 sojourn 3, one 2->1 sojourn 2.
  const auto sample = sample_of({1, 2, 1}, {0, 3, 5}, 3);
  const auto k = estimate_kernel(sample, 6);
  CHECK(k.p_of(1, 2) == 1.0);
  CHECK(k.Q(1, 2, 0) == 0.0);
  CHECK(k.Q(1, 2, 2) == 0.0);
  CHECK(k.Q(1, 2, 3) == 1.0);
  CHECK(k.Q(1, 2, 6) == 1.0);
  CHECK(k.G_of(1, 2, 3) == 1.0);
  CHECK(k.p_of(2, 1) == 1.0);
  CHECK(k.Q(2, 1, 2) == 1.0);
}

TEST_CASE("b is zero at t = 0 and sums to the sojourn pmf") {
  const auto spec = synthetic_preset("known-kernel-3state");
  const auto k = build_kernel(spec.num_states, spec.t_max, spec.kernel_entries);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      CHECK(k.b_of(i, j, 0) == 0.0);
      double mass = 0.0;
      for (int t = 1; t <= k.t_max; ++t) mass += k.b_of(i, j, t);
      CHECK(mass == doctest::Approx(k.p_of(i, j)).epsilon(1e-12));
    }
}

TEST_CASE("H reaches one at t_max on observed rows") {
  const auto spec = synthetic_preset("known-kernel-3state");
  const auto k = build_kernel(spec.num_states, spec.t_max, spec.kernel_entries);
  for (int i = 0; i < 3; ++i) {
    CHECK(k.H_of(i, 0) == 0.0);
    CHECK(k.H_of(i, k.t_max) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("G is the constant one where p vanishes") {
  const auto sample = sample_of({0, 1, 0, 1}, {0, 2, 3, 6}, 3);
  const auto k = estimate_kernel(sample, 4);
  CHECK(k.p_of(0, 2) == 0.0);
  for (int t = 0; t <= 4; ++t) CHECK(k.G_of(0, 2, t) == 1.0);
}

TEST_CASE("kernel invariants on simulated data") {
  const auto spec = synthetic_preset("known-kernel-3state");
  const auto truth = build_kernel(spec.num_states, spec.t_max, spec.kernel_entries);
  SimulationConfig cfg;
  cfg.horizon = 40000;
  cfg.seed = 424242;
  const auto traj = simulate_smc(truth, cfg);
  const auto k = estimate_kernel(trajectory_sample(traj), truth.t_max);

  for (int i = 0; i < 3; ++i) {
    double row = 0.0;
    for (int j = 0; j < 3; ++j) {
      double prev = 0.0;
      for (int t = 0; t <= k.t_max; ++t) {
        CHECK(k.Q(i, j, t) >= prev);   // monotone
        prev = k.Q(i, j, t);
      }
      row += k.p_of(i, j);
      // G * p == Q identity wherever p != 0.
      if (k.p_of(i, j) != 0.0)
        for (int t = 0; t <= k.t_max; ++t)
          CHECK(k.G_of(i, j, t) * k.p_of(i, j) == doctest::Approx(k.Q(i, j, t)).epsilon(1e-14));
    }
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
    for (int t = 0; t < k.t_max; ++t) CHECK(k.H_of(i, t) <= 1.0 + 1e-12);
  }
}

TEST_CASE("estimation recovers a known kernel") {
  const auto spec = synthetic_preset("known-kernel-3state");
  const auto truth = build_kernel(spec.num_states, spec.t_max, spec.kernel_entries);
  SimulationConfig cfg;
  cfg.horizon = 250000;   // ~1e5 jumps at the kernel's mean sojourn
  cfg.seed = 7;
  const auto traj = simulate_smc(truth, cfg);
  REQUIRE(traj.states.size() > 100000);
  const auto k = estimate_kernel(trajectory_sample(traj), truth.t_max);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      worst = std::max(worst, std::fabs(k.p_of(i, j) - truth.p_of(i, j)));
  CHECK(worst < 0.01);
}

TEST_CASE("estimator error halves when the sample quadruples") {
  const auto spec = synthetic_preset("known-kernel-3state");
  const auto truth = build_kernel(spec.num_states, spec.t_max, spec.kernel_entries);
  auto mean_error = [&](std::int64_t horizon, std::uint64_t seed_base) {
    double total = 0.0;
    for (int r = 0; r < 10; ++r) {
      SimulationConfig cfg;
      cfg.horizon = horizon;
      cfg.seed = derive_seed(seed_base, static_cast<std::uint64_t>(r));
      const auto traj = simulate_smc(truth, cfg);
      const auto k = estimate_kernel(trajectory_sample(traj), truth.t_max);
      double worst = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          worst = std::max(worst, std::fabs(k.p_of(i, j) - truth.p_of(i, j)));
      total += worst;
    }
    return total / 10.0;
  };
  const double err_small = mean_error(8000, 1001);
  const double err_large = mean_error(32000, 2002);
  const double ratio = err_large / err_small;
  CHECK(ratio > 0.35);
  CHECK(ratio < 0.65);
}

TEST_CASE("unobserved rows are flagged and guarded") {
  // State 2 only ever appears as the final (censored) jump.
  const auto sample = sample_of({0, 1, 0, 2}, {0, 1, 3, 4}, 3, 6);
  auto k = estimate_kernel(sample, 3);
  CHECK(k.row_observed(0));
  CHECK(k.row_observed(1));
  CHECK(!k.row_observed(2));
  CHECK_THROWS_AS(k.Q(2, 0, 1), DataError);
  CHECK_THROWS_AS(k.H_of(2, 1), DataError);
  k.fallback_enabled = true;
  CHECK(k.p_of(2, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(k.H_of(2, 1) == 1.0);
  CHECK(k.b_of(2, 0, 1) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("self-transition convention gives unit sojourns and bigram frequencies") {
  StateSeries series;
  series.num_states = 2;
  series.states = {0, 0, 1, 0, 1, 1, 0, 0};
  series.day_starts = {0};
  series.state_values = {0.0, 1.0};
  ExtractOptions opts;
  opts.allow_self_transitions = true;
  const auto sample = extract_mrp(series, opts);
  const auto k = estimate_kernel(sample, 1);
  // Bigrams: 00, 01, 10, 01, 11, 10, 00 -> from 0: 2x00, 2x01; from 1: 2x10, 1x11.
  CHECK(k.p_of(0, 0) == doctest::Approx(0.5));
  CHECK(k.p_of(0, 1) == doctest::Approx(0.5));
  CHECK(k.p_of(1, 0) == doctest::Approx(2.0 / 3.0));
  CHECK(k.Q(0, 1, 1) == k.p_of(0, 1));   // all sojourns are one minute
}

TEST_CASE("estimation preconditions") {
  const auto single = sample_of({1}, {0}, 3);
  CHECK_THROWS_AS(estimate_kernel(single, 5), DataError);
  const auto sample = sample_of({0, 1, 0}, {0, 4, 5}, 2);
  CHECK_THROWS_AS(estimate_kernel(sample, 3), UsageError);   // max sojourn is 4
  CHECK(max_observed_sojourn(sample) == 4);
}

TEST_CASE("accessor range checks") {
  const auto sample = sample_of({0, 1, 0}, {0, 1, 2}, 2);
  const auto k = estimate_kernel(sample, 2);
  CHECK_THROWS_AS(k.Q(2, 0, 1), UsageError);
  CHECK_THROWS_AS(k.Q(0, -1, 1), UsageError);
  CHECK_THROWS_AS(k.H_of(0, -1), UsageError);
}

}  // TEST_SUITE
