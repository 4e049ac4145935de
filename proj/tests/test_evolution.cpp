#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "smm/errors.hpp"
#include "smm/kernel.hpp"
#include "smm/synthetic.hpp"

using namespace smm;

TEST_SUITE("evolution") {

TEST_CASE("phi at time zero is the identity") {
  const auto spec = synthetic_preset("known-kernel-3state");
  const auto k = build_kernel(spec.num_states, spec.t_max, spec.kernel_entries);
  const auto table = solve_evolution(k, 10);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(table.at(0, i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("single absorbing state stays put") {
  const auto k = build_kernel(1, 3, {{0, 0, 2, 1.0}});
  const auto table = solve_evolution(k, 12);
  for (int t = 0; t <= 12; ++t) CHECK(table.at(t, 0, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("deterministic alternator flips every minute") {
  const auto k = build_kernel(2, 2, {{0, 1, 1, 1.0}, {1, 0, 1, 1.0}});
  const auto table = solve_evolution(k, 10);
  for (int t = 0; t <= 10; ++t) {
    CHECK(table.at(t, 0, 0) == doctest::Approx(t % 2 == 0 ? 1.0 : 0.0).epsilon(1e-12));
    CHECK(table.at(t, 1, 1) == doctest::Approx(t % 2 == 0 ? 1.0 : 0.0).epsilon(1e-12));
  }
  const auto brute = oracle::brute_force_phi(k, 7);
  CHECK(table.at(7, 0, 1) == doctest::Approx(brute[0][1]).epsilon(1e-12));
}

TEST_CASE("solver equals exhaustive path enumeration on short-support kernels") {
  const std::vector<std::vector<KernelEntry>> kernels = {
      {{0, 1, 1, 0.5}, {0, 1, 3, 0.2}, {0, 0, 2, 0.3},
       {1, 0, 1, 0.6}, {1, 1, 2, 0.25}, {1, 0, 3, 0.15}},
      {{0, 1, 2, 1.0}, {1, 0, 1, 0.4}, {1, 0, 2, 0.35}, {1, 1, 3, 0.25}},
      {{0, 1, 1, 1.0}, {1, 0, 3, 1.0}},
  };
  for (const auto& entries : kernels) {
    const auto k = build_kernel(2, 3, entries);
    for (int horizon : {0, 1, 5, 10}) {
      const auto table = solve_evolution(k, horizon);
      const auto brute = oracle::brute_force_phi(k, horizon);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          CHECK(std::fabs(table.at(horizon, i, j) -
                          brute[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) <
                1e-10);
    }
  }
}

TEST_CASE("rows sum to one at every horizon, beyond t_max included") {
  const auto spec = synthetic_preset("known-kernel-3state");
  const auto k = build_kernel(spec.num_states, spec.t_max, spec.kernel_entries);
  const auto table = solve_evolution(k, 60);   // t_max is 5
  for (int t = 0; t <= 60; ++t)
    for (int i = 0; i < 3; ++i) {
      double row = 0.0;
      for (int j = 0; j < 3; ++j) {
        row += table.at(t, i, j);
        CHECK(table.at(t, i, j) >= -1e-12);
        CHECK(table.at(t, i, j) <= 1.0 + 1e-12);
      }
      CHECK(std::fabs(row - 1.0) < 1e-10);
    }
}

TEST_CASE("unobserved rows block the solve unless fallback is enabled") {
  MarkovRenewalSample s;
  s.num_states = 3;
  s.states = {0, 1, 0, 2};
  s.times = {0, 1, 3, 4};
  s.segment_starts = {0};
  s.end_time = 6;
  auto k = estimate_kernel(s, 2);
  CHECK_THROWS_AS(solve_evolution(k, 5), DataError);
  k.fallback_enabled = true;
  const auto table = solve_evolution(k, 5);
  for (int t = 0; t <= 5; ++t) {
    double row = 0.0;
    for (int j = 0; j < 3; ++j) row += table.at(t, 2, j);
    CHECK(std::fabs(row - 1.0) < 1e-10);
  }
}

}  // TEST_SUITE
