#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "smm/indexed_kernel.hpp"
#include "smm/kernel.hpp"
#include "smm/rng.hpp"

namespace smm {

// Seeded Monte Carlo settings. Everything an output depends on is here or
// in the kernel; there is no other entropy source. warmup_minutes < 0
// selects the default: 0 for the plain chain, 1000 for indexed chains
// (discarded before the horizon clock starts, so the index enters the
// output window with realistic history). initial_index NaN defaults to
// f(initial_state).
struct SimulationConfig {
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  int initial_state = 0;
  std::int64_t warmup_minutes = -1;
  double initial_index = std::numeric_limits<double>::quiet_NaN();
  int replications = 1;
};

inline SimulationConfig replication_config(SimulationConfig cfg, int replication) {
  cfg.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(replication));
  cfg.replications = 1;
  return cfg;
}

struct Trajectory {
  int num_states = 0;
  std::vector<int> states;             // J_0, J_1, ...
  std::vector<std::int64_t> times;     // T_0 = 0, strictly increasing, < horizon
  std::int64_t horizon = 0;
  std::uint64_t seed = 0;
  std::string kernel_fingerprint;
  std::string generator_id;
  std::vector<double> index_at_jumps;  // audit trail; empty for the plain chain
};

// In-memory content hash (dims + counts), recorded in trajectories and
// manifests so an output names the exact kernel that produced it.
std::string content_fingerprint(const SemiMarkovKernel& kernel);
std::string content_fingerprint(const IndexedKernel& kernel);

// Jump-by-jump draw discipline, fixed as part of the reproducibility
// contract: per transition, one uniform picks the next state by inverse
// CDF over the embedded row in state order, then one uniform picks the
// sojourn by inverse CDF over G for the chosen pair. Simulation stops at
// the first jump that would land at or past the horizon.
Trajectory simulate_smc(const SemiMarkovKernel& kernel, const SimulationConfig& cfg);

// Indexed variant: before each transition the index is refreshed from the
// simulated history, discretized to a level, and the (state, level) cell's
// row is used (its fallback row where backed off). Same two-draw
// discipline, so with a single level this reproduces simulate_smc on the
// aggregated kernel draw for draw.
Trajectory simulate_indexed(const IndexedKernel& kernel, const IndexConfig& icfg,
                            const IndexGrid& grid, const SimulationConfig& cfg);

// Convenience overload using the recipe and grid stored in the kernel.
Trajectory simulate_indexed(const IndexedKernel& kernel, const SimulationConfig& cfg);

// Z(t) = J_{N(t)} for t in [0, horizon). state_values, when given, label
// the series for downstream diagnostics; otherwise labels map to
// themselves.
StateSeries expand_to_minutes(const Trajectory& traj, std::int64_t horizon,
                              const std::vector<double>& state_values = {});

}  // namespace smm
