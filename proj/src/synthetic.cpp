#include "smm/synthetic.hpp"

#include <algorithm>
#include <string>

#include "smm/errors.hpp"
#include "smm/simulate.hpp"

namespace smm {

void SyntheticGeneratorSpec::validate() const {
  if (kind != "known-kernel" && kind != "clustered-wismc")
    throw ConfigError("unknown generator kind '" + kind + "'");
  if (num_states < 2) throw ConfigError("generator needs at least 2 states");
  if (t_max < 1) throw ConfigError("generator t_max must be >= 1");
  if (horizon < 0) throw ConfigError("generator horizon must be >= 0");
  if (initial_state < 0 || initial_state >= num_states)
    throw ConfigError("generator initial state out of range");
  if (!state_values.empty() && state_values.size() != static_cast<std::size_t>(num_states))
    throw ConfigError("state_values must have one entry per state");

  auto check_entry = [&](int i, int j, int w, double weight, int level) {
    if (i < 0 || i >= num_states || j < 0 || j >= num_states)
      throw ConfigError("kernel entry state out of range");
    if (w < 1 || w > t_max) throw ConfigError("kernel entry sojourn outside [1, t_max]");
    if (!(weight > 0.0)) throw ConfigError("kernel entry weight must be positive");
    if (level < 0 || level >= num_levels) throw ConfigError("kernel entry level out of range");
  };

  if (kind == "known-kernel") {
    if (kernel_entries.empty()) throw ConfigError("known-kernel spec has no kernel entries");
    for (const auto& e : kernel_entries) check_entry(e.i, e.j, e.sojourn, e.weight, 0);
  } else {
    if (indexed_entries.empty()) throw ConfigError("clustered-wismc spec has no kernel entries");
    if (num_levels < 2) throw ConfigError("clustered-wismc needs >= 2 levels");
    if (level_thresholds.size() != static_cast<std::size_t>(num_levels - 1))
      throw ConfigError("level_thresholds must have num_levels - 1 entries");
    for (std::size_t k = 1; k < level_thresholds.size(); ++k)
      if (!(level_thresholds[k] > level_thresholds[k - 1]))
        throw ConfigError("level_thresholds must be strictly increasing");
    for (const auto& e : indexed_entries) check_entry(e.i, e.j, e.sojourn, e.weight, e.level);
  }
}

SemiMarkovKernel build_kernel(int num_states, int t_max,
                              const std::vector<KernelEntry>& entries) {
  SemiMarkovKernel k;
  k.init(num_states, t_max);
  for (const auto& e : entries) k.add(e.i, e.j, e.sojourn, e.weight);
  k.finalize();
  return k;
}

IndexedKernel build_indexed_kernel(const SyntheticGeneratorSpec& spec) {
  spec.validate();
  IndexedKernel k;
  k.num_states = spec.num_states;
  k.num_levels = spec.num_levels;
  k.t_max = spec.t_max;
  k.backoff_threshold = 0;   // specified cells are authoritative
  k.grid.num_levels = spec.num_levels;
  k.grid.thresholds = spec.level_thresholds;
  k.index_config = spec.index_config;
  if (k.index_config.f_values.empty() && !spec.state_values.empty())
    k.index_config.resolve_f(spec.state_values);

  const std::size_t n_cells =
      static_cast<std::size_t>(spec.num_states) * static_cast<std::size_t>(spec.num_levels);
  k.counts.assign(n_cells * static_cast<std::size_t>(spec.num_states) *
                      static_cast<std::size_t>(spec.t_max + 1),
                  0.0);
  k.cell_exits.assign(n_cells, 0.0);

  std::vector<KernelEntry> aggregated;
  for (const auto& e : spec.indexed_entries) {
    k.counts[k.idx(e.i, e.level, e.j, e.sojourn)] += e.weight;
    k.cell_exits[k.cell(e.i, e.level)] += e.weight;
    aggregated.push_back({e.i, e.j, e.sojourn, e.weight});
  }
  k.fallback = build_kernel(spec.num_states, spec.t_max, aggregated);
  k.finalize();
  return k;
}

StateSeries generate_synthetic(const SyntheticGeneratorSpec& spec) {
  spec.validate();

  SimulationConfig cfg;
  cfg.horizon = spec.horizon;
  cfg.seed = spec.seed;
  cfg.initial_state = spec.initial_state;

  Trajectory traj;
  if (spec.kind == "known-kernel") {
    const SemiMarkovKernel k = build_kernel(spec.num_states, spec.t_max, spec.kernel_entries);
    cfg.warmup_minutes = 0;
    traj = spec.horizon > 0 ? simulate_smc(k, cfg) : Trajectory{};
  } else {
    const IndexedKernel k = build_indexed_kernel(spec);
    cfg.warmup_minutes = spec.warmup_minutes;
    traj = spec.horizon > 0 ? simulate_indexed(k, cfg) : Trajectory{};
  }
  if (spec.horizon == 0) {
    StateSeries empty;
    empty.num_states = spec.num_states;
    empty.state_values = spec.state_values;
    if (empty.state_values.empty())
      for (int j = 0; j < spec.num_states; ++j)
        empty.state_values.push_back(static_cast<double>(j));
    return empty;
  }
  return expand_to_minutes(traj, spec.horizon, spec.state_values);
}

namespace {

// Mixed-sojourn 3-state kernel with every row and pair populated; handy as
// a round-trip target because no probability is small enough to starve the
// estimator.
SyntheticGeneratorSpec make_known_kernel_3state() {
  SyntheticGeneratorSpec s;
  s.kind = "known-kernel";
  s.seed = 20070101;
  s.horizon = 500000;
  s.initial_state = 0;
  s.num_states = 3;
  s.t_max = 5;
  s.state_values = {-1.0, 0.0, 1.0};
  s.kernel_entries = {
      {0, 1, 1, 0.30}, {0, 1, 2, 0.18}, {0, 1, 3, 0.12},
      {0, 2, 1, 0.08}, {0, 2, 2, 0.20}, {0, 2, 4, 0.12},
      {1, 0, 1, 0.35}, {1, 0, 3, 0.15},
      {1, 2, 2, 0.30}, {1, 2, 3, 0.20},
      {2, 0, 1, 0.12}, {2, 0, 2, 0.12}, {2, 0, 5, 0.06},
      {2, 1, 1, 0.175}, {2, 1, 2, 0.35}, {2, 1, 3, 0.175},
  };
  return s;
}

void push_level_rows(SyntheticGeneratorSpec& s, int level,
                     const std::vector<std::vector<double>>& rows,
                     const std::vector<std::pair<int, double>>& mid_sojourn) {
  // Non-middle states always hold for exactly one minute; the middle
  // (zero-return) state carries the level's sojourn law.
  const int mid = s.num_states / 2;
  for (int i = 0; i < s.num_states; ++i) {
    for (int j = 0; j < s.num_states; ++j) {
      const double p = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (p <= 0.0) continue;
      if (i == mid) {
        for (const auto& [w, mass] : mid_sojourn)
          s.indexed_entries.push_back({i, level, j, w, p * mass});
      } else {
        s.indexed_entries.push_back({i, level, j, 1, p});
      }
    }
  }
}

// Two-level feedback generator: the EWMA of squared state values selects
// the level, calm rows park the chain at zero while excited rows keep it
// on the +-1/+-2 states, so high-volatility spells persist for hundreds
// of minutes. Every row has conditional mean zero, which keeps the raw
// state series linearly uncorrelated.
SyntheticGeneratorSpec make_clustered_wismc() {
  SyntheticGeneratorSpec s;
  s.kind = "clustered-wismc";
  s.seed = 20070102;
  s.horizon = 500000;
  s.num_states = 5;
  s.initial_state = 2;
  s.t_max = 8;
  s.state_values = {-2.0, -1.0, 0.0, 1.0, 2.0};
  s.num_levels = 2;
  s.level_thresholds = {0.70};
  s.index_config.kind = IndexKind::kEwma;
  s.index_config.lambda = 0.97;
  s.index_config.f_id = "squared_value";
  s.warmup_minutes = 1000;

  // Row layout: state labels 0..4 map to values -2,-1,0,+1,+2. Calm rows
  // funnel back to zero quickly; excited rows keep the magnitude alive
  // (conditional mean still zero everywhere). The calm EWMA settles near
  // 0.37, the excited one near 1.0, and the 0.70 threshold sits where
  // spells of a few hundred minutes arise in both directions.
  const std::vector<std::vector<double>> calm = {
      {0.00, 0.24, 0.60, 0.08, 0.08},
      {0.06, 0.00, 0.85, 0.06, 0.03},
      {0.05, 0.45, 0.00, 0.45, 0.05},
      {0.03, 0.06, 0.85, 0.00, 0.06},
      {0.08, 0.08, 0.60, 0.24, 0.00},
  };
  const double big_same = 49.0 / 360.0, big_opp = 21.0 / 360.0, one_opp = 56.0 / 360.0;
  const std::vector<std::vector<double>> excited = {
      {0.00, 0.25, 0.60, 0.05, 0.10},
      {big_same, 0.00, 0.65, one_opp, big_opp},
      {0.15, 0.35, 0.00, 0.35, 0.15},
      {big_opp, one_opp, 0.65, 0.00, big_same},
      {0.10, 0.05, 0.60, 0.25, 0.00},
  };
  push_level_rows(s, 0, calm,
                  {{1, 0.10}, {2, 0.20}, {3, 0.25}, {4, 0.20}, {6, 0.15}, {8, 0.10}});
  push_level_rows(s, 1, excited, {{1, 0.55}, {2, 0.30}, {3, 0.15}});
  return s;
}

}  // namespace

std::vector<std::string> synthetic_preset_names() {
  return {"known-kernel-3state", "clustered-wismc"};
}

SyntheticGeneratorSpec synthetic_preset(const std::string& name) {
  if (name == "known-kernel-3state") return make_known_kernel_3state();
  if (name == "clustered-wismc") return make_clustered_wismc();
  throw ConfigError("unknown generator preset '" + name + "'");
}

}  // namespace smm
