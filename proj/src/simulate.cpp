#include "smm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "smm/errors.hpp"
#include "smm/fingerprint.hpp"

namespace smm {

namespace {

void append_bytes(std::string& buf, const void* p, std::size_t n) {
  buf.append(static_cast<const char*>(p), n);
}

void append_doubles(std::string& buf, const std::vector<double>& v) {
  for (double x : v) append_bytes(buf, &x, sizeof(x));
}

struct RowView {
  const double* q;   // cumulative Q over (j, t), stride t_max+1
  int num_states;
  int t_max;
  double q_at(int j, int t) const {
    return q[static_cast<std::size_t>(j) * static_cast<std::size_t>(t_max + 1) +
             static_cast<std::size_t>(t)];
  }
};

// Uniform next state / unit sojourn, materialized once per simulation for
// kernels with fallback enabled.
std::vector<double> build_fallback_row(int num_states, int t_max) {
  std::vector<double> q(static_cast<std::size_t>(num_states) *
                            static_cast<std::size_t>(t_max + 1),
                        0.0);
  for (int j = 0; j < num_states; ++j)
    for (int t = 1; t <= t_max; ++t)
      q[static_cast<std::size_t>(j) * static_cast<std::size_t>(t_max + 1) +
        static_cast<std::size_t>(t)] = 1.0 / static_cast<double>(num_states);
  return q;
}

int sample_next_state(const RowView& row, double u) {
  double cum = 0.0;
  int last_positive = -1;
  for (int j = 0; j < row.num_states; ++j) {
    const double pj = row.q_at(j, row.t_max);
    if (pj > 0.0) {
      last_positive = j;
      cum += pj;
      if (u < cum) return j;
    }
  }
  if (last_positive < 0) throw NumericError("transition row has no probability mass");
  return last_positive;   // u landed in the roundoff sliver at the top
}

int sample_sojourn(const RowView& row, int j, double u) {
  const double* base = row.q + static_cast<std::size_t>(j) *
                                   static_cast<std::size_t>(row.t_max + 1);
  const double target = u * base[row.t_max];   // G(w) > u  <=>  Q(w) > u * p
  const double* it = std::upper_bound(base + 1, base + row.t_max + 1, target);
  if (it == base + row.t_max + 1) return row.t_max;
  return static_cast<int>(it - base);
}

void check_config(const SimulationConfig& cfg, int num_states) {
  if (cfg.horizon < 0) throw UsageError("horizon must be >= 0");
  if (cfg.initial_state < 0 || cfg.initial_state >= num_states)
    throw UsageError("initial state out of range");
}

}  // namespace

std::string content_fingerprint(const SemiMarkovKernel& kernel) {
  std::string buf = "smk:";
  buf += std::to_string(kernel.num_states) + ":" + std::to_string(kernel.t_max) + ":" +
         std::to_string(kernel.allow_self_transitions ? 1 : 0) + ":";
  append_doubles(buf, kernel.counts);
  return fingerprint_hex(buf);
}

std::string content_fingerprint(const IndexedKernel& kernel) {
  std::string buf = "ismk:";
  buf += std::to_string(kernel.num_states) + ":" + std::to_string(kernel.num_levels) + ":" +
         std::to_string(kernel.t_max) + ":";
  append_doubles(buf, kernel.counts);
  append_doubles(buf, kernel.fallback.counts);
  append_doubles(buf, kernel.grid.thresholds);
  return fingerprint_hex(buf);
}

Trajectory simulate_smc(const SemiMarkovKernel& kernel, const SimulationConfig& cfg) {
  check_config(cfg, kernel.num_states);
  SplitMix64 rng(cfg.seed);

  std::vector<double> fallback_row;
  auto row_of = [&](int i) -> RowView {
    if (!kernel.row_observed(i)) {
      if (!kernel.fallback_enabled)
        throw DataError("simulation reached state " + std::to_string(i) +
                        " with no observed exits (enable fallback to proceed)");
      if (fallback_row.empty()) fallback_row = build_fallback_row(kernel.num_states, kernel.t_max);
      return {fallback_row.data(), kernel.num_states, kernel.t_max};
    }
    return {&kernel.q[kernel.idx(i, 0, 0)], kernel.num_states, kernel.t_max};
  };

  Trajectory traj;
  traj.num_states = kernel.num_states;
  traj.horizon = cfg.horizon;
  traj.seed = cfg.seed;
  traj.kernel_fingerprint = content_fingerprint(kernel);
  traj.generator_id = SplitMix64::generator_id();
  traj.states.push_back(cfg.initial_state);
  traj.times.push_back(0);

  while (true) {
    const RowView row = row_of(traj.states.back());
    const int j = sample_next_state(row, rng.next_double());
    const int w = sample_sojourn(row, j, rng.next_double());
    const std::int64_t t_next = traj.times.back() + w;
    if (t_next >= cfg.horizon) break;
    traj.states.push_back(j);
    traj.times.push_back(t_next);
  }
  return traj;
}

Trajectory simulate_indexed(const IndexedKernel& kernel, const IndexConfig& icfg,
                            const IndexGrid& grid, const SimulationConfig& cfg) {
  check_config(cfg, kernel.num_states);
  icfg.validate();
  SplitMix64 rng(cfg.seed);

  const std::int64_t warmup = cfg.warmup_minutes < 0 ? 1000 : cfg.warmup_minutes;
  const std::int64_t total = warmup + cfg.horizon;
  const double initial_index =
      std::isnan(cfg.initial_index) ? icfg.f_of(cfg.initial_state) : cfg.initial_index;

  std::vector<double> fallback_row;
  auto row_of = [&](int i, int v) -> RowView {
    if (kernel.cell_observed(i, v) && !kernel.cell_backed_off(i, v))
      return {&kernel.q[kernel.idx(i, v, 0, 0)], kernel.num_states, kernel.t_max};
    if (kernel.fallback.row_observed(i))
      return {&kernel.fallback.q[kernel.fallback.idx(i, 0, 0)], kernel.num_states, kernel.t_max};
    if (!kernel.fallback.fallback_enabled)
      throw DataError("simulation reached state " + std::to_string(i) +
                      " with no observed exits (enable fallback to proceed)");
    if (fallback_row.empty()) fallback_row = build_fallback_row(kernel.num_states, kernel.t_max);
    return {fallback_row.data(), kernel.num_states, kernel.t_max};
  };

  std::vector<int> states{cfg.initial_state};
  std::vector<std::int64_t> times{0};
  std::vector<double> index_values;
  IndexAccumulator acc(icfg);

  while (true) {
    const double u_index = acc.ready() ? acc.value() : initial_index;
    index_values.push_back(u_index);
    const int i = states.back();
    const RowView row = row_of(i, grid.level_of(u_index));
    const int j = sample_next_state(row, rng.next_double());
    const int w = sample_sojourn(row, j, rng.next_double());
    const std::int64_t t_next = times.back() + w;
    if (t_next >= total) break;
    acc.push_sojourn(icfg.f_of(i), w);
    states.push_back(j);
    times.push_back(t_next);
  }

  // Drop the warm-up: the clock restarts at `warmup`, whose occupant
  // becomes J_0.
  std::size_t s = 0;
  for (std::size_t n = 0; n < times.size(); ++n)
    if (times[n] <= warmup) s = n;

  Trajectory traj;
  traj.num_states = kernel.num_states;
  traj.horizon = cfg.horizon;
  traj.seed = cfg.seed;
  traj.kernel_fingerprint = content_fingerprint(kernel);
  traj.generator_id = SplitMix64::generator_id();
  traj.states.push_back(states[s]);
  traj.times.push_back(0);
  traj.index_at_jumps.push_back(index_values[s]);
  for (std::size_t n = s + 1; n < times.size(); ++n) {
    traj.states.push_back(states[n]);
    traj.times.push_back(times[n] - warmup);
    traj.index_at_jumps.push_back(index_values[n]);
  }
  return traj;
}

Trajectory simulate_indexed(const IndexedKernel& kernel, const SimulationConfig& cfg) {
  return simulate_indexed(kernel, kernel.index_config, kernel.grid, cfg);
}

StateSeries expand_to_minutes(const Trajectory& traj, std::int64_t horizon,
                              const std::vector<double>& state_values) {
  if (horizon < 0) throw UsageError("horizon must be >= 0");
  StateSeries out;
  out.num_states = traj.num_states;
  if (state_values.empty()) {
    for (int j = 0; j < traj.num_states; ++j) out.state_values.push_back(static_cast<double>(j));
  } else {
    if (state_values.size() != static_cast<std::size_t>(traj.num_states))
      throw UsageError("state_values size does not match the state space");
    out.state_values = state_values;
  }
  if (horizon == 0) return out;

  out.day_starts.push_back(0);
  out.states.resize(static_cast<std::size_t>(horizon));
  std::size_t n = 0;
  for (std::int64_t t = 0; t < horizon; ++t) {
    while (n + 1 < traj.times.size() && traj.times[n + 1] <= t) ++n;
    out.states[static_cast<std::size_t>(t)] = traj.states[n];
  }
  return out;
}

}  // namespace smm
