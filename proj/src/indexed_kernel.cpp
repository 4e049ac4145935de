#include "smm/indexed_kernel.hpp"

#include <algorithm>
#include <string>

#include "smm/errors.hpp"

namespace smm {

namespace {

void check_ranges(const IndexedKernel& k, int i, int v, int j, int t) {
  if (i < 0 || i >= k.num_states || j < 0 || j >= k.num_states)
    throw UsageError("state index out of range");
  if (v < 0 || v >= k.num_levels) throw UsageError("index level out of range");
  if (t < 0) throw UsageError("negative time");
}

}  // namespace

double IndexedKernel::raw_Q(int i, int v, int j, int t) const {
  check_ranges(*this, i, v, j, t);
  if (!cell_observed(i, v)) throw UsageError("cell has no observations");
  return q[idx(i, v, j, std::min(t, t_max))];
}

double IndexedKernel::raw_p(int i, int v, int j) const { return raw_Q(i, v, j, t_max); }

double IndexedKernel::Q(int i, int v, int j, int t) const {
  check_ranges(*this, i, v, j, t);
  if (cell_backed_off(i, v)) return fallback.Q(i, j, t);
  return q[idx(i, v, j, std::min(t, t_max))];
}

double IndexedKernel::p_of(int i, int v, int j) const { return Q(i, v, j, t_max); }

double IndexedKernel::H_of(int i, int v, int t) const {
  double s = 0.0;
  for (int j = 0; j < num_states; ++j) s += Q(i, v, j, t);
  return s;
}

double IndexedKernel::G_of(int i, int v, int j, int t) const {
  const double p = p_of(i, v, j);
  if (p == 0.0) return 1.0;
  return Q(i, v, j, t) / p;
}

void IndexedKernel::finalize() {
  q.assign(counts.size(), 0.0);
  for (int i = 0; i < num_states; ++i) {
    for (int v = 0; v < num_levels; ++v) {
      const double total = cell_exits[cell(i, v)];
      if (total <= 0.0) continue;
      for (int j = 0; j < num_states; ++j) {
        double cum = 0.0;
        for (int t = 0; t <= t_max; ++t) {
          cum += counts[idx(i, v, j, t)];
          q[idx(i, v, j, t)] = cum / total;
        }
      }
    }
  }
}

IndexedKernel estimate_indexed_kernel(const MarkovRenewalSample& sample,
                                      const IndexSeries& index, const IndexGrid& grid,
                                      int t_max, double backoff_threshold) {
  if (index.at_jumps.size() != sample.num_jumps())
    throw UsageError("index series is not aligned with the sample's jumps");

  IndexedKernel k;
  k.num_states = sample.num_states;
  k.num_levels = grid.num_levels;
  k.t_max = t_max;
  k.backoff_threshold = backoff_threshold;
  k.allow_self_transitions = sample.allow_self_transitions;
  k.grid = grid;
  k.index_config = index.config;
  k.fallback = estimate_kernel(sample, t_max);

  const std::size_t n_cells =
      static_cast<std::size_t>(k.num_states) * static_cast<std::size_t>(k.num_levels);
  k.counts.assign(n_cells * static_cast<std::size_t>(k.num_states) *
                      static_cast<std::size_t>(t_max + 1),
                  0.0);
  k.cell_exits.assign(n_cells, 0.0);

  for (std::size_t n = 0; n + 1 < sample.num_jumps(); ++n) {
    if (!sample.has_next(n)) continue;
    const int sojourn = static_cast<int>(sample.times[n + 1] - sample.times[n]);
    if (sojourn > t_max) throw UsageError("t_max below max observed sojourn");
    const int i = sample.states[n];
    const int v = grid.level_of(index.at_jumps[n]);
    k.counts[k.idx(i, v, sample.states[n + 1], sojourn)] += 1.0;
    k.cell_exits[k.cell(i, v)] += 1.0;
  }

  for (int i = 0; i < k.num_states; ++i) {
    double any = 0.0;
    for (int v = 0; v < k.num_levels; ++v) any += k.exits_of(i, v);
    if (any <= 0.0)
      throw DataError("state " + std::to_string(i) + " has no observations in any index cell");
  }

  k.finalize();
  return k;
}

double indexed_G(const IndexedKernel& kernel, int i, int j, int v, int t) {
  return kernel.G_of(i, v, j, t);
}

double indexed_H(const IndexedKernel& kernel, int i, int v, int t) {
  return kernel.H_of(i, v, t);
}

}  // namespace smm
