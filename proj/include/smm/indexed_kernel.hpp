#pragma once

#include <cstdint>
#include <vector>

#include "smm/discretize.hpp"
#include "smm/index.hpp"
#include "smm/kernel.hpp"

namespace smm {

// Semi-Markov kernel conditioned on the discretized index level at the
// jump into state i: Q_ij(v;t). Counting is the unconditional estimator
// restricted to each (i, v) cell. Cells with fewer observations than
// backoff_threshold are marked backed off and answer with the embedded
// unconditional kernel's row; the raw per-cell estimates stay available
// (raw_* accessors) since the count-weighted mixture of raw cells over v
// reproduces the unconditional kernel identically.
struct IndexedKernel {
  int num_states = 0;
  int num_levels = 0;
  int t_max = 0;
  double backoff_threshold = 50;
  bool allow_self_transitions = false;

  IndexGrid grid;             // index-level cut points
  IndexConfig index_config;   // recipe that produced the conditioning index
  SemiMarkovKernel fallback;  // unconditional kernel from the same sample

  std::vector<double> counts;       // (i, v, j, w) dense
  std::vector<double> cell_exits;   // (i, v)
  std::vector<double> q;            // normalized cumulative per cell

  std::size_t cell(int i, int v) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(num_levels) +
           static_cast<std::size_t>(v);
  }
  std::size_t idx(int i, int v, int j, int t) const {
    return (cell(i, v) * static_cast<std::size_t>(num_states) + static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(t_max + 1) +
           static_cast<std::size_t>(t);
  }

  double exits_of(int i, int v) const { return cell_exits[cell(i, v)]; }
  bool cell_observed(int i, int v) const { return exits_of(i, v) > 0.0; }
  bool cell_backed_off(int i, int v) const {
    return !cell_observed(i, v) || exits_of(i, v) < backoff_threshold;
  }

  // Raw per-cell estimates (no back-off). Unobserved cell -> UsageError.
  double raw_Q(int i, int v, int j, int t) const;
  double raw_p(int i, int v, int j) const;

  // Effective law: backed-off cells substitute the unconditional row.
  double Q(int i, int v, int j, int t) const;
  double p_of(int i, int v, int j) const;
  double H_of(int i, int v, int t) const;
  double G_of(int i, int v, int j, int t) const;   // 1 where p = 0

  void finalize();
};

// Estimates the indexed kernel. The index series must be aligned with the
// sample (one value per jump; the conditioning variable for transition
// n -> n+1 is U_n, the index on entering state J_n). A state with no
// observations in any cell raises DataError.
IndexedKernel estimate_indexed_kernel(const MarkovRenewalSample& sample,
                                      const IndexSeries& index, const IndexGrid& grid,
                                      int t_max, double backoff_threshold = 50);

double indexed_G(const IndexedKernel& kernel, int i, int j, int v, int t);
double indexed_H(const IndexedKernel& kernel, int i, int v, int t);

}  // namespace smm
