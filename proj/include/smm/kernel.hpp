#pragma once

#include <cstdint>
#include <vector>

#include "smm/mrp.hpp"

namespace smm {

// Discrete-time semi-Markov kernel estimated by counting: Q_ij(t) is the
// probability of jumping i -> j with a sojourn <= t, p_ij its limit at
// t_max. Counts are kept (as doubles, so hand-built kernels may carry
// fractional weights) and the normalized tables are derived from them.
//
// Rows with no observed exits are flagged; touching one through an
// accessor throws unless the uniform/sojourn-1 fallback row has been
// explicitly enabled.
struct SemiMarkovKernel {
  int num_states = 0;
  int t_max = 0;
  bool allow_self_transitions = false;
  bool fallback_enabled = false;

  std::vector<double> counts;   // (i, j, w) dense, w in [0, t_max]; w = 0 unused
  std::vector<double> exits;    // total transitions out of i

  // Derived by finalize(): cumulative normalized kernel and sojourn CDF.
  std::vector<double> q;   // Q_ij(t)
  std::vector<double> h;   // H_i(t) = sum_j Q_ij(t)

  std::size_t idx(int i, int j, int t) const {
    return (static_cast<std::size_t>(i) * static_cast<std::size_t>(num_states) +
            static_cast<std::size_t>(j)) *
               static_cast<std::size_t>(t_max + 1) +
           static_cast<std::size_t>(t);
  }

  void init(int states, int horizon);
  void add(int i, int j, int sojourn, double weight = 1.0);
  void finalize();   // builds q and h from counts

  bool row_observed(int i) const { return exits[static_cast<std::size_t>(i)] > 0.0; }

  double Q(int i, int j, int t) const;        // clamped to t_max above
  double p_of(int i, int j) const;            // Q at t_max
  double b_of(int i, int j, int t) const;     // Q(t) - Q(t-1), 0 at t = 0
  double H_of(int i, int t) const;            // sojourn CDF in state i
  double survival_of(int i, int t) const { return 1.0 - H_of(i, t); }
  double G_of(int i, int j, int t) const;     // Q/p, or 1 where p = 0
};

// phi_ij(t) for t in [0, horizon]; rows sum to 1 at every t.
struct TransitionProbabilityTable {
  int num_states = 0;
  int horizon = 0;
  std::vector<double> phi;   // (t, i, j)

  double at(int t, int i, int j) const {
    return phi[(static_cast<std::size_t>(t) * static_cast<std::size_t>(num_states) +
                static_cast<std::size_t>(i)) *
                   static_cast<std::size_t>(num_states) +
               static_cast<std::size_t>(j)];
  }
};

// Empirical kernel from the jump chain. The open sojourn after each
// segment's last jump is discarded. Throws DataError when the sample has
// no completed transition, UsageError when t_max is below the largest
// observed sojourn.
SemiMarkovKernel estimate_kernel(const MarkovRenewalSample& sample, int t_max);

// Largest completed sojourn in the sample (convenience for choosing t_max).
int max_observed_sojourn(const MarkovRenewalSample& sample);

// Forward solve of the renewal evolution equation
//   phi_ij(t) = delta_ij (1 - H_i(t)) + sum_k sum_{tau=1..t} b_ik(tau) phi_kj(t-tau),
// with H_i(t) = 1 and b = 0 past t_max. Requires every row observed (or
// the fallback enabled).
TransitionProbabilityTable solve_evolution(const SemiMarkovKernel& kernel, int horizon);

}  // namespace smm
