#include "smm/kernel.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "smm/errors.hpp"

namespace smm {

namespace {

void check_state(const SemiMarkovKernel& k, int i, const char* what) {
  if (i < 0 || i >= k.num_states) throw UsageError(std::string(what) + " index out of range");
}

[[noreturn]] void throw_unobserved(int i) {
  throw DataError("state " + std::to_string(i) + " has no observed exits (enable fallback to proceed)");
}

}  // namespace

void SemiMarkovKernel::init(int states, int horizon) {
  num_states = states;
  t_max = horizon;
  const std::size_t n =
      static_cast<std::size_t>(states) * static_cast<std::size_t>(states) *
      static_cast<std::size_t>(horizon + 1);
  counts.assign(n, 0.0);
  exits.assign(static_cast<std::size_t>(states), 0.0);
  q.clear();
  h.clear();
}

void SemiMarkovKernel::add(int i, int j, int sojourn, double weight) {
  if (sojourn < 1 || sojourn > t_max) throw UsageError("sojourn outside [1, t_max]");
  counts[idx(i, j, sojourn)] += weight;
  exits[static_cast<std::size_t>(i)] += weight;
}

void SemiMarkovKernel::finalize() {
  q.assign(counts.size(), 0.0);
  h.assign(static_cast<std::size_t>(num_states) * static_cast<std::size_t>(t_max + 1), 0.0);
  for (int i = 0; i < num_states; ++i) {
    const double total = exits[static_cast<std::size_t>(i)];
    if (total <= 0.0) continue;
    for (int j = 0; j < num_states; ++j) {
      double cum = 0.0;
      for (int t = 0; t <= t_max; ++t) {
        cum += counts[idx(i, j, t)];
        q[idx(i, j, t)] = cum / total;
      }
    }
    for (int t = 0; t <= t_max; ++t) {
      double s = 0.0;
      for (int j = 0; j < num_states; ++j) s += q[idx(i, j, t)];
      h[static_cast<std::size_t>(i) * static_cast<std::size_t>(t_max + 1) +
        static_cast<std::size_t>(t)] = s;
    }
  }
}

double SemiMarkovKernel::Q(int i, int j, int t) const {
  check_state(*this, i, "state");
  check_state(*this, j, "state");
  if (t < 0) throw UsageError("negative time");
  if (!row_observed(i)) {
    if (!fallback_enabled) throw_unobserved(i);
    return t >= 1 ? 1.0 / static_cast<double>(num_states) : 0.0;
  }
  return q[idx(i, j, std::min(t, t_max))];
}

double SemiMarkovKernel::p_of(int i, int j) const { return Q(i, j, t_max); }

double SemiMarkovKernel::b_of(int i, int j, int t) const {
  if (t == 0) return 0.0;
  return Q(i, j, t) - Q(i, j, t - 1);
}

double SemiMarkovKernel::H_of(int i, int t) const {
  check_state(*this, i, "state");
  if (t < 0) throw UsageError("negative time");
  if (!row_observed(i)) {
    if (!fallback_enabled) throw_unobserved(i);
    return t >= 1 ? 1.0 : 0.0;
  }
  return h[static_cast<std::size_t>(i) * static_cast<std::size_t>(t_max + 1) +
           static_cast<std::size_t>(std::min(t, t_max))];
}

double SemiMarkovKernel::G_of(int i, int j, int t) const {
  const double p = p_of(i, j);
  if (p == 0.0) return 1.0;
  return Q(i, j, t) / p;
}

SemiMarkovKernel estimate_kernel(const MarkovRenewalSample& sample, int t_max) {
  if (sample.num_transitions() == 0)
    throw DataError("sample has no completed transitions to estimate from");
  const int longest = max_observed_sojourn(sample);
  if (t_max < longest)
    throw UsageError("t_max " + std::to_string(t_max) + " below max observed sojourn " +
                     std::to_string(longest));

  SemiMarkovKernel k;
  k.init(sample.num_states, t_max);
  k.allow_self_transitions = sample.allow_self_transitions;
  for (std::size_t n = 0; n + 1 < sample.num_jumps(); ++n) {
    if (!sample.has_next(n)) continue;
    const int sojourn = static_cast<int>(sample.times[n + 1] - sample.times[n]);
    k.add(sample.states[n], sample.states[n + 1], sojourn);
  }
  k.finalize();
  return k;
}

int max_observed_sojourn(const MarkovRenewalSample& sample) {
  std::int64_t longest = 0;
  for (std::size_t n = 0; n + 1 < sample.num_jumps(); ++n)
    if (sample.has_next(n))
      longest = std::max(longest, sample.times[n + 1] - sample.times[n]);
  return static_cast<int>(longest);
}

TransitionProbabilityTable solve_evolution(const SemiMarkovKernel& kernel, int horizon) {
  if (horizon < 0) throw UsageError("negative horizon");
  for (int i = 0; i < kernel.num_states; ++i)
    if (!kernel.row_observed(i) && !kernel.fallback_enabled) throw_unobserved(i);

  const int S = kernel.num_states;
  TransitionProbabilityTable table;
  table.num_states = S;
  table.horizon = horizon;
  table.phi.assign(static_cast<std::size_t>(horizon + 1) * static_cast<std::size_t>(S) *
                       static_cast<std::size_t>(S),
                   0.0);
  auto phi_at = [&](int t, int i, int j) -> double& {
    return table.phi[(static_cast<std::size_t>(t) * static_cast<std::size_t>(S) +
                      static_cast<std::size_t>(i)) *
                         static_cast<std::size_t>(S) +
                     static_cast<std::size_t>(j)];
  };

  for (int i = 0; i < S; ++i) phi_at(0, i, i) = 1.0;   // H_i(0) = 0

  // Flatten b and H once; past t_max the mass is exhausted (H = 1, b = 0).
  const int tmax = kernel.t_max;
  std::vector<double> b(static_cast<std::size_t>(S) * static_cast<std::size_t>(S) *
                            static_cast<std::size_t>(tmax + 1),
                        0.0);
  for (int i = 0; i < S; ++i)
    for (int k = 0; k < S; ++k)
      for (int tau = 1; tau <= tmax; ++tau)
        b[(static_cast<std::size_t>(i) * static_cast<std::size_t>(S) +
           static_cast<std::size_t>(k)) *
              static_cast<std::size_t>(tmax + 1) +
          static_cast<std::size_t>(tau)] = kernel.b_of(i, k, tau);

  std::vector<double> acc(static_cast<std::size_t>(S));
  for (int t = 1; t <= horizon; ++t) {
    const int tau_hi = std::min(t, tmax);
    for (int i = 0; i < S; ++i) {
      const double survive = 1.0 - kernel.H_of(i, t);
      for (int j = 0; j < S; ++j) acc[static_cast<std::size_t>(j)] = i == j ? survive : 0.0;
      for (int k = 0; k < S; ++k) {
        const double* bik = &b[(static_cast<std::size_t>(i) * static_cast<std::size_t>(S) +
                                static_cast<std::size_t>(k)) *
                               static_cast<std::size_t>(tmax + 1)];
        for (int tau = 1; tau <= tau_hi; ++tau) {
          const double w = bik[tau];
          if (w == 0.0) continue;
          const double* prev = &table.phi[(static_cast<std::size_t>(t - tau) *
                                               static_cast<std::size_t>(S) +
                                           static_cast<std::size_t>(k)) *
                                          static_cast<std::size_t>(S)];
          for (int j = 0; j < S; ++j) acc[static_cast<std::size_t>(j)] += w * prev[j];
        }
      }
      for (int j = 0; j < S; ++j) phi_at(t, i, j) = acc[static_cast<std::size_t>(j)];
    }
  }
  return table;
}

}  // namespace smm
