#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smm/discretize.hpp"
#include "smm/index.hpp"
#include "smm/indexed_kernel.hpp"
#include "smm/kernel.hpp"

namespace smm {

struct KernelEntry {
  int i = 0, j = 0, sojourn = 1;
  double weight = 0.0;
};

struct IndexedEntry {
  int i = 0, level = 0, j = 0, sojourn = 1;
  double weight = 0.0;
};

// Self-contained data generator in place of proprietary tick feeds.
// known-kernel emits from an explicit semi-Markov kernel; clustered-wismc
// from an explicit 2-level indexed kernel whose high-volatility level has
// fatter-tailed transition rows, so volatility clustering is present by
// construction.
struct SyntheticGeneratorSpec {
  std::string kind = "known-kernel";   // known-kernel | clustered-wismc
  std::uint64_t seed = 1;
  std::int64_t horizon = 0;
  int initial_state = 0;
  int num_states = 0;
  int t_max = 0;
  std::vector<double> state_values;
  std::vector<KernelEntry> kernel_entries;

  // clustered-wismc only.
  int num_levels = 2;
  std::vector<double> level_thresholds;
  IndexConfig index_config;
  std::vector<IndexedEntry> indexed_entries;
  std::int64_t warmup_minutes = 1000;

  void validate() const;   // throws ConfigError on an invalid kernel spec
};

// Normalized kernel from explicit (i, j, sojourn, weight) rows.
SemiMarkovKernel build_kernel(int num_states, int t_max,
                              const std::vector<KernelEntry>& entries);

// Explicit indexed kernel; the fallback is the level-aggregated kernel and
// back-off is disabled for populated cells (threshold 0).
IndexedKernel build_indexed_kernel(const SyntheticGeneratorSpec& spec);

// Minute-level state series from the configured generator. A zero
// horizon yields an empty series.
StateSeries generate_synthetic(const SyntheticGeneratorSpec& spec);

std::vector<std::string> synthetic_preset_names();
SyntheticGeneratorSpec synthetic_preset(const std::string& name);

}  // namespace smm
