#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "smm/ingest.hpp"

namespace smm {

enum class GridMode { kQuantile, kFixedDelta };

// Symmetric return grid: an odd number of cells with cut points mirrored
// about zero and a representative value per cell (middle value exactly 0).
struct ReturnGrid {
  GridMode mode = GridMode::kQuantile;
  int num_states = 5;
  std::vector<double> thresholds;     // num_states - 1, strictly increasing
  std::vector<double> state_values;   // num_states, strictly increasing

  int middle_state() const { return num_states / 2; }

  // Half-open cells; a value exactly on a cut goes to the higher cell.
  int state_of(double r) const;
};

// Quantile cut points over index values; num_levels cells covering R.
struct IndexGrid {
  int num_levels = 5;
  std::vector<double> thresholds;   // num_levels - 1, strictly increasing

  int level_of(double v) const;
};

// Minute-resolution state labels plus day boundaries and the value map
// needed to go back from labels to return magnitudes.
struct StateSeries {
  int num_states = 0;
  std::vector<int> states;               // labels in [0, num_states)
  std::vector<std::size_t> day_starts;   // first index of each day; front() == 0
  std::vector<double> state_values;      // label -> representative return

  std::size_t size() const { return states.size(); }
  std::vector<double> values() const;    // states mapped through state_values
};

// Interpolating empirical quantile (linear between order statistics, the
// convention with h = p*(n-1)). `sorted` must be ascending.
double quantile_sorted(const std::vector<double>& sorted, double p);

struct ReturnGridOptions {
  GridMode mode = GridMode::kQuantile;
  double fixed_delta = 0.0;               // required for kFixedDelta
  // |return| quantile levels for the positive cut points, innermost first.
  // Empty means equiprobable cells: (2k-1)/num_states, k = 1..(num_states-1)/2.
  std::vector<double> quantile_levels;
  // Fit on the first training_prefix returns only (0 = full sample).
  std::size_t training_prefix = 0;
};

// Fits the symmetric grid. Quantile mode mirrors |return| quantiles about
// zero and uses per-cell medians as state values (middle forced to 0);
// fixed-delta mode puts cuts at +/- delta/2, +/- 3*delta/2, ... with state
// values at the delta multiples. Throws NumericError when the data cannot
// support strictly increasing cuts.
ReturnGrid fit_return_grid(const RawReturnSeries& returns, int num_states,
                           const ReturnGridOptions& opts = {});

StateSeries discretize_returns(const RawReturnSeries& returns, const ReturnGrid& grid);

// Equal-mass cut points for index levels.
IndexGrid fit_index_grid(const std::vector<double>& index_values, int num_levels);

}  // namespace smm
