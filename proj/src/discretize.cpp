#include "smm/discretize.hpp"

#include <algorithm>
#include <cmath>

#include "smm/errors.hpp"

namespace smm {

int ReturnGrid::state_of(double r) const {
  auto it = std::upper_bound(thresholds.begin(), thresholds.end(), r);
  return static_cast<int>(it - thresholds.begin());
}

int IndexGrid::level_of(double v) const {
  auto it = std::upper_bound(thresholds.begin(), thresholds.end(), v);
  return static_cast<int>(it - thresholds.begin());
}

std::vector<double> StateSeries::values() const {
  std::vector<double> out(states.size());
  for (std::size_t i = 0; i < states.size(); ++i)
    out[i] = state_values[static_cast<std::size_t>(states[i])];
  return out;
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw UsageError("quantile of empty sample");
  if (p <= 0.0) return sorted.front();
  if (p >= 1.0) return sorted.back();
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const double frac = h - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

namespace {

void check_strictly_increasing(const std::vector<double>& v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] > v[i - 1]))
      throw NumericError(std::string("degenerate grid: ") + what + " not strictly increasing");
}

double median_of(std::vector<double>& v) {
  if (v.empty()) throw NumericError("degenerate grid: empty cell");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

ReturnGrid fit_return_grid(const RawReturnSeries& returns, int num_states,
                           const ReturnGridOptions& opts) {
  if (num_states < 3 || num_states % 2 == 0)
    throw UsageError("num_states must be an odd integer >= 3");

  std::vector<double> sample = returns.concatenated();
  if (opts.training_prefix > 0 && opts.training_prefix < sample.size())
    sample.resize(opts.training_prefix);
  if (sample.size() < static_cast<std::size_t>(num_states))
    throw NumericError("degenerate grid: fewer returns than states");

  ReturnGrid grid;
  grid.mode = opts.mode;
  grid.num_states = num_states;
  const int half = (num_states - 1) / 2;

  if (opts.mode == GridMode::kFixedDelta) {
    if (!(opts.fixed_delta > 0.0)) throw UsageError("fixed-delta mode requires delta > 0");
    for (int k = half; k >= 1; --k)
      grid.thresholds.push_back(-(static_cast<double>(k) - 0.5) * opts.fixed_delta);
    for (int k = 1; k <= half; ++k)
      grid.thresholds.push_back((static_cast<double>(k) - 0.5) * opts.fixed_delta);
    for (int k = -half; k <= half; ++k)
      grid.state_values.push_back(static_cast<double>(k) * opts.fixed_delta);
    return grid;
  }

  // Quantile mode: cuts are |return| quantiles mirrored about zero.
  std::vector<double> levels = opts.quantile_levels;
  if (levels.empty()) {
    for (int k = 1; k <= half; ++k)
      levels.push_back(static_cast<double>(2 * k - 1) / static_cast<double>(num_states));
  }
  if (static_cast<int>(levels.size()) != half)
    throw UsageError("quantile_levels must have (num_states-1)/2 entries");

  std::vector<double> abs_sorted(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) abs_sorted[i] = std::fabs(sample[i]);
  std::sort(abs_sorted.begin(), abs_sorted.end());
  if (abs_sorted.back() == abs_sorted.front())
    throw NumericError("degenerate grid: all returns equal in magnitude");

  std::vector<double> cuts;
  for (double p : levels) {
    if (!(p > 0.0 && p < 1.0)) throw UsageError("quantile levels must lie in (0,1)");
    cuts.push_back(quantile_sorted(abs_sorted, p));
  }
  for (int k = half; k >= 1; --k) grid.thresholds.push_back(-cuts[static_cast<std::size_t>(k - 1)]);
  for (int k = 1; k <= half; ++k) grid.thresholds.push_back(cuts[static_cast<std::size_t>(k - 1)]);
  check_strictly_increasing(grid.thresholds, "thresholds");

  // State values: per-cell medians of the fitting sample, middle pinned to 0.
  std::vector<std::vector<double>> cells(static_cast<std::size_t>(num_states));
  for (double r : sample) cells[static_cast<std::size_t>(grid.state_of(r))].push_back(r);
  grid.state_values.resize(static_cast<std::size_t>(num_states));
  for (int s = 0; s < num_states; ++s) {
    if (s == grid.middle_state()) {
      grid.state_values[static_cast<std::size_t>(s)] = 0.0;
    } else if (!cells[static_cast<std::size_t>(s)].empty()) {
      grid.state_values[static_cast<std::size_t>(s)] = median_of(cells[static_cast<std::size_t>(s)]);
    } else {
      // Empty cell: fall back to the cell midpoint (outer cells extend by
      // one inner-cell width).
      const auto& th = grid.thresholds;
      if (s == 0)
        grid.state_values[0] = th.front() - 0.5 * (th[1] - th[0]);
      else if (s == num_states - 1)
        grid.state_values[static_cast<std::size_t>(s)] =
            th.back() + 0.5 * (th[th.size() - 1] - th[th.size() - 2]);
      else
        grid.state_values[static_cast<std::size_t>(s)] =
            0.5 * (th[static_cast<std::size_t>(s - 1)] + th[static_cast<std::size_t>(s)]);
    }
  }
  check_strictly_increasing(grid.state_values, "state values");
  return grid;
}

StateSeries discretize_returns(const RawReturnSeries& returns, const ReturnGrid& grid) {
  StateSeries out;
  out.num_states = grid.num_states;
  out.state_values = grid.state_values;
  out.states.reserve(returns.total_intraday());
  for (const auto& day : returns.day_returns) {
    out.day_starts.push_back(out.states.size());
    for (double r : day) out.states.push_back(grid.state_of(r));
  }
  return out;
}

IndexGrid fit_index_grid(const std::vector<double>& index_values, int num_levels) {
  if (num_levels < 2) throw UsageError("num_levels must be >= 2");
  if (index_values.size() < static_cast<std::size_t>(num_levels))
    throw NumericError("degenerate grid: fewer values than levels");

  std::vector<double> sorted = index_values;
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back())
    throw NumericError("degenerate grid: constant index values");

  IndexGrid grid;
  grid.num_levels = num_levels;
  for (int k = 1; k < num_levels; ++k)
    grid.thresholds.push_back(
        quantile_sorted(sorted, static_cast<double>(k) / static_cast<double>(num_levels)));
  check_strictly_increasing(grid.thresholds, "index thresholds");
  return grid;
}

}  // namespace smm
