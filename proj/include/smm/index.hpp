#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "smm/mrp.hpp"

namespace smm {

enum class IndexKind { kMovingAverage, kEwma, kEwmaWindowed };

const char* index_kind_name(IndexKind kind);
IndexKind index_kind_from_name(const std::string& name);

// Volatility index configuration. The rate function f maps a state label
// to a reward-per-minute value; `f_values` holds it resolved per label
// (empty means f(j) = j^2 on the raw label, the convention used by the
// hand-calculable tests). Pre-sample index values are "known": epochs
// without enough history read from `initial_history` (last entry repeats),
// or default to the sample-wide mean of f over the jump chain.
struct IndexConfig {
  IndexKind kind = IndexKind::kEwma;
  int m = 1;                      // window in transitions (kMovingAverage, kEwmaWindowed)
  double lambda = 0.97;           // weight in (0, 1] (EWMA kinds)
  std::string f_id = "squared_value";
  std::vector<double> f_values;
  std::vector<double> initial_history;

  double f_of(int state) const {
    return f_values.empty() ? static_cast<double>(state) * static_cast<double>(state)
                            : f_values[static_cast<std::size_t>(state)];
  }
  void validate() const;

  // Fill f_values from f_id and the label -> value map. Known ids:
  // squared_value (default), abs_value, squared_label.
  void resolve_f(const std::vector<double>& state_values);
};

// Index values at jump epochs, aligned with the sample's jumps.
struct IndexSeries {
  IndexConfig config;
  std::vector<double> at_jumps;   // U_n
};

// Streaming index state over completed sojourns. One push per sojourn
// (state's f value and its duration in minutes); value() is the index at
// the epoch right after everything pushed so far. O(1) amortized per push
// for every kind; EWMA updates use the per-sojourn geometric closed form,
// so a sojourn of any length costs the same.
class IndexAccumulator {
 public:
  explicit IndexAccumulator(const IndexConfig& cfg);

  void push_sojourn(double f_value, std::int64_t duration);
  bool ready() const;      // enough history for the formula (full window for MA)
  double value() const;    // requires ready()

 private:
  struct Entry {
    double f;
    double mass;              // duration (MA) or weight sum at the sojourn's end (EWMA)
    std::int64_t end_clock;   // cumulative minutes when the sojourn ended
  };

  IndexKind kind_;
  std::size_t window_;      // m+1 sojourns for MA, m for windowed EWMA
  double lambda_;
  std::int64_t clock_ = 0;  // total minutes pushed

  // MA state.
  double sum_f_dur_ = 0.0;
  double sum_dur_ = 0.0;
  // EWMA state (full history), plus the expired tail for the windowed kind.
  double num_ = 0.0;
  double den_ = 0.0;
  double tail_num_ = 0.0;
  double tail_den_ = 0.0;
  std::deque<Entry> entries_;
};

// U_n over the whole sample for the configured kind. Sojourn spans cover
// every observed minute (a censored day-end run still contributes its
// minutes to later epochs' histories).
IndexSeries compute_index(const MarkovRenewalSample& sample, const IndexConfig& cfg);

// Named variants; these just validate the kind and call compute_index.
IndexSeries index_ma(const MarkovRenewalSample& sample, const IndexConfig& cfg);
IndexSeries index_ewma(const MarkovRenewalSample& sample, const IndexConfig& cfg);
IndexSeries index_ewma_windowed(const MarkovRenewalSample& sample, const IndexConfig& cfg);

// Index evaluated at an arbitrary minute. At t = T_n this matches U_n.
// Mid-sojourn, the moving-average kind freezes the window at the last
// completed transition and lets the running sojourn accrue, while the
// EWMA kinds count the running sojourn as already begun (the two kinds
// use different mid-sojourn indicator conventions by definition).
double index_at_time(const MarkovRenewalSample& sample, const IndexConfig& cfg, std::int64_t t);

// One value per minute of [T_0, end_time), streamed in O(total minutes).
std::vector<double> index_minute_values(const MarkovRenewalSample& sample, const IndexConfig& cfg);

}  // namespace smm
