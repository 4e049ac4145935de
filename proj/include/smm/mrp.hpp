#pragma once

#include <cstdint>
#include <vector>

#include "smm/discretize.hpp"

namespace smm {

// The (J_n, T_n) jump chain of a state series. Times are global minute
// indices into the concatenated series and are strictly increasing across
// the whole sample. `segment_starts` marks where a fresh clock begins
// (day boundaries under the default truncation convention); transitions
// are only ever counted between consecutive jumps of the same segment,
// and the final sojourn of each segment is censored.
struct MarkovRenewalSample {
  int num_states = 0;
  bool allow_self_transitions = false;
  std::vector<int> states;                  // J_n
  std::vector<std::int64_t> times;          // T_n
  std::vector<std::size_t> segment_starts;  // front() == 0 when non-empty
  std::int64_t end_time = 0;                // one past the last observed minute
  std::size_t single_jump_segments = 0;     // segments with nothing to estimate from

  std::size_t num_jumps() const { return states.size(); }

  // Count of (n, n+1) pairs lying inside one segment.
  std::size_t num_transitions() const;

  // True when jump n has a successor in its own segment.
  bool has_next(std::size_t n) const;

  // Duration covered by jump n's state: up to the next jump (segments are
  // time-contiguous) or to end_time for the last jump.
  std::int64_t sojourn_span(std::size_t n) const {
    return (n + 1 < times.size() ? times[n + 1] : end_time) - times[n];
  }
};

struct ExtractOptions {
  bool allow_self_transitions = false;   // true: every minute is a jump
  bool truncate_at_day_boundaries = true;
};

// Runs of a repeated state become single jumps (default); T_0 = 0 at the
// series start. Day boundaries cut runs and open a new segment unless
// concatenation is requested.
MarkovRenewalSample extract_mrp(const StateSeries& series, const ExtractOptions& opts = {});

// B(t): time since the most recent jump at or before t. Throws UsageError
// for t before the first jump.
std::int64_t backward_recurrence(const MarkovRenewalSample& sample, std::int64_t t);

}  // namespace smm
