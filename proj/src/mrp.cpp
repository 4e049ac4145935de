#include "smm/mrp.hpp"

#include <algorithm>

#include "smm/errors.hpp"

namespace smm {

std::size_t MarkovRenewalSample::num_transitions() const {
  std::size_t total = 0;
  for (std::size_t s = 0; s < segment_starts.size(); ++s) {
    const std::size_t begin = segment_starts[s];
    const std::size_t end = s + 1 < segment_starts.size() ? segment_starts[s + 1] : states.size();
    if (end > begin) total += end - begin - 1;
  }
  return total;
}

bool MarkovRenewalSample::has_next(std::size_t n) const {
  if (n + 1 >= states.size()) return false;
  // n+1 must not start a new segment.
  auto it = std::upper_bound(segment_starts.begin(), segment_starts.end(), n);
  return it == segment_starts.end() || *it != n + 1;
}

MarkovRenewalSample extract_mrp(const StateSeries& series, const ExtractOptions& opts) {
  if (series.states.empty()) throw DataError("cannot extract jump chain from an empty series");

  MarkovRenewalSample out;
  out.num_states = series.num_states;
  out.allow_self_transitions = opts.allow_self_transitions;
  out.end_time = static_cast<std::int64_t>(series.states.size());

  std::vector<std::size_t> boundaries;
  if (opts.truncate_at_day_boundaries && !series.day_starts.empty()) {
    boundaries = series.day_starts;
  } else {
    boundaries.push_back(0);
  }

  for (std::size_t b = 0; b < boundaries.size(); ++b) {
    const std::size_t begin = boundaries[b];
    const std::size_t end = b + 1 < boundaries.size() ? boundaries[b + 1] : series.states.size();
    if (begin >= end) continue;
    out.segment_starts.push_back(out.states.size());
    const std::size_t first_jump = out.states.size();
    for (std::size_t t = begin; t < end; ++t) {
      const bool is_jump =
          opts.allow_self_transitions || t == begin || series.states[t] != series.states[t - 1];
      if (is_jump) {
        out.states.push_back(series.states[t]);
        out.times.push_back(static_cast<std::int64_t>(t));
      }
    }
    if (out.states.size() - first_jump < 2) ++out.single_jump_segments;
  }
  return out;
}

std::int64_t backward_recurrence(const MarkovRenewalSample& sample, std::int64_t t) {
  if (sample.times.empty()) throw UsageError("backward recurrence on empty sample");
  if (t < sample.times.front()) throw UsageError("time precedes the first jump");
  auto it = std::upper_bound(sample.times.begin(), sample.times.end(), t);
  return t - *(it - 1);
}

}  // namespace smm
