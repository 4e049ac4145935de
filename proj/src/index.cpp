#include "smm/index.hpp"

#include <algorithm>
#include <cmath>

#include "smm/errors.hpp"

namespace smm {

const char* index_kind_name(IndexKind kind) {
  switch (kind) {
    case IndexKind::kMovingAverage: return "moving_average";
    case IndexKind::kEwma: return "ewma";
    case IndexKind::kEwmaWindowed: return "ewma_windowed";
  }
  return "?";
}

IndexKind index_kind_from_name(const std::string& name) {
  if (name == "moving_average" || name == "ma") return IndexKind::kMovingAverage;
  if (name == "ewma") return IndexKind::kEwma;
  if (name == "ewma_windowed") return IndexKind::kEwmaWindowed;
  throw ConfigError("unknown index kind '" + name + "'");
}

void IndexConfig::validate() const {
  if (kind != IndexKind::kEwma && m < 1) throw UsageError("index window m must be >= 1");
  if (kind != IndexKind::kMovingAverage && !(lambda > 0.0 && lambda <= 1.0))
    throw UsageError("lambda must lie in (0, 1]");
  for (double v : initial_history)
    if (!std::isfinite(v)) throw UsageError("initial_history values must be finite");
}

void IndexConfig::resolve_f(const std::vector<double>& state_values) {
  f_values.resize(state_values.size());
  if (f_id == "squared_value") {
    for (std::size_t j = 0; j < state_values.size(); ++j)
      f_values[j] = state_values[j] * state_values[j];
  } else if (f_id == "abs_value") {
    for (std::size_t j = 0; j < state_values.size(); ++j) f_values[j] = std::fabs(state_values[j]);
  } else if (f_id == "squared_label") {
    for (std::size_t j = 0; j < state_values.size(); ++j)
      f_values[j] = static_cast<double>(j) * static_cast<double>(j);
  } else {
    throw ConfigError("unknown rate function id '" + f_id + "'");
  }
}

IndexAccumulator::IndexAccumulator(const IndexConfig& cfg)
    : kind_(cfg.kind),
      window_(cfg.kind == IndexKind::kMovingAverage  ? static_cast<std::size_t>(cfg.m) + 1
              : cfg.kind == IndexKind::kEwmaWindowed ? static_cast<std::size_t>(cfg.m)
                                                     : 0),
      lambda_(cfg.lambda) {}

void IndexAccumulator::push_sojourn(double f_value, std::int64_t duration) {
  if (duration < 1) throw UsageError("sojourn duration must be >= 1");
  clock_ += duration;

  if (kind_ == IndexKind::kMovingAverage) {
    const double dur = static_cast<double>(duration);
    sum_f_dur_ += f_value * dur;
    sum_dur_ += dur;
    entries_.push_back({f_value, dur, clock_});
    if (entries_.size() > window_) {
      const Entry& e = entries_.front();
      sum_f_dur_ -= e.f * e.mass;
      sum_dur_ -= e.mass;
      entries_.pop_front();
    }
    return;
  }

  // EWMA: fold the sojourn in with its geometric weight sum
  //   sum_{a in sojourn} lambda^(T_end - a) = lambda (1 - lambda^dur) / (1 - lambda).
  double decay, geo_mass;
  if (lambda_ == 1.0) {
    decay = 1.0;
    geo_mass = static_cast<double>(duration);
  } else {
    decay = std::pow(lambda_, static_cast<double>(duration));
    geo_mass = lambda_ * (1.0 - decay) / (1.0 - lambda_);
  }
  num_ = num_ * decay + f_value * geo_mass;
  den_ = den_ * decay + geo_mass;

  if (kind_ == IndexKind::kEwmaWindowed) {
    tail_num_ *= decay;
    tail_den_ *= decay;
    entries_.push_back({f_value, geo_mass, clock_});
    if (entries_.size() > window_) {
      const Entry& e = entries_.front();
      const double shift =
          lambda_ == 1.0 ? 1.0 : std::pow(lambda_, static_cast<double>(clock_ - e.end_clock));
      tail_num_ += e.f * e.mass * shift;
      tail_den_ += e.mass * shift;
      entries_.pop_front();
    }
  }
}

bool IndexAccumulator::ready() const {
  // A partially filled window still averages what it has; only an empty
  // history has no formula value.
  switch (kind_) {
    case IndexKind::kMovingAverage: return !entries_.empty();
    case IndexKind::kEwma: return den_ > 0.0;
    case IndexKind::kEwmaWindowed: return !entries_.empty();
  }
  return false;
}

double IndexAccumulator::value() const {
  if (!ready()) throw UsageError("index accumulator lacks history");
  switch (kind_) {
    case IndexKind::kMovingAverage: return sum_f_dur_ / sum_dur_;
    case IndexKind::kEwma: return num_ / den_;
    case IndexKind::kEwmaWindowed: return (num_ - tail_num_) / (den_ - tail_den_);
  }
  return 0.0;
}

namespace {

void check_f_values(const IndexConfig& cfg, int num_states) {
  if (!cfg.f_values.empty() && cfg.f_values.size() < static_cast<std::size_t>(num_states))
    throw UsageError("f_values shorter than the state space");
}

double default_initial(const IndexConfig& cfg, const MarkovRenewalSample& sample) {
  if (!cfg.initial_history.empty()) return 0.0;   // unused
  double s = 0.0;
  for (int j : sample.states) s += cfg.f_of(j);
  return sample.states.empty() ? 0.0 : s / static_cast<double>(sample.states.size());
}

double effective_initial(const IndexConfig& cfg, double fallback, std::size_t n) {
  if (cfg.initial_history.empty()) return fallback;
  return cfg.initial_history[std::min(n, cfg.initial_history.size() - 1)];
}

// Epochs whose window would reach into the pre-sample period. Explicitly
// supplied initial_history values take precedence there; otherwise the
// accumulated (possibly truncated) history is used.
bool wants_explicit_initial(const IndexConfig& cfg, std::size_t completed_sojourns) {
  if (cfg.initial_history.empty()) return false;
  if (cfg.kind == IndexKind::kMovingAverage)
    return completed_sojourns < static_cast<std::size_t>(cfg.m) + 1;
  return completed_sojourns == 0;
}

std::size_t jump_at_or_before(const MarkovRenewalSample& sample, std::int64_t t) {
  auto it = std::upper_bound(sample.times.begin(), sample.times.end(), t);
  if (it == sample.times.begin()) throw UsageError("time precedes the first jump");
  return static_cast<std::size_t>(it - sample.times.begin()) - 1;
}

}  // namespace

IndexSeries compute_index(const MarkovRenewalSample& sample, const IndexConfig& cfg) {
  cfg.validate();
  check_f_values(cfg, sample.num_states);

  IndexSeries out;
  out.config = cfg;
  out.at_jumps.resize(sample.num_jumps());
  const double fallback = default_initial(cfg, sample);

  IndexAccumulator acc(cfg);
  for (std::size_t n = 0; n < sample.num_jumps(); ++n) {
    if (wants_explicit_initial(cfg, n) || !acc.ready())
      out.at_jumps[n] = effective_initial(cfg, fallback, n);
    else
      out.at_jumps[n] = acc.value();
    if (n + 1 < sample.num_jumps())
      acc.push_sojourn(cfg.f_of(sample.states[n]), sample.sojourn_span(n));
  }
  return out;
}

IndexSeries index_ma(const MarkovRenewalSample& sample, const IndexConfig& cfg) {
  if (cfg.kind != IndexKind::kMovingAverage) throw UsageError("config kind is not moving_average");
  return compute_index(sample, cfg);
}

IndexSeries index_ewma(const MarkovRenewalSample& sample, const IndexConfig& cfg) {
  if (cfg.kind != IndexKind::kEwma) throw UsageError("config kind is not ewma");
  return compute_index(sample, cfg);
}

IndexSeries index_ewma_windowed(const MarkovRenewalSample& sample, const IndexConfig& cfg) {
  if (cfg.kind != IndexKind::kEwmaWindowed) throw UsageError("config kind is not ewma_windowed");
  return compute_index(sample, cfg);
}

namespace {

double index_at_time_impl(const MarkovRenewalSample& sample, const IndexConfig& cfg,
                          std::int64_t t, double fallback) {
  if (sample.times.empty()) throw UsageError("empty sample");
  if (t > sample.end_time) throw UsageError("time beyond the observed span");
  const std::size_t n = jump_at_or_before(sample, t);

  if (cfg.kind == IndexKind::kMovingAverage) {
    // Window anchored at the last completed transition when t is mid-sojourn.
    const bool at_jump = t == sample.times[n];
    const std::int64_t base = static_cast<std::int64_t>(n) - (at_jump ? 1 : 0);
    if (base < 0) return effective_initial(cfg, fallback, n);
    if (wants_explicit_initial(cfg, static_cast<std::size_t>(base) + 1))
      return effective_initial(cfg, fallback, n);
    const std::int64_t first = std::max<std::int64_t>(0, base - cfg.m);
    double mass = 0.0;
    for (std::int64_t r = first; r <= base; ++r) {
      const std::size_t rr = static_cast<std::size_t>(r);
      const std::int64_t lo = sample.times[rr];
      const std::int64_t hi =
          std::min<std::int64_t>(t, rr + 1 < sample.times.size() ? sample.times[rr + 1]
                                                                 : sample.end_time);
      mass += cfg.f_of(sample.states[rr]) * static_cast<double>(hi - lo);
    }
    const double span = static_cast<double>(t - sample.times[static_cast<std::size_t>(first)]);
    return mass / span;
  }

  // EWMA kinds: weights lambda^(t - a) over minutes a < t, window in sojourns.
  const std::size_t started = n + (t > sample.times[n] ? 1 : 0);
  if (started == 0) return effective_initial(cfg, fallback, n);
  std::size_t first = 0;
  if (cfg.kind == IndexKind::kEwmaWindowed && started > static_cast<std::size_t>(cfg.m))
    first = started - static_cast<std::size_t>(cfg.m);

  double num = 0.0, den = 0.0;
  for (std::size_t r = first; r < started; ++r) {
    const std::int64_t lo = sample.times[r];
    const std::int64_t hi = std::min<std::int64_t>(
        t, r + 1 < sample.times.size() ? sample.times[r + 1] : sample.end_time);
    const std::int64_t dur = hi - lo;
    if (dur <= 0) continue;
    double w;
    if (cfg.lambda == 1.0) {
      w = static_cast<double>(dur);
    } else {
      // sum_{a=lo}^{hi-1} lambda^(t-a) = lambda^(t-hi+1) (1-lambda^dur)/(1-lambda)
      w = std::pow(cfg.lambda, static_cast<double>(t - hi + 1)) *
          (1.0 - std::pow(cfg.lambda, static_cast<double>(dur))) / (1.0 - cfg.lambda);
    }
    num += cfg.f_of(sample.states[r]) * w;
    den += w;
  }
  if (den <= 0.0) return effective_initial(cfg, fallback, n);
  return num / den;
}

}  // namespace

double index_at_time(const MarkovRenewalSample& sample, const IndexConfig& cfg, std::int64_t t) {
  cfg.validate();
  check_f_values(cfg, sample.num_states);
  return index_at_time_impl(sample, cfg, t, default_initial(cfg, sample));
}

std::vector<double> index_minute_values(const MarkovRenewalSample& sample, const IndexConfig& cfg) {
  cfg.validate();
  check_f_values(cfg, sample.num_states);
  if (sample.times.empty()) return {};
  const std::int64_t t0 = sample.times.front();
  const std::int64_t t_end = sample.end_time;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(t_end - t0));
  const double fallback = default_initial(cfg, sample);

  if (cfg.kind == IndexKind::kEwma) {
    double num = 0.0, den = 0.0;
    std::size_t r = 0;
    for (std::int64_t t = t0; t < t_end; ++t) {
      out.push_back(den > 0.0 ? num / den
                              : effective_initial(cfg, fallback, jump_at_or_before(sample, t)));
      while (r + 1 < sample.times.size() && sample.times[r + 1] <= t) ++r;
      const double g = cfg.f_of(sample.states[r]);
      num = cfg.lambda * (num + g);
      den = cfg.lambda * (den + 1.0);
    }
    return out;
  }

  // Moving-average and windowed-EWMA: point query per minute, O(m) each.
  for (std::int64_t t = t0; t < t_end; ++t)
    out.push_back(index_at_time_impl(sample, cfg, t, fallback));
  return out;
}

}  // namespace smm
