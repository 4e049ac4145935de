#include "smm/io.hpp"

#include <fstream>
#include <sstream>

#include "smm/errors.hpp"
#include "smm/fingerprint.hpp"
#include "smm/text_io.hpp"

namespace smm {

namespace {

class LineReader {
 public:
  LineReader(const std::string& path, const char* magic) : path_(path), in_(path) {
    if (!in_) throw DataError("cannot open '" + path + "'");
    std::string header;
    if (!next_line(header) || header != magic)
      throw DataError("'" + path + "' is not a " + std::string(magic) + " file");
  }

  bool next_line(std::string& line) {
    while (std::getline(in_, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  }

  std::vector<std::string> expect(const char* key, std::size_t min_fields) {
    std::string line;
    if (!next_line(line)) throw DataError("'" + path_ + "': missing '" + key + "' line");
    auto f = split_ws(line);
    if (f.empty() || f[0] != key || f.size() < min_fields + 1)
      throw DataError("'" + path_ + "': expected '" + key + "' line, got '" + line + "'");
    f.erase(f.begin());
    return f;
  }

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
};

std::vector<double> parse_doubles(const std::vector<std::string>& fields) {
  std::vector<double> out;
  out.reserve(fields.size());
  for (const auto& f : fields) out.push_back(require_f64(f, "value"));
  return out;
}

void join_doubles(std::ostringstream& os, const std::vector<double>& v) {
  for (double x : v) os << ' ' << fmt_double(x);
}

int parse_hhmm(const std::string& s) {
  if (s.size() != 5 || s[2] != ':') throw DataError("bad time-of-day '" + s + "'");
  const int h = static_cast<int>(require_i64(s.substr(0, 2), "hour"));
  const int m = static_cast<int>(require_i64(s.substr(3, 2), "minute"));
  if (h < 0 || h > 23 || m < 0 || m > 59) throw DataError("bad time-of-day '" + s + "'");
  return h * 60 + m;
}

std::string fmt_hhmm(int minutes) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%02d:%02d", minutes / 60, minutes % 60);
  return buf;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << content;
  if (!out) throw DataError("write to '" + path + "' failed");
}

std::string file_fingerprint(const std::string& path) { return fingerprint_hex(read_file(path)); }

// ---------------------------------------------------------------- calendar

TradingCalendar read_calendar(const std::string& path) {
  LineReader r(path, "smm-calendar v1");
  TradingCalendar cal;
  cal.id = r.expect("id", 1)[0];
  cal.nominal.open_minute = parse_hhmm(r.expect("open", 1)[0]);
  cal.nominal.close_minute = parse_hhmm(r.expect("close", 1)[0]);
  if (cal.nominal.open_minute >= cal.nominal.close_minute)
    throw DataError("calendar open must precede close");
  std::string line;
  while (r.next_line(line)) {
    auto f = split_ws(line);
    if (f.size() != 4 || f[0] != "override")
      throw DataError("'" + path + "': bad override line '" + line + "'");
    SessionHours h{parse_hhmm(f[2]), parse_hhmm(f[3])};
    if (h.open_minute >= h.close_minute) throw DataError("override open must precede close");
    cal.overrides[static_cast<int>(require_i64(f[1], "date"))] = h;
  }
  return cal;
}

void write_calendar(const std::string& path, const TradingCalendar& cal) {
  std::ostringstream os;
  os << "smm-calendar v1\n";
  os << "id " << cal.id << "\n";
  os << "open " << fmt_hhmm(cal.nominal.open_minute) << "\n";
  os << "close " << fmt_hhmm(cal.nominal.close_minute) << "\n";
  for (const auto& [date, hours] : cal.overrides)
    os << "override " << date << ' ' << fmt_hhmm(hours.open_minute) << ' '
       << fmt_hhmm(hours.close_minute) << "\n";
  write_file(path, os.str());
}

// ------------------------------------------------------------------ prices

void write_prices(const std::string& path, const PriceSeries& prices) {
  std::ostringstream os;
  os << "smm-prices v1\n";
  os << "symbol " << (prices.symbol.empty() ? "-" : prices.symbol) << "\n";
  os << "calendar " << (prices.calendar_id.empty() ? "-" : prices.calendar_id) << "\n";
  os << "rule " << prices.rule_id << "\n";
  os << "skipped_days " << prices.skipped_days << "\n";
  os << "days " << prices.days.size() << "\n";
  for (const auto& day : prices.days) {
    os << "day " << day.date << ' ' << day.first_minute << ' ' << day.prices.size() << "\n";
    for (std::size_t k = 0; k < day.prices.size(); ++k)
      os << day.first_minute + static_cast<int>(k) << ' ' << fmt_double(day.prices[k]) << "\n";
  }
  write_file(path, os.str());
}

PriceSeries read_prices(const std::string& path) {
  LineReader r(path, "smm-prices v1");
  PriceSeries out;
  out.symbol = r.expect("symbol", 1)[0];
  if (out.symbol == "-") out.symbol.clear();
  out.calendar_id = r.expect("calendar", 1)[0];
  if (out.calendar_id == "-") out.calendar_id.clear();
  out.rule_id = r.expect("rule", 1)[0];
  out.skipped_days = static_cast<std::size_t>(require_i64(r.expect("skipped_days", 1)[0], "count"));
  const auto n_days = require_i64(r.expect("days", 1)[0], "days");
  for (long long d = 0; d < n_days; ++d) {
    auto hdr = r.expect("day", 3);
    DayPrices day;
    day.date = static_cast<int>(require_i64(hdr[0], "date"));
    day.first_minute = static_cast<int>(require_i64(hdr[1], "first_minute"));
    const auto count = require_i64(hdr[2], "count");
    day.prices.reserve(static_cast<std::size_t>(count));
    std::string line;
    for (long long k = 0; k < count; ++k) {
      if (!r.next_line(line)) throw DataError("'" + path + "': truncated day block");
      auto f = split_ws(line);
      if (f.size() != 2) throw DataError("'" + path + "': bad price row '" + line + "'");
      const double px = require_f64(f[1], "price");
      if (px <= 0.0) throw DataError("'" + path + "': non-positive price");
      day.prices.push_back(px);
    }
    out.days.push_back(std::move(day));
  }
  return out;
}

// ------------------------------------------------------------------- grids

void write_return_grid(const std::string& path, const ReturnGrid& grid) {
  std::ostringstream os;
  os << "smm-grid v1\n";
  os << "mode " << (grid.mode == GridMode::kQuantile ? "quantile" : "fixed-delta") << "\n";
  os << "num_states " << grid.num_states << "\n";
  os << "thresholds";
  join_doubles(os, grid.thresholds);
  os << "\nstate_values";
  join_doubles(os, grid.state_values);
  os << "\n";
  write_file(path, os.str());
}

ReturnGrid read_return_grid(const std::string& path) {
  LineReader r(path, "smm-grid v1");
  ReturnGrid grid;
  const std::string mode = r.expect("mode", 1)[0];
  if (mode == "quantile")
    grid.mode = GridMode::kQuantile;
  else if (mode == "fixed-delta")
    grid.mode = GridMode::kFixedDelta;
  else
    throw DataError("unknown grid mode '" + mode + "'");
  grid.num_states = static_cast<int>(require_i64(r.expect("num_states", 1)[0], "num_states"));
  grid.thresholds = parse_doubles(r.expect("thresholds", 0));
  grid.state_values = parse_doubles(r.expect("state_values", 0));
  if (grid.thresholds.size() + 1 != grid.state_values.size() ||
      grid.state_values.size() != static_cast<std::size_t>(grid.num_states))
    throw DataError("'" + path + "': inconsistent grid sizes");
  return grid;
}

// ------------------------------------------------------------------ states

void write_states(const std::string& path, const StateSeries& series) {
  std::ostringstream os;
  os << "smm-states v1\n";
  os << "num_states " << series.num_states << "\n";
  os << "minutes " << series.states.size() << "\n";
  os << "state_values";
  join_doubles(os, series.state_values);
  os << "\n";
  os << "days " << series.day_starts.size() << "\n";
  for (std::size_t d = 0; d < series.day_starts.size(); ++d) {
    const std::size_t lo = series.day_starts[d];
    const std::size_t hi =
        d + 1 < series.day_starts.size() ? series.day_starts[d + 1] : series.states.size();
    os << "day " << hi - lo << "\n";
    for (std::size_t t = lo; t < hi; ++t) {
      os << series.states[t];
      os << (t + 1 == hi ? '\n' : ' ');
    }
  }
  write_file(path, os.str());
}

StateSeries read_states(const std::string& path) {
  LineReader r(path, "smm-states v1");
  StateSeries out;
  out.num_states = static_cast<int>(require_i64(r.expect("num_states", 1)[0], "num_states"));
  const auto minutes = require_i64(r.expect("minutes", 1)[0], "minutes");
  out.state_values = parse_doubles(r.expect("state_values", 0));
  if (out.state_values.size() != static_cast<std::size_t>(out.num_states))
    throw DataError("'" + path + "': state_values size mismatch");
  const auto days = require_i64(r.expect("days", 1)[0], "days");
  out.states.reserve(static_cast<std::size_t>(minutes));
  for (long long d = 0; d < days; ++d) {
    const auto count = require_i64(r.expect("day", 1)[0], "day length");
    out.day_starts.push_back(out.states.size());
    std::string line;
    long long seen = 0;
    while (seen < count) {
      if (!r.next_line(line)) throw DataError("'" + path + "': truncated state block");
      for (const auto& tok : split_ws(line)) {
        const int s = static_cast<int>(require_i64(tok, "state"));
        if (s < 0 || s >= out.num_states) throw DataError("'" + path + "': state out of range");
        out.states.push_back(s);
        ++seen;
      }
    }
    if (seen != count) throw DataError("'" + path + "': day length mismatch");
  }
  if (out.states.size() != static_cast<std::size_t>(minutes))
    throw DataError("'" + path + "': minute count mismatch");
  return out;
}

// ------------------------------------------------------------------ kernel

namespace {

void write_kernel_body(std::ostringstream& os, const SemiMarkovKernel& k, const char* tag) {
  std::vector<std::size_t> rows;
  for (int i = 0; i < k.num_states; ++i)
    for (int j = 0; j < k.num_states; ++j)
      for (int t = 1; t <= k.t_max; ++t)
        if (k.counts[k.idx(i, j, t)] != 0.0)
          rows.push_back(k.idx(i, j, t));
  os << tag << ' ' << rows.size() << "\n";
  for (int i = 0; i < k.num_states; ++i)
    for (int j = 0; j < k.num_states; ++j)
      for (int t = 1; t <= k.t_max; ++t) {
        const double c = k.counts[k.idx(i, j, t)];
        if (c != 0.0) os << i << ' ' << j << ' ' << t << ' ' << fmt_double(c) << "\n";
      }
}

void read_kernel_body(LineReader& r, SemiMarkovKernel& k, const char* tag) {
  const auto n = require_i64(r.expect(tag, 1)[0], "entry count");
  std::string line;
  for (long long e = 0; e < n; ++e) {
    if (!r.next_line(line)) throw DataError("truncated kernel body");
    auto f = split_ws(line);
    if (f.size() != 4) throw DataError("bad kernel entry '" + line + "'");
    k.add(static_cast<int>(require_i64(f[0], "i")), static_cast<int>(require_i64(f[1], "j")),
          static_cast<int>(require_i64(f[2], "sojourn")), require_f64(f[3], "count"));
  }
  k.finalize();
}

}  // namespace

void write_kernel(const std::string& path, const SemiMarkovKernel& kernel) {
  std::ostringstream os;
  os << "smm-kernel v1\n";
  os << "num_states " << kernel.num_states << "\n";
  os << "t_max " << kernel.t_max << "\n";
  os << "allow_self_transitions " << (kernel.allow_self_transitions ? 1 : 0) << "\n";
  os << "fallback_enabled " << (kernel.fallback_enabled ? 1 : 0) << "\n";
  write_kernel_body(os, kernel, "entries");
  write_file(path, os.str());
}

SemiMarkovKernel read_kernel(const std::string& path) {
  LineReader r(path, "smm-kernel v1");
  SemiMarkovKernel k;
  const int states = static_cast<int>(require_i64(r.expect("num_states", 1)[0], "num_states"));
  const int t_max = static_cast<int>(require_i64(r.expect("t_max", 1)[0], "t_max"));
  k.init(states, t_max);
  k.allow_self_transitions = require_i64(r.expect("allow_self_transitions", 1)[0], "flag") != 0;
  k.fallback_enabled = require_i64(r.expect("fallback_enabled", 1)[0], "flag") != 0;
  read_kernel_body(r, k, "entries");
  return k;
}

// ---------------------------------------------------------- indexed kernel

namespace {

void write_index_config(std::ostringstream& os, const IndexConfig& cfg) {
  os << "index_kind " << index_kind_name(cfg.kind) << "\n";
  os << "index_m " << cfg.m << "\n";
  os << "index_lambda " << fmt_double(cfg.lambda) << "\n";
  os << "index_f_id " << cfg.f_id << "\n";
  os << "index_f_values";
  join_doubles(os, cfg.f_values);
  os << "\nindex_initial_history";
  join_doubles(os, cfg.initial_history);
  os << "\n";
}

IndexConfig read_index_config(LineReader& r) {
  IndexConfig cfg;
  cfg.kind = index_kind_from_name(r.expect("index_kind", 1)[0]);
  cfg.m = static_cast<int>(require_i64(r.expect("index_m", 1)[0], "m"));
  cfg.lambda = require_f64(r.expect("index_lambda", 1)[0], "lambda");
  cfg.f_id = r.expect("index_f_id", 1)[0];
  cfg.f_values = parse_doubles(r.expect("index_f_values", 0));
  cfg.initial_history = parse_doubles(r.expect("index_initial_history", 0));
  return cfg;
}

}  // namespace

void write_indexed_kernel(const std::string& path, const IndexedKernel& kernel) {
  std::ostringstream os;
  os << "smm-indexed-kernel v1\n";
  os << "num_states " << kernel.num_states << "\n";
  os << "num_levels " << kernel.num_levels << "\n";
  os << "t_max " << kernel.t_max << "\n";
  os << "backoff_threshold " << fmt_double(kernel.backoff_threshold) << "\n";
  os << "allow_self_transitions " << (kernel.allow_self_transitions ? 1 : 0) << "\n";
  write_index_config(os, kernel.index_config);
  os << "grid_thresholds";
  join_doubles(os, kernel.grid.thresholds);
  os << "\n";

  std::size_t n_entries = 0;
  for (double c : kernel.counts)
    if (c != 0.0) ++n_entries;
  os << "entries " << n_entries << "\n";
  for (int i = 0; i < kernel.num_states; ++i)
    for (int v = 0; v < kernel.num_levels; ++v)
      for (int j = 0; j < kernel.num_states; ++j)
        for (int t = 1; t <= kernel.t_max; ++t) {
          const double c = kernel.counts[kernel.idx(i, v, j, t)];
          if (c != 0.0)
            os << i << ' ' << v << ' ' << j << ' ' << t << ' ' << fmt_double(c) << "\n";
        }
  write_kernel_body(os, kernel.fallback, "fallback_entries");
  write_file(path, os.str());
}

IndexedKernel read_indexed_kernel(const std::string& path) {
  LineReader r(path, "smm-indexed-kernel v1");
  IndexedKernel k;
  k.num_states = static_cast<int>(require_i64(r.expect("num_states", 1)[0], "num_states"));
  k.num_levels = static_cast<int>(require_i64(r.expect("num_levels", 1)[0], "num_levels"));
  k.t_max = static_cast<int>(require_i64(r.expect("t_max", 1)[0], "t_max"));
  k.backoff_threshold = require_f64(r.expect("backoff_threshold", 1)[0], "threshold");
  k.allow_self_transitions = require_i64(r.expect("allow_self_transitions", 1)[0], "flag") != 0;
  k.index_config = read_index_config(r);
  k.grid.thresholds = parse_doubles(r.expect("grid_thresholds", 0));
  k.grid.num_levels = k.num_levels;
  if (k.grid.thresholds.size() + 1 != static_cast<std::size_t>(k.num_levels))
    throw DataError("'" + path + "': grid thresholds do not match num_levels");

  const std::size_t n_cells =
      static_cast<std::size_t>(k.num_states) * static_cast<std::size_t>(k.num_levels);
  k.counts.assign(n_cells * static_cast<std::size_t>(k.num_states) *
                      static_cast<std::size_t>(k.t_max + 1),
                  0.0);
  k.cell_exits.assign(n_cells, 0.0);
  const auto n = require_i64(r.expect("entries", 1)[0], "entry count");
  std::string line;
  for (long long e = 0; e < n; ++e) {
    if (!r.next_line(line)) throw DataError("'" + path + "': truncated body");
    auto f = split_ws(line);
    if (f.size() != 5) throw DataError("'" + path + "': bad entry '" + line + "'");
    const int i = static_cast<int>(require_i64(f[0], "i"));
    const int v = static_cast<int>(require_i64(f[1], "v"));
    const int j = static_cast<int>(require_i64(f[2], "j"));
    const int t = static_cast<int>(require_i64(f[3], "sojourn"));
    const double c = require_f64(f[4], "count");
    k.counts[k.idx(i, v, j, t)] += c;
    k.cell_exits[k.cell(i, v)] += c;
  }
  k.fallback.init(k.num_states, k.t_max);
  k.fallback.allow_self_transitions = k.allow_self_transitions;
  read_kernel_body(r, k.fallback, "fallback_entries");
  k.finalize();
  return k;
}

// ------------------------------------------------------------ index series

void write_index_series(const std::string& path, const IndexSeries& series,
                        const MarkovRenewalSample& sample,
                        const std::vector<double>& minute_values) {
  if (series.at_jumps.size() != sample.num_jumps())
    throw UsageError("index series is not aligned with the sample");
  std::ostringstream os;
  os << "smm-index v1\n";
  write_index_config(os, series.config);
  os << "jumps " << series.at_jumps.size() << "\n";
  for (std::size_t n = 0; n < series.at_jumps.size(); ++n)
    os << n << ' ' << sample.times[n] << ' ' << fmt_double(series.at_jumps[n]) << "\n";
  os << "minutes " << minute_values.size() << "\n";
  const std::int64_t t0 = sample.times.empty() ? 0 : sample.times.front();
  for (std::size_t k = 0; k < minute_values.size(); ++k)
    os << t0 + static_cast<std::int64_t>(k) << ' ' << fmt_double(minute_values[k]) << "\n";
  write_file(path, os.str());
}

IndexSeriesFile read_index_series(const std::string& path) {
  LineReader r(path, "smm-index v1");
  IndexSeriesFile out;
  out.series.config = read_index_config(r);
  const auto jumps = require_i64(r.expect("jumps", 1)[0], "jumps");
  std::string line;
  for (long long n = 0; n < jumps; ++n) {
    if (!r.next_line(line)) throw DataError("'" + path + "': truncated jump table");
    auto f = split_ws(line);
    if (f.size() != 3) throw DataError("'" + path + "': bad jump row '" + line + "'");
    out.jump_times.push_back(require_i64(f[1], "time"));
    out.series.at_jumps.push_back(require_f64(f[2], "index value"));
  }
  const auto minutes = require_i64(r.expect("minutes", 1)[0], "minutes");
  for (long long k = 0; k < minutes; ++k) {
    if (!r.next_line(line)) throw DataError("'" + path + "': truncated minute table");
    auto f = split_ws(line);
    if (f.size() != 2) throw DataError("'" + path + "': bad minute row '" + line + "'");
    out.minute_values.push_back(require_f64(f[1], "index value"));
  }
  return out;
}

// --------------------------------------------------------------- generator

void write_generator_spec(const std::string& path, const SyntheticGeneratorSpec& spec) {
  std::ostringstream os;
  os << "smm-genspec v1\n";
  os << "kind " << spec.kind << "\n";
  os << "seed " << spec.seed << "\n";
  os << "horizon " << spec.horizon << "\n";
  os << "initial_state " << spec.initial_state << "\n";
  os << "num_states " << spec.num_states << "\n";
  os << "t_max " << spec.t_max << "\n";
  os << "state_values";
  join_doubles(os, spec.state_values);
  os << "\n";
  if (spec.kind == "clustered-wismc") {
    os << "num_levels " << spec.num_levels << "\n";
    os << "level_thresholds";
    join_doubles(os, spec.level_thresholds);
    os << "\n";
    write_index_config(os, spec.index_config);
    os << "warmup " << spec.warmup_minutes << "\n";
    for (const auto& e : spec.indexed_entries)
      os << "ikernel " << e.i << ' ' << e.level << ' ' << e.j << ' ' << e.sojourn << ' '
         << fmt_double(e.weight) << "\n";
  } else {
    for (const auto& e : spec.kernel_entries)
      os << "kernel " << e.i << ' ' << e.j << ' ' << e.sojourn << ' ' << fmt_double(e.weight)
         << "\n";
  }
  write_file(path, os.str());
}

SyntheticGeneratorSpec read_generator_spec(const std::string& path) {
  LineReader r(path, "smm-genspec v1");
  SyntheticGeneratorSpec spec;
  spec.kind = r.expect("kind", 1)[0];
  spec.seed = static_cast<std::uint64_t>(require_i64(r.expect("seed", 1)[0], "seed"));
  spec.horizon = require_i64(r.expect("horizon", 1)[0], "horizon");
  spec.initial_state =
      static_cast<int>(require_i64(r.expect("initial_state", 1)[0], "initial_state"));
  spec.num_states = static_cast<int>(require_i64(r.expect("num_states", 1)[0], "num_states"));
  spec.t_max = static_cast<int>(require_i64(r.expect("t_max", 1)[0], "t_max"));
  spec.state_values = parse_doubles(r.expect("state_values", 0));
  if (spec.kind == "clustered-wismc") {
    spec.num_levels = static_cast<int>(require_i64(r.expect("num_levels", 1)[0], "num_levels"));
    spec.level_thresholds = parse_doubles(r.expect("level_thresholds", 0));
    spec.index_config = read_index_config(r);
    spec.warmup_minutes = require_i64(r.expect("warmup", 1)[0], "warmup");
  }
  std::string line;
  while (r.next_line(line)) {
    auto f = split_ws(line);
    if (f.size() == 5 && f[0] == "kernel") {
      spec.kernel_entries.push_back({static_cast<int>(require_i64(f[1], "i")),
                                     static_cast<int>(require_i64(f[2], "j")),
                                     static_cast<int>(require_i64(f[3], "sojourn")),
                                     require_f64(f[4], "weight")});
    } else if (f.size() == 6 && f[0] == "ikernel") {
      spec.indexed_entries.push_back({static_cast<int>(require_i64(f[1], "i")),
                                      static_cast<int>(require_i64(f[2], "level")),
                                      static_cast<int>(require_i64(f[3], "j")),
                                      static_cast<int>(require_i64(f[4], "sojourn")),
                                      require_f64(f[5], "weight")});
    } else {
      throw DataError("'" + path + "': bad generator line '" + line + "'");
    }
  }
  spec.validate();
  return spec;
}

// ------------------------------------------------------------------- CSVs

void write_acf_csv(const std::string& path, const AcfCurve& curve, const std::string& mode) {
  std::ostringstream os;
  os << "# mode=" << mode << " n=" << curve.n << "\n";
  os << "lag,value\n";
  for (int tau = 1; tau <= curve.tau_max; ++tau)
    os << tau << ',' << fmt_double(curve.at_lag(tau)) << "\n";
  write_file(path, os.str());
}

void write_sweep_csv(const std::string& path, const SweepResult& result,
                     const std::string& param_name) {
  std::ostringstream os;
  os << "# argmin=" << fmt_double(result.points[result.argmin].param) << "\n";
  os << param_name << ",mse,seed,replications,status\n";
  for (const auto& pt : result.points) {
    os << fmt_double(pt.param) << ',' << (pt.failed ? "nan" : fmt_double(pt.mse)) << ','
       << pt.seed << ',' << pt.replications << ',' << (pt.failed ? "failed" : "ok") << "\n";
  }
  write_file(path, os.str());
}

void write_minutes_csv(const std::string& path, const StateSeries& series) {
  std::ostringstream os;
  os << "minute,state\n";
  for (std::size_t t = 0; t < series.states.size(); ++t)
    os << t << ',' << series.states[t] << "\n";
  write_file(path, os.str());
}

// ---------------------------------------------------------------- manifest

void write_manifest(const std::string& path, const Manifest& manifest) {
  std::ostringstream os;
  os << "smm-manifest v1\n";
  os << "config_hash " << manifest.config_hash << "\n";
  os << "generator " << manifest.generator_id << "\n";
  os << "entries " << manifest.entries.size() << "\n";
  for (const auto& e : manifest.entries)
    os << e.stage << ' ' << e.seed << ' ' << e.fingerprint << ' ' << e.path << "\n";
  write_file(path, os.str());
}

Manifest read_manifest(const std::string& path) {
  LineReader r(path, "smm-manifest v1");
  Manifest m;
  m.config_hash = r.expect("config_hash", 1)[0];
  m.generator_id = r.expect("generator", 1)[0];
  const auto n = require_i64(r.expect("entries", 1)[0], "entries");
  std::string line;
  for (long long e = 0; e < n; ++e) {
    if (!r.next_line(line)) throw DataError("'" + path + "': truncated manifest");
    auto f = split_ws(line);
    if (f.size() != 4) throw DataError("'" + path + "': bad manifest entry '" + line + "'");
    m.entries.push_back({f[0], static_cast<std::uint64_t>(require_i64(f[1], "seed")), f[2], f[3]});
  }
  return m;
}

}  // namespace smm
