#include "smm/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <thread>

#include "smm/errors.hpp"
#include "smm/text_io.hpp"

namespace smm {

namespace {

// Accepts "YYYY-MM-DD HH:MM:SS", "YYYY-MM-DDTHH:MM:SS", optional fractional
// seconds (truncated). Returns false on anything that does not scan.
bool parse_timestamp(const std::string& s, int& date, int& second) {
  if (s.size() < 19) return false;
  auto digit = [&](std::size_t i) { return std::isdigit(static_cast<unsigned char>(s[i])) != 0; };
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u, 11u, 12u, 14u, 15u, 17u, 18u})
    if (!digit(i)) return false;
  if (s[4] != '-' || s[7] != '-' || (s[10] != ' ' && s[10] != 'T') || s[13] != ':' || s[16] != ':')
    return false;
  int y = (s[0] - '0') * 1000 + (s[1] - '0') * 100 + (s[2] - '0') * 10 + (s[3] - '0');
  int mo = (s[5] - '0') * 10 + (s[6] - '0');
  int d = (s[8] - '0') * 10 + (s[9] - '0');
  int h = (s[11] - '0') * 10 + (s[12] - '0');
  int mi = (s[14] - '0') * 10 + (s[15] - '0');
  int se = (s[17] - '0') * 10 + (s[18] - '0');
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || se > 59) return false;
  date = y * 10000 + mo * 100 + d;
  second = h * 3600 + mi * 60 + se;
  return true;
}

// Resample one day in isolation; pure so days can be processed in parallel.
// `begin`/`end` bound that day's ticks in the sorted series.
bool resample_one_day(const TickRecord* begin, const TickRecord* end,
                      const SessionHours& hours, DayPrices& out) {
  const int open_sec = hours.open_minute * 60;
  const int close_sec = hours.close_minute * 60;
  const int n = hours.minutes();
  if (n <= 0) return false;

  // In-session ticks only.
  const TickRecord* first = begin;
  while (first != end && first->second < open_sec) ++first;
  const TickRecord* last = end;
  while (last != first && (last - 1)->second >= close_sec) --last;
  if (first == last) return false;

  // Minute k takes the last trade with time < open + 60*(k+1). Minutes
  // before the first trade have nothing to fill from and are dropped
  // (late open); gaps after it, including a trailing one, repeat the last
  // price through to the close.
  const int k_first = (first->second - open_sec) / 60;
  const int k_last = n - 1;
  out.first_minute = k_first;
  out.prices.assign(static_cast<std::size_t>(k_last - k_first + 1), 0.0);

  const TickRecord* it = first;
  double current = first->price;
  for (int k = k_first; k <= k_last; ++k) {
    const int boundary = open_sec + 60 * (k + 1);
    while (it != last && it->second < boundary) {
      current = it->price;
      ++it;
    }
    out.prices[static_cast<std::size_t>(k - k_first)] = current;
  }
  return true;
}

}  // namespace

std::vector<double> RawReturnSeries::concatenated() const {
  std::vector<double> out;
  out.reserve(total_intraday());
  for (const auto& d : day_returns) out.insert(out.end(), d.begin(), d.end());
  return out;
}

std::vector<std::size_t> RawReturnSeries::day_starts() const {
  std::vector<std::size_t> out;
  out.reserve(day_returns.size());
  std::size_t pos = 0;
  for (const auto& d : day_returns) {
    out.push_back(pos);
    pos += d.size();
  }
  return out;
}

TickSeries parse_ticks(std::istream& raw, const TickFormat& format) {
  if (!raw.good()) throw DataError("tick input stream is not readable");

  TickSeries out;
  std::string line;
  int ts_idx = format.timestamp_index;
  int px_idx = format.price_index;
  bool first_line = true;
  std::size_t line_no = 0;

  while (std::getline(raw, line)) {
    ++line_no;
    if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
    auto fields = split_on(line, format.delimiter);

    if (first_line && format.has_header) {
      first_line = false;
      ts_idx = px_idx = -1;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == format.timestamp_column) ts_idx = static_cast<int>(i);
        if (fields[i] == format.price_column) px_idx = static_cast<int>(i);
      }
      if (ts_idx < 0 || px_idx < 0)
        throw DataError("tick header is missing column '" + format.timestamp_column +
                        "' or '" + format.price_column + "'");
      continue;
    }
    first_line = false;

    if (ts_idx < 0 || px_idx < 0 ||
        static_cast<std::size_t>(std::max(ts_idx, px_idx)) >= fields.size()) {
      ++out.rejected_rows;
      continue;
    }
    TickRecord rec;
    double price = 0;
    if (!parse_timestamp(fields[static_cast<std::size_t>(ts_idx)], rec.date, rec.second) ||
        !parse_f64(fields[static_cast<std::size_t>(px_idx)], price) || price <= 0.0) {
      ++out.rejected_rows;
      continue;
    }
    rec.price = price;
    out.records.push_back(rec);
  }

  if (out.records.empty()) throw DataError("no valid tick records in input");
  std::stable_sort(out.records.begin(), out.records.end());
  return out;
}

PriceSeries resample_minutes(const TickSeries& ticks, const TradingCalendar& cal) {
  PriceSeries out;
  out.calendar_id = cal.id;

  const auto& recs = ticks.records;
  struct DayRange {
    std::size_t begin, end;
    int date;
  };
  std::vector<DayRange> ranges;
  std::size_t i = 0;
  while (i < recs.size()) {
    std::size_t j = i;
    while (j < recs.size() && recs[j].date == recs[i].date) ++j;
    ranges.push_back({i, j, recs[i].date});
    i = j;
  }

  // Days are independent; fill fixed slots in parallel, merge in order.
  std::vector<DayPrices> slots(ranges.size());
  std::vector<char> ok(ranges.size(), 0);
  auto work = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t d = lo; d < hi; ++d) {
      slots[d].date = ranges[d].date;
      ok[d] = resample_one_day(recs.data() + ranges[d].begin, recs.data() + ranges[d].end,
                               cal.hours_for(ranges[d].date), slots[d])
                  ? 1
                  : 0;
    }
  };
  const std::size_t n_threads =
      std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), ranges.size());
  if (n_threads <= 1) {
    work(0, ranges.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (ranges.size() + n_threads - 1) / n_threads;
    for (std::size_t t = 0; t < n_threads; ++t) {
      std::size_t lo = t * chunk;
      std::size_t hi = std::min(ranges.size(), lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  for (std::size_t d = 0; d < slots.size(); ++d) {
    if (ok[d])
      out.days.push_back(std::move(slots[d]));
    else
      ++out.skipped_days;   // no price to fill from; day dropped
  }
  return out;
}

RawReturnSeries compute_returns(const PriceSeries& prices) {
  RawReturnSeries out;
  out.day_returns.reserve(prices.days.size());
  double prev_close = 0.0;
  for (const auto& day : prices.days) {
    std::vector<double> rets;
    if (day.prices.size() < 2) {
      ++out.short_day_warnings;
    } else {
      rets.reserve(day.prices.size() - 1);
      for (std::size_t k = 0; k + 1 < day.prices.size(); ++k)
        rets.push_back((day.prices[k + 1] - day.prices[k]) / day.prices[k]);
    }
    if (prev_close > 0.0 && !day.prices.empty())
      out.overnight_returns.push_back((day.prices.front() - prev_close) / prev_close);
    if (!day.prices.empty()) prev_close = day.prices.back();
    out.day_returns.push_back(std::move(rets));
  }
  return out;
}

}  // namespace smm
