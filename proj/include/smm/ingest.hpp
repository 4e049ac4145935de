#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace smm {

// Timestamps are (calendar day, second-of-day). Days are compared as
// YYYYMMDD integers; no timezone or DST handling.
struct TickRecord {
  int date = 0;          // YYYYMMDD
  int second = 0;        // seconds since midnight, [0, 86400)
  double price = 0.0;    // > 0

  friend bool operator<(const TickRecord& a, const TickRecord& b) {
    if (a.date != b.date) return a.date < b.date;
    return a.second < b.second;
  }
};

struct TickSeries {
  std::vector<TickRecord> records;   // sorted by (date, second)
  std::size_t rejected_rows = 0;     // malformed or non-positive price
};

// Column layout of a delimited tick file. Columns may be addressed by
// header name or by zero-based position when the file has no header.
struct TickFormat {
  char delimiter = ',';
  bool has_header = true;
  std::string timestamp_column = "timestamp";
  std::string price_column = "price";
  int timestamp_index = 0;   // used when has_header is false
  int price_index = 1;
};

struct SessionHours {
  int open_minute = 0;    // minutes since midnight
  int close_minute = 0;   // open < close; session spans [open, close)
  int minutes() const { return close_minute - open_minute; }
};

// Session clock. Nominal hours plus per-day overrides for shortened days.
struct TradingCalendar {
  std::string id = "default";
  SessionHours nominal;
  std::map<int, SessionHours> overrides;   // keyed by YYYYMMDD

  const SessionHours& hours_for(int date) const {
    auto it = overrides.find(date);
    return it == overrides.end() ? nominal : it->second;
  }
};

struct DayPrices {
  int date = 0;             // YYYYMMDD
  int first_minute = 0;     // session-minute index of the first price (late opens shift it)
  std::vector<double> prices;   // one per effective session minute, gap-filled
};

struct PriceSeries {
  std::string symbol;
  std::string calendar_id;
  std::string rule_id = "last-before-boundary";
  std::vector<DayPrices> days;   // ordered by date
  std::size_t skipped_days = 0;  // days with no in-session trade
};

struct RawReturnSeries {
  std::vector<std::vector<double>> day_returns;  // per day, n-1 intraday returns
  std::vector<double> overnight_returns;         // close -> next open, kept apart
  std::size_t short_day_warnings = 0;            // days with < 2 prices

  std::size_t total_intraday() const {
    std::size_t n = 0;
    for (const auto& d : day_returns) n += d.size();
    return n;
  }

  // Concatenated intraday returns with the start offset of each day.
  std::vector<double> concatenated() const;
  std::vector<std::size_t> day_starts() const;
};

// Reads delimited tick data, dropping malformed rows and rows with
// non-positive prices (counted in rejected_rows). Result is sorted.
// Throws DataError on an unreadable stream or when no row survives.
TickSeries parse_ticks(std::istream& raw, const TickFormat& format);

// One price per session minute: minute k carries the last trade strictly
// before boundary k+1. Minutes without a trade repeat the previous price.
// Leading minutes before the first trade and trailing minutes after the
// last trade are dropped (late open / early close), so a day may hold
// fewer than the nominal minute count. A day with no in-session trade at
// all is skipped and counted.
PriceSeries resample_minutes(const TickSeries& ticks, const TradingCalendar& cal);

// Simple returns (S(t+1) - S(t)) / S(t) within each day; the close-to-open
// return goes to the overnight list instead.
RawReturnSeries compute_returns(const PriceSeries& prices);

}  // namespace smm
