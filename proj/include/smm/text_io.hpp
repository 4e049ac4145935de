#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "smm/errors.hpp"

namespace smm {

// Shortest decimal string that parses back to exactly the same double
// (17 significant digits always suffice). Every artifact writer goes
// through this, so reruns are byte-identical and files stay readable.
inline std::string fmt_double(double x) {
  char buf[32];
  for (int precision = 1; precision < 17; ++precision) {
    std::snprintf(buf, sizeof(buf), "%.*g", precision, x);
    if (std::strtod(buf, nullptr) == x) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::vector<std::string> split_on(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == delim) {
      std::string f = line.substr(start, i - start);
      if (!f.empty() && f.back() == '\r') f.pop_back();
      out.push_back(std::move(f));
      start = i + 1;
    }
  }
  return out;
}

inline bool parse_i64(const std::string& s, long long& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  v = std::strtoll(s.c_str(), &end, 10);
  return errno == 0 && end == s.c_str() + s.size();
}

inline bool parse_f64(const std::string& s, double& v) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  v = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

inline long long require_i64(const std::string& s, const char* what) {
  long long v = 0;
  if (!parse_i64(s, v)) throw DataError(std::string("expected integer for ") + what + ", got '" + s + "'");
  return v;
}

inline double require_f64(const std::string& s, const char* what) {
  double v = 0;
  if (!parse_f64(s, v)) throw DataError(std::string("expected number for ") + what + ", got '" + s + "'");
  return v;
}

}  // namespace smm
