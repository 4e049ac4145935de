#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "smm/diagnostics.hpp"
#include "smm/discretize.hpp"
#include "smm/index.hpp"
#include "smm/indexed_kernel.hpp"
#include "smm/ingest.hpp"
#include "smm/kernel.hpp"
#include "smm/mrp.hpp"
#include "smm/synthetic.hpp"

namespace smm {

// Every artifact is versioned structured text with a "smm-<type> v1"
// first line; readers reject anything else. Writers are deterministic
// (fixed ordering, shortest-exact doubles), so identical inputs yield
// byte-identical files.

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);
std::string file_fingerprint(const std::string& path);

TradingCalendar read_calendar(const std::string& path);
void write_calendar(const std::string& path, const TradingCalendar& cal);

void write_prices(const std::string& path, const PriceSeries& prices);
PriceSeries read_prices(const std::string& path);

void write_return_grid(const std::string& path, const ReturnGrid& grid);
ReturnGrid read_return_grid(const std::string& path);

void write_states(const std::string& path, const StateSeries& series);
StateSeries read_states(const std::string& path);

void write_kernel(const std::string& path, const SemiMarkovKernel& kernel);
SemiMarkovKernel read_kernel(const std::string& path);

void write_indexed_kernel(const std::string& path, const IndexedKernel& kernel);
IndexedKernel read_indexed_kernel(const std::string& path);

// The index file stores the recipe, the (n, T_n, U_n) jump table and,
// optionally, one value per minute.
struct IndexSeriesFile {
  IndexSeries series;
  std::vector<std::int64_t> jump_times;
  std::vector<double> minute_values;
};
void write_index_series(const std::string& path, const IndexSeries& series,
                        const MarkovRenewalSample& sample,
                        const std::vector<double>& minute_values = {});
IndexSeriesFile read_index_series(const std::string& path);

SyntheticGeneratorSpec read_generator_spec(const std::string& path);
void write_generator_spec(const std::string& path, const SyntheticGeneratorSpec& spec);

void write_acf_csv(const std::string& path, const AcfCurve& curve, const std::string& mode);
void write_sweep_csv(const std::string& path, const SweepResult& result,
                     const std::string& param_name);
void write_minutes_csv(const std::string& path, const StateSeries& series);

struct ManifestEntry {
  std::string stage;
  std::uint64_t seed = 0;
  std::string fingerprint;
  std::string path;
};

struct Manifest {
  std::string config_hash;
  std::string generator_id;
  std::vector<ManifestEntry> entries;
};

void write_manifest(const std::string& path, const Manifest& manifest);
Manifest read_manifest(const std::string& path);

}  // namespace smm
