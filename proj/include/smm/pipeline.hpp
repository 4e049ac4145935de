#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "smm/io.hpp"

namespace smm {

// One config drives the whole chain
//   generate | ingest -> discretize -> estimate -> index -> estimate-indexed
//   -> simulate -> acf
// with every intermediate persisted and fingerprinted. All randomness
// flows from `seed`; reruns with the same config are byte-identical.
struct RunConfig {
  std::vector<std::string> stages;
  std::string outdir = "out";
  std::uint64_t seed = 42;

  // ingest
  std::string input;
  std::string calendar_file;
  std::string symbol = "-";
  std::string timestamp_column = "timestamp";
  std::string price_column = "price";
  std::string delimiter = ",";

  // explicit entry points for partial pipelines
  std::string prices_file;
  std::string states_file;
  std::string kernel_file;
  std::string index_file;
  std::string indexed_kernel_file;

  // discretize
  int num_states = 5;
  std::string disc_mode = "quantile";
  double fixed_delta = 0.0;
  long long train_prefix = 0;   // 0: fit the grid on the full sample

  // estimate
  int t_max = -1;   // -1: largest observed sojourn

  // index
  std::string model = "smc";        // smc | ismc | wismc
  std::string index_kind = "auto";  // auto: ismc -> moving_average, wismc -> ewma
  int m = 30;
  double lambda = 0.97;
  std::string f_id = "squared_value";
  bool index_minutes = false;

  // estimate-indexed
  int num_levels = 5;
  double backoff_threshold = 50;

  // simulate
  std::int64_t horizon = -1;   // -1: match the data length
  int replications = 1;
  std::int64_t warmup = -1;    // -1: model default
  int initial_state = -1;      // -1: modal state of the data

  // acf
  int tau_max = 100;

  // generate
  std::string preset = "clustered-wismc";
  std::string generator_spec_file;
  std::int64_t generate_horizon = -1;   // -1: preset default

  static RunConfig from_file(const std::string& path);
  static RunConfig from_string(const std::string& text);

  std::string canonical() const;   // deterministic dump, input to the config hash
  std::string config_hash() const;
  void validate() const;
};

struct PipelineResult {
  Manifest manifest;
  std::string manifest_path;
};

// Executes the configured stages in order. Failures carry the stage name
// in the message and leave completed artifacts (and a partial manifest)
// on disk.
PipelineResult run_pipeline(const RunConfig& cfg, std::ostream* log = nullptr);

}  // namespace smm
