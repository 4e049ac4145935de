#include "smm/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "smm/diagnostics.hpp"
#include "smm/errors.hpp"
#include "smm/fingerprint.hpp"
#include "smm/simulate.hpp"
#include "smm/synthetic.hpp"
#include "smm/text_io.hpp"

namespace smm {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

const std::vector<std::string> kKnownStages = {
    "generate", "ingest", "discretize", "estimate", "index", "estimate-indexed",
    "simulate",  "acf"};

}  // namespace

RunConfig RunConfig::from_string(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) throw ConfigError("bad config line '" + stripped + "'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));

    auto as_i64 = [&]() { return require_i64(value, key.c_str()); };
    auto as_f64 = [&]() { return require_f64(value, key.c_str()); };

    if (key == "stages") {
      cfg.stages.clear();
      for (const auto& s : split_on(value, ',')) {
        const std::string stage = trim(s);
        if (!stage.empty()) cfg.stages.push_back(stage);
      }
    } else if (key == "outdir") cfg.outdir = value;
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(as_i64());
    else if (key == "input") cfg.input = value;
    else if (key == "calendar") cfg.calendar_file = value;
    else if (key == "symbol") cfg.symbol = value;
    else if (key == "timestamp_column") cfg.timestamp_column = value;
    else if (key == "price_column") cfg.price_column = value;
    else if (key == "delimiter") cfg.delimiter = value;
    else if (key == "prices") cfg.prices_file = value;
    else if (key == "states") cfg.states_file = value;
    else if (key == "kernel") cfg.kernel_file = value;
    else if (key == "index") cfg.index_file = value;
    else if (key == "indexed_kernel") cfg.indexed_kernel_file = value;
    else if (key == "num_states") cfg.num_states = static_cast<int>(as_i64());
    else if (key == "disc_mode") cfg.disc_mode = value;
    else if (key == "fixed_delta") cfg.fixed_delta = as_f64();
    else if (key == "train_prefix") cfg.train_prefix = as_i64();
    else if (key == "t_max") cfg.t_max = static_cast<int>(as_i64());
    else if (key == "model") cfg.model = value;
    else if (key == "index_kind") cfg.index_kind = value;
    else if (key == "m") cfg.m = static_cast<int>(as_i64());
    else if (key == "lambda") cfg.lambda = as_f64();
    else if (key == "f_id") cfg.f_id = value;
    else if (key == "index_minutes") cfg.index_minutes = as_i64() != 0;
    else if (key == "num_levels") cfg.num_levels = static_cast<int>(as_i64());
    else if (key == "backoff") cfg.backoff_threshold = as_f64();
    else if (key == "horizon") cfg.horizon = as_i64();
    else if (key == "reps") cfg.replications = static_cast<int>(as_i64());
    else if (key == "warmup") cfg.warmup = as_i64();
    else if (key == "initial_state") cfg.initial_state = static_cast<int>(as_i64());
    else if (key == "tau_max") cfg.tau_max = static_cast<int>(as_i64());
    else if (key == "preset") cfg.preset = value;
    else if (key == "gen_spec") cfg.generator_spec_file = value;
    else if (key == "gen_horizon") cfg.generate_horizon = as_i64();
    else throw ConfigError("unknown config key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str());
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  os << "stages=";
  for (std::size_t i = 0; i < stages.size(); ++i) os << (i ? "," : "") << stages[i];
  os << "\noutdir=" << outdir << "\nseed=" << seed << "\ninput=" << input
     << "\ncalendar=" << calendar_file << "\nsymbol=" << symbol
     << "\ntimestamp_column=" << timestamp_column << "\nprice_column=" << price_column
     << "\ndelimiter=" << delimiter << "\nprices=" << prices_file << "\nstates=" << states_file
     << "\nkernel=" << kernel_file << "\nindex=" << index_file
     << "\nindexed_kernel=" << indexed_kernel_file << "\nnum_states=" << num_states
     << "\ndisc_mode=" << disc_mode << "\nfixed_delta=" << fmt_double(fixed_delta)
     << "\ntrain_prefix=" << train_prefix
     << "\nt_max=" << t_max << "\nmodel=" << model << "\nindex_kind=" << index_kind
     << "\nm=" << m << "\nlambda=" << fmt_double(lambda) << "\nf_id=" << f_id
     << "\nindex_minutes=" << (index_minutes ? 1 : 0) << "\nnum_levels=" << num_levels
     << "\nbackoff=" << fmt_double(backoff_threshold) << "\nhorizon=" << horizon
     << "\nreps=" << replications << "\nwarmup=" << warmup
     << "\ninitial_state=" << initial_state << "\ntau_max=" << tau_max
     << "\npreset=" << preset << "\ngen_spec=" << generator_spec_file
     << "\ngen_horizon=" << generate_horizon << "\n";
  return os.str();
}

std::string RunConfig::config_hash() const { return fingerprint_hex(canonical()); }

void RunConfig::validate() const {
  if (stages.empty()) throw ConfigError("config lists no stages");
  for (const auto& s : stages)
    if (std::find(kKnownStages.begin(), kKnownStages.end(), s) == kKnownStages.end())
      throw ConfigError("unknown stage '" + s + "'");
  if (model != "smc" && model != "ismc" && model != "wismc")
    throw ConfigError("model must be smc, ismc or wismc");
  if (index_kind != "auto") {
    const IndexKind k = index_kind_from_name(index_kind);
    if (model == "ismc" && k != IndexKind::kMovingAverage)
      throw ConfigError("model ismc requires the moving_average index");
    if (model == "wismc" && k == IndexKind::kMovingAverage)
      throw ConfigError("model wismc requires an ewma index");
  }
  if (replications < 1) throw ConfigError("reps must be >= 1");
}

namespace {

struct StageRunner {
  const RunConfig& cfg;
  std::ostream* log;
  Manifest manifest;
  std::string outdir;

  // Latest artifact per kind, either produced upstream or named in config.
  std::string prices_path;
  std::string states_path;
  std::string kernel_path;
  std::string index_path;
  std::string indexed_kernel_path;

  std::string out_path(const std::string& name) const {
    return (std::filesystem::path(outdir) / name).string();
  }

  void note(const std::string& msg) const {
    if (log) *log << msg << "\n";
  }

  void record(const std::string& stage, std::uint64_t seed, const std::string& path) {
    manifest.entries.push_back({stage, seed, file_fingerprint(path), path});
  }

  IndexKind resolved_index_kind() const {
    if (cfg.index_kind != "auto") return index_kind_from_name(cfg.index_kind);
    return cfg.model == "ismc" ? IndexKind::kMovingAverage : IndexKind::kEwma;
  }

  const std::string& need(const std::string& path, const char* what) const {
    if (path.empty())
      throw ConfigError(std::string("no ") + what + " available (missing stage or config key)");
    return path;
  }

  StateSeries load_states() const { return read_states(need(states_path, "states file")); }

  IndexConfig make_index_config(const StateSeries& states) const {
    IndexConfig icfg;
    icfg.kind = resolved_index_kind();
    icfg.m = cfg.m;
    icfg.lambda = cfg.lambda;
    icfg.f_id = cfg.f_id;
    icfg.resolve_f(states.state_values);
    return icfg;
  }

  int pick_initial_state(const StateSeries& states) const {
    if (cfg.initial_state >= 0) return cfg.initial_state;
    std::vector<std::size_t> hist(static_cast<std::size_t>(states.num_states), 0);
    for (int s : states.states) ++hist[static_cast<std::size_t>(s)];
    return static_cast<int>(std::max_element(hist.begin(), hist.end()) - hist.begin());
  }

  void stage_generate() {
    SyntheticGeneratorSpec spec = cfg.generator_spec_file.empty()
                                      ? synthetic_preset(cfg.preset)
                                      : read_generator_spec(cfg.generator_spec_file);
    spec.seed = cfg.seed;
    if (cfg.generate_horizon >= 0) spec.horizon = cfg.generate_horizon;
    const StateSeries series = generate_synthetic(spec);
    if (series.states.empty()) note("warning: generator produced an empty series");
    states_path = out_path("states.txt");
    write_states(states_path, series);
    record("generate", cfg.seed, states_path);
  }

  void stage_ingest() {
    if (cfg.input.empty()) throw ConfigError("ingest needs an input file");
    TradingCalendar cal;
    if (!cfg.calendar_file.empty()) cal = read_calendar(cfg.calendar_file);
    else throw ConfigError("ingest needs a calendar file");
    std::ifstream in(cfg.input);
    if (!in) throw DataError("cannot open tick input '" + cfg.input + "'");
    TickFormat fmt;
    fmt.timestamp_column = cfg.timestamp_column;
    fmt.price_column = cfg.price_column;
    fmt.delimiter = cfg.delimiter.empty() ? ',' : cfg.delimiter[0];
    const TickSeries ticks = parse_ticks(in, fmt);
    if (ticks.rejected_rows > 0)
      note("warning: rejected " + std::to_string(ticks.rejected_rows) + " malformed tick rows");
    PriceSeries prices = resample_minutes(ticks, cal);
    if (prices.skipped_days > 0)
      note("warning: skipped " + std::to_string(prices.skipped_days) + " day(s) with no trades");
    prices.symbol = cfg.symbol;
    prices_path = out_path("prices.txt");
    write_prices(prices_path, prices);
    record("ingest", 0, prices_path);
  }

  void stage_discretize() {
    const PriceSeries prices = read_prices(need(prices_path, "prices file"));
    const RawReturnSeries returns = compute_returns(prices);
    ReturnGridOptions opts;
    if (cfg.disc_mode == "quantile") opts.mode = GridMode::kQuantile;
    else if (cfg.disc_mode == "fixed-delta") opts.mode = GridMode::kFixedDelta;
    else throw ConfigError("disc_mode must be quantile or fixed-delta");
    opts.fixed_delta = cfg.fixed_delta;
    if (cfg.train_prefix > 0) opts.training_prefix = static_cast<std::size_t>(cfg.train_prefix);
    const ReturnGrid grid = fit_return_grid(returns, cfg.num_states, opts);
    const StateSeries states = discretize_returns(returns, grid);
    states_path = out_path("states.txt");
    write_states(states_path, states);
    record("discretize", 0, states_path);
  }

  void stage_estimate() {
    const StateSeries states = load_states();
    const MarkovRenewalSample sample = extract_mrp(states);
    const int t_max = cfg.t_max > 0 ? cfg.t_max : max_observed_sojourn(sample);
    const SemiMarkovKernel kernel = estimate_kernel(sample, t_max);
    kernel_path = out_path("kernel.txt");
    write_kernel(kernel_path, kernel);
    record("estimate", 0, kernel_path);
  }

  void stage_index() {
    const StateSeries states = load_states();
    const MarkovRenewalSample sample = extract_mrp(states);
    const IndexConfig icfg = make_index_config(states);
    const IndexSeries series = compute_index(sample, icfg);
    std::vector<double> minutes;
    if (cfg.index_minutes) minutes = index_minute_values(sample, icfg);
    index_path = out_path("index.txt");
    write_index_series(index_path, series, sample, minutes);
    record("index", 0, index_path);
  }

  void stage_estimate_indexed() {
    const StateSeries states = load_states();
    const MarkovRenewalSample sample = extract_mrp(states);
    const IndexSeriesFile ifile = read_index_series(need(index_path, "index file"));
    if (ifile.series.at_jumps.size() != sample.num_jumps() || ifile.jump_times != sample.times)
      throw DataError("index file does not align with the states file");
    const IndexGrid grid = fit_index_grid(ifile.series.at_jumps, cfg.num_levels);
    const int t_max = cfg.t_max > 0 ? cfg.t_max : max_observed_sojourn(sample);
    const IndexedKernel ik =
        estimate_indexed_kernel(sample, ifile.series, grid, t_max, cfg.backoff_threshold);
    indexed_kernel_path = out_path("indexed_kernel.txt");
    write_indexed_kernel(indexed_kernel_path, ik);
    record("estimate-indexed", 0, indexed_kernel_path);
  }

  void stage_simulate() {
    const StateSeries states = load_states();
    std::int64_t horizon = cfg.horizon;
    if (horizon < 0) horizon = static_cast<std::int64_t>(states.size());

    SimulationConfig sim;
    sim.horizon = horizon;
    sim.initial_state = pick_initial_state(states);
    sim.warmup_minutes = cfg.warmup;

    for (int r = 0; r < cfg.replications; ++r) {
      sim.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(r));
      Trajectory traj;
      if (cfg.model == "smc") {
        const SemiMarkovKernel kernel = read_kernel(need(kernel_path, "kernel file"));
        traj = simulate_smc(kernel, sim);
      } else {
        const IndexedKernel ik =
            read_indexed_kernel(need(indexed_kernel_path, "indexed kernel file"));
        traj = simulate_indexed(ik, sim);
      }
      const StateSeries series = expand_to_minutes(traj, horizon, states.state_values);
      char name[32];
      std::snprintf(name, sizeof(name), "sim_%03d.csv", r);
      const std::string path = out_path(name);
      write_minutes_csv(path, series);
      record("simulate", sim.seed, path);
    }
  }

  void stage_acf() {
    const StateSeries states = load_states();
    const AcfCurve curve = acf_squared(states.values(), cfg.tau_max);
    const std::string path = out_path("acf.csv");
    write_acf_csv(path, curve, "squared-states");
    record("acf", 0, path);
  }

  void run_stage(const std::string& stage) {
    if (stage == "generate") stage_generate();
    else if (stage == "ingest") stage_ingest();
    else if (stage == "discretize") stage_discretize();
    else if (stage == "estimate") stage_estimate();
    else if (stage == "index") stage_index();
    else if (stage == "estimate-indexed") stage_estimate_indexed();
    else if (stage == "simulate") stage_simulate();
    else if (stage == "acf") stage_acf();
    else throw ConfigError("unknown stage '" + stage + "'");
  }
};

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  std::filesystem::create_directories(cfg.outdir);

  StageRunner runner{cfg, log, {}, cfg.outdir, {}, {}, {}, {}, {}};
  runner.manifest.config_hash = cfg.config_hash();
  runner.manifest.generator_id = SplitMix64::generator_id();
  runner.prices_path = cfg.prices_file;
  runner.states_path = cfg.states_file;
  runner.kernel_path = cfg.kernel_file;
  runner.index_path = cfg.index_file;
  runner.indexed_kernel_path = cfg.indexed_kernel_file;

  const std::string manifest_path = runner.out_path("manifest.txt");
  for (const auto& stage : cfg.stages) {
    runner.note("stage " + stage);
    try {
      runner.run_stage(stage);
    } catch (const ConfigError& e) {
      write_manifest(manifest_path, runner.manifest);
      throw ConfigError("stage " + stage + ": " + e.what());
    } catch (const DataError& e) {
      write_manifest(manifest_path, runner.manifest);
      throw DataError("stage " + stage + ": " + e.what());
    } catch (const NumericError& e) {
      write_manifest(manifest_path, runner.manifest);
      throw NumericError("stage " + stage + ": " + e.what());
    }
  }
  write_manifest(manifest_path, runner.manifest);
  return {std::move(runner.manifest), manifest_path};
}

}  // namespace smm
