// smm — semi-Markov return model toolkit.
//
// Subcommands cover the full chain: ingest tick data, discretize returns,
// estimate plain and indexed kernels, compute volatility indices, run
// seeded Monte Carlo simulations, and produce ACF / sweep diagnostics.
// Exit codes: 0 ok, 2 config error, 3 data error, 4 numerical error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "smm/diagnostics.hpp"
#include "smm/errors.hpp"
#include "smm/io.hpp"
#include "smm/pipeline.hpp"
#include "smm/simulate.hpp"
#include "smm/synthetic.hpp"
#include "smm/text_io.hpp"

namespace {

using namespace smm;

std::vector<double> parse_grid_spec(const std::string& spec) {
  // Either "a:b:step" or a comma-separated list.
  std::vector<double> grid;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split_on(spec, ':');
    if (parts.size() != 3) throw ConfigError("grid must be start:stop:step or a comma list");
    const double start = require_f64(parts[0], "grid start");
    const double stop = require_f64(parts[1], "grid stop");
    const double step = require_f64(parts[2], "grid step");
    if (!(step > 0.0) || stop < start) throw ConfigError("bad grid range");
    for (double x = start; x <= stop + 1e-12; x += step) grid.push_back(x);
  } else {
    for (const auto& tok : split_on(spec, ','))
      if (!tok.empty()) grid.push_back(require_f64(tok, "grid value"));
  }
  if (grid.empty()) throw ConfigError("empty grid");
  return grid;
}

int run_ingest(const std::string& input, const std::string& calendar, const std::string& out,
               const std::string& ts_col, const std::string& px_col, const std::string& delim,
               const std::string& symbol) {
  TradingCalendar cal = read_calendar(calendar);
  std::ifstream in(input);
  if (!in) throw DataError("cannot open tick input '" + input + "'");
  TickFormat fmt;
  fmt.timestamp_column = ts_col;
  fmt.price_column = px_col;
  fmt.delimiter = delim.empty() ? ',' : delim[0];
  const TickSeries ticks = parse_ticks(in, fmt);
  if (ticks.rejected_rows > 0)
    std::cerr << "warning: rejected " << ticks.rejected_rows << " malformed tick rows\n";
  PriceSeries prices = resample_minutes(ticks, cal);
  if (prices.skipped_days > 0)
    std::cerr << "warning: skipped " << prices.skipped_days << " day(s) with no trades\n";
  prices.symbol = symbol;
  write_prices(out, prices);
  std::cout << "wrote " << out << " (" << prices.days.size() << " days)\n";
  return 0;
}

int run_discretize(const std::string& prices_path, int num_states, const std::string& mode,
                   double delta, long long train_prefix, const std::string& out,
                   const std::string& grid_out) {
  const PriceSeries prices = read_prices(prices_path);
  const RawReturnSeries returns = compute_returns(prices);
  ReturnGridOptions opts;
  if (mode == "quantile") opts.mode = GridMode::kQuantile;
  else if (mode == "fixed-delta") opts.mode = GridMode::kFixedDelta;
  else throw ConfigError("mode must be quantile or fixed-delta");
  opts.fixed_delta = delta;
  if (train_prefix > 0) opts.training_prefix = static_cast<std::size_t>(train_prefix);
  const ReturnGrid grid = fit_return_grid(returns, num_states, opts);
  const StateSeries states = discretize_returns(returns, grid);
  write_states(out, states);
  if (!grid_out.empty()) write_return_grid(grid_out, grid);
  std::cout << "wrote " << out << " (" << states.size() << " minutes)\n";
  return 0;
}

int run_estimate(const std::string& states_path, int t_max, bool concatenate_days,
                 bool self_transitions, const std::string& out) {
  const StateSeries states = read_states(states_path);
  ExtractOptions opts;
  opts.allow_self_transitions = self_transitions;
  opts.truncate_at_day_boundaries = !concatenate_days;
  const MarkovRenewalSample sample = extract_mrp(states, opts);
  if (sample.single_jump_segments > 0)
    std::cerr << "warning: " << sample.single_jump_segments
              << " segment(s) contribute no transitions\n";
  const int horizon = t_max > 0 ? t_max : max_observed_sojourn(sample);
  const SemiMarkovKernel kernel = estimate_kernel(sample, horizon);
  write_kernel(out, kernel);
  std::cout << "wrote " << out << " (" << sample.num_transitions() << " transitions, t_max "
            << horizon << ")\n";
  return 0;
}

int run_index(const std::string& states_path, const std::string& kind, int m, double lambda,
              const std::string& f_id, bool minutes, const std::string& out) {
  const StateSeries states = read_states(states_path);
  const MarkovRenewalSample sample = extract_mrp(states);
  IndexConfig icfg;
  icfg.kind = index_kind_from_name(kind);
  icfg.m = m;
  icfg.lambda = lambda;
  icfg.f_id = f_id;
  icfg.resolve_f(states.state_values);
  const IndexSeries series = compute_index(sample, icfg);
  std::vector<double> minute_values;
  if (minutes) minute_values = index_minute_values(sample, icfg);
  write_index_series(out, series, sample, minute_values);
  std::cout << "wrote " << out << " (" << series.at_jumps.size() << " jump epochs)\n";
  return 0;
}

int run_estimate_indexed(const std::string& states_path, const std::string& index_path,
                         int levels, int t_max, double backoff, const std::string& out) {
  const StateSeries states = read_states(states_path);
  const MarkovRenewalSample sample = extract_mrp(states);
  const IndexSeriesFile ifile = read_index_series(index_path);
  if (ifile.series.at_jumps.size() != sample.num_jumps() || ifile.jump_times != sample.times)
    throw DataError("index file does not align with the states file");
  const IndexGrid grid = fit_index_grid(ifile.series.at_jumps, levels);
  const int horizon = t_max > 0 ? t_max : max_observed_sojourn(sample);
  const IndexedKernel ik =
      estimate_indexed_kernel(sample, ifile.series, grid, horizon, backoff);
  write_indexed_kernel(out, ik);
  std::size_t backed_off = 0;
  for (int i = 0; i < ik.num_states; ++i)
    for (int v = 0; v < ik.num_levels; ++v)
      if (ik.cell_backed_off(i, v)) ++backed_off;
  std::cout << "wrote " << out << " (" << backed_off << " backed-off cells)\n";
  return 0;
}

int run_simulate(const std::string& kernel_path, const std::string& indexed_path,
                 const std::string& index_cfg_path, std::int64_t horizon, std::uint64_t seed,
                 int reps, int initial_state, std::int64_t warmup, const std::string& outdir) {
  std::filesystem::create_directories(outdir);
  Manifest manifest;
  manifest.generator_id = SplitMix64::generator_id();

  SimulationConfig base;
  base.horizon = horizon;
  base.initial_state = initial_state;
  base.warmup_minutes = warmup;

  for (int r = 0; r < reps; ++r) {
    SimulationConfig sim = base;
    sim.seed = derive_seed(seed, static_cast<std::uint64_t>(r));
    Trajectory traj;
    std::vector<double> values;
    if (!indexed_path.empty()) {
      const IndexedKernel ik = read_indexed_kernel(indexed_path);
      if (!index_cfg_path.empty()) {
        const IndexSeriesFile icfg_file = read_index_series(index_cfg_path);
        traj = simulate_indexed(ik, icfg_file.series.config, ik.grid, sim);
      } else {
        traj = simulate_indexed(ik, sim);
      }
    } else {
      const SemiMarkovKernel kernel = read_kernel(kernel_path);
      traj = simulate_smc(kernel, sim);
    }
    char name[32];
    std::snprintf(name, sizeof(name), "sim_%03d.csv", r);
    const std::string path = (std::filesystem::path(outdir) / name).string();
    write_minutes_csv(path, expand_to_minutes(traj, horizon));
    manifest.entries.push_back({"simulate", sim.seed, file_fingerprint(path), path});
    if (r == 0) manifest.config_hash = traj.kernel_fingerprint;
  }
  const std::string mpath = (std::filesystem::path(outdir) / "manifest.txt").string();
  write_manifest(mpath, manifest);
  std::cout << "wrote " << reps << " replication(s) under " << outdir << "\n";
  return 0;
}

int run_acf(const std::string& series_path, const std::string& prices_path, int max_lag,
            bool on_returns, bool exclude_boundaries, const std::string& out) {
  std::vector<double> values;
  std::vector<std::size_t> day_starts;
  std::string source;
  if (!prices_path.empty()) {
    // Raw (undiscretized) returns straight from a price series.
    const RawReturnSeries returns = compute_returns(read_prices(prices_path));
    values = returns.concatenated();
    day_starts = returns.day_starts();
    source = "raw-returns";
  } else {
    const StateSeries states = read_states(series_path);
    values = states.values();
    day_starts = states.day_starts;
    source = "states";
  }
  AcfOptions opts;
  opts.exclude_day_boundaries = exclude_boundaries;
  opts.day_starts = day_starts;
  const AcfCurve curve =
      on_returns ? acf_returns(values, max_lag, opts) : acf_squared(values, max_lag, opts);
  write_acf_csv(out, curve, (on_returns ? "returns:" : "squared:") + source);
  std::cout << "wrote " << out << "\n";
  return 0;
}

int run_sweep(const std::string& param, const std::string& grid_spec,
              const std::string& data_path, int reps, std::uint64_t seed, int levels,
              int tau_max, const std::string& out) {
  const StateSeries data = read_states(data_path);
  SweepConfig cfg;
  cfg.replications = reps;
  cfg.seed = seed;
  cfg.num_levels = levels;
  cfg.tau_max = tau_max;

  SweepResult result;
  if (param == "lambda") {
    result = sweep_lambda(data, parse_grid_spec(grid_spec), cfg);
  } else if (param == "m") {
    std::vector<int> grid;
    for (double x : parse_grid_spec(grid_spec)) grid.push_back(static_cast<int>(x));
    result = sweep_m(data, grid, cfg);
  } else {
    throw ConfigError("param must be lambda or m");
  }
  write_sweep_csv(out, result, param);
  std::cout << "wrote " << out << " (argmin " << param << " = "
            << fmt_double(result.param_at_argmin()) << ")\n";
  return 0;
}

int run_generate(const std::string& preset, const std::string& spec_path, std::int64_t horizon,
                 std::int64_t seed, const std::string& out) {
  SyntheticGeneratorSpec spec =
      spec_path.empty() ? synthetic_preset(preset) : read_generator_spec(spec_path);
  if (horizon >= 0) spec.horizon = horizon;
  if (seed >= 0) spec.seed = static_cast<std::uint64_t>(seed);
  const StateSeries series = generate_synthetic(spec);
  if (series.states.empty()) std::cerr << "warning: generated series is empty\n";
  write_states(out, series);
  std::cout << "wrote " << out << " (" << series.size() << " minutes)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"semi-Markov return models: estimation, simulation, diagnostics"};
  app.require_subcommand(1);

  // ingest
  std::string in_input, in_calendar, in_out, in_ts = "timestamp", in_px = "price",
              in_delim = ",", in_symbol = "-";
  auto* c_ingest = app.add_subcommand("ingest", "resample tick data to minute prices");
  c_ingest->add_option("--input", in_input)->required();
  c_ingest->add_option("--calendar", in_calendar)->required();
  c_ingest->add_option("--out", in_out)->required();
  c_ingest->add_option("--timestamp-column", in_ts);
  c_ingest->add_option("--price-column", in_px);
  c_ingest->add_option("--delimiter", in_delim);
  c_ingest->add_option("--symbol", in_symbol);

  // discretize
  std::string d_prices, d_mode = "quantile", d_out, d_grid_out;
  int d_states = 5;
  double d_delta = 0.0;
  long long d_train = 0;
  auto* c_disc = app.add_subcommand("discretize", "map returns to a symmetric state grid");
  c_disc->add_option("--prices", d_prices)->required();
  c_disc->add_option("--states", d_states);
  c_disc->add_option("--mode", d_mode);
  c_disc->add_option("--delta", d_delta);
  c_disc->add_option("--train-prefix", d_train);
  c_disc->add_option("--out", d_out)->required();
  c_disc->add_option("--grid-out", d_grid_out);

  // estimate
  std::string e_states, e_out;
  int e_tmax = -1;
  bool e_concat = false, e_self = false;
  auto* c_est = app.add_subcommand("estimate", "estimate the semi-Markov kernel");
  c_est->add_option("--states", e_states)->required();
  c_est->add_option("--t-max", e_tmax);
  c_est->add_flag("--concatenate-days", e_concat);
  c_est->add_flag("--self-transitions", e_self);
  c_est->add_option("--out", e_out)->required();

  // index
  std::string x_states, x_kind = "ewma", x_fid = "squared_value", x_out;
  int x_m = 30;
  double x_lambda = 0.97;
  bool x_minutes = true;
  auto* c_idx = app.add_subcommand("index", "compute the volatility index series");
  c_idx->add_option("--states,--kernel-sample", x_states)->required();
  c_idx->add_option("--kind", x_kind);
  c_idx->add_option("--m", x_m);
  c_idx->add_option("--lambda", x_lambda);
  c_idx->add_option("--f-id", x_fid);
  c_idx->add_flag("--minutes,!--no-minutes", x_minutes,
                  "include the per-minute value table (default on)");
  c_idx->add_option("--out", x_out)->required();

  // estimate-indexed
  std::string ei_states, ei_index, ei_out;
  int ei_levels = 5, ei_tmax = -1;
  double ei_backoff = 50;
  auto* c_eidx = app.add_subcommand("estimate-indexed", "estimate the indexed kernel");
  c_eidx->add_option("--states", ei_states)->required();
  c_eidx->add_option("--index", ei_index)->required();
  c_eidx->add_option("--levels", ei_levels);
  c_eidx->add_option("--t-max", ei_tmax);
  c_eidx->add_option("--backoff", ei_backoff);
  c_eidx->add_option("--out", ei_out)->required();

  // simulate
  std::string s_kernel, s_indexed, s_icfg, s_outdir;
  std::int64_t s_horizon = 0, s_warmup = -1;
  std::uint64_t s_seed = 42;
  int s_reps = 1, s_initial = 0;
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo simulation from a kernel");
  c_sim->add_option("--kernel", s_kernel);
  c_sim->add_option("--index-kernel", s_indexed);
  c_sim->add_option("--index-cfg", s_icfg);
  c_sim->add_option("--horizon", s_horizon)->required();
  c_sim->add_option("--seed", s_seed);
  c_sim->add_option("--reps", s_reps);
  c_sim->add_option("--initial-state", s_initial);
  c_sim->add_option("--warmup", s_warmup);
  c_sim->add_option("--out", s_outdir)->required();

  // acf
  std::string a_series, a_prices, a_out;
  int a_lag = 100;
  bool a_returns = false, a_exclude = false;
  auto* c_acf = app.add_subcommand("acf", "autocorrelation of (squared) state values");
  auto* a_series_opt = c_acf->add_option("--series", a_series, "states file input");
  c_acf->add_option("--prices", a_prices, "price-series input (raw returns)")
      ->excludes(a_series_opt);
  c_acf->add_option("--max-lag", a_lag);
  c_acf->add_flag("--returns", a_returns);
  c_acf->add_flag("--exclude-day-boundaries", a_exclude);
  c_acf->add_option("--out", a_out)->required();

  // sweep
  std::string w_param, w_grid, w_data, w_out;
  int w_reps = 10, w_levels = 5, w_lag = 100;
  std::uint64_t w_seed = 7;
  auto* c_sweep = app.add_subcommand("sweep", "MSE sweep over m or lambda");
  c_sweep->add_option("--param", w_param)->required();
  c_sweep->add_option("--grid", w_grid)->required();
  c_sweep->add_option("--data", w_data)->required();
  c_sweep->add_option("--reps", w_reps);
  c_sweep->add_option("--seed", w_seed);
  c_sweep->add_option("--levels", w_levels);
  c_sweep->add_option("--max-lag", w_lag);
  c_sweep->add_option("--out", w_out)->required();

  // generate
  std::string g_preset = "clustered-wismc", g_spec, g_out;
  std::int64_t g_horizon = -1, g_seed = -1;
  auto* c_gen = app.add_subcommand("generate", "emit synthetic state data");
  c_gen->add_option("--preset", g_preset);
  c_gen->add_option("--spec", g_spec);
  c_gen->add_option("--horizon", g_horizon);
  c_gen->add_option("--seed", g_seed);
  c_gen->add_option("--out", g_out)->required();

  // run
  std::string r_config;
  std::vector<std::string> r_overrides;
  auto* c_run = app.add_subcommand("run", "run a configured pipeline");
  c_run->add_option("--config", r_config)->required();
  c_run->add_option("--set", r_overrides, "override a config key, e.g. --set seed=43");

  try {
    app.parse(argc, argv);

    if (c_ingest->parsed())
      return run_ingest(in_input, in_calendar, in_out, in_ts, in_px, in_delim, in_symbol);
    if (c_disc->parsed())
      return run_discretize(d_prices, d_states, d_mode, d_delta, d_train, d_out, d_grid_out);
    if (c_est->parsed()) return run_estimate(e_states, e_tmax, e_concat, e_self, e_out);
    if (c_idx->parsed())
      return run_index(x_states, x_kind, x_m, x_lambda, x_fid, x_minutes, x_out);
    if (c_eidx->parsed())
      return run_estimate_indexed(ei_states, ei_index, ei_levels, ei_tmax, ei_backoff, ei_out);
    if (c_sim->parsed()) {
      if (s_kernel.empty() && s_indexed.empty())
        throw smm::ConfigError("simulate needs --kernel or --index-kernel");
      return run_simulate(s_kernel, s_indexed, s_icfg, s_horizon, s_seed, s_reps, s_initial,
                          s_warmup, s_outdir);
    }
    if (c_acf->parsed()) {
      if (a_series.empty() && a_prices.empty())
        throw smm::ConfigError("acf needs --series or --prices");
      return run_acf(a_series, a_prices, a_lag, a_returns, a_exclude, a_out);
    }
    if (c_sweep->parsed())
      return run_sweep(w_param, w_grid, w_data, w_reps, w_seed, w_levels, w_lag, w_out);
    if (c_gen->parsed()) return run_generate(g_preset, g_spec, g_horizon, g_seed, g_out);
    if (c_run->parsed()) {
      std::string text = smm::read_file(r_config);
      for (const auto& kv : r_overrides) text += "\n" + kv;
      const smm::RunConfig cfg = smm::RunConfig::from_string(text);
      const smm::PipelineResult result = smm::run_pipeline(cfg, &std::cout);
      std::cout << "manifest: " << result.manifest_path << " (" << result.manifest.entries.size()
                << " artifacts)\n";
      return 0;
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const smm::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return smm::ConfigError::exit_code;
  } catch (const smm::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return smm::DataError::exit_code;
  } catch (const smm::NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return smm::NumericError::exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
