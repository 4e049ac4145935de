#include "smm/diagnostics.hpp"

#include <algorithm>
#include <future>
#include <limits>

#include "smm/errors.hpp"
#include "smm/indexed_kernel.hpp"
#include "smm/kernel.hpp"
#include "smm/mrp.hpp"
#include "smm/simulate.hpp"

namespace smm {

namespace {

AcfCurve acf_impl(const std::vector<double>& x, int tau_max, const AcfOptions& opts) {
  if (tau_max < 1) throw UsageError("tau_max must be >= 1");
  if (x.size() <= static_cast<std::size_t>(tau_max) + 1)
    throw UsageError("series too short for the requested max lag");

  const std::size_t n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);

  std::vector<double> c(n);
  double var = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    c[t] = x[t] - mean;
    var += c[t] * c[t];
  }
  if (var <= 0.0) throw NumericError("zero variance: autocorrelation undefined");

  AcfCurve curve;
  curve.tau_max = tau_max;
  curve.n = n;
  curve.values.resize(static_cast<std::size_t>(tau_max));

  if (!opts.exclude_day_boundaries || opts.day_starts.size() <= 1) {
    for (int tau = 1; tau <= tau_max; ++tau) {
      double num = 0.0;
      const std::size_t limit = n - static_cast<std::size_t>(tau);
      for (std::size_t t = 0; t < limit; ++t) num += c[t] * c[t + static_cast<std::size_t>(tau)];
      curve.values[static_cast<std::size_t>(tau - 1)] = num / var;
    }
    return curve;
  }

  // Boundary-excluding variant: only pairs inside one day count, scaled by
  // pair count so lags stay comparable with the default estimator.
  for (int tau = 1; tau <= tau_max; ++tau) {
    double num = 0.0;
    std::size_t pairs = 0;
    for (std::size_t d = 0; d < opts.day_starts.size(); ++d) {
      const std::size_t lo = opts.day_starts[d];
      const std::size_t hi = d + 1 < opts.day_starts.size() ? opts.day_starts[d + 1] : n;
      if (hi - lo <= static_cast<std::size_t>(tau)) continue;
      for (std::size_t t = lo; t + static_cast<std::size_t>(tau) < hi; ++t) {
        num += c[t] * c[t + static_cast<std::size_t>(tau)];
        ++pairs;
      }
    }
    const double scale = pairs > 0 ? static_cast<double>(n - static_cast<std::size_t>(tau)) /
                                         static_cast<double>(pairs)
                                   : 0.0;
    curve.values[static_cast<std::size_t>(tau - 1)] = pairs > 0 ? num * scale / var : 0.0;
  }
  return curve;
}

}  // namespace

AcfCurve acf_squared(const std::vector<double>& series, int tau_max, const AcfOptions& opts) {
  std::vector<double> sq(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) sq[i] = series[i] * series[i];
  return acf_impl(sq, tau_max, opts);
}

AcfCurve acf_returns(const std::vector<double>& series, int tau_max, const AcfOptions& opts) {
  return acf_impl(series, tau_max, opts);
}

double mse_acf(const AcfCurve& real, const AcfCurve& synth) {
  if (real.tau_max != synth.tau_max || real.values.size() != synth.values.size())
    throw UsageError("ACF curves have different lag grids");
  double acc = 0.0;
  for (std::size_t k = 0; k < real.values.size(); ++k) {
    const double d = real.values[k] - synth.values[k];
    acc += d * d;
  }
  return acc / static_cast<double>(real.values.size());
}

namespace {

int modal_state(const StateSeries& data) {
  std::vector<std::size_t> hist(static_cast<std::size_t>(data.num_states), 0);
  for (int s : data.states) ++hist[static_cast<std::size_t>(s)];
  return static_cast<int>(std::max_element(hist.begin(), hist.end()) - hist.begin());
}

struct SweepContext {
  const StateSeries* data;
  MarkovRenewalSample sample;
  AcfCurve data_curve;
  int t_max;
  int initial_state;
};

SweepPoint run_sweep_point(const SweepContext& ctx, const SweepConfig& cfg,
                           const IndexConfig& icfg, double param, std::size_t point_index) {
  SweepPoint pt;
  pt.param = param;
  pt.replications = cfg.replications;
  pt.seed = derive_seed(cfg.seed, point_index);
  try {
    IndexSeries index = compute_index(ctx.sample, icfg);
    IndexGrid vgrid = fit_index_grid(index.at_jumps, cfg.num_levels);
    IndexedKernel ik =
        estimate_indexed_kernel(ctx.sample, index, vgrid, ctx.t_max, cfg.backoff_threshold);

    const std::int64_t horizon = static_cast<std::int64_t>(ctx.data->size());
    std::vector<double> avg(static_cast<std::size_t>(cfg.tau_max), 0.0);
    for (int r = 0; r < cfg.replications; ++r) {
      SimulationConfig sim;
      sim.horizon = horizon;
      sim.seed = derive_seed(pt.seed, static_cast<std::uint64_t>(r));
      sim.initial_state = ctx.initial_state;
      sim.warmup_minutes = cfg.warmup_minutes;
      Trajectory traj = simulate_indexed(ik, sim);
      StateSeries sim_series = expand_to_minutes(traj, horizon, ctx.data->state_values);
      AcfCurve curve = acf_squared(sim_series.values(), cfg.tau_max);
      for (std::size_t k = 0; k < avg.size(); ++k) avg[k] += curve.values[k];
    }
    AcfCurve mean_curve;
    mean_curve.tau_max = cfg.tau_max;
    mean_curve.n = ctx.data->size();
    mean_curve.values = std::move(avg);
    for (double& v : mean_curve.values) v /= static_cast<double>(cfg.replications);
    pt.mse = mse_acf(ctx.data_curve, mean_curve);
  } catch (const std::exception& e) {
    pt.failed = true;
    pt.error = e.what();
  }
  return pt;
}

template <typename ParamT, typename MakeConfig>
SweepResult run_sweep(const StateSeries& data, const std::vector<ParamT>& grid,
                      const SweepConfig& cfg, MakeConfig make_config) {
  if (grid.empty()) throw UsageError("empty parameter grid");

  SweepContext ctx;
  ctx.data = &data;
  ctx.sample = extract_mrp(data);
  ctx.data_curve = acf_squared(data.values(), cfg.tau_max);
  ctx.t_max = max_observed_sojourn(ctx.sample);
  ctx.initial_state = modal_state(data);

  SweepResult result;
  result.points.resize(grid.size());

  auto run_point = [&](std::size_t k) {
    IndexConfig icfg = make_config(grid[k]);
    icfg.f_id = cfg.f_id;
    icfg.resolve_f(data.state_values);
    return run_sweep_point(ctx, cfg, icfg, static_cast<double>(grid[k]), k);
  };

  if (cfg.parallel && grid.size() > 1) {
    std::vector<std::future<SweepPoint>> futures;
    futures.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k)
      futures.push_back(std::async(std::launch::async, run_point, k));
    for (std::size_t k = 0; k < grid.size(); ++k) result.points[k] = futures[k].get();
  } else {
    for (std::size_t k = 0; k < grid.size(); ++k) result.points[k] = run_point(k);
  }

  double best = std::numeric_limits<double>::infinity();
  bool any = false;
  for (std::size_t k = 0; k < result.points.size(); ++k) {
    if (result.points[k].failed) continue;
    if (result.points[k].mse < best) {
      best = result.points[k].mse;
      result.argmin = k;
      any = true;
    }
  }
  if (!any) throw NumericError("every sweep point failed");
  return result;
}

}  // namespace

SweepResult sweep_m(const StateSeries& data, const std::vector<int>& m_grid,
                    const SweepConfig& cfg) {
  return run_sweep(data, m_grid, cfg, [](int m) {
    IndexConfig icfg;
    icfg.kind = IndexKind::kMovingAverage;
    icfg.m = m;
    return icfg;
  });
}

SweepResult sweep_lambda(const StateSeries& data, const std::vector<double>& lambda_grid,
                         const SweepConfig& cfg) {
  return run_sweep(data, lambda_grid, cfg, [](double lambda) {
    IndexConfig icfg;
    icfg.kind = IndexKind::kEwma;
    icfg.lambda = lambda;
    return icfg;
  });
}

}  // namespace smm
