#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "smm/discretize.hpp"
#include "smm/index.hpp"

namespace smm {

// Lagged autocorrelation, lags 1..tau_max. values[k] belongs to lag k+1.
struct AcfCurve {
  int tau_max = 0;
  std::vector<double> values;
  std::size_t n = 0;   // series length behind the estimate

  double at_lag(int tau) const { return values[static_cast<std::size_t>(tau - 1)]; }
};

struct AcfOptions {
  // Lag pairs straddling a day boundary are included by default
  // (concatenated series); set with day_starts to drop them.
  bool exclude_day_boundaries = false;
  std::vector<std::size_t> day_starts;
};

// Autocorrelation of the squared series (the volatility-clustering probe).
// Uses the variance-normalized estimator with the full-sample mean, which
// keeps every value in [-1, 1]. Throws NumericError when the squared
// series has zero variance.
AcfCurve acf_squared(const std::vector<double>& series, int tau_max, const AcfOptions& opts = {});

// Same estimator on the raw series.
AcfCurve acf_returns(const std::vector<double>& series, int tau_max, const AcfOptions& opts = {});

// Mean over lags of squared differences; grids must match exactly.
double mse_acf(const AcfCurve& real, const AcfCurve& synth);

// The +-3/sqrt(N) band a white-noise ACF should stay inside.
inline double white_noise_band(std::size_t n) {
  return 3.0 / std::sqrt(static_cast<double>(n));
}

struct SweepPoint {
  double param = 0.0;
  double mse = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
  int replications = 0;
  bool failed = false;
  std::string error;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  std::size_t argmin = 0;          // index into points, among non-failed
  double param_at_argmin() const { return points[argmin].param; }
};

// Shared settings for the parameter sweeps: per grid point, the index is
// rebuilt on the data, an indexed kernel is estimated, `replications`
// matched-length series are simulated (seeds derived from `seed`, the
// point index, and the replication number), their squared-ACF curves are
// averaged, and the MSE against the data curve is recorded.
struct SweepConfig {
  int num_levels = 5;
  double backoff_threshold = 50;
  int replications = 10;
  std::uint64_t seed = 7;
  int tau_max = 100;
  std::int64_t warmup_minutes = 1000;
  std::string f_id = "squared_value";
  bool parallel = true;
};

// Optimal-memory search for the moving-average index.
SweepResult sweep_m(const StateSeries& data, const std::vector<int>& m_grid,
                    const SweepConfig& cfg);

// Optimal-weight search for the EWMA index.
SweepResult sweep_lambda(const StateSeries& data, const std::vector<double>& lambda_grid,
                         const SweepConfig& cfg);

}  // namespace smm
