#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "telsim/channel.hpp"
#include "telsim/mbnla.hpp"
#include "telsim/teleporter.hpp"

namespace telsim {

struct TrialRecord {
  double x_m = 0.0;
  double y_m = 0.0;
  double x_out = 0.0;
  double y_out = 0.0;
};

struct MomentEstimate {
  double value = 0.0;
  double std_err = 0.0;
};

struct TrialBatch {
  std::uint64_t seed = 0;
  std::int64_t n_requested = 0;
  std::int64_t n_accepted = 0;
  std::vector<TrialRecord> accepted;
  double p_success_hat = 0.0;

  // bootstrap-errored output moment estimators; invalid when n_accepted < 2
  bool has_estimators = false;
  MomentEstimate mean_x, mean_y, var_x, var_y;
};

struct ChannelEstimate {
  ChannelParams params;
  double tau_err = 0.0;
  double nu_err = 0.0;
  TVParams tv;
};

/// Samples n dual-homodyne trials, applies the acceptance filter to the
/// standardized outcome alpha_m = x_m/sigma_x + i y_m/sigma_y, and for each
/// accepted trial draws Bob's conditional output with the feed-forward
/// displacement phi * measured value. Deterministic for a fixed seed
/// regardless of thread count (fixed shard decomposition; TELEPORTSIM_THREADS
/// caps workers).
TrialBatch run_trials(const TeleporterConfig& cfg, const FilterSpec& filter,
                      std::int64_t n, std::uint64_t seed);

/// Empirical (tau, nu) from the accepted samples of a batch, with seeded
/// nonparametric bootstrap errors (200 resamples). Requires n_accepted >= 100
/// and nonzero input means.
ChannelEstimate estimate_channel(const TrialBatch& batch, const TeleporterConfig& cfg);

/// Seeded nonparametric bootstrap: returns (statistic(values), std err over
/// `resamples` resampled statistics). Throws on empty input.
std::pair<double, double> bootstrap(
    const std::vector<double>& values,
    const std::function<double(const std::vector<double>&)>& statistic,
    int resamples, std::uint64_t seed);

/// Moments of the accepted measurement outcomes themselves (no output draw,
/// no record storage) — cheap enough for >= 1e8 trials. Used for filter
/// amplification checks.
struct AcceptedSourceStats {
  std::int64_t n_requested = 0;
  std::int64_t n_accepted = 0;
  double mean_x = 0.0, var_x = 0.0;
  double mean_y = 0.0, var_y = 0.0;
};

AcceptedSourceStats accepted_source_stats(const FilterSpec& filter, double mean_x,
                                          double var_x, double mean_y, double var_y,
                                          std::int64_t n, std::uint64_t seed);

}  // namespace telsim
