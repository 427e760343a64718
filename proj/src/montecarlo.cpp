#include "telsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "telsim/rng.hpp"

namespace telsim {

namespace {

constexpr int kShards = 64;  // fixed so results are independent of thread count
constexpr int kBootstrapResamples = 200;

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("TELEPORTSIM_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<long>(n, cap);
  }
  return std::min(n, kShards);
}

// Runs fn(shard_index) for each shard, distributing shards round-robin over
// workers. Shard outputs are merged by the caller in shard order.
template <typename Fn>
void for_each_shard(Fn&& fn) {
  const int workers = worker_count();
  if (workers == 1) {
    for (int s = 0; s < kShards; ++s) fn(s);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&fn, w, workers] {
      for (int s = w; s < kShards; s += workers) fn(s);
    });
  }
  for (auto& t : pool) t.join();
}

// Acceptance test without evaluating the filter exponential: u < f(alpha)
// iff |alpha|^2 > alpha_c^2 + 2 ln(u) / (1 - g^-2).
struct FastFilter {
  double c;    // 1 - g^-2
  double ac2;  // alpha_c^2

  explicit FastFilter(const FilterSpec& spec)
      : c(1.0 - 1.0 / (spec.g * spec.g)), ac2(spec.alpha_c * spec.alpha_c) {}

  bool accept(double alpha_sq, double u) const {
    if (alpha_sq >= ac2 || c <= 0.0) return true;
    if (u <= 0.0) return true;
    return alpha_sq > ac2 + 2.0 * std::log(u) / c;
  }
};

struct MomentErrs {
  double mean_x, var_x, mean_y, var_y;
};

// Joint bootstrap over accepted records: one index draw per resample element
// feeds all four moment statistics.
MomentErrs moment_bootstrap(const std::vector<TrialRecord>& rec, std::uint64_t seed) {
  const std::size_t n = rec.size();
  Rng rng(seed, 0x6D6F6D656E747355ULL);
  double sums[4] = {0, 0, 0, 0};
  double sqs[4] = {0, 0, 0, 0};
  for (int b = 0; b < kBootstrapResamples; ++b) {
    double sx = 0, sxx = 0, sy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const TrialRecord& r = rec[rng.below(n)];
      sx += r.x_out;
      sxx += r.x_out * r.x_out;
      sy += r.y_out;
      syy += r.y_out * r.y_out;
    }
    const double nd = static_cast<double>(n);
    const double mx = sx / nd, my = sy / nd;
    const double stats[4] = {mx, (sxx - nd * mx * mx) / (nd - 1.0), my,
                             (syy - nd * my * my) / (nd - 1.0)};
    for (int k = 0; k < 4; ++k) {
      sums[k] += stats[k];
      sqs[k] += stats[k] * stats[k];
    }
  }
  const double nb = kBootstrapResamples;
  const auto sd = [&](int k) {
    const double v = (sqs[k] - sums[k] * sums[k] / nb) / (nb - 1.0);
    return v > 0.0 ? std::sqrt(v) : 0.0;
  };
  return {sd(0), sd(1), sd(2), sd(3)};
}

struct TvInputs {
  double mx_in, my_in, vx_in, vy_in;
};

// First-principles (T_q, V_q) from sample moments of the output, mapped to
// (tau, nu). Pathological resamples are clamped to the map's domain edge.
ChannelParams taunu_from_moments(double mx, double vx, double my, double vy,
                                 const TvInputs& in) {
  const double tx = (mx * mx / vx) * (in.vx_in / (in.mx_in * in.mx_in));
  const double ty = (my * my / vy) * (in.vy_in / (in.my_in * in.my_in));
  const double tau_x = (mx / in.mx_in) * (mx / in.mx_in);
  const double tau_y = (my / in.my_in) * (my / in.my_in);
  const double nu_x = vx - tau_x * in.vx_in;
  const double nu_y = vy - tau_y * in.vy_in;
  TVParams tv;
  tv.t_q = std::min(tx + ty, 2.0 - 1e-12);
  tv.v_q = std::max(nu_x * nu_y, 0.0);
  return tv_to_taunu(tv);
}

}  // namespace

TrialBatch run_trials(const TeleporterConfig& cfg, const FilterSpec& filter,
                      std::int64_t n, std::uint64_t seed) {
  cfg.validate();
  filter.validate();
  if (n < 1) throw std::invalid_argument("run_trials: n must be >= 1");

  const MeasurementModel mm = measurement_model(cfg);
  const double sx = std::sqrt(mm.var_x3);
  const double sy = std::sqrt(mm.var_y1);
  const double cond_sx = std::sqrt(mm.cond_var_x2());
  const double cond_sy = std::sqrt(mm.cond_var_y2());
  const double slope_x = mm.cov_x23 / mm.var_x3;
  const double slope_y = mm.cov_y21 / mm.var_y1;
  const FastFilter fast(filter);

  std::vector<std::vector<TrialRecord>> per_shard(kShards);
  for_each_shard([&](int s) {
    const std::int64_t lo = n * s / kShards;
    const std::int64_t hi = n * (s + 1) / kShards;
    Rng rng(seed, static_cast<std::uint64_t>(s));
    auto& out = per_shard[s];
    for (std::int64_t i = lo; i < hi; ++i) {
      const double xm = mm.mean_x3 + sx * rng.normal();
      const double ym = mm.mean_y1 + sy * rng.normal();
      const double ax = xm / sx, ay = ym / sy;
      if (!fast.accept(ax * ax + ay * ay, rng.uniform())) continue;
      TrialRecord r;
      r.x_m = xm;
      r.y_m = ym;
      r.x_out = slope_x * (xm - mm.mean_x3) + cond_sx * rng.normal() + cfg.phi_x * xm;
      r.y_out = slope_y * (ym - mm.mean_y1) + cond_sy * rng.normal() + cfg.phi_y * ym;
      out.push_back(r);
    }
  });

  TrialBatch batch;
  batch.seed = seed;
  batch.n_requested = n;
  for (const auto& shard : per_shard) {
    batch.accepted.insert(batch.accepted.end(), shard.begin(), shard.end());
  }
  batch.n_accepted = static_cast<std::int64_t>(batch.accepted.size());
  batch.p_success_hat =
      static_cast<double>(batch.n_accepted) / static_cast<double>(n);
  if (batch.n_accepted < 2) return batch;

  double sxo = 0, sxx = 0, syo = 0, syy = 0;
  for (const auto& r : batch.accepted) {
    sxo += r.x_out;
    sxx += r.x_out * r.x_out;
    syo += r.y_out;
    syy += r.y_out * r.y_out;
  }
  const double nd = static_cast<double>(batch.n_accepted);
  batch.mean_x.value = sxo / nd;
  batch.mean_y.value = syo / nd;
  batch.var_x.value = (sxx - nd * batch.mean_x.value * batch.mean_x.value) / (nd - 1.0);
  batch.var_y.value = (syy - nd * batch.mean_y.value * batch.mean_y.value) / (nd - 1.0);
  const MomentErrs errs = moment_bootstrap(batch.accepted, seed);
  batch.mean_x.std_err = errs.mean_x;
  batch.var_x.std_err = errs.var_x;
  batch.mean_y.std_err = errs.mean_y;
  batch.var_y.std_err = errs.var_y;
  batch.has_estimators = true;
  return batch;
}

ChannelEstimate estimate_channel(const TrialBatch& batch, const TeleporterConfig& cfg) {
  if (batch.n_accepted < 100) {
    throw std::invalid_argument("estimate_channel: need at least 100 accepted trials");
  }
  if (cfg.input_mean_x == 0.0 || cfg.input_mean_y == 0.0) {
    throw std::invalid_argument("estimate_channel: input means must be nonzero");
  }
  const TvInputs in{cfg.input_mean_x, cfg.input_mean_y, cfg.input_var_x,
                    cfg.input_var_y};
  ChannelEstimate est;
  est.params = taunu_from_moments(batch.mean_x.value, batch.var_x.value,
                                  batch.mean_y.value, batch.var_y.value, in);
  est.tv = taunu_to_tv(est.params);

  const std::size_t n = batch.accepted.size();
  Rng rng(batch.seed, 0x6368616E6E656C00ULL);
  double s_tau = 0, s2_tau = 0, s_nu = 0, s2_nu = 0;
  for (int b = 0; b < kBootstrapResamples; ++b) {
    double sx = 0, sxx = 0, sy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const TrialRecord& r = batch.accepted[rng.below(n)];
      sx += r.x_out;
      sxx += r.x_out * r.x_out;
      sy += r.y_out;
      syy += r.y_out * r.y_out;
    }
    const double nd = static_cast<double>(n);
    const double mx = sx / nd, my = sy / nd;
    const double vx = (sxx - nd * mx * mx) / (nd - 1.0);
    const double vy = (syy - nd * my * my) / (nd - 1.0);
    const ChannelParams p = taunu_from_moments(mx, vx, my, vy, in);
    s_tau += p.tau;
    s2_tau += p.tau * p.tau;
    s_nu += p.nu;
    s2_nu += p.nu * p.nu;
  }
  const double nb = kBootstrapResamples;
  const double v_tau = (s2_tau - s_tau * s_tau / nb) / (nb - 1.0);
  const double v_nu = (s2_nu - s_nu * s_nu / nb) / (nb - 1.0);
  est.tau_err = v_tau > 0.0 ? std::sqrt(v_tau) : 0.0;
  est.nu_err = v_nu > 0.0 ? std::sqrt(v_nu) : 0.0;
  return est;
}

std::pair<double, double> bootstrap(
    const std::vector<double>& values,
    const std::function<double(const std::vector<double>&)>& statistic,
    int resamples, std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("bootstrap: empty input");
  if (resamples < 2) throw std::invalid_argument("bootstrap: need >= 2 resamples");
  const double estimate = statistic(values);
  Rng rng(seed, 0x626F6F7473747261ULL);
  std::vector<double> resample(values.size());
  double s = 0, s2 = 0;
  for (int b = 0; b < resamples; ++b) {
    for (auto& v : resample) v = values[rng.below(values.size())];
    const double stat = statistic(resample);
    s += stat;
    s2 += stat * stat;
  }
  const double nb = resamples;
  const double var = (s2 - s * s / nb) / (nb - 1.0);
  return {estimate, var > 0.0 ? std::sqrt(var) : 0.0};
}

AcceptedSourceStats accepted_source_stats(const FilterSpec& filter, double mean_x,
                                          double var_x, double mean_y, double var_y,
                                          std::int64_t n, std::uint64_t seed) {
  filter.validate();
  if (n < 1) throw std::invalid_argument("accepted_source_stats: n must be >= 1");
  if (!(var_x > 0.0) || !(var_y > 0.0)) {
    throw std::invalid_argument("accepted_source_stats: variances must be positive");
  }
  const double sx = std::sqrt(var_x);
  const double sy = std::sqrt(var_y);
  const FastFilter fast(filter);

  struct Acc {
    std::int64_t count = 0;
    double sx = 0, sxx = 0, sy = 0, syy = 0;
  };
  std::vector<Acc> per_shard(kShards);
  for_each_shard([&](int s) {
    const std::int64_t lo = n * s / kShards;
    const std::int64_t hi = n * (s + 1) / kShards;
    Rng rng(seed, static_cast<std::uint64_t>(s));
    Acc acc;
    for (std::int64_t i = lo; i < hi; ++i) {
      const double zx = rng.normal();
      const double zy = rng.normal();
      const double u = rng.uniform();
      const double ax = mean_x / sx + zx;
      const double ay = mean_y / sy + zy;
      if (!fast.accept(ax * ax + ay * ay, u)) continue;
      const double xm = mean_x + sx * zx;
      const double ym = mean_y + sy * zy;
      ++acc.count;
      acc.sx += xm;
      acc.sxx += xm * xm;
      acc.sy += ym;
      acc.syy += ym * ym;
    }
    per_shard[s] = acc;
  });

  AcceptedSourceStats out;
  out.n_requested = n;
  double t_sx = 0, t_sxx = 0, t_sy = 0, t_syy = 0;
  for (const auto& acc : per_shard) {
    out.n_accepted += acc.count;
    t_sx += acc.sx;
    t_sxx += acc.sxx;
    t_sy += acc.sy;
    t_syy += acc.syy;
  }
  if (out.n_accepted >= 2) {
    const double nd = static_cast<double>(out.n_accepted);
    out.mean_x = t_sx / nd;
    out.mean_y = t_sy / nd;
    out.var_x = (t_sxx - nd * out.mean_x * out.mean_x) / (nd - 1.0);
    out.var_y = (t_syy - nd * out.mean_y * out.mean_y) / (nd - 1.0);
  }
  return out;
}

}  // namespace telsim
