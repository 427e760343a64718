#include <cmath>
#include <numeric>

#include "doctest.h"
#include "telsim/montecarlo.hpp"
#include "telsim/rng.hpp"

using namespace telsim;

namespace {

TeleporterConfig unity_3db() {
  TeleporterConfig cfg;
  cfg.epr = EPRSpec::symmetric(squeezing_from_db(3.0));
  cfg.input_mean_x = 0.5;
  cfg.input_mean_y = 0.5;
  return cfg;
}

}  // namespace

TEST_CASE("run_trials: deterministic unity-gain classical teleporter") {
  TeleporterConfig cfg;  // r = 0, g = 1, phi = sqrt(2)
  cfg.input_mean_x = 0.7;
  cfg.input_mean_y = -0.2;
  FilterSpec filter{1.0, 5.0};
  TrialBatch batch = run_trials(cfg, filter, 200000, 91);
  CHECK(batch.n_accepted == batch.n_requested);
  CHECK(batch.p_success_hat == 1.0);
  REQUIRE(batch.has_estimators);
  OutputMoments want = output_moments(cfg);
  CHECK(std::abs(batch.mean_x.value - want.mean_x) < 4 * batch.mean_x.std_err);
  CHECK(std::abs(batch.mean_y.value - want.mean_y) < 4 * batch.mean_y.std_err);
  CHECK(std::abs(batch.var_x.value - want.var_x) < 4 * batch.var_x.std_err);
  CHECK(std::abs(batch.var_y.value - want.var_y) < 4 * batch.var_y.std_err);
}

TEST_CASE("run_trials: determinism for fixed seed") {
  TeleporterConfig cfg = unity_3db();
  cfg.g = 1.2;
  FilterSpec filter{1.2, 4.0};
  TrialBatch a = run_trials(cfg, filter, 50000, 1234);
  TrialBatch b = run_trials(cfg, filter, 50000, 1234);
  REQUIRE(a.n_accepted == b.n_accepted);
  CHECK(a.mean_x.value == b.mean_x.value);
  CHECK(a.var_y.std_err == b.var_y.std_err);
  for (std::size_t i = 0; i < a.accepted.size(); i += 997) {
    CHECK(a.accepted[i].x_out == b.accepted[i].x_out);
    CHECK(a.accepted[i].y_m == b.accepted[i].y_m);
  }
  TrialBatch c = run_trials(cfg, filter, 50000, 1235);
  CHECK(a.mean_x.value != c.mean_x.value);
}

TEST_CASE("run_trials: moments match the analytic oracle across configs") {
  Rng pick(2024);
  for (int trial = 0; trial < 6; ++trial) {
    TeleporterConfig cfg;
    cfg.epr = EPRSpec::symmetric(0.1 + 0.5 * pick.uniform());
    cfg.phi_x = cfg.phi_y = 0.8 + 0.8 * pick.uniform();
    cfg.g = 1.0 + 0.25 * pick.uniform();
    cfg.efficiency = 0.85 + 0.15 * pick.uniform();
    cfg.input_mean_x = 0.4 + 0.4 * pick.uniform();
    cfg.input_mean_y = 0.4 + 0.4 * pick.uniform();
    FilterSpec filter{cfg.g, 6.0};
    TrialBatch batch = run_trials(cfg, filter, 400000, 7000 + trial);
    REQUIRE(batch.has_estimators);
    OutputMoments want = output_moments(cfg);
    CHECK(std::abs(batch.mean_x.value - want.mean_x) < 4 * batch.mean_x.std_err);
    CHECK(std::abs(batch.mean_y.value - want.mean_y) < 4 * batch.mean_y.std_err);
    CHECK(std::abs(batch.var_x.value - want.var_x) < 4 * batch.var_x.std_err);
    CHECK(std::abs(batch.var_y.value - want.var_y) < 4 * batch.var_y.std_err);
  }
}

TEST_CASE("run_trials: acceptance rate matches quadrature prediction") {
  for (int i = 0; i < 4; ++i) {
    TeleporterConfig cfg = unity_3db();
    cfg.g = 1.1 + 0.15 * i;
    cfg.phi_x = cfg.phi_y = 1.0;
    FilterSpec filter{cfg.g, 4.0};
    const std::int64_t n = 300000;
    TrialBatch batch = run_trials(cfg, filter, n, 331 + i);
    const MeasurementModel mm = measurement_model(cfg);
    const std::complex<double> center{mm.mean_x3 / std::sqrt(mm.var_x3),
                                      mm.mean_y1 / std::sqrt(mm.var_y1)};
    const double p = expected_acceptance(filter, center, 1.0);
    const double se = std::sqrt(p * (1.0 - p) / n);
    CHECK(std::abs(batch.p_success_hat - p) < 3 * se);
  }
}

TEST_CASE("run_trials: p_success_hat non-increasing in g (paired seeds)") {
  TeleporterConfig cfg = unity_3db();
  double prev = 1.1;
  for (double g : {1.0, 1.1, 1.25, 1.4}) {
    cfg.g = g;
    FilterSpec filter{g, 4.0};
    TrialBatch batch = run_trials(cfg, filter, 100000, 555);
    CHECK(batch.p_success_hat <= prev);
    prev = batch.p_success_hat;
  }
}

TEST_CASE("estimate_channel: deterministic unity-gain run sits on the 3 dB curve") {
  TeleporterConfig cfg = unity_3db();
  FilterSpec filter{1.0, 6.0};
  TrialBatch batch = run_trials(cfg, filter, 500000, 808);
  ChannelEstimate est = estimate_channel(batch, cfg);
  const ChannelParams want = tv_to_taunu(tv_parameters(cfg));
  CHECK(std::abs(est.params.tau - want.tau) < 4 * est.tau_err);
  CHECK(std::abs(est.params.nu - want.nu) < 4 * est.nu_err);
  CHECK(est.tau_err > 0.0);
  CHECK(est.nu_err > 0.0);
}

TEST_CASE("estimate_channel: error bars grow with g at fixed n") {
  TeleporterConfig cfg = unity_3db();
  cfg.phi_x = cfg.phi_y = 1.1;
  double small_err = 0.0, large_err = 0.0;
  for (double g : {1.0, 1.35}) {
    cfg.g = g;
    FilterSpec filter{g, 4.5};
    TrialBatch batch = run_trials(cfg, filter, 400000, 99);
    ChannelEstimate est = estimate_channel(batch, cfg);
    (g == 1.0 ? small_err : large_err) = est.nu_err;
  }
  CHECK(large_err > small_err);
}

TEST_CASE("estimate_channel: preconditions") {
  TeleporterConfig cfg = unity_3db();
  FilterSpec filter{1.0, 6.0};
  TrialBatch tiny = run_trials(cfg, filter, 50, 3);
  CHECK_THROWS_AS(estimate_channel(tiny, cfg), std::invalid_argument);
  TeleporterConfig zero = cfg;
  zero.input_mean_x = 0.0;
  TrialBatch batch = run_trials(cfg, filter, 1000, 3);
  CHECK_THROWS_AS(estimate_channel(batch, zero), std::invalid_argument);
}

TEST_CASE("bootstrap") {
  std::vector<double> constant(500, 2.5);
  auto mean_stat = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  };
  auto [cest, cerr] = bootstrap(constant, mean_stat, 100, 7);
  CHECK(cest == doctest::Approx(2.5));
  CHECK(cerr == 0.0);

  Rng rng(88);
  std::vector<double> normals(10000);
  for (auto& v : normals) v = rng.normal();
  auto [est, err] = bootstrap(normals, mean_stat, 200, 7);
  CHECK(std::abs(est) < 0.05);
  CHECK(err == doctest::Approx(0.01).epsilon(0.3));

  auto [e1, s1] = bootstrap(normals, mean_stat, 200, 7);
  CHECK(e1 == est);
  CHECK(s1 == err);

  CHECK_THROWS_AS(bootstrap({}, mean_stat, 100, 1), std::invalid_argument);
}

TEST_CASE("accepted_source_stats: amplification of mean and variance") {
  // moderate gain so the unit test stays fast; the full g grid runs in the
  // acceptance suite
  const double mean = 0.3, var = 1.0;
  FilterSpec filter{1.25, 6.0};
  AcceptedSourceStats st =
      accepted_source_stats(filter, mean, var, mean, var, 30000000, 17);
  REQUIRE(st.n_accepted > 50000);
  const double g2 = filter.g * filter.g;
  const double se_mean = std::sqrt(st.var_x / st.n_accepted);
  const double se_var = st.var_x * std::sqrt(2.0 / st.n_accepted);
  CHECK(std::abs(st.mean_x - g2 * mean) < 3 * se_mean);
  CHECK(std::abs(st.mean_y - g2 * mean) < 3 * se_mean);
  CHECK(std::abs(st.var_x - g2 * var) < 3 * se_var);
  CHECK(std::abs(st.var_y - g2 * var) < 3 * se_var);
}

TEST_CASE("zero accepted trials are reported, not fatal") {
  TeleporterConfig cfg = unity_3db();
  cfg.g = 3.0;
  FilterSpec filter{3.0, 30.0};  // essentially never accepts
  TrialBatch batch = run_trials(cfg, filter, 2000, 4);
  CHECK(batch.n_accepted == 0);
  CHECK_FALSE(batch.has_estimators);
  CHECK(batch.p_success_hat == 0.0);
}
