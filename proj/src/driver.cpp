#include "telsim/driver.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <ostream>

namespace telsim {

const char kCsvHeader[] =
    "step,axis_value,mean_x,mean_y,var_x,var_y,Tq,Vq,tau,nu,tau_err,nu_err,"
    "p_success,n_accepted,fidelity,eof_choi";

RunMode parse_mode(const std::string& s) {
  if (s == "analytic") return RunMode::Analytic;
  if (s == "mc" || s == "montecarlo") return RunMode::MonteCarlo;
  throw ConfigError("unknown mode `" + s + "` (expected analytic|mc)");
}

void SweepSpec::validate() const {
  base.validate();
  filter.validate();
  if (axis != "phi" && axis != "g" && axis != "r_db" && axis != "efficiency") {
    throw ConfigError("sweep.axis must be one of phi|g|r_db|efficiency");
  }
  if (!std::isfinite(start) || !std::isfinite(stop)) {
    throw ConfigError("sweep range must be finite");
  }
  if (steps < 2) throw ConfigError("sweep.steps must be >= 2");
  if (mode == RunMode::MonteCarlo && n_trials < 100) {
    throw ConfigError("montecarlo sweeps need run.n_trials >= 100");
  }
}

TeleporterConfig teleporter_from_config(const KeyValueConfig& cfg) {
  TeleporterConfig c;
  const double r_db = cfg.get_double("epr.r_db", 0.0);
  c.epr = EPRSpec::symmetric(squeezing_from_db(r_db));
  c.epr.r_ax = squeezing_from_db(cfg.get_double("epr.r_ax_db", r_db));
  c.epr.r_ay = squeezing_from_db(cfg.get_double("epr.r_ay_db", r_db));
  c.epr.r_bx = squeezing_from_db(cfg.get_double("epr.r_bx_db", r_db));
  c.epr.r_by = squeezing_from_db(cfg.get_double("epr.r_by_db", r_db));
  const double phi = cfg.get_double("teleporter.phi", c.phi_x);
  c.phi_x = cfg.get_double("teleporter.phi_x", phi);
  c.phi_y = cfg.get_double("teleporter.phi_y", phi);
  c.g = cfg.get_double("mbnla.g", 1.0);
  c.efficiency = cfg.get_double("teleporter.efficiency", 1.0);
  c.input_mean_x = cfg.get_double("input.mean_x", 0.0);
  c.input_mean_y = cfg.get_double("input.mean_y", 0.0);
  c.input_var_x = cfg.get_double("input.var_x", 1.0);
  c.input_var_y = cfg.get_double("input.var_y", 1.0);
  try {
    c.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid teleporter parameters: ") + e.what());
  }
  return c;
}

FilterSpec filter_from_config(const KeyValueConfig& cfg) {
  FilterSpec f;
  f.g = cfg.get_double("mbnla.g", 1.0);
  f.alpha_c = cfg.get_double("mbnla.alpha_c", 5.0);
  try {
    f.validate();
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid filter parameters: ") + e.what());
  }
  return f;
}

SweepSpec sweep_from_config(const KeyValueConfig& cfg) {
  SweepSpec s;
  s.base = teleporter_from_config(cfg);
  s.filter = filter_from_config(cfg);
  s.choi_r = cfg.get_double("choi.r", 2.0);
  s.axis = cfg.get_string("sweep.axis", "");
  s.start = cfg.get_double("sweep.start", 0.0);
  s.stop = cfg.get_double("sweep.stop", 0.0);
  s.steps = static_cast<int>(cfg.get_int("sweep.steps", 2));
  s.mode = parse_mode(cfg.get_string("run.mode", "analytic"));
  s.n_trials = cfg.get_int("run.n_trials", 1000000);
  s.seed = cfg.get_u64("run.seed", 1);
  s.output_path = cfg.get_string("sweep.out", "");
  s.validate();
  return s;
}

std::string format_csv_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace {

// One sweep row; unset optionals render as empty cells.
struct Row {
  int step = 0;
  double axis_value = 0.0;
  bool has_moments = false;
  OutputMoments moments;
  bool has_tv = false;
  TVParams tv;
  bool has_taunu = false;
  ChannelParams taunu;
  double tau_err = -1.0, nu_err = -1.0;  // < 0 -> empty
  bool has_p_success = false;
  double p_success = 0.0;
  std::int64_t n_accepted = -1;  // < 0 -> empty
  bool has_fidelity = false;
  double fidelity_value = 0.0;
  bool has_eof = false;
  double eof_choi = 0.0;
};

void write_row(std::ostream& out, const Row& r) {
  const auto cell = [](bool present, double v) {
    return present ? format_csv_value(v) : std::string();
  };
  out << r.step << ',' << format_csv_value(r.axis_value) << ','
      << cell(r.has_moments, r.moments.mean_x) << ','
      << cell(r.has_moments, r.moments.mean_y) << ','
      << cell(r.has_moments, r.moments.var_x) << ','
      << cell(r.has_moments, r.moments.var_y) << ',' << cell(r.has_tv, r.tv.t_q)
      << ',' << cell(r.has_tv, r.tv.v_q) << ',' << cell(r.has_taunu, r.taunu.tau)
      << ',' << cell(r.has_taunu, r.taunu.nu) << ','
      << cell(r.tau_err >= 0.0, r.tau_err) << ',' << cell(r.nu_err >= 0.0, r.nu_err)
      << ',' << cell(r.has_p_success, r.p_success) << ','
      << (r.n_accepted >= 0 ? std::to_string(r.n_accepted) : std::string()) << ','
      << cell(r.has_fidelity, r.fidelity_value) << ','
      << cell(r.has_eof, r.eof_choi) << '\n';
}

TeleporterConfig at_axis(const SweepSpec& spec, double value) {
  TeleporterConfig c = spec.base;
  if (spec.axis == "phi") {
    c.phi_x = value;
    c.phi_y = value;
  } else if (spec.axis == "g") {
    c.g = value;
  } else if (spec.axis == "r_db") {
    c.epr = EPRSpec::symmetric(squeezing_from_db(value));
  } else {
    c.efficiency = value;
  }
  c.validate();
  return c;
}

std::complex<double> standardized_center(const MeasurementModel& mm) {
  return {mm.mean_x3 / std::sqrt(mm.var_x3), mm.mean_y1 / std::sqrt(mm.var_y1)};
}

void fill_eof(Row& row, double choi_r) {
  if (!row.has_taunu) return;
  try {
    const GaussianState choi = choi_state(row.taunu, choi_r);
    if (!is_physical(choi)) return;  // heralded points can land outside
    row.eof_choi = entanglement_of_formation(choi);
    row.has_eof = true;
  } catch (const std::exception&) {
  }
}

Row analytic_row(const SweepSpec& spec, int step, double value) {
  const TeleporterConfig cfg = at_axis(spec, value);
  FilterSpec filter = spec.filter;
  filter.g = cfg.g;
  Row row;
  row.step = step;
  row.axis_value = value;
  row.moments = output_moments(cfg);
  row.has_moments = true;
  row.fidelity_value = fidelity(input_moments(cfg), row.moments);
  row.has_fidelity = true;
  row.p_success =
      expected_acceptance(filter, standardized_center(measurement_model(cfg)), 1.0);
  row.has_p_success = true;
  if (cfg.input_mean_x != 0.0 && cfg.input_mean_y != 0.0) {
    row.tv = tv_parameters(cfg);
    row.has_tv = true;
    if (row.tv.t_q < 2.0 && row.tv.v_q >= 0.0) {
      row.taunu = tv_to_taunu(row.tv);
      row.has_taunu = true;
    }
  }
  fill_eof(row, spec.choi_r);
  return row;
}

Row montecarlo_row(const SweepSpec& spec, int step, double value) {
  const TeleporterConfig cfg = at_axis(spec, value);
  FilterSpec filter = spec.filter;
  filter.g = cfg.g;
  Row row;
  row.step = step;
  row.axis_value = value;
  const TrialBatch batch = run_trials(cfg, filter, spec.n_trials, spec.seed);
  row.p_success = batch.p_success_hat;
  row.has_p_success = true;
  row.n_accepted = batch.n_accepted;
  if (!batch.has_estimators) {
    std::cerr << "warning: sweep step " << step << " (axis " << spec.axis << " = "
              << value << ") accepted " << batch.n_accepted
              << " of " << batch.n_requested << " trials; estimators omitted\n";
    return row;
  }
  row.moments = {batch.mean_x.value, batch.mean_y.value, batch.var_x.value,
                 batch.var_y.value};
  row.has_moments = true;
  row.fidelity_value = fidelity(input_moments(cfg), row.moments);
  row.has_fidelity = true;
  if (cfg.input_mean_x != 0.0 && cfg.input_mean_y != 0.0 &&
      batch.n_accepted >= 100) {
    const ChannelEstimate est = estimate_channel(batch, cfg);
    row.tv = est.tv;
    row.has_tv = true;
    row.taunu = est.params;
    row.has_taunu = true;
    row.tau_err = est.tau_err;
    row.nu_err = est.nu_err;
  }
  fill_eof(row, spec.choi_r);
  return row;
}

}  // namespace

void run_sweep(const SweepSpec& spec, std::ostream& out) {
  spec.validate();
  out << kCsvHeader << '\n';
  for (int step = 0; step < spec.steps; ++step) {
    const double value =
        spec.start + (spec.stop - spec.start) * step / (spec.steps - 1);
    const Row row = spec.mode == RunMode::Analytic
                        ? analytic_row(spec, step, value)
                        : montecarlo_row(spec, step, value);
    write_row(out, row);
  }
}

void run_simulate(const KeyValueConfig& cfg, std::ostream& out) {
  const TeleporterConfig tc = teleporter_from_config(cfg);
  const FilterSpec filter = filter_from_config(cfg);
  const double choi_r = cfg.get_double("choi.r", 2.0);
  const RunMode mode = parse_mode(cfg.get_string("run.mode", "analytic"));

  SweepSpec shim;  // reuse the row assembly for a single point
  shim.base = tc;
  shim.filter = filter;
  shim.choi_r = choi_r;
  shim.axis = "g";
  shim.n_trials = cfg.get_int("run.n_trials", 1000000);
  shim.seed = cfg.get_u64("run.seed", 1);
  shim.mode = mode;
  const Row row = mode == RunMode::Analytic ? analytic_row(shim, 0, tc.g)
                                            : montecarlo_row(shim, 0, tc.g);

  out << "mode: " << (mode == RunMode::Analytic ? "analytic" : "mc") << '\n';
  out << "input: mean_x=" << format_csv_value(tc.input_mean_x)
      << " mean_y=" << format_csv_value(tc.input_mean_y)
      << " var_x=" << format_csv_value(tc.input_var_x)
      << " var_y=" << format_csv_value(tc.input_var_y) << '\n';
  if (row.has_moments) {
    out << "output: mean_x=" << format_csv_value(row.moments.mean_x)
        << " mean_y=" << format_csv_value(row.moments.mean_y)
        << " var_x=" << format_csv_value(row.moments.var_x)
        << " var_y=" << format_csv_value(row.moments.var_y) << '\n';
  }
  if (row.has_fidelity) {
    out << "fidelity: " << format_csv_value(row.fidelity_value) << '\n';
  }
  if (row.has_tv) {
    out << "Tq: " << format_csv_value(row.tv.t_q)
        << " Vq: " << format_csv_value(row.tv.v_q) << '\n';
  }
  if (row.has_taunu) {
    out << "tau: " << format_csv_value(row.taunu.tau)
        << " nu: " << format_csv_value(row.taunu.nu);
    if (row.tau_err >= 0.0) {
      out << " tau_err: " << format_csv_value(row.tau_err)
          << " nu_err: " << format_csv_value(row.nu_err);
    }
    out << '\n';
    const ChannelClass cls = classify(row.taunu);
    out << "class: " << to_string(cls.tag);
    if (cls.tag != ChannelTag::Identity && cls.tag != ChannelTag::AdditiveNoise &&
        cls.tag != ChannelTag::NonPhysical) {
      out << " (chi=" << format_csv_value(cls.chi) << ")";
    }
    out << '\n';
  }
  if (row.has_p_success) {
    out << "p_success: " << format_csv_value(row.p_success) << '\n';
  }
  if (row.n_accepted >= 0) {
    out << "n_accepted: " << row.n_accepted << '\n';
  }
  if (row.has_eof) {
    out << "eof_choi: " << format_csv_value(row.eof_choi) << '\n';
  }
}

void run_channel_map(const ChannelParams& params, double r_choi, std::ostream& out) {
  if (!std::isfinite(params.tau) || !std::isfinite(params.nu) || params.tau <= 0.0 ||
      params.nu < 0.0) {
    throw ConfigError("channel-map: need finite tau > 0 and nu >= 0");
  }
  const ChannelClass cls = classify(params);
  out << "tau: " << format_csv_value(params.tau)
      << " nu: " << format_csv_value(params.nu) << '\n';
  out << "class: " << to_string(cls.tag) << '\n';
  const bool physical = cls.tag != ChannelTag::NonPhysical;
  out << "physical: " << (physical ? "yes" : "no") << '\n';
  if (cls.tag != ChannelTag::Identity && cls.tag != ChannelTag::AdditiveNoise &&
      cls.tag != ChannelTag::NonPhysical) {
    out << "chi: " << format_csv_value(cls.chi) << '\n';
  }
  const TVParams tv = taunu_to_tv(params);
  out << "Tq: " << format_csv_value(tv.t_q) << " Vq: " << format_csv_value(tv.v_q)
      << '\n';
  if (physical) {
    const GaussianState choi = choi_state(params, r_choi);
    if (is_physical(choi)) {
      out << "eof_choi: " << format_csv_value(entanglement_of_formation(choi))
          << '\n';
    }
  }
}

}  // namespace telsim
