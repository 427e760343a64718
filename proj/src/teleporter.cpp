#include "telsim/teleporter.hpp"

#include <cmath>
#include <stdexcept>

namespace telsim {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

void TeleporterConfig::validate() const {
  epr.validate();
  if (!(g >= 1.0) || !std::isfinite(g)) {
    throw std::invalid_argument("TeleporterConfig: MBNLA gain must be >= 1");
  }
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("TeleporterConfig: efficiency must be in (0, 1]");
  }
  if (!std::isfinite(phi_x) || !std::isfinite(phi_y)) {
    throw std::invalid_argument("TeleporterConfig: feed-forward gains must be finite");
  }
  if (input_var_x < 1.0 - 1e-9 || input_var_y < 1.0 - 1e-9) {
    throw std::invalid_argument("TeleporterConfig: input variances must be >= 1");
  }
}

GaussianState combined_state(const TeleporterConfig& cfg) {
  cfg.validate();
  // Mode 0 = Bob's EPR arm, mode 1 = Alice's arm.
  GaussianState epr = epr_covariance(cfg.epr);
  epr = apply_loss(epr, 0, cfg.efficiency);

  Eigen::VectorXd in_mean(2);
  in_mean << cfg.input_mean_x, cfg.input_mean_y;
  Eigen::MatrixXd in_cov = Eigen::MatrixXd::Zero(2, 2);
  in_cov(0, 0) = cfg.input_var_x;
  in_cov(1, 1) = cfg.input_var_y;
  GaussianState joint = tensor(epr, GaussianState(in_mean, in_cov));

  // 50:50 mix of Alice's arm with the input. Mode 1 becomes the
  // y-measured output, mode 2 the x-measured output.
  return beamsplitter(joint, 1, 2, 0.5);
}

MeasurementModel measurement_model(const TeleporterConfig& cfg) {
  const GaussianState s = combined_state(cfg);
  MeasurementModel m;
  m.mean_x3 = s.mean_of(2, Quadrature::X);
  m.var_x3 = s.var_of(2, Quadrature::X);
  m.mean_y1 = s.mean_of(1, Quadrature::Y);
  m.var_y1 = s.var_of(1, Quadrature::Y);
  m.var_x2 = s.var_of(0, Quadrature::X);
  m.var_y2 = s.var_of(0, Quadrature::Y);
  m.cov_x23 = s.cov_of(0, Quadrature::X, 2, Quadrature::X);
  m.cov_y21 = s.cov_of(0, Quadrature::Y, 1, Quadrature::Y);
  return m;
}

OutputMoments output_moments(const TeleporterConfig& cfg) {
  const MeasurementModel m = measurement_model(cfg);
  const double g2 = cfg.g * cfg.g;

  // Post-selection amplifies the measured marginal's mean and variance by
  // g^2 and preserves the conditional statistics of the unmeasured mode.
  OutputMoments out;
  out.mean_x = (m.cov_x23 / m.var_x3) * (g2 - 1.0) * m.mean_x3 +
               cfg.phi_x * g2 * m.mean_x3;
  out.var_x = m.var_x2 + (g2 - 1.0) * m.cov_x23 * m.cov_x23 / m.var_x3 +
              2.0 * cfg.phi_x * g2 * m.cov_x23 +
              cfg.phi_x * cfg.phi_x * g2 * m.var_x3;
  out.mean_y = (m.cov_y21 / m.var_y1) * (g2 - 1.0) * m.mean_y1 +
               cfg.phi_y * g2 * m.mean_y1;
  out.var_y = m.var_y2 + (g2 - 1.0) * m.cov_y21 * m.cov_y21 / m.var_y1 +
              2.0 * cfg.phi_y * g2 * m.cov_y21 +
              cfg.phi_y * cfg.phi_y * g2 * m.var_y1;
  return out;
}

OutputMoments input_moments(const TeleporterConfig& cfg) {
  return {cfg.input_mean_x, cfg.input_mean_y, cfg.input_var_x, cfg.input_var_y};
}

double conditional_variance_epr(double r) {
  if (r < 0.0) throw std::invalid_argument("conditional_variance_epr: r must be >= 0");
  return 1.0 / std::cosh(2.0 * r);
}

double fidelity(const OutputMoments& in, const OutputMoments& out) {
  if (in.var_x <= 0.0 || in.var_y <= 0.0 || out.var_x <= 0.0 || out.var_y <= 0.0) {
    throw std::invalid_argument("fidelity: variances must be positive");
  }
  const double sx = out.var_x + in.var_x;
  const double sy = out.var_y + in.var_y;
  const double dx = out.mean_x - in.mean_x;
  const double dy = out.mean_y - in.mean_y;
  return 2.0 / std::sqrt(sx * sy) *
         std::exp(-0.5 * (dx * dx / sx + dy * dy / sy));
}

TVParams tv_parameters(const TeleporterConfig& cfg) {
  if (cfg.input_mean_x == 0.0 || cfg.input_mean_y == 0.0) {
    throw std::invalid_argument("tv_parameters: undefined SNR, input means must be nonzero");
  }
  const OutputMoments out = output_moments(cfg);
  const double tau_x = (out.mean_x / cfg.input_mean_x) * (out.mean_x / cfg.input_mean_x);
  const double tau_y = (out.mean_y / cfg.input_mean_y) * (out.mean_y / cfg.input_mean_y);
  TVParams tv;
  tv.t_q = (out.mean_x * out.mean_x / out.var_x) *
               (cfg.input_var_x / (cfg.input_mean_x * cfg.input_mean_x)) +
           (out.mean_y * out.mean_y / out.var_y) *
               (cfg.input_var_y / (cfg.input_mean_y * cfg.input_mean_y));
  const double nu_x = out.var_x - tau_x * cfg.input_var_x;
  const double nu_y = out.var_y - tau_y * cfg.input_var_y;
  tv.v_q = nu_x * nu_y;
  return tv;
}

double unity_gain_phi(const TeleporterConfig& cfg) {
  const MeasurementModel m = measurement_model(cfg);
  const double g2 = cfg.g * cfg.g;
  if (g2 <= 0.0 || m.mean_x3 == 0.0) {
    throw std::runtime_error("unity_gain_phi: no solution for this configuration");
  }
  // mean_out = [(cov/var)(g^2-1) + phi g^2] mean_x3 with mean_x3 = mean_in/sqrt(2)
  return (kSqrt2 - (m.cov_x23 / m.var_x3) * (g2 - 1.0)) / g2;
}

double unity_gain_phi(double r, double g) {
  TeleporterConfig cfg;
  cfg.epr = EPRSpec::symmetric(r);
  cfg.g = g;
  cfg.input_mean_x = 1.0;
  cfg.input_mean_y = 1.0;
  return unity_gain_phi(cfg);
}

double tq_closed_form_ideal(double input_mean, double phi, double g, double r) {
  const double g2 = g * g;
  const double num = input_mean * input_mean *
                     std::pow(kSqrt2 * g2 * phi - 2.0 * (g2 - 1.0) * std::tanh(r), 2);
  const double den =
      g2 * ((phi * phi + 2.0) * std::cosh(2.0 * r) -
            2.0 * kSqrt2 * phi * std::sinh(2.0 * r)) +
      g2 * (phi * phi - 2.0) + 2.0;
  return num / den;
}

double vq_closed_form_ideal(double input_mean, double phi, double g, double r) {
  const double g2 = g * g;
  const double bracket =
      input_mean * input_mean *
          std::pow(kSqrt2 * g2 * phi - 2.0 * (g2 - 1.0) * std::tanh(r), 2) -
      4.0 * g2 * std::pow(phi * std::cosh(r) - kSqrt2 * std::sinh(r), 2) +
      8.0 * std::pow(std::sinh(r), 2) - 4.0 * std::cosh(2.0 * r);
  return bracket * bracket / 16.0;
}

double tq_closed_form_lossy(double input_mean, double phi, double g, double r,
                            double efficiency) {
  const double g2 = g * g;
  const double st = std::sqrt(efficiency);
  const double e = std::exp(-2.0 * r) - std::exp(2.0 * r);
  const double d = 0.5 * st * std::cosh(2.0 * r) - 0.5 * st + 1.0;
  const double inner = e * st / (2.0 * kSqrt2 * d) + phi;
  const double num =
      2.0 * std::pow(g2 * st * input_mean * inner / kSqrt2 -
                         e * efficiency * input_mean / (4.0 * d),
                     2);
  const double den = g2 * d * inner * inner - e * e * efficiency / (8.0 * d) +
                     0.5 * (std::exp(-2.0 * r) + std::exp(2.0 * r));
  return num / den;
}

double vq_closed_form_lossy(double input_mean, double phi, double g, double r,
                            double efficiency) {
  const double g2 = g * g;
  const double st = std::sqrt(efficiency);
  const double c2r = std::cosh(2.0 * r);
  const double s2r = std::sinh(2.0 * r);
  const double d = st * c2r - st + 2.0;
  const double a =
      efficiency * input_mean * input_mean *
      std::pow(st * (2.0 * (g2 - 1.0) * s2r - kSqrt2 * g2 * phi * c2r) +
                   kSqrt2 * g2 * (st - 2.0) * phi,
               2) /
      (d * d);
  const double b = 2.0 * g2 *
                   std::pow(st * (kSqrt2 * s2r - phi * c2r) + (st - 2.0) * phi, 2) /
                   d;
  const double c = 4.0 * efficiency * s2r * s2r / d;
  const double bracket = a - b + c - 4.0 * c2r;
  return bracket * bracket / 16.0;
}

}  // namespace telsim
