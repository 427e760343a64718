#pragma once

#include "telsim/gaussian.hpp"

namespace telsim {

/// Operating point of the heralded teleporter.
struct TeleporterConfig {
  EPRSpec epr;
  double phi_x = 1.4142135623730951;  // electronic feed-forward gains
  double phi_y = 1.4142135623730951;
  double g = 1.0;                     // MBNLA gain, >= 1
  double efficiency = 1.0;            // Bob-arm propagation + detection, (0, 1]
  double input_mean_x = 0.0;
  double input_mean_y = 0.0;
  double input_var_x = 1.0;           // 1 for coherent states
  double input_var_y = 1.0;

  void validate() const;

  static TeleporterConfig unity_gain(double r_db) {
    TeleporterConfig cfg;
    cfg.epr = EPRSpec::symmetric(squeezing_from_db(r_db));
    return cfg;
  }
};

/// First and second moments of a single-mode Gaussian, shot-noise units.
struct OutputMoments {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double var_x = 1.0;
  double var_y = 1.0;
};

/// Joint signal transfer coefficient and conditional variance product.
struct TVParams {
  double t_q = 0.0;
  double v_q = 0.0;
};

/// Scalars of the combined (Bob, mode 1, mode 3) Gaussian after Bob-arm loss:
/// x is measured on mode 3, y on mode 1; Bob's mode is the unmeasured one.
struct MeasurementModel {
  // measured quadratures
  double mean_x3 = 0.0, var_x3 = 1.0;
  double mean_y1 = 0.0, var_y1 = 1.0;
  // Bob's quadratures and their covariance with the measured ones
  double var_x2 = 1.0, cov_x23 = 0.0;
  double var_y2 = 1.0, cov_y21 = 0.0;

  double cond_var_x2() const { return var_x2 - cov_x23 * cov_x23 / var_x3; }
  double cond_var_y2() const { return var_y2 - cov_y21 * cov_y21 / var_y1; }
};

/// Builds the combined three-mode state: EPR pair, loss on Bob's arm, input
/// mixed with Alice's arm on a 50:50 beamsplitter. Mode order (Bob, 1, 3).
GaussianState combined_state(const TeleporterConfig& cfg);

MeasurementModel measurement_model(const TeleporterConfig& cfg);

/// Analytic output moments of the heralded teleporter (covariance pipeline
/// with the post-selected g^2 moment algebra folded in).
OutputMoments output_moments(const TeleporterConfig& cfg);

OutputMoments input_moments(const TeleporterConfig& cfg);

/// 1/cosh(2r): conditional variance of one EPR mode given a quadrature
/// measurement on the other.
double conditional_variance_epr(double r);

/// Overlap fidelity of two single-mode Gaussian states with uncorrelated
/// quadratures.
double fidelity(const OutputMoments& in, const OutputMoments& out);

/// First-principles T_q and V_q. T_q sums the per-quadrature output/input
/// SNR ratios; V_q is the product of the per-quadrature input-output
/// conditional variances (output variance minus the mean-transfer-consistent
/// correlated part). Requires nonzero input means.
TVParams tv_parameters(const TeleporterConfig& cfg);

/// Feed-forward gain that makes the output mean equal the input mean for
/// the given lossless symmetric-squeezing operating point. sqrt(2) at g = 1.
double unity_gain_phi(double r, double g);

/// Same, for a full config (loss and asymmetry included).
double unity_gain_phi(const TeleporterConfig& cfg);

/// Printed closed forms, kept verbatim as regression cross-checks. They
/// carry a global <X_in>^2 normalization factor relative to the
/// dimensionless definitions; evaluate with input_mean = 1 to compare.
double tq_closed_form_ideal(double input_mean, double phi, double g, double r);
double vq_closed_form_ideal(double input_mean, double phi, double g, double r);
double tq_closed_form_lossy(double input_mean, double phi, double g, double r,
                            double efficiency);
double vq_closed_form_lossy(double input_mean, double phi, double g, double r,
                            double efficiency);

}  // namespace telsim
