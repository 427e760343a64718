#pragma once

#include <Eigen/Dense>
#include <vector>

namespace telsim {

enum class Quadrature { X, Y };

/// Gaussian state of n bosonic modes in xpxp ordering (x1, y1, x2, y2, ...).
/// Quadratures are shot-noise normalized: vacuum variance is 1.
class GaussianState {
 public:
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  int n_modes() const { return static_cast<int>(mean_.size()) / 2; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

  double mean_of(int mode, Quadrature q) const { return mean_(index(mode, q)); }
  double var_of(int mode, Quadrature q) const {
    return cov_(index(mode, q), index(mode, q));
  }
  double cov_of(int mode_i, Quadrature qi, int mode_j, Quadrature qj) const {
    return cov_(index(mode_i, qi), index(mode_j, qj));
  }

  static int index(int mode, Quadrature q) {
    return 2 * mode + (q == Quadrature::X ? 0 : 1);
  }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

/// Squeezing parameters of the two squeezed states forming the EPR pair.
struct EPRSpec {
  double r_ax = 0.0;
  double r_ay = 0.0;
  double r_bx = 0.0;
  double r_by = 0.0;

  static EPRSpec symmetric(double r) { return {r, r, r, r}; }
  void validate() const;
};

/// r = ln(10) * dB / 20
double squeezing_from_db(double db);
double squeezing_to_db(double r);

GaussianState vacuum(int n_modes);

/// 4x4 EPR covariance: C11 = (e^{-2 r_ax} + e^{2 r_bx})/2,
/// C22 = (e^{-2 r_by} + e^{2 r_ay})/2, C13 = (e^{2 r_bx} - e^{-2 r_ax})/2,
/// C24 = (e^{-2 r_by} - e^{2 r_ay})/2; zero mean.
GaussianState epr_covariance(const EPRSpec& spec);

/// Beamsplitter of transmissivity t on modes (i, j):
/// q_i' = sqrt(t) q_i + sqrt(1-t) q_j, q_j' = -sqrt(1-t) q_i + sqrt(t) q_j.
GaussianState beamsplitter(const GaussianState& state, int mode_i, int mode_j,
                           double transmissivity);

/// Couples a vacuum mode into `mode` with efficiency T: mean -> sqrt(T) mean,
/// variance block -> T block + (1-T) I, cross blocks scaled by sqrt(T).
GaussianState apply_loss(const GaussianState& state, int mode, double efficiency);

/// Homodyne conditioning: Schur-complement update on the measured quadrature,
/// the measured mode is removed. Throws if the measured variance is
/// degenerate (< 1e-12).
GaussianState condition_on_quadrature(const GaussianState& state, int mode,
                                      Quadrature q, double outcome);

/// Symplectic eigenvalues (moduli of eigenvalues of i Omega sigma), sorted
/// ascending, one per mode.
std::vector<double> symplectic_eigenvalues(const GaussianState& state);

double min_symplectic_eigenvalue(const GaussianState& state);

/// cov + i Omega >= 0 within tolerance.
bool is_physical(const GaussianState& state, double tol = 1e-9);

/// Tensor product a (x) b; modes of b follow modes of a.
GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Keeps the listed modes (in the given order), tracing out the rest.
GaussianState keep_modes(const GaussianState& state, const std::vector<int>& modes);

}  // namespace telsim
