#include "telsim/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace telsim {

namespace {

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

}  // namespace

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)) {
  const auto dim = mean_.size();
  if (dim < 2 || dim % 2 != 0) {
    throw std::invalid_argument("GaussianState: mean length must be even and >= 2");
  }
  if (cov.rows() != dim || cov.cols() != dim) {
    throw std::invalid_argument("GaussianState: covariance dimension mismatch");
  }
  if (!mean_.allFinite() || !cov.allFinite()) {
    throw std::invalid_argument("GaussianState: non-finite entries");
  }
  if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw std::invalid_argument("GaussianState: covariance grossly asymmetric");
  }
  cov_ = symmetrized(cov);
}

void EPRSpec::validate() const {
  for (double r : {r_ax, r_ay, r_bx, r_by}) {
    if (!std::isfinite(r) || r < 0.0) {
      throw std::invalid_argument("EPRSpec: squeezing parameters must be finite and >= 0");
    }
  }
}

double squeezing_from_db(double db) { return std::log(10.0) * db / 20.0; }

double squeezing_to_db(double r) { return 20.0 * r / std::log(10.0); }

GaussianState vacuum(int n_modes) {
  if (n_modes < 1) throw std::invalid_argument("vacuum: n_modes must be >= 1");
  return {Eigen::VectorXd::Zero(2 * n_modes),
          Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes)};
}

GaussianState epr_covariance(const EPRSpec& spec) {
  spec.validate();
  const double c11 = (std::exp(-2.0 * spec.r_ax) + std::exp(2.0 * spec.r_bx)) / 2.0;
  const double c22 = (std::exp(-2.0 * spec.r_by) + std::exp(2.0 * spec.r_ay)) / 2.0;
  const double c13 = (std::exp(2.0 * spec.r_bx) - std::exp(-2.0 * spec.r_ax)) / 2.0;
  const double c24 = (std::exp(-2.0 * spec.r_by) - std::exp(2.0 * spec.r_ay)) / 2.0;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(4, 4);
  cov(0, 0) = c11;
  cov(1, 1) = c22;
  cov(2, 2) = c11;
  cov(3, 3) = c22;
  cov(0, 2) = cov(2, 0) = c13;
  cov(1, 3) = cov(3, 1) = c24;
  return {Eigen::VectorXd::Zero(4), cov};
}

GaussianState beamsplitter(const GaussianState& state, int mode_i, int mode_j,
                           double transmissivity) {
  const int n = state.n_modes();
  if (mode_i < 0 || mode_i >= n || mode_j < 0 || mode_j >= n || mode_i == mode_j) {
    throw std::invalid_argument("beamsplitter: invalid mode indices");
  }
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0)) {
    throw std::invalid_argument("beamsplitter: transmissivity must be in [0, 1]");
  }
  const double ct = std::sqrt(transmissivity);
  const double st = std::sqrt(1.0 - transmissivity);
  Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n, 2 * n);
  for (auto q : {Quadrature::X, Quadrature::Y}) {
    const int i = GaussianState::index(mode_i, q);
    const int j = GaussianState::index(mode_j, q);
    s(i, i) = ct;
    s(i, j) = st;
    s(j, i) = -st;
    s(j, j) = ct;
  }
  return {s * state.mean(), symmetrized(s * state.cov() * s.transpose())};
}

GaussianState apply_loss(const GaussianState& state, int mode, double efficiency) {
  const int n = state.n_modes();
  if (mode < 0 || mode >= n) throw std::invalid_argument("apply_loss: invalid mode");
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("apply_loss: efficiency must be in [0, 1]");
  }
  const double rt = std::sqrt(efficiency);
  Eigen::VectorXd mean = state.mean();
  Eigen::MatrixXd cov = state.cov();
  const int a = 2 * mode;
  mean.segment<2>(a) *= rt;
  // cross blocks
  cov.middleRows<2>(a) *= rt;
  cov.middleCols<2>(a) *= rt;
  // diagonal block got scaled twice (= T); add the vacuum admixture
  cov.block<2, 2>(a, a) += (1.0 - efficiency) * Eigen::Matrix2d::Identity();
  return {std::move(mean), symmetrized(cov)};
}

GaussianState condition_on_quadrature(const GaussianState& state, int mode,
                                      Quadrature q, double outcome) {
  const int n = state.n_modes();
  if (mode < 0 || mode >= n) {
    throw std::invalid_argument("condition_on_quadrature: invalid mode");
  }
  if (n < 2) {
    throw std::invalid_argument("condition_on_quadrature: nothing left after removal");
  }
  const int m = GaussianState::index(mode, q);
  const double v_meas = state.cov()(m, m);
  if (v_meas < 1e-12) {
    throw std::invalid_argument("condition_on_quadrature: degenerate measured variance");
  }

  std::vector<int> rest;
  rest.reserve(2 * (n - 1));
  for (int k = 0; k < 2 * n; ++k) {
    if (k != 2 * mode && k != 2 * mode + 1) rest.push_back(k);
  }
  const int d = static_cast<int>(rest.size());
  Eigen::VectorXd mu(d);
  Eigen::VectorXd cross(d);
  Eigen::MatrixXd cov(d, d);
  for (int a = 0; a < d; ++a) {
    mu(a) = state.mean()(rest[a]);
    cross(a) = state.cov()(rest[a], m);
    for (int b = 0; b < d; ++b) cov(a, b) = state.cov()(rest[a], rest[b]);
  }
  mu += cross * ((outcome - state.mean()(m)) / v_meas);
  cov -= (cross * cross.transpose()) / v_meas;
  return {std::move(mu), symmetrized(cov)};
}

std::vector<double> symplectic_eigenvalues(const GaussianState& state) {
  const int n = state.n_modes();
  const Eigen::MatrixXd m = symplectic_form(n) * state.cov();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("symplectic_eigenvalues: eigensolver failed to converge");
  }
  // Eigenvalues of Omega sigma come in pairs +/- i nu; collect |lambda| and
  // keep one per pair.
  std::vector<double> mags;
  mags.reserve(2 * n);
  for (int k = 0; k < 2 * n; ++k) mags.push_back(std::abs(solver.eigenvalues()(k)));
  std::sort(mags.begin(), mags.end());
  std::vector<double> out;
  out.reserve(n);
  for (int k = 0; k < 2 * n; k += 2) out.push_back(0.5 * (mags[k] + mags[k + 1]));
  return out;
}

double min_symplectic_eigenvalue(const GaussianState& state) {
  return symplectic_eigenvalues(state).front();
}

bool is_physical(const GaussianState& state, double tol) {
  return min_symplectic_eigenvalue(state) >= 1.0 - tol;
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const int da = 2 * a.n_modes();
  const int db = 2 * b.n_modes();
  Eigen::VectorXd mean(da + db);
  mean << a.mean(), b.mean();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(da + db, da + db);
  cov.topLeftCorner(da, da) = a.cov();
  cov.bottomRightCorner(db, db) = b.cov();
  return {std::move(mean), std::move(cov)};
}

GaussianState keep_modes(const GaussianState& state, const std::vector<int>& modes) {
  if (modes.empty()) throw std::invalid_argument("keep_modes: empty mode list");
  std::vector<int> idx;
  idx.reserve(2 * modes.size());
  for (int mode : modes) {
    if (mode < 0 || mode >= state.n_modes()) {
      throw std::invalid_argument("keep_modes: invalid mode");
    }
    idx.push_back(2 * mode);
    idx.push_back(2 * mode + 1);
  }
  const int d = static_cast<int>(idx.size());
  Eigen::VectorXd mean(d);
  Eigen::MatrixXd cov(d, d);
  for (int a = 0; a < d; ++a) {
    mean(a) = state.mean()(idx[a]);
    for (int b = 0; b < d; ++b) cov(a, b) = state.cov()(idx[a], idx[b]);
  }
  return {std::move(mean), std::move(cov)};
}

}  // namespace telsim
