#pragma once

#include <string>

#include "telsim/gaussian.hpp"
#include "telsim/teleporter.hpp"

namespace telsim {

/// Single-mode phase-insensitive Gaussian channel: mean -> sqrt(tau) mean,
/// covariance -> tau * cov + nu * I.
struct ChannelParams {
  double tau = 1.0;
  double nu = 0.0;
};

enum class ChannelTag {
  PureLoss,
  ThermalLoss,
  PureAmplifier,
  ThermalAmplifier,
  AdditiveNoise,
  Identity,
  NonPhysical,
};

struct ChannelClass {
  ChannelTag tag = ChannelTag::Identity;
  double chi = 0.0;  // nu / |1 - tau|, when defined
};

std::string to_string(ChannelTag tag);

/// Applies the channel to one mode of a Gaussian state. Throws on tau <= 0;
/// warns on stderr if the result is non-physical.
GaussianState apply_channel(const ChannelParams& params, const GaussianState& state,
                            int mode);

ChannelClass classify(const ChannelParams& params, double tol = 1e-6);

ChannelParams tv_to_taunu(const TVParams& tv);
TVParams taunu_to_tv(const ChannelParams& params);

/// Choi-style probe: two-mode squeezed vacuum with symmetric squeezing
/// r_choi, channel applied to mode 1.
GaussianState choi_state(const ChannelParams& params, double r_choi);

/// Minimum symplectic eigenvalue of the partial transpose (mode 1 flipped).
double ptranspose_min_eigenvalue(const GaussianState& two_mode);

/// Entanglement of formation of a symmetric two-mode Gaussian state, in
/// ebits. Returns 0 when the state is separable (nu_tilde >= 1).
double entanglement_of_formation(const GaussianState& two_mode);

struct SuppressionResult {
  double delta_ef = 0.0;  // E_F(Choi after) - E_F(Choi before)
  bool improved = false;  // tau increased and nu decreased
};

SuppressionResult noise_suppression_score(const ChannelParams& before,
                                          const ChannelParams& after, double r_choi = 2.0);

}  // namespace telsim
