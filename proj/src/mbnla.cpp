#include "telsim/mbnla.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

#include "telsim/quadrature.hpp"

namespace telsim {

namespace {

constexpr double kPi = 3.141592653589793;

/// Mass of a circular Gaussian (per-component variance v, centered at c)
/// inside the disk |alpha| < radius, weighted by a radial factor w(r).
double disk_integral(std::complex<double> c, double v, double radius,
                     const std::function<double(double)>& radial_weight,
                     double tol) {
  const double cm = std::abs(c);
  const auto outer = [&](double r) {
    // angular integral of exp(r cm cos(theta) / v), symmetric about 0
    const auto inner = [&](double theta) {
      return std::exp(r * cm * std::cos(theta) / v);
    };
    const double ang = cm == 0.0 ? 2.0 * kPi
                                 : 2.0 * adaptive_simpson(inner, 0.0, kPi, tol * 1e-2);
    return r * radial_weight(r) *
           std::exp(-(r * r + cm * cm) / (2.0 * v)) * ang / (2.0 * kPi * v);
  };
  return adaptive_simpson(outer, 0.0, radius, tol);
}

}  // namespace

void FilterSpec::validate() const {
  if (!(g >= 1.0) || !std::isfinite(g)) {
    throw std::invalid_argument("FilterSpec: gain must be >= 1");
  }
  if (!(alpha_c >= 0.0) || !std::isfinite(alpha_c)) {
    throw std::invalid_argument("FilterSpec: cutoff must be finite and >= 0");
  }
}

double filter_probability(const FilterSpec& spec, std::complex<double> alpha) {
  spec.validate();
  const double a2 = std::norm(alpha);
  if (a2 >= spec.alpha_c * spec.alpha_c) return 1.0;
  const double expo =
      0.5 * (a2 - spec.alpha_c * spec.alpha_c) * (1.0 - 1.0 / (spec.g * spec.g));
  return std::exp(expo);
}

bool accept(const FilterSpec& spec, std::complex<double> alpha, double uniform_draw) {
  if (!(uniform_draw >= 0.0 && uniform_draw < 1.0)) {
    throw std::invalid_argument("accept: draw must be in [0, 1)");
  }
  return filter_probability(spec, alpha) > uniform_draw;
}

double expected_acceptance(const FilterSpec& spec, std::complex<double> center,
                           double component_var) {
  spec.validate();
  if (!(component_var > 0.0)) {
    throw std::invalid_argument("expected_acceptance: variance must be positive");
  }
  if (spec.g == 1.0 || spec.alpha_c == 0.0) return 1.0;
  const double c = 1.0 - 1.0 / (spec.g * spec.g);
  const double ac2 = spec.alpha_c * spec.alpha_c;
  // P = 1 - integral over the disk of p(alpha) (1 - f(alpha))
  const auto deficit = [&](double r) {
    return 1.0 - std::exp(0.5 * (r * r - ac2) * c);
  };
  return 1.0 - disk_integral(center, component_var, spec.alpha_c, deficit, 1e-8);
}

double success_probability(const FilterSpec& spec, std::complex<double> alpha_m) {
  return expected_acceptance(spec, alpha_m, 0.5);
}

double success_probability_closed_form(const FilterSpec& spec,
                                       std::complex<double> alpha_m) {
  spec.validate();
  const double g = spec.g;
  const double am2 = std::norm(alpha_m);
  const double prefactor =
      std::exp((g - 1.0) * am2) / std::exp(spec.alpha_c * spec.alpha_c * (1.0 - 1.0 / g));
  const auto unit = [](double) { return 1.0; };
  const double inside =
      g * disk_integral(g * alpha_m, 0.5 * g, spec.alpha_c, unit, 1e-8);
  const double outside = 1.0 - disk_integral(alpha_m, 0.5, spec.alpha_c, unit, 1e-8);
  return prefactor * inside + outside;
}

std::pair<std::complex<double>, double> nla_transform_coherent(
    double g, std::complex<double> alpha) {
  if (!(g >= 1.0)) throw std::invalid_argument("nla_transform_coherent: g must be >= 1");
  const std::complex<double> amplified = g * alpha;
  if (std::norm(amplified) > 700.0) {
    throw std::overflow_error("nla_transform_coherent: |g alpha|^2 > 700");
  }
  const double weight = std::exp((g * g - 1.0) * std::norm(alpha));
  return {amplified, weight};
}

double default_cutoff(double input_std, double k) {
  if (!(input_std >= 0.0)) {
    throw std::invalid_argument("default_cutoff: input_std must be >= 0");
  }
  return k * input_std;
}

}  // namespace telsim
