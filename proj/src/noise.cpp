#include "heraldkit/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace heraldkit {

namespace {

// Collective phase multipliers per basis state, in units of the sampled
// phase chi: diag(e^{-i chi/2}, 1, 1, e^{+i chi/2}).
constexpr double kPhaseCoeff[4] = {-0.5, 0.0, 0.0, 0.5};

}  // namespace

void NoiseModel::validate() const {
  if (sigma_phi < 0.0)
    throw std::invalid_argument("NoiseModel: sigma_phi must be >= 0");
  if (depol_p < 0.0 || depol_p > 1.0)
    throw std::invalid_argument("NoiseModel: depol_p outside [0, 1]");
  if (meas_error < 0.0 || meas_error > 1.0)
    throw std::invalid_argument("NoiseModel: meas_error outside [0, 1]");
}

DensityMatrix4 apply_collective_dephasing(const DensityMatrix4& state,
                                          const NoiseModel& model) {
  model.validate();
  const double s2 = model.sigma_phi * model.sigma_phi;
  Mat4c rho = state.matrix();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double d = kPhaseCoeff[i] - kPhaseCoeff[j];
      rho(i, j) *= std::exp(-0.5 * d * d * s2);
    }
  }
  return DensityMatrix4(rho);
}

DensityMatrix4 sample_collective_dephasing(const DensityMatrix4& state,
                                           const NoiseModel& model,
                                           RngStream& rng) {
  model.validate();
  const double chi = rng.normal(model.sigma_phi);
  Mat4c u = Mat4c::Identity();
  for (int i = 0; i < 4; ++i) {
    u(i, i) = std::exp(Complex(0.0, kPhaseCoeff[i] * chi));
  }
  return DensityMatrix4(u * state.matrix() * u.adjoint());
}

DensityMatrix4 apply_depolarizing(const DensityMatrix4& state, double p) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("apply_depolarizing: p outside [0, 1]");
  }
  return DensityMatrix4((1.0 - p) * state.matrix() +
                        (p * 0.25) * Mat4c::Identity());
}

Eigen::Vector4d apply_measurement_error(const Eigen::Vector4d& populations,
                                        double eps) {
  if (eps < 0.0 || eps > 1.0) {
    throw std::invalid_argument("apply_measurement_error: eps outside [0, 1]");
  }
  Eigen::Matrix2d flip;
  flip << 1.0 - eps, eps, eps, 1.0 - eps;
  Eigen::Matrix4d confusion;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      confusion.block<2, 2>(2 * i, 2 * j) = flip(i, j) * flip;
  return confusion * populations;
}

}  // namespace heraldkit
