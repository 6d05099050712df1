#pragma once

#include <Eigen/Dense>

#include "heraldkit/quantum_core.hpp"
#include "heraldkit/rng.hpp"

namespace heraldkit {

// Imperfections acting on the conditioned state. sigma_phi is the std of
// the common-mode random phase picked up on the dd<->uu coherence during
// the transfer/analysis delay; the {du, ud} span is a decoherence-free
// subspace, so Psi-family coherence is untouched.
struct NoiseModel {
  double sigma_phi = 0.0;       // rad
  double analysis_delay = 5e4;  // ns, informational only
  double depol_p = 0.0;
  double meas_error = 0.0;  // symmetric bright/dark misassignment per qubit

  void validate() const;
};

// Gaussian phase averaging in closed form: rho_{dd,uu} is damped by
// e^{-sigma^2/2}, partially collective coherences (dd<->du etc.) by
// e^{-sigma^2/8}, rho_{du,ud} and all populations are unchanged. This is
// the exact average of the sampled channel below, so both modes can be
// cross-checked.
DensityMatrix4 apply_collective_dephasing(const DensityMatrix4& state,
                                          const NoiseModel& model);

// Per-shot variant: applies one random collective phase
// diag(e^{-i chi/2}, 1, 1, e^{+i chi/2}) with chi ~ N(0, sigma_phi^2).
DensityMatrix4 sample_collective_dephasing(const DensityMatrix4& state,
                                           const NoiseModel& model,
                                           RngStream& rng);

// rho -> (1-p) rho + p I/4.
DensityMatrix4 apply_depolarizing(const DensityMatrix4& state, double p);

// Independent bright/dark flip with probability eps per qubit, as a 4x4
// confusion-matrix multiply on the population vector.
Eigen::Vector4d apply_measurement_error(const Eigen::Vector4d& populations,
                                        double eps);

}  // namespace heraldkit
