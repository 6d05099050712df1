#include "heraldkit/quantum_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heraldkit {

namespace {

void check_density(const Mat4c& rho) {
  if (std::abs(rho.trace().real() - 1.0) > kTraceTol ||
      std::abs(rho.trace().imag()) > kTraceTol) {
    throw std::invalid_argument("DensityMatrix4: trace is not 1");
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kTraceTol) {
    throw std::invalid_argument("DensityMatrix4: not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Mat4c> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kEigTol) {
    throw std::invalid_argument("DensityMatrix4: negative eigenvalue");
  }
}

}  // namespace

PureState4::PureState4(const Vec4c& amplitudes) : amp_(amplitudes) {
  if (std::abs(amp_.squaredNorm() - 1.0) > 1e-12) {
    throw std::invalid_argument("PureState4: amplitudes not normalized");
  }
}

PureState4 PureState4::normalized(const Vec4c& amplitudes) {
  const double norm = amplitudes.norm();
  if (norm == 0.0) {
    throw std::invalid_argument("PureState4: zero vector");
  }
  return PureState4(Vec4c(amplitudes / norm));
}

DensityMatrix4::DensityMatrix4(const Mat4c& rho) : rho_(rho) {
  check_density(rho_);
  // Symmetrize away the last few ulps so long channel chains cannot drift.
  rho_ = 0.5 * (rho_ + rho_.adjoint().eval());
}

DensityMatrix4 DensityMatrix4::from_pure(const PureState4& psi) {
  return DensityMatrix4(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix4 DensityMatrix4::maximally_mixed() {
  return DensityMatrix4(0.25 * Mat4c::Identity());
}

Mat2c Rotation::matrix() const {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex mi(0.0, -1.0);
  Mat2c u;
  u << c, mi * std::exp(Complex(0.0, -phi)) * s,
      mi * std::exp(Complex(0.0, phi)) * s, c;
  return u;
}

PureState4 bell_state(StateFamily family, double phase, double weight) {
  if (weight < 0.0 || weight > 1.0) {
    throw std::invalid_argument("bell_state: weight outside [0, 1]");
  }
  const double a = std::sqrt(1.0 - weight);
  const double b = std::sqrt(weight);
  Vec4c amp = Vec4c::Zero();
  if (family == StateFamily::Psi) {
    amp(kDU) = a;
    amp(kUD) = b * std::exp(Complex(0.0, -phase));
  } else {
    amp(kDD) = a;
    amp(kUU) = -b * std::exp(Complex(0.0, phase));
  }
  return PureState4(amp);
}

Mat4c kron2(const Mat2c& a, const Mat2c& b) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

DensityMatrix4 apply_local_rotations(const DensityMatrix4& state,
                                     const Rotation& rot_a,
                                     const Rotation& rot_b) {
  const Mat4c u = kron2(rot_a.matrix(), rot_b.matrix());
  return DensityMatrix4(u * state.matrix() * u.adjoint());
}

Eigen::Vector4d populations(const DensityMatrix4& state) {
  return state.matrix().diagonal().real();
}

double odd_parity(const DensityMatrix4& state) {
  const Eigen::Vector4d p = populations(state);
  return p(kDU) + p(kUD);
}

double fidelity_pure(const DensityMatrix4& state, const PureState4& target) {
  const Complex f = (target.amplitudes().adjoint() * state.matrix() *
                     target.amplitudes())(0);
  return std::clamp(f.real(), 0.0, 1.0);
}

double fidelity_pure(const PureState4& state, const PureState4& target) {
  const Complex overlap = target.amplitudes().dot(state.amplitudes());
  return std::clamp(std::norm(overlap), 0.0, 1.0);
}

}  // namespace heraldkit
