#pragma once

#include <Eigen/Dense>
#include <complex>

namespace heraldkit {

using Complex = std::complex<double>;
using Vec4c = Eigen::Vector4cd;
using Mat4c = Eigen::Matrix4cd;
using Mat2c = Eigen::Matrix2cd;

// Two-memory basis order used everywhere: |dd>, |du>, |ud>, |uu>,
// where d = |down>, u = |up> and memory A is the left (most significant)
// slot. Fluorescence "bright" is |up>; the microwave transfer pulse that
// relabels |down> -> |0> before readout is pure bookkeeping and is not
// modeled explicitly.
enum BasisIndex : int { kDD = 0, kDU = 1, kUD = 2, kUU = 3 };

enum class StateFamily { Psi, Phi };

inline constexpr double kTraceTol = 1e-12;
inline constexpr double kEigTol = 1e-10;

// Normalized two-memory pure state.
class PureState4 {
 public:
  // Throws std::invalid_argument unless the squared amplitudes sum to 1
  // within 1e-12.
  explicit PureState4(const Vec4c& amplitudes);

  static PureState4 normalized(const Vec4c& amplitudes);

  const Vec4c& amplitudes() const { return amp_; }
  Complex amplitude(int i) const { return amp_(i); }

 private:
  Vec4c amp_;
};

// 4x4 density operator; the constructor enforces Hermiticity and unit trace
// within 1e-12 and eigenvalues >= -1e-10.
class DensityMatrix4 {
 public:
  explicit DensityMatrix4(const Mat4c& rho);

  static DensityMatrix4 from_pure(const PureState4& psi);
  static DensityMatrix4 maximally_mixed();

  const Mat4c& matrix() const { return rho_; }
  Complex entry(int i, int j) const { return rho_(i, j); }

 private:
  Mat4c rho_;
};

// Single-qubit rotation R(theta, phi):
//   U = [[cos(theta/2), -i e^{-i phi} sin(theta/2)],
//        [-i e^{i phi} sin(theta/2), cos(theta/2)]]
// With this convention the odd-parity signal after R(pi/2, phi_a) x
// R(pi/2, phi_b) on a Psi-family state of phase theta is exactly
// 1/2 - 1/2 cos(phi_a - phi_b + theta), and for Phi
// 1/2 - 1/2 cos(phi_a + phi_b - theta); no sign flip was needed.
struct Rotation {
  double theta = 0.0;
  double phi = 0.0;

  Mat2c matrix() const;
};

// Bell-family state with arbitrary phase and amplitude imbalance:
//   Psi: sqrt(1-w)|du> + sqrt(w) e^{-i phase} |ud>
//   Phi: sqrt(1-w)|dd> - sqrt(w) e^{+i phase} |uu>
// Throws if weight is outside [0, 1].
PureState4 bell_state(StateFamily family, double phase, double weight);

// rho -> (Ua x Ub) rho (Ua x Ub)^dagger.
DensityMatrix4 apply_local_rotations(const DensityMatrix4& state,
                                     const Rotation& rot_a,
                                     const Rotation& rot_b);

// Diagonal of rho in the order (P_dd, P_du, P_ud, P_uu).
Eigen::Vector4d populations(const DensityMatrix4& state);

// P_du + P_ud.
double odd_parity(const DensityMatrix4& state);

// <target| rho |target>, clamped to [0, 1].
double fidelity_pure(const DensityMatrix4& state, const PureState4& target);

double fidelity_pure(const PureState4& state, const PureState4& target);

Mat4c kron2(const Mat2c& a, const Mat2c& b);

}  // namespace heraldkit
