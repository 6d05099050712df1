#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heraldkit/quantum_core.hpp"
#include "test_util.hpp"

using namespace heraldkit;
using testutil::random_pure;
constexpr double kPi = std::numbers::pi;

TEST_CASE("bell_state amplitudes") {
  const double s = 1.0 / std::sqrt(2.0);

  auto psi0 = bell_state(StateFamily::Psi, 0.0, 0.5);
  CHECK(std::abs(psi0.amplitude(kDD)) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(psi0.amplitude(kDU).real() == doctest::Approx(s));
  CHECK(psi0.amplitude(kUD).real() == doctest::Approx(s));
  CHECK(std::abs(psi0.amplitude(kUU)) == doctest::Approx(0.0).epsilon(1e-14));

  auto psi_pi = bell_state(StateFamily::Psi, kPi, 0.5);
  CHECK(psi_pi.amplitude(kDU).real() == doctest::Approx(s));
  CHECK(psi_pi.amplitude(kUD).real() == doctest::Approx(-s));
  CHECK(std::abs(psi_pi.amplitude(kUD).imag()) < 1e-12);

  // weight = 1 kills the |dd> term entirely.
  auto phi_w1 = bell_state(StateFamily::Phi, 0.0, 1.0);
  CHECK(std::abs(phi_w1.amplitude(kDD)) == doctest::Approx(0.0));
  CHECK(phi_w1.amplitude(kUU).real() == doctest::Approx(-1.0));

  CHECK_THROWS(bell_state(StateFamily::Psi, 0.0, -0.1));
  CHECK_THROWS(bell_state(StateFamily::Psi, 0.0, 1.1));
}

TEST_CASE("PureState4 and DensityMatrix4 constructors enforce invariants") {
  Vec4c bad;
  bad << 1.0, 1.0, 0.0, 0.0;
  CHECK_THROWS(PureState4(bad));
  CHECK_NOTHROW(PureState4::normalized(bad));

  Mat4c not_herm = Mat4c::Zero();
  not_herm(0, 0) = 1.0;
  not_herm(0, 1) = Complex(0.0, 0.3);
  CHECK_THROWS(DensityMatrix4(not_herm));

  Mat4c neg = Mat4c::Zero();
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS(DensityMatrix4(neg));
}

TEST_CASE("populations and odd_parity basics") {
  auto psi = DensityMatrix4::from_pure(bell_state(StateFamily::Psi, 0.0, 0.5));
  auto phi = DensityMatrix4::from_pure(bell_state(StateFamily::Phi, 0.0, 0.5));
  auto mixed = DensityMatrix4::maximally_mixed();

  Eigen::Vector4d p = populations(psi);
  CHECK(p(kDD) == doctest::Approx(0.0));
  CHECK(p(kDU) == doctest::Approx(0.5));
  CHECK(p(kUD) == doctest::Approx(0.5));
  CHECK(p(kUU) == doctest::Approx(0.0));

  Eigen::Vector4d q = populations(phi);
  CHECK(q(kDD) == doctest::Approx(0.5));
  CHECK(q(kUU) == doctest::Approx(0.5));

  CHECK(odd_parity(psi) == doctest::Approx(1.0));
  CHECK(odd_parity(phi) == doctest::Approx(0.0));
  CHECK(odd_parity(mixed) == doctest::Approx(0.5));
}

TEST_CASE("identity rotation and mixed-state rotation invariance") {
  RngStream rng(42, 0);
  auto rho = testutil::random_density(rng);
  auto same = apply_local_rotations(rho, Rotation{0.0, 0.3}, Rotation{0.0, 1.1});
  CHECK((same.matrix() - rho.matrix()).norm() < 1e-12);

  auto mixed = DensityMatrix4::maximally_mixed();
  for (double phi_a : {0.0, 0.7, 2.2}) {
    for (double phi_b : {0.0, -1.3}) {
      auto rot = apply_local_rotations(mixed, Rotation{kPi / 2, phi_a},
                                       Rotation{kPi / 2, phi_b});
      CHECK(odd_parity(rot) == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
}

// Closed-form parity fringe oracle for the full pipeline, both families,
// on a 10 x 10 x 8 grid.
TEST_CASE("parity fringe closed form over a phase grid") {
  for (int it = 0; it < 8; ++it) {
    const double theta = -kPi + 2.0 * kPi * (it + 0.37) / 8.0;
    auto psi = DensityMatrix4::from_pure(
        bell_state(StateFamily::Psi, theta, 0.5));
    auto phi = DensityMatrix4::from_pure(
        bell_state(StateFamily::Phi, theta, 0.5));
    for (int ia = 0; ia < 10; ++ia) {
      const double phi_a = 2.0 * kPi * ia / 10.0;
      for (int ib = 0; ib < 10; ++ib) {
        const double phi_b = 2.0 * kPi * (ib + 0.5) / 10.0;
        const Rotation ra{kPi / 2, phi_a};
        const Rotation rb{kPi / 2, phi_b};
        const double p_psi = odd_parity(apply_local_rotations(psi, ra, rb));
        const double p_phi = odd_parity(apply_local_rotations(phi, ra, rb));
        CHECK(std::abs(p_psi -
                       (0.5 - 0.5 * std::cos(phi_a - phi_b + theta))) < 1e-10);
        CHECK(std::abs(p_phi -
                       (0.5 - 0.5 * std::cos(phi_a + phi_b - theta))) < 1e-10);
      }
    }
  }
}

TEST_CASE("fidelity_pure examples") {
  auto psi0 = bell_state(StateFamily::Psi, 0.0, 0.5);
  auto rho0 = DensityMatrix4::from_pure(psi0);
  CHECK(fidelity_pure(rho0, psi0) == doctest::Approx(1.0));
  CHECK(fidelity_pure(DensityMatrix4::maximally_mixed(), psi0) ==
        doctest::Approx(0.25));

  // Equal mixture of opposite-phase Bell states.
  auto psi_pi = bell_state(StateFamily::Psi, kPi, 0.5);
  Mat4c half = 0.5 * DensityMatrix4::from_pure(psi0).matrix() +
               0.5 * DensityMatrix4::from_pure(psi_pi).matrix();
  CHECK(fidelity_pure(DensityMatrix4(half), psi0) == doctest::Approx(0.5));
}

TEST_CASE("fidelity_pure is 1 exactly for matching pure states") {
  RngStream rng(7, 0);
  for (int i = 0; i < 50; ++i) {
    auto a = random_pure(rng);
    auto b = random_pure(rng);
    CHECK(fidelity_pure(DensityMatrix4::from_pure(a), a) ==
          doctest::Approx(1.0).epsilon(1e-12));
    // Distinct random states essentially never have unit overlap.
    CHECK(fidelity_pure(DensityMatrix4::from_pure(a), b) < 1.0 - 1e-6);
    CHECK(fidelity_pure(a, b) ==
          doctest::Approx(fidelity_pure(DensityMatrix4::from_pure(a), b)));
  }
}

// Footnote-2 amplitude imbalance: overlap with the balanced state is
// 1/2 + sqrt(w(1-w)), maximal at w = 1/2.
TEST_CASE("unbalanced weight fidelity closed form") {
  for (StateFamily family : {StateFamily::Psi, StateFamily::Phi}) {
    for (double w : {0.0, 0.1, 0.25, 0.5, 0.8, 1.0}) {
      const double phase = 0.4;
      auto rho = DensityMatrix4::from_pure(bell_state(family, phase, w));
      auto target = bell_state(family, phase, 0.5);
      CHECK(fidelity_pure(rho, target) ==
            doctest::Approx(0.5 + std::sqrt(w * (1.0 - w))).epsilon(1e-12));
    }
  }
}

TEST_CASE("rotations preserve density-matrix invariants") {
  RngStream rng(99, 0);
  for (int i = 0; i < 200; ++i) {
    auto rho = testutil::random_density(rng);
    Rotation ra{rng.uniform() * 2 * kPi, rng.uniform() * 2 * kPi};
    Rotation rb{rng.uniform() * 2 * kPi, rng.uniform() * 2 * kPi};
    // The constructor of the result re-checks trace/Hermiticity/positivity.
    auto out = apply_local_rotations(rho, ra, rb);
    CHECK(std::abs(out.matrix().trace().real() - 1.0) < 1e-12);
    CHECK((out.matrix() - out.matrix().adjoint()).norm() < 1e-12);
  }
}

TEST_CASE("kron2 matches manual expansion") {
  Mat2c a, b;
  a << Complex(1, 0), Complex(0, 2), Complex(3, 0), Complex(0, -1);
  b << Complex(0, 1), Complex(2, 0), Complex(1, 1), Complex(0, 0);
  Mat4c k = kron2(a, b);
  CHECK(k(0, 0) == a(0, 0) * b(0, 0));
  CHECK(k(0, 3) == a(0, 1) * b(0, 1));
  CHECK(k(3, 1) == a(1, 0) * b(1, 1));
  CHECK(k(2, 1) == a(1, 0) * b(0, 1));
}
