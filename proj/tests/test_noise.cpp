#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heraldkit/noise.hpp"
#include "test_util.hpp"

using namespace heraldkit;

namespace {

constexpr double kPi = std::numbers::pi;

NoiseModel dephasing(double sigma) {
  NoiseModel m;
  m.sigma_phi = sigma;
  return m;
}

}  // namespace

TEST_CASE("Psi states are immune to collective dephasing") {
  for (double sigma : {0.1, 1.0, 5.0}) {
    for (double phase : {0.0, 0.8, -2.1}) {
      auto rho = DensityMatrix4::from_pure(
          bell_state(StateFamily::Psi, phase, 0.5));
      auto out = apply_collective_dephasing(rho, dephasing(sigma));
      CHECK((out.matrix() - rho.matrix()).norm() < 1e-12);
    }
  }
}

TEST_CASE("Phi coherence damps by exp(-sigma^2/2)") {
  auto phi0 = bell_state(StateFamily::Phi, 0.0, 0.5);
  auto rho = DensityMatrix4::from_pure(phi0);

  auto same = apply_collective_dephasing(rho, dephasing(0.0));
  CHECK((same.matrix() - rho.matrix()).norm() < 1e-12);

  // sigma chosen so the damping factor is exactly 0.8.
  const double sigma = std::sqrt(-2.0 * std::log(0.8));
  auto out = apply_collective_dephasing(rho, dephasing(sigma));
  CHECK(fidelity_pure(out, phi0) == doctest::Approx(0.9).epsilon(1e-10));
  CHECK(std::abs(out.entry(kDD, kUU)) ==
        doctest::Approx(0.8 * std::abs(rho.entry(kDD, kUU))));
  // Populations untouched.
  CHECK((populations(out) - populations(rho)).norm() < 1e-12);
}

TEST_CASE("sampled dephasing averages to the deterministic channel") {
  auto phi0 = bell_state(StateFamily::Phi, 0.0, 0.5);
  auto rho = DensityMatrix4::from_pure(phi0);
  const auto model = dephasing(0.9);

  RngStream rng(314, 0);
  const long n = 100000;
  double sum = 0.0, sumsq = 0.0;
  for (long i = 0; i < n; ++i) {
    const double f = fidelity_pure(
        sample_collective_dephasing(rho, model, rng), phi0);
    sum += f;
    sumsq += f * f;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumsq / n - mean * mean) / n);
  const double expected =
      fidelity_pure(apply_collective_dephasing(rho, model), phi0);
  CHECK(std::abs(mean - expected) < 3.0 * se);
}

TEST_CASE("depolarizing channel") {
  auto psi = bell_state(StateFamily::Psi, 0.0, 0.5);
  auto rho = DensityMatrix4::from_pure(psi);
  CHECK((apply_depolarizing(rho, 0.0).matrix() - rho.matrix()).norm() < 1e-14);
  CHECK((apply_depolarizing(rho, 1.0).matrix() -
         DensityMatrix4::maximally_mixed().matrix())
            .norm() < 1e-14);
  CHECK(fidelity_pure(apply_depolarizing(rho, 0.2), psi) ==
        doctest::Approx(0.85));
  CHECK_THROWS(apply_depolarizing(rho, 1.2));
  CHECK_THROWS(apply_depolarizing(rho, -0.1));
}

TEST_CASE("measurement-error confusion matrix") {
  Eigen::Vector4d p(0.0, 0.5, 0.5, 0.0);
  CHECK((apply_measurement_error(p, 0.0) - p).norm() < 1e-14);

  Eigen::Vector4d flat = apply_measurement_error(p, 0.5);
  CHECK((flat - Eigen::Vector4d::Constant(0.25)).norm() < 1e-14);

  // Exact independent flips: the even-parity entries get eps(1-eps) from
  // single flips of |du>/|ud> (0.05 only to first order in eps).
  const double eps = 0.05;
  Eigen::Vector4d out = apply_measurement_error(p, eps);
  CHECK(out(kDD) == doctest::Approx(eps * (1 - eps)));
  CHECK(out(kDU) ==
        doctest::Approx(0.5 * ((1 - eps) * (1 - eps) + eps * eps)));
  CHECK(out(kUD) == doctest::Approx(out(kDU)));
  CHECK(out(kUU) == doctest::Approx(out(kDD)));
  CHECK(out.sum() == doctest::Approx(1.0));
}

TEST_CASE("channels preserve density-matrix invariants") {
  RngStream rng(2718, 0);
  for (int i = 0; i < 100; ++i) {
    auto rho = testutil::random_density(rng);
    auto model = dephasing(rng.uniform() * 3.0);
    // Constructors of the results re-check all invariants.
    auto a = apply_collective_dephasing(rho, model);
    auto b = sample_collective_dephasing(rho, model, rng);
    auto c = apply_depolarizing(rho, rng.uniform());
    CHECK((populations(a) - populations(rho)).norm() < 1e-12);
    CHECK(std::abs(b.matrix().trace().real() - 1.0) < 1e-12);
    CHECK(std::abs(c.matrix().trace().real() - 1.0) < 1e-12);
  }
}

TEST_CASE("dephasing and depolarizing commute on random-phase Bell states") {
  RngStream rng(161, 0);
  for (int i = 0; i < 50; ++i) {
    const double phase = (rng.uniform() - 0.5) * 2.0 * kPi;
    const auto family = rng.coin() ? StateFamily::Psi : StateFamily::Phi;
    auto rho = DensityMatrix4::from_pure(bell_state(family, phase, 0.5));
    const auto model = dephasing(rng.uniform() * 2.0);
    const double p = rng.uniform();
    auto ab = apply_depolarizing(apply_collective_dephasing(rho, model), p);
    auto ba = apply_collective_dephasing(apply_depolarizing(rho, p), model);
    CHECK((ab.matrix() - ba.matrix()).norm() < 1e-12);
  }
}

TEST_CASE("noise model validation") {
  NoiseModel bad;
  bad.sigma_phi = -0.1;
  CHECK_THROWS(bad.validate());
  NoiseModel bad2;
  bad2.depol_p = 1.5;
  CHECK_THROWS(bad2.validate());
  NoiseModel bad3;
  bad3.meas_error = -0.2;
  CHECK_THROWS(bad3.validate());
}
