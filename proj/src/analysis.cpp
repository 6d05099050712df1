#include "heraldkit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heraldkit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double scan_coordinate(const ScanPoint& pt, StateFamily family) {
  return family == StateFamily::Psi ? pt.phi_a - pt.phi_b : pt.phi_a + pt.phi_b;
}

}  // namespace

double wrap_pi(double angle) {
  double w = std::remainder(angle, kTwoPi);
  if (w <= -kPi) w += kTwoPi;
  return w;
}

double wrap_two_pi(double angle) {
  double w = std::fmod(angle, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  return w;
}

ParityResult measure_parity(const DensityMatrix4& state, double phi_a,
                            double phi_b, long shots, const NoiseModel& noise,
                            RngStream& rng) {
  if (shots < 0) {
    throw std::invalid_argument("measure_parity: shots must be >= 0");
  }
  DensityMatrix4 rho = apply_collective_dephasing(state, noise);
  rho = apply_depolarizing(rho, noise.depol_p);
  rho = apply_local_rotations(rho, Rotation{kPi / 2.0, phi_a},
                              Rotation{kPi / 2.0, phi_b});
  Eigen::Vector4d pops = apply_measurement_error(populations(rho),
                                                 noise.meas_error);

  ParityResult result;
  if (shots == 0) {
    result.p_odd = pops(kDU) + pops(kUD);
    return result;
  }
  for (long s = 0; s < shots; ++s) {
    const double u = rng.uniform();
    double cum = 0.0;
    int outcome = 3;
    for (int i = 0; i < 4; ++i) {
      cum += pops(i);
      if (u < cum) {
        outcome = i;
        break;
      }
    }
    ++result.counts[static_cast<std::size_t>(outcome)];
  }
  result.p_odd =
      static_cast<double>(result.counts[kDU] + result.counts[kUD]) /
      static_cast<double>(shots);
  return result;
}

double exact_odd_parity(const DensityMatrix4& state, double phi_a,
                        double phi_b) {
  RngStream unused;
  return measure_parity(state, phi_a, phi_b, 0, NoiseModel{}, unused).p_odd;
}

FringeFit fit_fringe(const ParityScan& scan, StateFamily family) {
  const auto n = static_cast<Eigen::Index>(scan.points.size());
  if (n < 3) {
    throw std::runtime_error("fit_fringe: need at least 3 scan points");
  }

  bool uniform_shots = true;
  for (const auto& pt : scan.points) {
    if (pt.shots != scan.points.front().shots) uniform_shots = false;
  }

  Eigen::MatrixXd design(n, 3);
  Eigen::VectorXd rhs(n);
  Eigen::VectorXd weight(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& pt = scan.points[static_cast<std::size_t>(i)];
    const double x = scan_coordinate(pt, family);
    design(i, 0) = 1.0;
    design(i, 1) = -std::cos(x);
    design(i, 2) = -std::sin(x);
    rhs(i) = pt.p_odd;
    weight(i) = uniform_shots ? 1.0 : static_cast<double>(std::max(pt.shots, 1l));
  }
  weight *= static_cast<double>(n) / weight.sum();

  const Eigen::VectorXd sw = weight.cwiseSqrt();
  Eigen::MatrixXd wd = sw.asDiagonal() * design;
  Eigen::VectorXd wr = sw.asDiagonal() * rhs;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(wd);
  qr.setThreshold(1e-10);
  if (qr.rank() < 3) {
    throw std::runtime_error("fit_fringe: degenerate scan design");
  }
  const Eigen::Vector3d coeff = qr.solve(wr);
  const double c = coeff(0), a = coeff(1), b = coeff(2);

  const Eigen::VectorXd residual = rhs - design * coeff;
  const double wssr = (sw.asDiagonal() * residual).squaredNorm();
  const double sigma2 = n > 3 ? wssr / static_cast<double>(n - 3) : 0.0;
  const Eigen::Matrix3d cov =
      sigma2 * (wd.transpose() * wd).inverse();

  FringeFit fit;
  fit.offset = c;
  fit.contrast_Pi = std::hypot(a, b);
  // Psi: p = 1/2 - Pi cos(x + phase);  Phi: p = 1/2 - Pi cos(x - phase).
  fit.phase = family == StateFamily::Psi ? std::atan2(-b, a) : std::atan2(b, a);
  fit.rms_residual = std::sqrt(residual.squaredNorm() / static_cast<double>(n));

  const double r2 = a * a + b * b;
  if (r2 > 0.0) {
    Eigen::Vector2d g_pi(a / fit.contrast_Pi, b / fit.contrast_Pi);
    Eigen::Vector2d g_ph = family == StateFamily::Psi
                               ? Eigen::Vector2d(b / r2, -a / r2)
                               : Eigen::Vector2d(-b / r2, a / r2);
    const Eigen::Matrix2d cov_ab = cov.bottomRightCorner<2, 2>();
    fit.contrast_stderr = std::sqrt(std::max(0.0, g_pi.dot(cov_ab * g_pi)));
    fit.phase_stderr = std::sqrt(std::max(0.0, g_ph.dot(cov_ab * g_ph)));
  }
  return fit;
}

FidelityEstimate fidelity_from_scan(const Eigen::Vector4d& populations,
                                    const FringeFit& fit, StateFamily family,
                                    long total_shots) {
  if (std::abs(populations.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("fidelity_from_scan: populations must sum to 1");
  }
  FidelityEstimate est;
  const double pop_sum = family == StateFamily::Psi
                             ? populations(kDU) + populations(kUD)
                             : populations(kDD) + populations(kUU);
  est.pop_term = 0.5 * pop_sum;
  est.coherence_term = fit.contrast_Pi;
  est.value = est.pop_term + est.coherence_term;
  double pop_var = 0.0;
  if (total_shots > 0) {
    pop_var = 0.25 * pop_sum * (1.0 - pop_sum) /
              static_cast<double>(total_shots);
  }
  est.stderr = std::sqrt(pop_var + fit.contrast_stderr * fit.contrast_stderr);
  return est;
}

PhaseSlopeFit fit_phase_slope(std::vector<PhasePoint> points) {
  if (points.size() < 2) {
    throw std::runtime_error("fit_phase_slope: need at least 2 groups");
  }
  std::sort(points.begin(), points.end(),
            [](const PhasePoint& l, const PhasePoint& r) { return l.dt < r.dt; });

  // Nearest-multiple-of-2pi chaining across consecutive bins.
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double jump = points[i].phase - points[i - 1].phase;
    points[i].phase -= kTwoPi * std::round(jump / kTwoPi);
  }

  const auto n = static_cast<double>(points.size());
  double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
  for (const auto& pt : points) {
    sw += pt.weight;
    swx += pt.weight * pt.dt;
    swy += pt.weight * pt.phase;
    swxx += pt.weight * pt.dt * pt.dt;
    swxy += pt.weight * pt.dt * pt.phase;
  }
  const double denom = sw * swxx - swx * swx;
  if (denom <= 0.0) {
    throw std::runtime_error("fit_phase_slope: degenerate dt values");
  }

  PhaseSlopeFit fit;
  fit.slope = (sw * swxy - swx * swy) / denom;
  fit.intercept = wrap_pi((swy - fit.slope * swx) / sw);

  if (points.size() > 2) {
    // Relative weights: Var(y_i) = sigma^2 / w_i, sigma^2 from residuals.
    const double intercept_raw = (swy - fit.slope * swx) / sw;
    double wssr = 0.0;
    for (const auto& pt : points) {
      const double r = pt.phase - (fit.slope * pt.dt + intercept_raw);
      wssr += pt.weight * r * r;
    }
    const double s2 = wssr / (n - 2.0);
    fit.slope_stderr = std::sqrt(s2 * sw / denom);
  }

  std::vector<double> spacing;
  for (std::size_t i = 1; i < points.size(); ++i) {
    spacing.push_back(points[i].dt - points[i - 1].dt);
  }
  std::nth_element(spacing.begin(), spacing.begin() + spacing.size() / 2,
                   spacing.end());
  const double median_dx = spacing[spacing.size() / 2];
  fit.unwrap_ambiguous = std::abs(fit.slope) * median_dx > kPi;
  return fit;
}

}  // namespace heraldkit
