#pragma once

#include <array>
#include <vector>

#include "heraldkit/noise.hpp"
#include "heraldkit/quantum_core.hpp"
#include "heraldkit/rng.hpp"

namespace heraldkit {

enum class ScanMode { DiffPhase, SumPhase, Free };

struct ScanPoint {
  double phi_a = 0.0;
  double phi_b = 0.0;
  double p_odd = 0.0;
  long shots = 0;  // 0 = exact probability, no sampling
};

struct ParityScan {
  std::vector<ScanPoint> points;
  ScanMode mode = ScanMode::Free;
};

// Fringe fit result for p_odd = offset - Pi cos(x -+ phase), where
// x = phi_a - phi_b for Psi and x = phi_a + phi_b for Phi, and the sign
// is chosen so `phase` equals the bell_state phase exponent directly:
// Psi fits cos(x + phase), Phi fits cos(x - phase).
struct FringeFit {
  double contrast_Pi = 0.0;
  double phase = 0.0;  // (-pi, pi]
  double offset = 0.0;
  double rms_residual = 0.0;
  double phase_stderr = 0.0;
  double contrast_stderr = 0.0;
};

struct FidelityEstimate {
  double value = 0.0;
  double pop_term = 0.0;
  double coherence_term = 0.0;
  double stderr = 0.0;
};

struct PhasePoint {
  double dt = 0.0;     // ns (quantized bin)
  double phase = 0.0;  // rad, phi_D already removed, wrapped
  double weight = 1.0; // regression weight (events in group, or 1/stderr^2)
};

struct PhaseSlopeFit {
  double slope = 0.0;      // rad/ns
  double intercept = 0.0;  // rad, mod 2 pi
  double slope_stderr = 0.0;
  bool unwrap_ambiguous = false;
};

// Odd-parity probability after the analysis sequence: noise channels,
// R(pi/2, phi_a) x R(pi/2, phi_b), measurement-error confusion. shots = 0
// returns the exact probability; otherwise draws `shots` multinomial
// samples and returns the observed odd-parity frequency plus raw counts.
struct ParityResult {
  double p_odd = 0.0;
  std::array<long, 4> counts = {0, 0, 0, 0};
};

ParityResult measure_parity(const DensityMatrix4& state, double phi_a,
                            double phi_b, long shots, const NoiseModel& noise,
                            RngStream& rng);

// Noise-free exact-mode convenience.
double exact_odd_parity(const DensityMatrix4& state, double phi_a,
                        double phi_b);

// Linear least-squares sinusoid fit (cos/sin basis, exact for this model
// class, no iterative optimizer). Points are weighted by shots when shot
// counts differ. Throws on a degenerate design matrix.
FringeFit fit_fringe(const ParityScan& scan, StateFamily family);

// F = (P_du + P_ud)/2 + Pi for Psi, (P_dd + P_uu)/2 + Pi for Phi.
// total_shots > 0 propagates binomial population errors; 0 means exact
// populations (stderr from the fit alone).
FidelityEstimate fidelity_from_scan(const Eigen::Vector4d& populations,
                                    const FringeFit& fit, StateFamily family,
                                    long total_shots = 0);

// Unwraps fitted phases across dt bins (nearest multiple of 2 pi chaining
// after sorting by dt) and runs a weighted linear regression. The slope
// estimates +dw in the bell-phase convention; callers flip the sign for
// the Psi-family phi' presentation. unwrap_ambiguous is set when the
// fitted |slope| times the median bin spacing exceeds pi.
PhaseSlopeFit fit_phase_slope(std::vector<PhasePoint> points);

double wrap_pi(double angle);      // to (-pi, pi]
double wrap_two_pi(double angle);  // to [0, 2 pi)

}  // namespace heraldkit
