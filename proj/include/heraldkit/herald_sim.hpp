#pragma once

#include <optional>

#include "heraldkit/photon_source.hpp"
#include "heraldkit/quantum_core.hpp"
#include "heraldkit/rng.hpp"

namespace heraldkit {

enum class Port : int { One = 1, Two = 2 };
enum class Pol : int { H = 0, V = 1 };

// One of the four PMTs behind the beamsplitter + polarizer stack.
struct DetectorId {
  Port port = Port::One;
  Pol pol = Pol::H;

  bool operator==(const DetectorId&) const = default;
};

enum class NoHeraldReason { Efficiency, Window, Pattern };

// A successful two-photon coincidence. Times are measured from the
// excitation trigger and ordered so t1_true <= t2_true; a herald always has
// one H and one V click. phi_D is 0 when both clicks land on the same
// beamsplitter output port and pi when they land on opposite ports (the
// two classes only need to differ by pi; this labeling is our choice).
struct HeraldEvent {
  long event_id = 0;
  DetectorId det_first;
  DetectorId det_second;
  double t1_true = 0.0;  // ns
  double t2_true = 0.0;  // ns
  double phi_D = 0.0;    // 0 or pi
  StateFamily family = StateFamily::Psi;
  double delta_omega = 0.0;  // rad/ns, signed

  double dt_true() const { return t2_true - t1_true; }
};

struct NoHerald {
  NoHeraldReason reason;
};

// Draws one entanglement attempt through the partial Bell state analyzer.
// Arrival times, routing and polarization are sampled independently: the
// heralding-pattern probabilities carry no Delta-omega dependence because
// the two contributing amplitudes attach to orthogonal memory states, and
// same-polarization coincidences never herald.
std::optional<HeraldEvent> sample_event(const LinkConfig& config,
                                        double window_T, RngStream& rng,
                                        NoHeraldReason* reason = nullptr);

// Conditioned two-memory state for a herald, t_prime ns after the second
// click. Phase theta = dw*dt + 2*dw*t' - phi_D + phi_0 for Psi and
// theta = dw*dt + 2*dw*t' + phi_D + phi_0 for Phi. The amplitude weight
// follows the temporal profiles:
//   w = f_B(t1) f_A(t2) / (f_A(t1) f_B(t2) + f_B(t1) f_A(t2)),
// f_i(t) = (1/tau_i) exp(-t/tau_i); w = 1/2 exactly when tau_A = tau_B.
PureState4 conditioned_state(const HeraldEvent& event, double t_prime,
                             const LinkConfig& config);

// Phase exponent of the conditioned state (same theta as above), handy for
// feedforward checks without constructing the state.
double conditioned_phase(const HeraldEvent& event, double t_prime,
                         const LinkConfig& config);

// Amplitude weight w of the conditioned state (see above).
double conditioned_weight(const HeraldEvent& event, const LinkConfig& config);

// Analytic herald probability per attempt:
//   eta_A eta_B (1 - e^{-T/tau_A})(1 - e^{-T/tau_B}) / 2.
double herald_probability(const LinkConfig& config, double window_T);

}  // namespace heraldkit
