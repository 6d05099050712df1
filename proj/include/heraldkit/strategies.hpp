#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "heraldkit/analysis.hpp"
#include "heraldkit/detection_chain.hpp"
#include "heraldkit/herald_sim.hpp"

namespace heraldkit {

struct AcceptAll {};

// |dt_q| <= dt_max, on the quantized difference since a real apparatus only
// sees quantized times. With floor binning and dt_max = t_r this keeps the
// same and adjacent bins; same_bin_only restricts to dt_q = 0 (the strict
// reading of a "dt = t_r" selection; both variants are reported because the
// source wording is ambiguous).
struct Postselect {
  double dt_max = 5.0;  // ns
  bool same_bin_only = false;
};

// Both measured clicks inside [0, window] from the excitation trigger.
struct Gate {
  double window = 5.0;  // ns
};

enum class FeedforwardMech { Wait, PhaseShift };

// Keeps every event and drives the state phase to phi_c, either by a timed
// wait (evolving the 2 dw t' term) or by relabeling later analysis phases.
struct Feedforward {
  double phi_c = 0.0;
  FeedforwardMech mech = FeedforwardMech::Wait;
};

using Strategy = std::variant<AcceptAll, Postselect, Gate, Feedforward>;

// Spec strings: accept-all | postselect:dt_max_ns=5[,variant=same-bin]
//             | gate:window_ns=5 | feedforward:phi_c_rad=0,mech=wait
Strategy parse_strategy(std::string_view spec);
std::string strategy_tag(const Strategy& strategy);

bool accept(const TimingRecord& rec, const Strategy& strategy);

struct RateEstimate {
  double ratio = 0.0;
  double stderr = 0.0;
  std::optional<double> closed_form;  // where one exists
  bool undefined_stderr = false;      // zero accepted events
};

// Monte Carlo fraction of heralded (and recorded) events the strategy
// accepts, relative to accept-all under the same coincidence window.
// Closed forms (tau_A = tau_B = tau): same-bin postselect
// (1-e^{-w/tau})^2 / (1-e^{-2w/tau}) untruncated, gate
// ((1-e^{-w/tau}) / (1-e^{-T/tau}))^2.
RateEstimate relative_rate(const Strategy& strategy, const LinkConfig& config,
                           const DetectorModel& detector, long n_events,
                           std::uint64_t seed);

// Minimum positive wait after the second click that drives the total state
// phase to phi_c, from the quantized interarrival time. Result in
// [0, pi/|dw|). Throws when delta_omega is 0.
double feedforward_wait(const TimingRecord& rec, double phi_D,
                        StateFamily family, double delta_omega, double phi_0,
                        double phi_c);

double max_feedforward_wait(double delta_omega);  // pi / |dw|

// Fig-5 style postprocessing: shift the sum-phase coordinate of every scan
// point by +dw * dt_q (Phi-family scans).
ParityScan postprocess_shift(const ParityScan& scan, double delta_omega,
                             double dt_q);

}  // namespace heraldkit
