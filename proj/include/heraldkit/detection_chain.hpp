#pragma once

#include <optional>

#include "heraldkit/herald_sim.hpp"
#include "heraldkit/rng.hpp"

namespace heraldkit {

// Photon detection circuit: per-click Gaussian jitter, floor quantization
// to the t_r grid (time-to-digital converter behavior; round-to-nearest
// would move every histogram bin edge), and the coincidence window.
struct DetectorModel {
  double t_r = 5.0;          // ns, timing resolution / bin width
  double jitter_sigma = 0.0; // ns, 1 sigma per click
  double window_T = 60.0;    // ns

  void validate() const;
};

// Measured and quantized click times for one herald. Jitter is applied
// before quantization and may reorder the clicks, so dt_q is signed.
// The downstream phase correction only ever sees dt_q; the physical state
// phase always uses the true interarrival time. That mismatch is the
// decoherence mechanism under study.
struct TimingRecord {
  double t1_meas = 0.0;
  double t2_meas = 0.0;
  double t1_q = 0.0;
  double t2_q = 0.0;
  double dt_q = 0.0;  // t2_q - t1_q, integer multiple of t_r
};

// Jitter + quantize + window check (on the measured times, as a gated
// counter would). nullopt = rejected.
std::optional<TimingRecord> record(const HeraldEvent& event,
                                   const DetectorModel& model, RngStream& rng);

// Characteristic per-event phase spread dw * t_r; the coherence criterion
// is t_r << 2 pi / dw.
double phase_uncertainty(const DetectorModel& model, double delta_omega);

}  // namespace heraldkit
