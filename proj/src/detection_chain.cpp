#include "heraldkit/detection_chain.hpp"

#include <cmath>
#include <stdexcept>

namespace heraldkit {

namespace {

double round_ps(double t_ns) { return std::round(t_ns * 1000.0) / 1000.0; }

// Exact floor to the t_r grid; the division alone can land one ulp on the
// wrong side of a bin edge.
double floor_to_grid(double t, double t_r) {
  double n = std::floor(t / t_r);
  while ((n + 1.0) * t_r <= t) n += 1.0;
  while (n * t_r > t) n -= 1.0;
  return n * t_r;
}

}  // namespace

void DetectorModel::validate() const {
  if (!(t_r > 0.0)) throw std::invalid_argument("DetectorModel: t_r must be > 0");
  if (jitter_sigma < 0.0)
    throw std::invalid_argument("DetectorModel: jitter_sigma must be >= 0");
  if (!(window_T > 0.0))
    throw std::invalid_argument("DetectorModel: window_T must be > 0");
}

std::optional<TimingRecord> record(const HeraldEvent& event,
                                   const DetectorModel& model,
                                   RngStream& rng) {
  model.validate();
  TimingRecord rec;
  rec.t1_meas = event.t1_true;
  rec.t2_meas = event.t2_true;
  if (model.jitter_sigma > 0.0) {
    rec.t1_meas = round_ps(rec.t1_meas + rng.normal(model.jitter_sigma));
    rec.t2_meas = round_ps(rec.t2_meas + rng.normal(model.jitter_sigma));
  }
  if (rec.t1_meas < 0.0 || rec.t1_meas > model.window_T || rec.t2_meas < 0.0 ||
      rec.t2_meas > model.window_T) {
    return std::nullopt;
  }
  rec.t1_q = round_ps(floor_to_grid(rec.t1_meas, model.t_r));
  rec.t2_q = round_ps(floor_to_grid(rec.t2_meas, model.t_r));
  rec.dt_q = round_ps(rec.t2_q - rec.t1_q);
  return rec;
}

double phase_uncertainty(const DetectorModel& model, double delta_omega) {
  return delta_omega * model.t_r;
}

}  // namespace heraldkit
