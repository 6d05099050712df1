#include "heraldkit/herald_sim.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace heraldkit {

namespace {

constexpr double kPi = std::numbers::pi;

// All externally visible times are kept on a 1 ps grid so event logs
// round-trip losslessly through their text representation.
double round_ps(double t_ns) { return std::round(t_ns * 1000.0) / 1000.0; }

double exp_profile(double t, double tau) {
  return std::exp(-t / tau) / tau;
}

}  // namespace

std::optional<HeraldEvent> sample_event(const LinkConfig& config,
                                        double window_T, RngStream& rng,
                                        NoHeraldReason* reason) {
  if (!(window_T > 0.0)) {
    throw std::invalid_argument("sample_event: window_T must be > 0");
  }
  const double t_a = round_ps(sample_emission_time(config.memory_a, rng));
  const double t_b = round_ps(sample_emission_time(config.memory_b, rng));
  const bool detected_a = rng.uniform() < config.memory_a.efficiency;
  const bool detected_b = rng.uniform() < config.memory_b.efficiency;
  if (!detected_a || !detected_b) {
    if (reason) *reason = NoHeraldReason::Efficiency;
    return std::nullopt;
  }
  if (t_a > window_T || t_b > window_T) {
    if (reason) *reason = NoHeraldReason::Window;
    return std::nullopt;
  }
  const DetectorId det_a{rng.coin() ? Port::Two : Port::One,
                         rng.coin() ? Pol::V : Pol::H};
  const DetectorId det_b{rng.coin() ? Port::Two : Port::One,
                         rng.coin() ? Pol::V : Pol::H};
  if (det_a.pol == det_b.pol) {
    if (reason) *reason = NoHeraldReason::Pattern;
    return std::nullopt;
  }

  HeraldEvent event;
  if (t_a <= t_b) {
    event.det_first = det_a;
    event.det_second = det_b;
    event.t1_true = t_a;
    event.t2_true = t_b;
  } else {
    event.det_first = det_b;
    event.det_second = det_a;
    event.t1_true = t_b;
    event.t2_true = t_a;
  }
  event.phi_D = (det_a.port == det_b.port) ? 0.0 : kPi;
  event.family = heralded_family(config);
  event.delta_omega = delta_omega(config);
  return event;
}

double conditioned_phase(const HeraldEvent& event, double t_prime,
                         const LinkConfig& config) {
  if (t_prime < 0.0) {
    throw std::invalid_argument("conditioned_state: t_prime must be >= 0");
  }
  const double sign_d = (event.family == StateFamily::Psi) ? -1.0 : 1.0;
  return event.delta_omega * event.dt_true() +
         2.0 * event.delta_omega * t_prime + sign_d * event.phi_D +
         config.phi_0;
}

double conditioned_weight(const HeraldEvent& event, const LinkConfig& config) {
  const double tau_a = config.memory_a.lifetime_tau;
  const double tau_b = config.memory_b.lifetime_tau;
  const double t1 = event.t1_true;
  const double t2 = event.t2_true;
  const double ba = exp_profile(t1, tau_b) * exp_profile(t2, tau_a);
  const double ab = exp_profile(t1, tau_a) * exp_profile(t2, tau_b);
  return ba / (ab + ba);
}

PureState4 conditioned_state(const HeraldEvent& event, double t_prime,
                             const LinkConfig& config) {
  return bell_state(event.family, conditioned_phase(event, t_prime, config),
                    conditioned_weight(event, config));
}

double herald_probability(const LinkConfig& config, double window_T) {
  config.validate();
  const double in_a = 1.0 - std::exp(-window_T / config.memory_a.lifetime_tau);
  const double in_b = 1.0 - std::exp(-window_T / config.memory_b.lifetime_tau);
  return 0.5 * config.memory_a.efficiency * config.memory_b.efficiency *
         in_a * in_b;
}

}  // namespace heraldkit
