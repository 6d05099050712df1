#include "heraldkit/strategies.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace heraldkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<std::pair<std::string, std::string>> parse_kv(
    std::string_view args) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss{std::string(args)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("strategy spec: expected key=value, got '" +
                                  item + "'");
    }
    out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
  }
  return out;
}

}  // namespace

Strategy parse_strategy(std::string_view spec) {
  const auto colon = spec.find(':');
  const std::string kind{spec.substr(0, colon)};
  const std::string_view args =
      colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);

  if (kind == "accept-all") return AcceptAll{};
  if (kind == "postselect") {
    Postselect ps;
    for (const auto& [key, value] : parse_kv(args)) {
      if (key == "dt_max_ns") ps.dt_max = std::stod(value);
      else if (key == "variant") ps.same_bin_only = (value == "same-bin");
      else throw std::invalid_argument("postselect: unknown key '" + key + "'");
    }
    if (!(ps.dt_max > 0.0))
      throw std::invalid_argument("postselect: dt_max_ns must be > 0");
    return ps;
  }
  if (kind == "gate") {
    Gate g;
    for (const auto& [key, value] : parse_kv(args)) {
      if (key == "window_ns") g.window = std::stod(value);
      else throw std::invalid_argument("gate: unknown key '" + key + "'");
    }
    if (!(g.window > 0.0))
      throw std::invalid_argument("gate: window_ns must be > 0");
    return g;
  }
  if (kind == "feedforward") {
    Feedforward ff;
    for (const auto& [key, value] : parse_kv(args)) {
      if (key == "phi_c_rad") ff.phi_c = std::stod(value);
      else if (key == "mech") {
        if (value == "wait") ff.mech = FeedforwardMech::Wait;
        else if (value == "phase-shift") ff.mech = FeedforwardMech::PhaseShift;
        else throw std::invalid_argument("feedforward: unknown mech '" + value + "'");
      } else {
        throw std::invalid_argument("feedforward: unknown key '" + key + "'");
      }
    }
    return ff;
  }
  throw std::invalid_argument("unknown strategy '" + kind + "'");
}

std::string strategy_tag(const Strategy& strategy) {
  return std::visit(
      [](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        std::ostringstream os;
        if constexpr (std::is_same_v<T, AcceptAll>) {
          os << "accept-all";
        } else if constexpr (std::is_same_v<T, Postselect>) {
          os << "postselect:dt_max_ns=" << s.dt_max;
          if (s.same_bin_only) os << ",variant=same-bin";
        } else if constexpr (std::is_same_v<T, Gate>) {
          os << "gate:window_ns=" << s.window;
        } else {
          os << "feedforward:phi_c_rad=" << s.phi_c << ",mech="
             << (s.mech == FeedforwardMech::Wait ? "wait" : "phase-shift");
        }
        return os.str();
      },
      strategy);
}

bool accept(const TimingRecord& rec, const Strategy& strategy) {
  return std::visit(
      [&rec](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Postselect>) {
          if (s.same_bin_only) return rec.dt_q == 0.0;
          return std::abs(rec.dt_q) <= s.dt_max;
        } else if constexpr (std::is_same_v<T, Gate>) {
          return rec.t1_meas <= s.window && rec.t2_meas <= s.window;
        } else {
          return true;  // AcceptAll and Feedforward keep every event
        }
      },
      strategy);
}

RateEstimate relative_rate(const Strategy& strategy, const LinkConfig& config,
                           const DetectorModel& detector, long n_events,
                           std::uint64_t seed) {
  if (n_events < 1000) {
    throw std::invalid_argument("relative_rate: n_events must be >= 1000");
  }
  long heralded = 0;
  long accepted = 0;
  std::uint64_t attempt = 0;
  while (heralded < n_events) {
    RngStream rng = RngStream::child(seed, attempt++);
    const auto event = sample_event(config, detector.window_T, rng);
    if (!event) continue;
    const auto rec = record(*event, detector, rng);
    if (!rec) continue;
    ++heralded;
    if (accept(*rec, strategy)) ++accepted;
  }

  RateEstimate est;
  est.ratio = static_cast<double>(accepted) / static_cast<double>(heralded);
  if (accepted == 0) {
    est.undefined_stderr = true;
  } else {
    est.stderr = std::sqrt(est.ratio * (1.0 - est.ratio) /
                           static_cast<double>(heralded));
  }

  const double tau_a = config.memory_a.lifetime_tau;
  const double tau_b = config.memory_b.lifetime_tau;
  if (tau_a == tau_b) {
    const double tau = tau_a;
    if (const auto* ps = std::get_if<Postselect>(&strategy)) {
      if (ps->same_bin_only) {
        const double w = detector.t_r;
        const double num = 1.0 - std::exp(-w / tau);
        est.closed_form = num * num / (1.0 - std::exp(-2.0 * w / tau));
      }
    } else if (const auto* g = std::get_if<Gate>(&strategy)) {
      const double num = 1.0 - std::exp(-g->window / tau);
      const double den = 1.0 - std::exp(-detector.window_T / tau);
      est.closed_form = (num / den) * (num / den);
    } else if (std::holds_alternative<AcceptAll>(strategy) ||
               std::holds_alternative<Feedforward>(strategy)) {
      est.closed_form = 1.0;
    }
  }
  return est;
}

double feedforward_wait(const TimingRecord& rec, double phi_D,
                        StateFamily family, double delta_omega, double phi_0,
                        double phi_c) {
  if (delta_omega == 0.0) {
    throw std::invalid_argument(
        "feedforward_wait: undefined for delta_omega = 0; use accept-all");
  }
  const double sign_d = (family == StateFamily::Phi) ? 1.0 : -1.0;
  const double needed =
      phi_c + sign_d * phi_D - phi_0 - delta_omega * rec.dt_q;
  // 2 dw t' must equal `needed` mod 2 pi with t' >= 0.
  const double arg = delta_omega > 0.0 ? needed : -needed;
  return wrap_two_pi(arg) / (2.0 * std::abs(delta_omega));
}

double max_feedforward_wait(double delta_omega) {
  if (delta_omega == 0.0) {
    throw std::invalid_argument("max_feedforward_wait: delta_omega = 0");
  }
  return std::numbers::pi / std::abs(delta_omega);
}

ParityScan postprocess_shift(const ParityScan& scan, double delta_omega,
                             double dt_q) {
  // A Phi fringe recorded at sum phase x with interarrival dt follows
  // cos(x - dw*dt - ...), so relabeling the point to x - dw*dt aligns every
  // bin with the dt = 0 fringe. This is the analysis-phase shift
  // phi_a + phi_b -> phi_a + phi_b + dw*dt expressed on the recorded
  // coordinates: the applied phase exceeds the common-axis label by dw*dt.
  ParityScan shifted = scan;
  for (auto& pt : shifted.points) {
    pt.phi_a -= delta_omega * dt_q;
  }
  return shifted;
}

}  // namespace heraldkit
