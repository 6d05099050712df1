#include "heraldkit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "heraldkit/analysis.hpp"
#include "heraldkit/version.hpp"

namespace heraldkit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Salt separating the parity-scan RNG streams from the event streams.
constexpr std::uint64_t kScanSalt = 0x5ca4b8e1d2f90a37ull;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::vector<std::string> provenance(const ScenarioConfig& config) {
  return {std::string("tool = ") + kToolVersion,
          "config_hash = " + config.hash_hex(),
          "seed = " + std::to_string(config.seed)};
}

void emit_header(std::ostringstream& os, const ScenarioConfig& config) {
  for (const auto& line : provenance(config)) os << "# " << line << "\n";
}

double rad_per_ns_to_mhz(double w) { return w / kTwoPi * 1e3; }

// Compensated phase exponent: dw * dt_true + phi_0, the detector-pair
// phase phi_D removed (it is exactly known per event).
double compensated_phase(const SimEvent& sim, const LinkConfig& link) {
  return sim.event.delta_omega * sim.event.dt_true() + link.phi_0;
}

bool noise_free_state(const NoiseModel& noise) {
  return noise.sigma_phi == 0.0 && noise.depol_p == 0.0;
}

// Fidelity of one event's conditioned state (phi_D compensated, t' = 0)
// against the balanced dt = 0 reference shifted by extra_target_phase.
double event_fidelity(const SimEvent& sim, const LinkConfig& link,
                      const NoiseModel& noise, double extra_target_phase) {
  const double theta = compensated_phase(sim, link);
  const double w = conditioned_weight(sim.event, link);
  const PureState4 psi = bell_state(sim.event.family, theta, w);
  const PureState4 target =
      bell_state(sim.event.family, link.phi_0 + extra_target_phase, 0.5);
  if (noise_free_state(noise)) {
    return fidelity_pure(psi, target);
  }
  DensityMatrix4 rho = DensityMatrix4::from_pure(psi);
  rho = apply_collective_dephasing(rho, noise);
  rho = apply_depolarizing(rho, noise.depol_p);
  return fidelity_pure(rho, target);
}

struct MeanStd {
  double mean = 0.0;
  double stderr_mean = 0.0;
  long n = 0;
};

MeanStd mean_std(const std::vector<double>& values) {
  MeanStd out;
  out.n = static_cast<long>(values.size());
  if (out.n == 0) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  out.mean = sum / static_cast<double>(out.n);
  if (out.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.stderr_mean = std::sqrt(ss / static_cast<double>(out.n - 1) /
                                static_cast<double>(out.n));
  }
  return out;
}

// Scan coordinates: x runs over [0, 2 pi), split per family convention.
ParityScan make_scan_design(StateFamily family, int n_phases, long shots) {
  ParityScan scan;
  scan.mode =
      family == StateFamily::Psi ? ScanMode::DiffPhase : ScanMode::SumPhase;
  for (int j = 0; j < n_phases; ++j) {
    const double x = kTwoPi * static_cast<double>(j) /
                     static_cast<double>(n_phases);
    ScanPoint pt;
    if (family == StateFamily::Psi) {
      pt.phi_a = 0.5 * x;
      pt.phi_b = -0.5 * x;
    } else {
      pt.phi_a = 0.5 * x;
      pt.phi_b = 0.5 * x;
    }
    pt.shots = shots;
    scan.points.push_back(pt);
  }
  return scan;
}

// Fills p_odd for a scan design from a state, sampling when shots > 0.
void run_scan(ParityScan& scan, const DensityMatrix4& rho,
              const NoiseModel& noise, std::uint64_t seed,
              std::uint64_t& scan_counter) {
  for (auto& pt : scan.points) {
    RngStream rng = RngStream::child(seed ^ kScanSalt, scan_counter++);
    pt.p_odd =
        measure_parity(rho, pt.phi_a, pt.phi_b, pt.shots, noise, rng).p_odd;
  }
}

DensityMatrix4 average_state(const std::vector<const SimEvent*>& events,
                             const LinkConfig& link, bool compensate_phi_d) {
  Mat4c accum = Mat4c::Zero();
  for (const SimEvent* sim : events) {
    const PureState4 psi =
        compensate_phi_d
            ? bell_state(sim->event.family, compensated_phase(*sim, link),
                         conditioned_weight(sim->event, link))
            : conditioned_state(sim->event, 0.0, link);
    accum += psi.amplitudes() * psi.amplitudes().adjoint();
  }
  return DensityMatrix4(accum / static_cast<double>(events.size()));
}

long long ps_key(double t_ns) {
  return static_cast<long long>(std::llround(t_ns * 1000.0));
}

Strategy config_strategy(const ScenarioConfig& config) {
  return parse_strategy(config.strategy);
}

double simpson(const std::function<double(double)>& f, double a, double b,
               int n) {
  const double h = (b - a) / n;
  double sum = f(a) + f(b);
  for (int i = 1; i < n; ++i) sum += f(a + i * h) * (i % 2 == 0 ? 2.0 : 4.0);
  return sum * h / 3.0;
}

// Mean true interarrival time of same-bin events. Both clicks share a
// quantization bin, so dt_q = 0 while the true |t_A - t_B| averages to
// E|r_A - r_B| over the in-bin residues, whose distribution is the same
// for every bin of an exponential profile. Using this value as the
// abscissa of the dt_q = 0 group removes the one systematic offset in the
// phase-vs-dt regression (all other bins have symmetric residues).
double same_bin_mean_dt(const LinkConfig& link, double bin_width) {
  const double tau_a = link.memory_a.lifetime_tau;
  const double tau_b = link.memory_b.lifetime_tau;
  auto dens = [bin_width](double r, double tau) {
    return std::exp(-r / tau) / (tau * (1.0 - std::exp(-bin_width / tau)));
  };
  auto inner = [&](double ra) {
    return simpson(
        [&](double rb) {
          return std::abs(ra - rb) * dens(ra, tau_a) * dens(rb, tau_b);
        },
        0.0, bin_width, 200);
  };
  return simpson(inner, 0.0, bin_width, 200);
}

// Strategy filter honoring the stored accepted flag when the log was
// produced with the same strategy (measured click times are not persisted,
// so recomputing a gate decision from a jittered log would drift).
std::vector<const SimEvent*> select_events(
    const std::vector<SimEvent>& events,
    const std::vector<EventLogRecord>& records, const Strategy& strategy) {
  const std::string tag = strategy_tag(strategy);
  std::vector<const SimEvent*> out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const bool keep = (i < records.size() && records[i].strategy_tag == tag)
                          ? records[i].accepted
                          : accept(events[i].rec, strategy);
    if (keep) out.push_back(&events[i]);
  }
  return out;
}

std::string fringes_table(
    const ScenarioConfig& config,
    const std::vector<std::tuple<double, int, FringeFit, long>>& rows) {
  std::ostringstream os;
  emit_header(os, config);
  os << "dt_bin_ns,phi_D,Pi,phase_rad,phase_stderr,offset,n_events\n";
  for (const auto& [dt, phid, fit, n] : rows) {
    os << fmt(dt) << ',' << phid << ',' << fmt(fit.contrast_Pi) << ','
       << fmt(fit.phase) << ',' << fmt(fit.phase_stderr) << ','
       << fmt(fit.offset) << ',' << n << "\n";
  }
  return os.str();
}

void scenario_phase_vs_dt(const ScenarioConfig& config,
                          const std::vector<SimEvent>& events,
                          const std::vector<EventLogRecord>& records,
                          ScenarioResult& result) {
  const LinkConfig link = config.link();
  const NoiseModel noise = config.noise();
  const StateFamily family = heralded_family(link);
  const auto selected = select_events(events, records, config_strategy(config));

  std::map<std::pair<long long, int>, std::vector<const SimEvent*>> groups;
  for (const SimEvent* sim : selected) {
    const int phid = sim->event.phi_D > 1.0 ? 1 : 0;
    groups[{ps_key(sim->rec.dt_q), phid}].push_back(sim);
  }

  std::vector<std::tuple<double, int, FringeFit, long>> fringe_rows;
  std::vector<PhasePoint> points;
  std::uint64_t scan_counter = 0;
  for (const auto& [key, members] : groups) {
    const double dt = static_cast<double>(key.first) / 1000.0;
    const int phid = key.second;
    const DensityMatrix4 rho = average_state(members, link, false);
    ParityScan scan =
        make_scan_design(family, config.n_phases, config.shots_per_point);
    run_scan(scan, rho, noise, config.seed, scan_counter);
    const FringeFit fit = fit_fringe(scan, family);
    fringe_rows.emplace_back(dt, phid, fit, static_cast<long>(members.size()));

    const double sign_d = family == StateFamily::Psi ? 1.0 : -1.0;
    PhasePoint pt;
    pt.dt = (key.first == 0 && config.jitter_ps == 0.0)
                ? same_bin_mean_dt(link, config.t_r_ns)
                : dt;
    pt.phase = wrap_pi(fit.phase + sign_d * kPi * phid);
    pt.weight = static_cast<double>(members.size());
    points.push_back(pt);
  }

  const PhaseSlopeFit slope = fit_phase_slope(points);
  // phi' = -theta for Psi (paper presentation), +theta for Phi.
  const double family_sign = family == StateFamily::Psi ? -1.0 : 1.0;
  // Aliasing is invisible in the data once phases wrap: the configured
  // delta_omega is the only way to know the per-bin step exceeded pi.
  const bool ambiguous =
      slope.unwrap_ambiguous ||
      std::abs(delta_omega(link)) * config.t_r_ns > kPi;

  result.tables["fringes.csv"] = fringes_table(config, fringe_rows);

  std::ostringstream os;
  emit_header(os, config);
  os << "family,n_groups,slope_rad_per_ns,slope_stderr_rad_per_ns,"
        "phi_prime_slope_rad_per_ns,delta_omega_recovered_mhz,"
        "delta_omega_config_mhz,intercept_rad,unwrap_ambiguous\n";
  os << family_name(family) << ',' << points.size() << ',' << fmt(slope.slope)
     << ',' << fmt(slope.slope_stderr) << ',' << fmt(family_sign * slope.slope)
     << ',' << fmt(rad_per_ns_to_mhz(slope.slope)) << ','
     << fmt(rad_per_ns_to_mhz(delta_omega(link))) << ','
     << fmt(slope.intercept) << ',' << (ambiguous ? 1 : 0) << "\n";
  result.tables["phase_vs_dt.csv"] = os.str();
}

void scenario_fidelity_vs_dtmax(const ScenarioConfig& config,
                                const std::vector<SimEvent>& events,
                                ScenarioResult& result) {
  const LinkConfig link = config.link();
  const NoiseModel noise = config.noise();

  std::vector<double> fids(events.size());
  for (std::size_t i = 0; i < events.size(); ++i) {
    fids[i] = event_fidelity(events[i], link, noise, 0.0);
  }

  std::ostringstream os;
  emit_header(os, config);
  os << "dt_max_ns,n_events,rate_ratio,fidelity,fidelity_stderr\n";
  for (const double dt_max : config.dt_max_values_ns) {
    std::vector<double> kept;
    for (std::size_t i = 0; i < events.size(); ++i) {
      if (std::abs(events[i].rec.dt_q) <= dt_max) kept.push_back(fids[i]);
    }
    const MeanStd stats = mean_std(kept);
    const double rate = events.empty()
                            ? 0.0
                            : static_cast<double>(stats.n) /
                                  static_cast<double>(events.size());
    os << fmt(dt_max) << ',' << stats.n << ',' << fmt(rate) << ','
       << fmt(stats.mean) << ',' << fmt(stats.stderr_mean) << "\n";
  }
  result.tables["fidelity_vs_dtmax.csv"] = os.str();
}

void scenario_postprocess_shift(const ScenarioConfig& config,
                                const std::vector<SimEvent>& events,
                                const std::vector<EventLogRecord>& records,
                                ScenarioResult& result) {
  const LinkConfig link = config.link();
  const NoiseModel noise = config.noise();
  const StateFamily family = heralded_family(link);
  const double dw = delta_omega(link);
  const auto selected = select_events(events, records, config_strategy(config));

  std::map<long long, std::vector<const SimEvent*>> bins;
  for (const SimEvent* sim : selected) bins[ps_key(sim->rec.dt_q)].push_back(sim);

  std::ostringstream os;
  emit_header(os, config);
  os << "dt_bin_ns,n_events,fidelity_raw,fidelity_raw_stderr,"
        "fidelity_shifted,fidelity_shifted_stderr,phase_raw_rad,"
        "phase_shifted_rad\n";

  std::vector<double> all_raw;
  std::vector<double> all_shifted;
  std::uint64_t scan_counter = 0;
  for (const auto& [key, members] : bins) {
    const double dt_q = static_cast<double>(key) / 1000.0;
    std::vector<double> raw;
    std::vector<double> shifted;
    for (const SimEvent* sim : members) {
      raw.push_back(event_fidelity(*sim, link, noise, 0.0));
      shifted.push_back(event_fidelity(*sim, link, noise, dw * dt_q));
    }
    all_raw.insert(all_raw.end(), raw.begin(), raw.end());
    all_shifted.insert(all_shifted.end(), shifted.begin(), shifted.end());

    const DensityMatrix4 rho = average_state(members, link, true);
    ParityScan scan =
        make_scan_design(family, config.n_phases, config.shots_per_point);
    run_scan(scan, rho, noise, config.seed, scan_counter);
    const FringeFit fit_raw = fit_fringe(scan, family);
    ParityScan scan_shifted =
        family == StateFamily::Phi ? postprocess_shift(scan, dw, dt_q) : scan;
    if (family == StateFamily::Psi) {
      // Psi fringes run as cos(x + theta); the compensating shift flips sign.
      for (auto& pt : scan_shifted.points) pt.phi_a += dw * dt_q;
    }
    const FringeFit fit_shifted = fit_fringe(scan_shifted, family);

    const MeanStd raw_stats = mean_std(raw);
    const MeanStd shifted_stats = mean_std(shifted);
    os << fmt(dt_q) << ',' << raw_stats.n << ',' << fmt(raw_stats.mean) << ','
       << fmt(raw_stats.stderr_mean) << ',' << fmt(shifted_stats.mean) << ','
       << fmt(shifted_stats.stderr_mean) << ',' << fmt(fit_raw.phase) << ','
       << fmt(fit_shifted.phase) << "\n";
  }

  // Aggregate row over all bins, flagged with dt_bin_ns = -1.
  const MeanStd raw_stats = mean_std(all_raw);
  const MeanStd shifted_stats = mean_std(all_shifted);
  os << "-1," << raw_stats.n << ',' << fmt(raw_stats.mean) << ','
     << fmt(raw_stats.stderr_mean) << ',' << fmt(shifted_stats.mean) << ','
     << fmt(shifted_stats.stderr_mean) << ",,\n";
  result.tables["postprocess_shift.csv"] = os.str();
}

void scenario_rates(const ScenarioConfig& config, ScenarioResult& result) {
  const LinkConfig link = config.link();
  const DetectorModel detector = config.detector();
  const double t_r = detector.t_r;

  struct Row {
    Strategy strategy;
    std::string reference;  // paper-measured experimental value, context only
  };
  const std::vector<Row> rows = {
      {AcceptAll{}, ""},
      {Postselect{t_r, true}, "0.2"},
      {Postselect{t_r, false}, "0.2"},
      {Gate{t_r}, "0.07"},
      {Feedforward{}, ""},
  };

  std::ostringstream os;
  emit_header(os, config);
  os << "strategy,ratio,stderr,closed_form,reference_ratio\n";
  for (const auto& row : rows) {
    const RateEstimate est = relative_rate(row.strategy, link, detector,
                                           config.n_events, config.seed);
    // Strategy tags may contain commas; quote the field.
    os << '"' << strategy_tag(row.strategy) << "\"," << fmt(est.ratio) << ','
       << (est.undefined_stderr ? "nan" : fmt(est.stderr)) << ','
       << (est.closed_form ? fmt(*est.closed_form) : "") << ','
       << row.reference << "\n";
  }
  result.tables["rates.csv"] = os.str();
}

}  // namespace

std::vector<SimEvent> generate_events(const LinkConfig& link,
                                      const DetectorModel& detector,
                                      long n_target, std::uint64_t seed,
                                      int threads, GenerationStats* stats) {
  link.validate();
  detector.validate();
  if (n_target < 1) {
    throw std::invalid_argument("generate_events: n_target must be >= 1");
  }

  struct Outcome {
    std::optional<SimEvent> ev;
    int no_herald_reason = -1;
    bool record_rejected = false;
  };

  std::vector<SimEvent> out;
  out.reserve(static_cast<std::size_t>(n_target));
  GenerationStats st;
  const long block = std::max<long>(8192, 4096L * threads);
  std::vector<Outcome> slots(static_cast<std::size_t>(block));
  std::uint64_t base = 0;

  while (static_cast<long>(out.size()) < n_target) {
    auto worker = [&](long lo, long hi) {
      for (long i = lo; i < hi; ++i) {
        Outcome oc;
        RngStream rng = RngStream::child(seed, base + static_cast<std::uint64_t>(i));
        NoHeraldReason reason = NoHeraldReason::Pattern;
        const auto event = sample_event(link, detector.window_T, rng, &reason);
        if (!event) {
          oc.no_herald_reason = static_cast<int>(reason);
        } else {
          const auto rec = record(*event, detector, rng);
          if (!rec) {
            oc.record_rejected = true;
          } else {
            oc.ev = SimEvent{*event, *rec};
          }
        }
        slots[static_cast<std::size_t>(i)] = std::move(oc);
      }
    };

    if (threads <= 1) {
      worker(0, block);
    } else {
      std::vector<std::thread> pool;
      const long chunk = (block + threads - 1) / threads;
      for (int t = 0; t < threads; ++t) {
        const long lo = t * chunk;
        const long hi = std::min<long>(block, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(worker, lo, hi);
      }
      for (auto& th : pool) th.join();
    }

    for (long i = 0; i < block && static_cast<long>(out.size()) < n_target; ++i) {
      auto& oc = slots[static_cast<std::size_t>(i)];
      ++st.attempts;
      if (oc.ev) {
        ++st.heralds;
        oc.ev->event.event_id = static_cast<long>(out.size());
        out.push_back(*oc.ev);
      } else if (oc.record_rejected) {
        ++st.heralds;
        ++st.record_rejected;
      } else if (oc.no_herald_reason ==
                 static_cast<int>(NoHeraldReason::Efficiency)) {
        ++st.no_herald_efficiency;
      } else if (oc.no_herald_reason ==
                 static_cast<int>(NoHeraldReason::Window)) {
        ++st.no_herald_window;
      } else {
        ++st.no_herald_pattern;
      }
    }
    base += static_cast<std::uint64_t>(block);
  }
  if (stats) *stats = st;
  return out;
}

std::vector<EventLogRecord> to_log_records(const std::vector<SimEvent>& events,
                                           const Strategy& strategy) {
  const std::string tag = strategy_tag(strategy);
  std::vector<EventLogRecord> records;
  records.reserve(events.size());
  for (const auto& sim : events) {
    EventLogRecord rec;
    rec.event_id = sim.event.event_id;
    rec.det_first = detector_code(sim.event.det_first);
    rec.det_second = detector_code(sim.event.det_second);
    rec.t1_true_ns = sim.event.t1_true;
    rec.t2_true_ns = sim.event.t2_true;
    rec.t1_q_ns = sim.rec.t1_q;
    rec.t2_q_ns = sim.rec.t2_q;
    rec.dt_q_ns = sim.rec.dt_q;
    rec.phi_D_units_of_pi = sim.event.phi_D > 1.0 ? 1 : 0;
    rec.family = sim.event.family;
    rec.accepted = accept(sim.rec, strategy);
    rec.strategy_tag = tag;
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SimEvent> from_log_records(
    const std::vector<EventLogRecord>& records, const LinkConfig& link) {
  std::vector<SimEvent> events;
  events.reserve(records.size());
  for (const auto& rec : records) {
    SimEvent sim;
    sim.event.event_id = rec.event_id;
    sim.event.det_first = parse_detector_code(rec.det_first);
    sim.event.det_second = parse_detector_code(rec.det_second);
    sim.event.t1_true = rec.t1_true_ns;
    sim.event.t2_true = rec.t2_true_ns;
    sim.event.phi_D = rec.phi_D_units_of_pi ? kPi : 0.0;
    sim.event.family = rec.family;
    sim.event.delta_omega = delta_omega(link);
    sim.rec.t1_meas = rec.t1_true_ns;
    sim.rec.t2_meas = rec.t2_true_ns;
    sim.rec.t1_q = rec.t1_q_ns;
    sim.rec.t2_q = rec.t2_q_ns;
    sim.rec.dt_q = rec.dt_q_ns;
    events.push_back(std::move(sim));
  }
  return events;
}

ScenarioResult analyze_records(const std::vector<EventLogRecord>& records,
                               const ScenarioConfig& config) {
  config.validate();
  ScenarioResult result;
  const std::vector<SimEvent> events = from_log_records(records, config.link());
  switch (config.scenario) {
    case Scenario::PhaseVsDt:
      scenario_phase_vs_dt(config, events, records, result);
      break;
    case Scenario::FidelityVsDtmax:
      scenario_fidelity_vs_dtmax(config, events, result);
      break;
    case Scenario::PostprocessShift:
      scenario_postprocess_shift(config, events, records, result);
      break;
    case Scenario::Rates:
      scenario_rates(config, result);
      break;
  }
  return result;
}

namespace {

std::vector<EventLogRecord> generate_records(const ScenarioConfig& config,
                                             GenerationStats& stats) {
  const auto events =
      generate_events(config.link(), config.detector(), config.n_events,
                      config.seed, config.threads, &stats);
  return to_log_records(events, parse_strategy(config.strategy));
}

std::string render_event_log_table(const ScenarioConfig& config,
                                   const std::vector<EventLogRecord>& records) {
  std::vector<std::string> header = provenance(config);
  const auto cfg_lines = config.canonical_lines();
  header.insert(header.end(), cfg_lines.begin(), cfg_lines.end());
  std::ostringstream os;
  write_event_log(os, records, header);
  return os.str();
}

}  // namespace

ScenarioResult simulate_events(const ScenarioConfig& config) {
  config.validate();
  ScenarioResult result;
  const auto records = generate_records(config, result.stats);
  result.tables["events.csv"] = render_event_log_table(config, records);
  return result;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();

  ScenarioResult result;
  std::vector<EventLogRecord> records = generate_records(config, result.stats);
  result.tables["events.csv"] = render_event_log_table(config, records);

  // Analysis runs on the persisted records, never the raw samples, so
  // `analyze` on the emitted log reproduces these tables exactly.
  ScenarioResult analysis = analyze_records(records, config);
  for (auto& [name, table] : analysis.tables) {
    result.tables[name] = std::move(table);
  }
  return result;
}

void write_result_tables(const ScenarioResult& result,
                         const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  for (const auto& [name, table] : result.tables) {
    const std::filesystem::path path = std::filesystem::path(out_dir) / name;
    std::ofstream out(path);
    if (!out) {
      throw std::runtime_error("cannot open for writing: " + path.string());
    }
    out << table;
  }
}

}  // namespace heraldkit
