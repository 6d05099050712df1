#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heraldkit/detection_chain.hpp"
#include "heraldkit/noise.hpp"
#include "heraldkit/photon_source.hpp"

namespace heraldkit {

enum class Scenario { PhaseVsDt, FidelityVsDtmax, PostprocessShift, Rates };

// Flat `key = value` configuration for the scenario runner. External units:
// ns for times, MHz for frequencies (omega / 2 pi), radians for phases.
struct ScenarioConfig {
  double tau_a_ns = 8.1;
  double tau_b_ns = 8.1;
  double zeeman_a_mhz = 14.175;
  double zeeman_b_mhz = 14.175;
  std::string mapping = "waveplate";  // conventional | waveplate
  double phi0_rad = 0.0;
  double efficiency_a = 1.0;
  double efficiency_b = 1.0;

  double t_r_ns = 5.0;
  double jitter_ps = 0.0;
  double window_ns = 60.0;

  double sigma_phi_rad = 0.0;
  double analysis_delay_us = 50.0;
  double depol_p = 0.0;
  double meas_error = 0.0;

  std::string strategy = "accept-all";
  long n_events = 10000;
  int n_phases = 16;
  long shots_per_point = 200;
  std::uint64_t seed = 0;
  bool seed_set = false;  // a seed is mandatory; no wall-clock fallback
  Scenario scenario = Scenario::PhaseVsDt;
  int threads = 1;

  // dt_max grid for fidelity_vs_dtmax / sweep, ns.
  std::vector<double> dt_max_values_ns = {5, 10, 15, 20, 25, 30,
                                          35, 40, 45, 50, 55, 60};

  LinkConfig link() const;
  DetectorModel detector() const;
  NoiseModel noise() const;

  void validate() const;

  // Canonical "key = value" lines (sorted), used for provenance headers.
  std::vector<std::string> canonical_lines() const;
  std::string hash_hex() const;  // FNV-1a over the canonical lines
};

Scenario parse_scenario(const std::string& name);
std::string scenario_name(Scenario scenario);

// Parses `key = value` text; '#' starts a comment. Unknown keys or
// malformed values raise std::runtime_error naming the line and key.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);

// Parses a sweep values spec: either "lo:hi:step" or a comma list.
std::vector<double> parse_values_spec(const std::string& spec);

}  // namespace heraldkit
