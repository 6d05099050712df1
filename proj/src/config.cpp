#include "heraldkit/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace heraldkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// MHz -> rad/ns.
double mhz_to_rad_per_ns(double f_mhz) { return kTwoPi * f_mhz * 1e-3; }

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t");
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("config line " + std::to_string(line_no) + ": " +
                           what);
}

double to_double(const std::string& value, std::size_t line_no,
                 const std::string& key) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &pos);
  } catch (const std::exception&) {
    fail(line_no, "key '" + key + "': bad numeric value '" + value + "'");
  }
  if (pos != value.size()) {
    fail(line_no, "key '" + key + "': bad numeric value '" + value + "'");
  }
  return out;
}

std::string format_num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Scenario parse_scenario(const std::string& name) {
  if (name == "phase_vs_dt") return Scenario::PhaseVsDt;
  if (name == "fidelity_vs_dtmax") return Scenario::FidelityVsDtmax;
  if (name == "postprocess_shift") return Scenario::PostprocessShift;
  if (name == "rates") return Scenario::Rates;
  throw std::runtime_error("unknown scenario '" + name + "'");
}

std::string scenario_name(Scenario scenario) {
  switch (scenario) {
    case Scenario::PhaseVsDt: return "phase_vs_dt";
    case Scenario::FidelityVsDtmax: return "fidelity_vs_dtmax";
    case Scenario::PostprocessShift: return "postprocess_shift";
    case Scenario::Rates: return "rates";
  }
  return "?";
}

LinkConfig ScenarioConfig::link() const {
  LinkConfig cfg;
  cfg.memory_a = {mhz_to_rad_per_ns(zeeman_a_mhz), tau_a_ns, efficiency_a};
  cfg.memory_b = {mhz_to_rad_per_ns(zeeman_b_mhz), tau_b_ns, efficiency_b};
  cfg.mapping =
      mapping == "conventional" ? Mapping::Conventional : Mapping::Waveplate;
  cfg.phi_0 = phi0_rad;
  return cfg;
}

DetectorModel ScenarioConfig::detector() const {
  return DetectorModel{t_r_ns, jitter_ps * 1e-3, window_ns};
}

NoiseModel ScenarioConfig::noise() const {
  return NoiseModel{sigma_phi_rad, analysis_delay_us * 1e3, depol_p,
                    meas_error};
}

void ScenarioConfig::validate() const {
  if (!seed_set) throw std::runtime_error("config: 'seed' is required");
  if (n_events < 1) throw std::runtime_error("config: n_events must be >= 1");
  if (n_phases < 3) throw std::runtime_error("config: n_phases must be >= 3");
  if (shots_per_point < 0)
    throw std::runtime_error("config: shots_per_point must be >= 0");
  if (threads < 1) throw std::runtime_error("config: threads must be >= 1");
  if (mapping != "conventional" && mapping != "waveplate")
    throw std::runtime_error("config: mapping must be conventional|waveplate");
  if (dt_max_values_ns.empty())
    throw std::runtime_error("config: dt_max_values_ns must be nonempty");
  link().validate();
  detector().validate();
  noise().validate();
}

std::vector<std::string> ScenarioConfig::canonical_lines() const {
  std::vector<std::string> lines = {
      "analysis_delay_us = " + format_num(analysis_delay_us),
      "depol_p = " + format_num(depol_p),
      "efficiency_a = " + format_num(efficiency_a),
      "efficiency_b = " + format_num(efficiency_b),
      "jitter_ps = " + format_num(jitter_ps),
      "mapping = " + mapping,
      "meas_error = " + format_num(meas_error),
      "n_events = " + std::to_string(n_events),
      "n_phases = " + std::to_string(n_phases),
      "phi0_rad = " + format_num(phi0_rad),
      "scenario = " + scenario_name(scenario),
      "seed = " + std::to_string(seed),
      "shots_per_point = " + std::to_string(shots_per_point),
      "sigma_phi_rad = " + format_num(sigma_phi_rad),
      "strategy = " + strategy,
      "t_r_ns = " + format_num(t_r_ns),
      "tau_a_ns = " + format_num(tau_a_ns),
      "tau_b_ns = " + format_num(tau_b_ns),
      "window_ns = " + format_num(window_ns),
      "zeeman_a_mhz = " + format_num(zeeman_a_mhz),
      "zeeman_b_mhz = " + format_num(zeeman_b_mhz),
  };
  std::string dtmax = "dt_max_values_ns = ";
  for (std::size_t i = 0; i < dt_max_values_ns.size(); ++i) {
    if (i) dtmax += ",";
    dtmax += format_num(dt_max_values_ns[i]);
  }
  lines.push_back(dtmax);
  std::sort(lines.begin(), lines.end());
  return lines;
}

std::string ScenarioConfig::hash_hex() const {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& line : canonical_lines()) {
    for (const char c : line) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ull;
    }
    h ^= '\n';
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

ScenarioConfig parse_config_text(const std::string& text) {
  ScenarioConfig cfg;
  std::stringstream ss(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) fail(line_no, "expected 'key = value'");

    if (key == "tau_a_ns") cfg.tau_a_ns = to_double(value, line_no, key);
    else if (key == "tau_b_ns") cfg.tau_b_ns = to_double(value, line_no, key);
    else if (key == "zeeman_a_mhz") cfg.zeeman_a_mhz = to_double(value, line_no, key);
    else if (key == "zeeman_b_mhz") cfg.zeeman_b_mhz = to_double(value, line_no, key);
    else if (key == "mapping") cfg.mapping = value;
    else if (key == "phi0_rad") cfg.phi0_rad = to_double(value, line_no, key);
    else if (key == "efficiency_a") cfg.efficiency_a = to_double(value, line_no, key);
    else if (key == "efficiency_b") cfg.efficiency_b = to_double(value, line_no, key);
    else if (key == "t_r_ns") cfg.t_r_ns = to_double(value, line_no, key);
    else if (key == "jitter_ps") cfg.jitter_ps = to_double(value, line_no, key);
    else if (key == "window_ns") cfg.window_ns = to_double(value, line_no, key);
    else if (key == "sigma_phi_rad") cfg.sigma_phi_rad = to_double(value, line_no, key);
    else if (key == "analysis_delay_us") cfg.analysis_delay_us = to_double(value, line_no, key);
    else if (key == "depol_p") cfg.depol_p = to_double(value, line_no, key);
    else if (key == "meas_error") cfg.meas_error = to_double(value, line_no, key);
    else if (key == "strategy") cfg.strategy = value;
    else if (key == "n_events") cfg.n_events = static_cast<long>(to_double(value, line_no, key));
    else if (key == "n_phases") cfg.n_phases = static_cast<int>(to_double(value, line_no, key));
    else if (key == "shots_per_point") cfg.shots_per_point = static_cast<long>(to_double(value, line_no, key));
    else if (key == "threads") cfg.threads = static_cast<int>(to_double(value, line_no, key));
    else if (key == "seed") {
      try {
        cfg.seed = std::stoull(value);
      } catch (const std::exception&) {
        fail(line_no, "key 'seed': bad integer value '" + value + "'");
      }
      cfg.seed_set = true;
    } else if (key == "scenario") {
      try {
        cfg.scenario = parse_scenario(value);
      } catch (const std::exception& e) {
        fail(line_no, e.what());
      }
    } else if (key == "dt_max_values_ns") {
      try {
        cfg.dt_max_values_ns = parse_values_spec(value);
      } catch (const std::exception& e) {
        fail(line_no, e.what());
      }
    } else {
      fail(line_no, "unknown key '" + key + "'");
    }
  }
  return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::vector<double> parse_values_spec(const std::string& spec) {
  std::vector<double> values;
  if (spec.find(':') != std::string::npos) {
    double lo = 0, hi = 0, step = 0;
    char c1 = 0, c2 = 0;
    std::istringstream is(spec);
    if (!(is >> lo >> c1 >> hi >> c2 >> step) || c1 != ':' || c2 != ':' ||
        step <= 0.0 || hi < lo) {
      throw std::runtime_error("bad values spec '" + spec + "' (want lo:hi:step)");
    }
    for (double v = lo; v <= hi + 1e-9; v += step) values.push_back(v);
    return values;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    values.push_back(std::stod(item));
  }
  if (values.empty()) throw std::runtime_error("empty values spec");
  return values;
}

}  // namespace heraldkit
