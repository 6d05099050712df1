#include "heraldkit/event_log.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace heraldkit {

namespace {

constexpr const char* kColumns =
    "event_id,det_first,det_second,t1_true_ns,t2_true_ns,t1_q_ns,t2_q_ns,"
    "dt_q_ns,phi_D_units_of_pi,family,accepted_flag,strategy_tag";
constexpr int kNumColumns = 12;

std::string format_ps(double t_ns) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3f", t_ns);
  return buf;
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("event log line " + std::to_string(line_no) + ": " +
                           what);
}

double parse_double(const std::string& field, std::size_t line_no) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &pos);
  } catch (const std::exception&) {
    fail_line(line_no, "bad numeric field '" + field + "'");
  }
  if (pos != field.size()) fail_line(line_no, "bad numeric field '" + field + "'");
  return value;
}

}  // namespace

std::string detector_code(const DetectorId& det) {
  std::string code;
  code += det.port == Port::One ? '1' : '2';
  code += det.pol == Pol::H ? 'H' : 'V';
  return code;
}

DetectorId parse_detector_code(const std::string& code) {
  if (code.size() != 2 || (code[0] != '1' && code[0] != '2') ||
      (code[1] != 'H' && code[1] != 'V')) {
    throw std::runtime_error("bad detector code '" + code + "'");
  }
  return DetectorId{code[0] == '1' ? Port::One : Port::Two,
                    code[1] == 'H' ? Pol::H : Pol::V};
}

std::string family_name(StateFamily family) {
  return family == StateFamily::Psi ? "psi" : "phi";
}

StateFamily parse_family(const std::string& name) {
  if (name == "psi") return StateFamily::Psi;
  if (name == "phi") return StateFamily::Phi;
  throw std::runtime_error("bad family '" + name + "'");
}

void write_event_log(std::ostream& out,
                     const std::vector<EventLogRecord>& records,
                     const std::vector<std::string>& header_comments) {
  for (const auto& comment : header_comments) {
    out << "# " << comment << "\n";
  }
  out << kColumns << "\n";
  for (const auto& rec : records) {
    out << rec.event_id << ',' << rec.det_first << ',' << rec.det_second << ','
        << format_ps(rec.t1_true_ns) << ',' << format_ps(rec.t2_true_ns) << ','
        << format_ps(rec.t1_q_ns) << ',' << format_ps(rec.t2_q_ns) << ','
        << format_ps(rec.dt_q_ns) << ',' << rec.phi_D_units_of_pi << ','
        << family_name(rec.family) << ',' << (rec.accepted ? 1 : 0) << ','
        << rec.strategy_tag << "\n";
  }
}

EventLogFile read_event_log(std::istream& in) {
  EventLogFile file;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body.front() == ' ') body.erase(0, 1);
      file.header_comments.push_back(body);
      continue;
    }
    if (!header_seen) {
      if (line != kColumns) fail_line(line_no, "unexpected header row");
      header_seen = true;
      continue;
    }

    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (line.back() == ',') fields.push_back("");
    // strategy_tag is the last column and may itself contain commas.
    while (fields.size() > kNumColumns) {
      fields[kNumColumns - 1] += ',' + fields[kNumColumns];
      fields.erase(fields.begin() + kNumColumns);
    }
    if (fields.size() != kNumColumns) {
      fail_line(line_no, "expected " + std::to_string(kNumColumns) +
                             " fields, found " + std::to_string(fields.size()));
    }

    EventLogRecord rec;
    rec.event_id = static_cast<long>(parse_double(fields[0], line_no));
    rec.det_first = fields[1];
    rec.det_second = fields[2];
    parse_detector_code(rec.det_first);
    parse_detector_code(rec.det_second);
    rec.t1_true_ns = parse_double(fields[3], line_no);
    rec.t2_true_ns = parse_double(fields[4], line_no);
    rec.t1_q_ns = parse_double(fields[5], line_no);
    rec.t2_q_ns = parse_double(fields[6], line_no);
    rec.dt_q_ns = parse_double(fields[7], line_no);
    const double phi_d = parse_double(fields[8], line_no);
    if (phi_d != 0.0 && phi_d != 1.0) fail_line(line_no, "phi_D must be 0 or 1");
    rec.phi_D_units_of_pi = static_cast<int>(phi_d);
    try {
      rec.family = parse_family(fields[9]);
    } catch (const std::exception& e) {
      fail_line(line_no, e.what());
    }
    const double acc = parse_double(fields[10], line_no);
    if (acc != 0.0 && acc != 1.0) fail_line(line_no, "accepted_flag must be 0 or 1");
    rec.accepted = acc != 0.0;
    rec.strategy_tag = fields[11];
    file.records.push_back(std::move(rec));
  }
  if (!header_seen) {
    throw std::runtime_error("event log: missing header row");
  }
  return file;
}

void write_event_log_file(const std::string& path,
                          const std::vector<EventLogRecord>& records,
                          const std::vector<std::string>& header_comments) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  write_event_log(out, records, header_comments);
}

EventLogFile read_event_log_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return read_event_log(in);
}

}  // namespace heraldkit
