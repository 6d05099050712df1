#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "heraldkit/detection_chain.hpp"
#include "heraldkit/herald_sim.hpp"

namespace heraldkit {

// One heralded event as persisted in events.csv. Times are ns with 1 ps
// precision and round-trip losslessly through the text form.
struct EventLogRecord {
  long event_id = 0;
  std::string det_first;   // e.g. "1H"
  std::string det_second;  // e.g. "2V"
  double t1_true_ns = 0.0;
  double t2_true_ns = 0.0;
  double t1_q_ns = 0.0;
  double t2_q_ns = 0.0;
  double dt_q_ns = 0.0;
  int phi_D_units_of_pi = 0;  // 0 or 1
  StateFamily family = StateFamily::Psi;
  bool accepted = false;
  std::string strategy_tag;

  bool operator==(const EventLogRecord&) const = default;
};

std::string detector_code(const DetectorId& det);
DetectorId parse_detector_code(const std::string& code);

std::string family_name(StateFamily family);
StateFamily parse_family(const std::string& name);

// Header comment lines ("# key = value") carry the generating config so an
// `analyze` run is self-contained; the reader returns them verbatim.
void write_event_log(std::ostream& out,
                     const std::vector<EventLogRecord>& records,
                     const std::vector<std::string>& header_comments = {});

struct EventLogFile {
  std::vector<EventLogRecord> records;
  std::vector<std::string> header_comments;  // without the leading "# "
};

// Throws std::runtime_error naming the 1-based line number on any malformed
// line (wrong column count, bad field, truncated tail).
EventLogFile read_event_log(std::istream& in);

void write_event_log_file(const std::string& path,
                          const std::vector<EventLogRecord>& records,
                          const std::vector<std::string>& header_comments = {});
EventLogFile read_event_log_file(const std::string& path);

}  // namespace heraldkit
