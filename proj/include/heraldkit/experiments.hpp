#pragma once

#include <map>
#include <string>
#include <vector>

#include "heraldkit/config.hpp"
#include "heraldkit/detection_chain.hpp"
#include "heraldkit/event_log.hpp"
#include "heraldkit/herald_sim.hpp"
#include "heraldkit/strategies.hpp"

namespace heraldkit {

struct SimEvent {
  HeraldEvent event;
  TimingRecord rec;
};

struct GenerationStats {
  long attempts = 0;
  long heralds = 0;
  long no_herald_efficiency = 0;
  long no_herald_window = 0;
  long no_herald_pattern = 0;
  long record_rejected = 0;
};

// Generates heralded-and-recorded events until n_target are collected.
// Attempt index i always uses RNG stream (seed, i) and events are kept in
// attempt order, so the result is byte-identical for any thread count.
std::vector<SimEvent> generate_events(const LinkConfig& link,
                                      const DetectorModel& detector,
                                      long n_target, std::uint64_t seed,
                                      int threads,
                                      GenerationStats* stats = nullptr);

std::vector<EventLogRecord> to_log_records(const std::vector<SimEvent>& events,
                                           const Strategy& strategy);

// Rebuilds simulation events from persisted records. Measured (jittered)
// click times are not part of the log schema; they are reconstructed as the
// true times, which is exact for the default jitter-free detector model.
std::vector<SimEvent> from_log_records(
    const std::vector<EventLogRecord>& records, const LinkConfig& link);

// Result tables, keyed by output file name (e.g. "fringes.csv"). Every
// table carries provenance comment lines (tool version, config hash, seed).
struct ScenarioResult {
  std::map<std::string, std::string> tables;
  GenerationStats stats;
};

// Generation phase only: the "events.csv" table (provenance + config in
// the header comments) plus generation statistics.
ScenarioResult simulate_events(const ScenarioConfig& config);

// simulate -> log -> analyze, in memory. The analysis consumes the log
// records it just wrote (never the raw doubles), so `heraldkit analyze` on
// the emitted events.csv reproduces these numbers exactly.
ScenarioResult run_scenario(const ScenarioConfig& config);

// Analysis half only, shared with the CLI `analyze` subcommand.
ScenarioResult analyze_records(const std::vector<EventLogRecord>& records,
                               const ScenarioConfig& config);

void write_result_tables(const ScenarioResult& result,
                         const std::string& out_dir);

}  // namespace heraldkit
