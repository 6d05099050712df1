#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "heraldkit/config.hpp"
#include "heraldkit/event_log.hpp"
#include "heraldkit/experiments.hpp"
#include "test_util.hpp"

using namespace heraldkit;

namespace {

ScenarioConfig small_config(Scenario scenario) {
  ScenarioConfig cfg;
  cfg.seed = 12345;
  cfg.seed_set = true;
  cfg.n_events = 800;
  cfg.shots_per_point = 0;  // exact parity, keeps the tests fast and sharp
  cfg.scenario = scenario;
  return cfg;
}

}  // namespace

TEST_CASE("detector codes") {
  CHECK(detector_code({Port::One, Pol::H}) == "1H");
  CHECK(detector_code({Port::Two, Pol::V}) == "2V");
  CHECK(parse_detector_code("2H") == DetectorId{Port::Two, Pol::H});
  CHECK_THROWS(parse_detector_code("3H"));
  CHECK_THROWS(parse_detector_code("1X"));
  CHECK(parse_family("psi") == StateFamily::Psi);
  CHECK(parse_family("phi") == StateFamily::Phi);
  CHECK_THROWS(parse_family("chi"));
}

TEST_CASE("event log round-trips ten thousand records") {
  auto cfg = small_config(Scenario::PhaseVsDt);
  cfg.n_events = 10000;
  auto events = generate_events(cfg.link(), cfg.detector(), cfg.n_events,
                                cfg.seed, 1);
  // This strategy tag contains a comma, exercising the last-column rejoin.
  auto records = to_log_records(
      events, parse_strategy("postselect:dt_max_ns=5,variant=same-bin"));
  REQUIRE(records.size() == 10000);

  std::stringstream buf;
  write_event_log(buf, records, {"seed = 12345"});
  auto back = read_event_log(buf);
  CHECK(back.records == records);
  REQUIRE(back.header_comments.size() == 1);
  CHECK(back.header_comments[0] == "seed = 12345");
}

TEST_CASE("empty log round-trips") {
  std::stringstream buf;
  write_event_log(buf, {});
  auto back = read_event_log(buf);
  CHECK(back.records.empty());
}

TEST_CASE("malformed log lines raise errors naming the line") {
  auto cfg = small_config(Scenario::PhaseVsDt);
  cfg.n_events = 3;
  auto events = generate_events(cfg.link(), cfg.detector(), 3, cfg.seed, 1);
  auto records = to_log_records(events, parse_strategy("accept-all"));
  std::stringstream buf;
  write_event_log(buf, records);
  std::string text = buf.str();

  // Truncate the final line mid-field.
  std::string truncated = text.substr(0, text.rfind(',') - 3);
  std::istringstream in(truncated);
  try {
    read_event_log(in);
    FAIL("expected parse error");
  } catch (const std::runtime_error& e) {
    // Column header is line 1, so the truncated third record is line 4.
    CHECK(std::string(e.what()).find("line 4") != std::string::npos);
  }

  std::istringstream garbled("x,y\n1,2\n");
  CHECK_THROWS(read_event_log(garbled));
}

TEST_CASE("config parsing") {
  const std::string text =
      "# comment\n"
      "tau_a_ns = 8.1\n"
      "zeeman_a_mhz = 14.175\n"
      "zeeman_b_mhz = 14.175\n"
      "mapping = waveplate\n"
      "seed = 42\n"
      "n_events = 500\n"
      "scenario = fidelity_vs_dtmax\n"
      "dt_max_values_ns = 5,10,15\n";
  auto cfg = parse_config_text(text);
  CHECK(cfg.seed == 42);
  CHECK(cfg.seed_set);
  CHECK(cfg.n_events == 500);
  CHECK(cfg.scenario == Scenario::FidelityVsDtmax);
  CHECK(cfg.dt_max_values_ns == std::vector<double>{5, 10, 15});
  CHECK_NOTHROW(cfg.validate());

  try {
    parse_config_text("tau_a_ns = 8.1\nbogus_key = 3\n");
    FAIL("expected parse error");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("bogus_key") != std::string::npos);
  }
  CHECK_THROWS(parse_config_text("tau_a_ns = not_a_number\n"));

  auto no_seed = parse_config_text("tau_a_ns = 8.1\n");
  CHECK_THROWS(no_seed.validate());
}

TEST_CASE("values spec parsing") {
  CHECK(parse_values_spec("5:20:5") == std::vector<double>{5, 10, 15, 20});
  CHECK(parse_values_spec("1,2.5,7") == std::vector<double>{1, 2.5, 7});
  CHECK_THROWS(parse_values_spec("5:1:5"));
  CHECK_THROWS(parse_values_spec(""));
}

TEST_CASE("config hash is canonical") {
  auto a = small_config(Scenario::PhaseVsDt);
  auto b = small_config(Scenario::PhaseVsDt);
  CHECK(a.hash_hex() == b.hash_hex());
  b.n_events += 1;
  CHECK(a.hash_hex() != b.hash_hex());
}

TEST_CASE("generation is byte-identical across thread counts") {
  auto cfg = small_config(Scenario::PhaseVsDt);
  cfg.n_events = 2000;
  GenerationStats s1, s4;
  auto e1 = generate_events(cfg.link(), cfg.detector(), cfg.n_events, cfg.seed,
                            1, &s1);
  auto e4 = generate_events(cfg.link(), cfg.detector(), cfg.n_events, cfg.seed,
                            4, &s4);
  REQUIRE(e1.size() == e4.size());
  CHECK(s1.attempts == s4.attempts);
  CHECK(s1.heralds == s4.heralds);
  auto r1 = to_log_records(e1, parse_strategy("accept-all"));
  auto r4 = to_log_records(e4, parse_strategy("accept-all"));
  CHECK(r1 == r4);
}

TEST_CASE("scenario outputs are deterministic and thread independent") {
  for (Scenario scenario : {Scenario::PhaseVsDt, Scenario::FidelityVsDtmax}) {
    auto cfg = small_config(scenario);
    cfg.shots_per_point = 50;
    auto a = run_scenario(cfg);
    auto again = run_scenario(cfg);
    cfg.threads = 4;
    auto b = run_scenario(cfg);
    CHECK(a.tables == again.tables);
    CHECK(a.tables == b.tables);
  }
}

TEST_CASE("analyze on the emitted log reproduces run_scenario exactly") {
  auto cfg = small_config(Scenario::FidelityVsDtmax);
  cfg.shots_per_point = 100;
  auto full = run_scenario(cfg);
  REQUIRE(full.tables.count("events.csv") == 1);

  std::istringstream log_in(full.tables.at("events.csv"));
  auto log = read_event_log(log_in);
  auto re = analyze_records(log.records, cfg);
  for (const auto& [name, table] : re.tables) {
    CHECK(full.tables.at(name) == table);
  }
}

TEST_CASE("phase_vs_dt flags unwrap ambiguity from the configured splitting") {
  auto find_row = [](const std::string& table) {
    // Last non-comment, non-header line of phase_vs_dt.csv.
    std::istringstream in(table);
    std::string line, last;
    while (std::getline(in, line)) {
      if (!line.empty() && line[0] != '#') last = line;
    }
    return last;
  };

  auto cfg = small_config(Scenario::PhaseVsDt);
  auto fine = run_scenario(cfg);
  auto row = find_row(fine.tables.at("phase_vs_dt.csv"));
  CHECK(row.substr(row.rfind(',') + 1) == "0");

  // dw * t_r > pi: per-bin phase step beyond the resolvable branch.
  cfg.zeeman_a_mhz = 60.0;
  cfg.zeeman_b_mhz = 60.0;
  auto aliased = run_scenario(cfg);
  row = find_row(aliased.tables.at("phase_vs_dt.csv"));
  CHECK(row.substr(row.rfind(',') + 1) == "1");
}

TEST_CASE("scenario tables carry provenance headers") {
  auto cfg = small_config(Scenario::Rates);
  cfg.n_events = 5000;
  auto result = analyze_records({}, cfg);
  const auto& table = result.tables.at("rates.csv");
  CHECK(table.find("# tool = ") != std::string::npos);
  CHECK(table.find("# config_hash = " + cfg.hash_hex()) != std::string::npos);
  CHECK(table.find("# seed = 12345") != std::string::npos);
}

TEST_CASE("simulate_events emits a self-describing log") {
  auto cfg = small_config(Scenario::PhaseVsDt);
  cfg.n_events = 100;
  auto result = simulate_events(cfg);
  REQUIRE(result.tables.count("events.csv") == 1);
  std::istringstream in(result.tables.at("events.csv"));
  auto log = read_event_log(in);
  CHECK(log.records.size() == 100);
  bool has_seed = false;
  for (const auto& line : log.header_comments) {
    if (line == "seed = 12345") has_seed = true;
  }
  CHECK(has_seed);
  CHECK(result.stats.heralds >= result.stats.record_rejected);
}
