// Harness: config validation, Monte Carlo accounting, deterministic
// serialization, CSV output, command exit codes and file round trips.

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <crsp/crsp.hpp>

#include "helpers.hpp"

using namespace crsp;
using Catch::Matchers::WithinAbs;

namespace {

RunConfig base_config(const std::string& protocol, double b) {
    RunConfig cfg;
    cfg.protocol = protocol;
    cfg.b = b;
    cfg.trials = 200;
    cfg.seed = 42;
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::filesystem::path temp_base(const std::string& tag) {
    return std::filesystem::temp_directory_path() / ("crsp_test_" + tag);
}

}  // namespace

TEST_CASE("make_scenario validates the configuration") {
    REQUIRE_THROWS_AS(make_scenario(base_config("no_such_protocol", 0.5)),
                      std::invalid_argument);

    RunConfig no_b = base_config("single_phase", 0.5);
    no_b.b.reset();
    REQUIRE_THROWS_AS(make_scenario(no_b), std::invalid_argument);

    RunConfig bad_trials = base_config("single_phase", 0.5);
    bad_trials.trials = 0;
    REQUIRE_THROWS_AS(make_scenario(bad_trials), std::invalid_argument);

    RunConfig b2_on_single = base_config("single_phase", 0.5);
    b2_on_single.b2 = 0.3;
    REQUIRE_THROWS_AS(make_scenario(b2_on_single), std::invalid_argument);

    RunConfig compact_wrong = base_config("two_amplitude", 0.5);
    compact_wrong.sender_compact = true;
    REQUIRE_THROWS_AS(make_scenario(compact_wrong), std::invalid_argument);

    RunConfig degenerate = base_config("two_arbitrary", 0.5);
    degenerate.alpha = 0.0;
    degenerate.beta = 0.0;
    degenerate.delta = 0.6;
    degenerate.eta = 0.8;
    REQUIRE_THROWS_AS(make_scenario(degenerate), degenerate_target_error);

    RunConfig bad_b = base_config("single_phase", 1.0);
    REQUIRE_THROWS_AS(make_scenario(bad_b), std::invalid_argument);
}

TEST_CASE("make_scenario builds the right target and channels") {
    RunConfig cfg = base_config("two_amplitude", 0.5);
    cfg.alpha = 0.8;
    cfg.beta = 0.2;
    cfg.delta = 0.4;
    cfg.eta = 0.4;
    SECTION("second channel follows --b by default") {
        Scenario s = make_scenario(cfg);
        REQUIRE(s.protocol == ProtocolId::two_amplitude);
        REQUIRE(s.channel2.has_value());
        REQUIRE_THAT(s.channel2->b, WithinAbs(0.5, 0.0));
    }
    SECTION("--b2 pins the second channel") {
        cfg.b2 = 0.25;
        Scenario s = make_scenario(cfg);
        REQUIRE_THAT(s.channel1.b, WithinAbs(0.5, 0.0));
        REQUIRE_THAT(s.channel2->b, WithinAbs(0.25, 0.0));
    }
    SECTION("one-qubit protocols carry no second channel") {
        Scenario s = make_scenario(base_config("single_arbitrary", 0.5));
        REQUIRE_FALSE(s.channel2.has_value());
    }
}

TEST_CASE("run_trials accounting reconciles") {
    Scenario s = make_scenario(base_config("single_arbitrary", 0.6));
    std::vector<TrialRecord> records;
    RunSummary sum = run_trials(s, 500, 42, [&](long long, const TrialRecord& r) {
        records.push_back(r);
    });
    REQUIRE(records.size() == 500);
    REQUIRE(sum.trials == 500);
    REQUIRE(sum.success_count + sum.failure_count + sum.blocked_count == 500);
    REQUIRE(sum.blocked_count == 0);
    REQUIRE_THAT(sum.empirical_success_rate,
                 WithinAbs(static_cast<double>(sum.success_count) / 500.0, 1e-15));
    REQUIRE_THAT(sum.oracle_success_probability, WithinAbs(0.5, 1e-12));
    REQUIRE(sum.mean_success_fidelity.has_value());
    REQUIRE(*sum.mean_success_fidelity >= success_fidelity_floor);
    // sender transmits every trial, the controller only on successes
    REQUIRE(sum.sender_bits_total == 500);
    REQUIRE(sum.controller_bits_total == sum.success_count);

    long long successes = 0;
    for (const TrialRecord& r : records)
        if (r.status == TrialStatus::success) ++successes;
    REQUIRE(successes == sum.success_count);
}

TEST_CASE("a blocked run has no successes and no bits") {
    RunConfig cfg = base_config("single_amplitude", 0.6);
    cfg.cooperate = false;
    Scenario s = make_scenario(cfg);
    RunSummary sum = run_trials(s, 100, 7);
    REQUIRE(sum.blocked_count == 100);
    REQUIRE(sum.success_count == 0);
    REQUIRE_FALSE(sum.mean_success_fidelity.has_value());
    REQUIRE(sum.sender_bits_total == 0);
    REQUIRE(sum.controller_bits_total == 0);
    ordered_json j = summary_to_json(s, sum, std::nullopt);
    REQUIRE(j["mean_success_fidelity"].is_null());
}

TEST_CASE("trial serialization is stable and complete") {
    Scenario s = make_scenario(base_config("two_phase", 0.4));
    RandomSource rng = RandomSource::for_trial(11, 0);
    TrialRecord rec = run_trial(s, rng);
    ordered_json j = trial_to_json(0, rec);

    const std::vector<std::string> want_keys = {
        "trial",    "protocol",     "status",      "alice_outcome", "charlie_outcome",
        "correction", "fidelity",   "sender_bits", "controller_bits", "messages"};
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    REQUIRE(keys == want_keys);
    REQUIRE(j["protocol"] == "two_phase");
    REQUIRE(j["status"] == "success");
    REQUIRE(j["correction"].is_string());
    REQUIRE(j["messages"].size() == 2);
}

TEST_CASE("failure trials serialize null controller fields") {
    Scenario s = make_scenario(base_config("single_arbitrary", 0.6));
    for (std::uint64_t i = 0; i < 50; ++i) {
        RandomSource rng = RandomSource::for_trial(13, i);
        TrialRecord rec = run_trial(s, rng);
        if (rec.status != TrialStatus::failure_uncorrectable) continue;
        ordered_json j = trial_to_json(static_cast<long long>(i), rec);
        REQUIRE(j["charlie_outcome"].is_null());
        REQUIRE(j["correction"].is_null());
        return;
    }
    FAIL("no failure trial in 50 seeded attempts");
}

TEST_CASE("reruns with one seed serialize byte-identically") {
    RandomSource rng(1301);
    for (ProtocolId id : all_protocols) {
        Scenario s = testing::random_scenario(id, rng);
        const auto render = [&] {
            std::string out;
            run_trials(s, 60, 99, [&](long long i, const TrialRecord& r) {
                out += trial_to_json(i, r).dump();
                out += '\n';
            });
            return out;
        };
        REQUIRE(render() == render());
    }
}

TEST_CASE("summaries are identical up to wall time") {
    Scenario s = make_scenario(base_config("two_arbitrary", 0.3));
    RunSummary a = run_trials(s, 300, 5);
    RunSummary b = run_trials(s, 300, 5);
    ordered_json ja = summary_to_json(s, a, std::nullopt);
    ordered_json jb = summary_to_json(s, b, std::nullopt);
    ja.erase("wall_time_seconds");
    jb.erase("wall_time_seconds");
    REQUIRE(ja == jb);
}

TEST_CASE("different seeds give different trial streams") {
    Scenario s = make_scenario(base_config("single_arbitrary", 0.6));
    RunSummary a = run_trials(s, 2000, 1);
    RunSummary b = run_trials(s, 2000, 2);
    REQUIRE(a.success_count != b.success_count);  // would collide only by fluke
}

TEST_CASE("sweep CSV format") {
    std::vector<SweepRow> rows = {{0.1, 0.5, 0.493, 1.0}, {0.2, 0.5, 0.507, std::nullopt}};
    const std::string csv = sweep_to_csv(rows);
    REQUIRE(csv == "b,oracle_probability,empirical_success_rate,mean_success_fidelity\r\n"
                   "0.1,0.5,0.493,1\r\n"
                   "0.2,0.5,0.507,\r\n");
}

TEST_CASE("format_double is shortest round trip") {
    REQUIRE(format_double(0.5) == "0.5");
    REQUIRE(format_double(0.1) == "0.1");
    REQUIRE(format_double(1.0) == "1");
    REQUIRE(format_double(0.24999999999999997) == "0.24999999999999997");
}

TEST_CASE("cmd_run writes reconcilable artifacts") {
    RunConfig cfg = base_config("single_amplitude", 0.5);
    cfg.trials = 120;
    const auto base = temp_base("run");
    cfg.out = base.string();
    std::ostringstream out, err;
    REQUIRE(cmd_run(cfg, out, err) == exit_ok);

    const std::string summary_text = slurp(base.string() + ".summary.json");
    REQUIRE(summary_text == out.str());
    ordered_json summary = ordered_json::parse(summary_text);
    REQUIRE(summary["success_count"] == 120);
    REQUIRE(summary["config"]["protocol"] == "single_amplitude");
    REQUIRE(summary["config"]["seed"] == 42);

    const std::string trials_text = slurp(base.string() + ".trials.jsonl");
    long long lines = 0, successes = 0;
    std::istringstream stream(trials_text);
    std::string line;
    while (std::getline(stream, line)) {
        ordered_json j = ordered_json::parse(line);
        ++lines;
        if (j["status"] == "success") ++successes;
    }
    REQUIRE(lines == 120);
    REQUIRE(successes == 120);

    std::filesystem::remove(base.string() + ".summary.json");
    std::filesystem::remove(base.string() + ".trials.jsonl");
}

TEST_CASE("cmd_run rejects invalid configs with exit 2") {
    RunConfig cfg = base_config("single_amplitude", 0.5);
    cfg.b.reset();
    std::ostringstream out, err;
    REQUIRE(cmd_run(cfg, out, err) == exit_invalid_input);
    REQUIRE(err.str().find("--b") != std::string::npos);
}

TEST_CASE("cmd_run reports I/O failures with exit 3") {
    RunConfig cfg = base_config("single_amplitude", 0.5);
    cfg.trials = 5;
    cfg.out = "/nonexistent_directory_for_sure/base";
    std::ostringstream out, err;
    REQUIRE(cmd_run(cfg, out, err) == exit_io_error);
}

TEST_CASE("cmd_verify reports and exits cleanly") {
    std::ostringstream out, err;
    REQUIRE(cmd_verify(base_config("two_amplitude", 0.7), out, err) == exit_ok);
    ordered_json report = ordered_json::parse(out.str());
    REQUIRE(report["ok"] == true);
    REQUIRE(report["probability_match"] == true);
    REQUIRE(report["all_rows_match"] == true);
    REQUIRE(report["table_rows"].size() == 16);
    REQUIRE_THAT(report["oracle_success_probability"].get<double>(), WithinAbs(1.0, 1e-12));
}

TEST_CASE("cmd_verify surfaces degenerate targets as invalid input") {
    RunConfig cfg = base_config("two_arbitrary", 0.5);
    cfg.alpha = 0.0;
    cfg.beta = 0.0;
    cfg.delta = 0.6;
    cfg.eta = 0.8;
    std::ostringstream out, err;
    REQUIRE(cmd_verify(cfg, out, err) == exit_invalid_input);
    REQUIRE(err.str().find("m is undefined") != std::string::npos);
}

TEST_CASE("cmd_sweep emits one CSV row per grid point") {
    SweepConfig cfg;
    cfg.base = base_config("single_arbitrary", 0.0);
    cfg.base.trials = 50;
    cfg.b_min = 0.1;
    cfg.b_max = 0.9;
    cfg.b_points = 5;
    std::ostringstream out, err;
    REQUIRE(cmd_sweep(cfg, out, err) == exit_ok);
    std::istringstream stream(out.str());
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(stream, line)) lines.push_back(line);
    REQUIRE(lines.size() == 6);  // header + 5 points
    REQUIRE(lines[0] == "b,oracle_probability,empirical_success_rate,mean_success_fidelity\r");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::size_t c1 = lines[i].find(',');
        const std::size_t c2 = lines[i].find(',', c1 + 1);
        REQUIRE(c2 != std::string::npos);
        const double oracle = std::stod(lines[i].substr(c1 + 1, c2 - c1 - 1));
        REQUIRE_THAT(oracle, WithinAbs(0.5, 1e-12));
    }
}

TEST_CASE("cmd_sweep validates the grid") {
    SweepConfig cfg;
    cfg.base = base_config("single_arbitrary", 0.0);
    cfg.b_min = 0.5;
    cfg.b_max = 0.2;
    std::ostringstream out, err;
    REQUIRE(cmd_sweep(cfg, out, err) == exit_invalid_input);
    cfg.b_min = 0.1;
    cfg.b_max = 1.0;  // b = 1 is not a valid channel
    REQUIRE(cmd_sweep(cfg, out, err) == exit_invalid_input);
}

TEST_CASE("sweep rows are reproducible per seed") {
    SweepConfig cfg;
    cfg.base = base_config("two_phase", 0.0);
    cfg.base.trials = 40;
    cfg.b_points = 3;
    std::ostringstream out1, out2, err;
    REQUIRE(cmd_sweep(cfg, out1, err) == exit_ok);
    REQUIRE(cmd_sweep(cfg, out2, err) == exit_ok);
    REQUIRE(out1.str() == out2.str());
}

TEST_CASE("seed_from_env parses CRSP_SEED") {
    ::unsetenv("CRSP_SEED");
    REQUIRE(seed_from_env() == 0);
    ::setenv("CRSP_SEED", "12345678901234567890", 1);  // fits unsigned 64-bit
    REQUIRE(seed_from_env() == 12345678901234567890ull);
    ::setenv("CRSP_SEED", "not_a_number", 1);
    REQUIRE_THROWS_AS(seed_from_env(), std::invalid_argument);
    ::unsetenv("CRSP_SEED");
}
