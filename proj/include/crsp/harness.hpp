// harness.hpp
// Experiment front end behind the CLI: config validation, Monte Carlo runs
// with per-trial derived seeds, exact verification reports, channel sweeps,
// and the serialized forms (JSON lines, JSON summary, RFC 4180 CSV).
//
// Everything here is deterministic for a fixed config, with one exception:
// the summary's wall_time_seconds field. Trial records are byte-identical
// across reruns.

#pragma once

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "bases.hpp"
#include "channel.hpp"
#include "oracle.hpp"
#include "protocol.hpp"
#include "qstate.hpp"
#include "rng.hpp"

namespace crsp {

// Fully validated experiment description.
struct Scenario {
    ProtocolId protocol;
    std::variant<SingleTarget, TwoTarget> target;
    ChannelParams channel1;
    std::optional<ChannelParams> channel2;  // set iff the protocol spans two channels
    bool cooperate = true;
    bool sender_compact = false;
};

inline TrialRecord run_trial(const Scenario& s, RandomSource& rng) {
    if (protocol_qubits(s.protocol) == 1)
        return run_single(std::get<SingleTarget>(s.target), s.channel1, s.cooperate, rng);
    return run_two(std::get<TwoTarget>(s.target), s.channel1, *s.channel2, s.cooperate,
                   s.sender_compact, rng);
}

inline std::vector<BranchReport> scenario_branches(const Scenario& s) {
    if (protocol_qubits(s.protocol) == 1)
        return enumerate_branches(std::get<SingleTarget>(s.target), s.channel1);
    return enumerate_branches(std::get<TwoTarget>(s.target), s.channel1, *s.channel2);
}

inline double oracle_probability(const Scenario& s) {
    return success_probability(scenario_branches(s));
}

// Raw CLI-level configuration; make_scenario validates it.
//
// Target parameter defaults give every protocol a valid target out of the
// box: theta = pi/4, uniform two-qubit moduli, all phases 0.
struct RunConfig {
    std::string protocol;
    double theta = std::numbers::pi / 4.0;
    double phi = 0.0;
    double alpha = 0.5, beta = 0.5, delta = 0.5, eta = 0.5;
    double phi1 = 0.0, phi2 = 0.0, phi3 = 0.0;
    std::optional<double> b;   // required for run/verify
    std::optional<double> b2;  // defaults to b
    long long trials = 10000;
    std::uint64_t seed = 0;
    bool cooperate = true;
    bool sender_compact = false;
    std::optional<std::string> out;
};

// Default seed from the environment; unset or empty means 0.
inline std::uint64_t seed_from_env() {
    const char* env = std::getenv("CRSP_SEED");
    if (env == nullptr || *env == '\0') return 0;
    std::uint64_t value = 0;
    const char* end = env + std::string_view(env).size();
    auto [ptr, ec] = std::from_chars(env, end, value);
    if (ec != std::errc{} || ptr != end)
        throw std::invalid_argument("CRSP_SEED must be an unsigned 64-bit integer");
    return value;
}

inline Scenario make_scenario(const RunConfig& cfg) {
    const ProtocolId id = parse_protocol(cfg.protocol);
    if (!cfg.b) throw std::invalid_argument("channel parameter --b is required");
    const ChannelParams ch1 = ChannelParams::from_b(*cfg.b);
    if (cfg.trials < 1) throw std::invalid_argument("--trials must be >= 1");
    if (cfg.sender_compact && id != ProtocolId::two_arbitrary)
        throw std::invalid_argument("--compact-sender applies only to two_arbitrary");

    std::optional<ChannelParams> ch2;
    std::variant<SingleTarget, TwoTarget> target = SingleTarget::phase(0.0);
    if (protocol_qubits(id) == 1) {
        if (cfg.b2) throw std::invalid_argument("--b2 applies only to two-qubit protocols");
        switch (protocol_class(id)) {
            case TargetClass::arbitrary: target = SingleTarget::arbitrary(cfg.theta, cfg.phi); break;
            case TargetClass::amplitude: target = SingleTarget::amplitude(cfg.theta); break;
            case TargetClass::phase: target = SingleTarget::phase(cfg.phi); break;
        }
    } else {
        ch2 = ChannelParams::from_b(cfg.b2.value_or(*cfg.b));
        switch (protocol_class(id)) {
            case TargetClass::arbitrary:
                target = TwoTarget::arbitrary(cfg.alpha, cfg.beta, cfg.delta, cfg.eta, cfg.phi1,
                                              cfg.phi2, cfg.phi3);
                break;
            case TargetClass::amplitude:
                target = TwoTarget::amplitude(cfg.alpha, cfg.beta, cfg.delta, cfg.eta);
                break;
            case TargetClass::phase:
                target = TwoTarget::phase(cfg.phi1, cfg.phi2, cfg.phi3);
                break;
        }
        // surface a degenerate arbitrary target at config time
        alice_basis(std::get<TwoTarget>(target));
    }
    return {id, std::move(target), ch1, ch2, cfg.cooperate, cfg.sender_compact};
}

struct RunSummary {
    long long trials = 0;
    std::uint64_t seed = 0;
    long long success_count = 0;
    long long failure_count = 0;
    long long blocked_count = 0;
    double empirical_success_rate = 0.0;
    std::optional<double> mean_success_fidelity;  // absent when nothing succeeded
    double oracle_success_probability = 0.0;
    long long sender_bits_total = 0;
    long long controller_bits_total = 0;
    double wall_time_seconds = 0.0;
};

// Runs `trials` independent trials with per-trial seeds derived from the
// master seed, invoking `sink` (if set) with each record in index order.
inline RunSummary run_trials(const Scenario& s, long long trials, std::uint64_t seed,
                             const std::function<void(long long, const TrialRecord&)>& sink = {}) {
    if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
    RunSummary sum;
    sum.trials = trials;
    sum.seed = seed;
    sum.oracle_success_probability = oracle_probability(s);
    double fidelity_acc = 0.0;
    const auto t0 = std::chrono::steady_clock::now();
    for (long long i = 0; i < trials; ++i) {
        RandomSource rng = RandomSource::for_trial(seed, static_cast<std::uint64_t>(i));
        const TrialRecord rec = run_trial(s, rng);
        switch (rec.status) {
            case TrialStatus::success:
                ++sum.success_count;
                fidelity_acc += rec.fidelity;
                break;
            case TrialStatus::failure_uncorrectable: ++sum.failure_count; break;
            case TrialStatus::blocked_by_controller: ++sum.blocked_count; break;
        }
        sum.sender_bits_total += rec.sender_bits;
        sum.controller_bits_total += rec.controller_bits;
        if (sink) sink(i, rec);
    }
    const auto t1 = std::chrono::steady_clock::now();
    sum.wall_time_seconds = std::chrono::duration<double>(t1 - t0).count();
    sum.empirical_success_rate =
        static_cast<double>(sum.success_count) / static_cast<double>(trials);
    if (sum.success_count > 0)
        sum.mean_success_fidelity = fidelity_acc / static_cast<double>(sum.success_count);
    return sum;
}

// ---- serialization ----

using ordered_json = nlohmann::ordered_json;

inline ordered_json target_to_json(const std::variant<SingleTarget, TwoTarget>& target) {
    ordered_json j;
    if (const auto* st = std::get_if<SingleTarget>(&target)) {
        j["class"] = to_string(st->cls());
        j["theta"] = st->theta();
        j["phi"] = st->phi();
    } else {
        const auto& tt = std::get<TwoTarget>(target);
        j["class"] = to_string(tt.cls());
        j["alpha"] = tt.alpha();
        j["beta"] = tt.beta();
        j["delta"] = tt.delta();
        j["eta"] = tt.eta();
        j["phi1"] = tt.phi1();
        j["phi2"] = tt.phi2();
        j["phi3"] = tt.phi3();
    }
    return j;
}

inline ordered_json config_to_json(const Scenario& s, long long trials, std::uint64_t seed,
                                   const std::optional<std::string>& out) {
    ordered_json j;
    j["protocol"] = to_string(s.protocol);
    j["target"] = target_to_json(s.target);
    j["b"] = s.channel1.b;
    j["b2"] = s.channel2 ? ordered_json(s.channel2->b) : ordered_json(nullptr);
    j["trials"] = trials;
    j["seed"] = seed;
    j["cooperate"] = s.cooperate;
    j["sender_compact"] = s.sender_compact;
    j["out"] = out ? ordered_json(*out) : ordered_json(nullptr);
    return j;
}

inline ordered_json trial_to_json(long long index, const TrialRecord& rec) {
    ordered_json j;
    j["trial"] = index;
    j["protocol"] = to_string(rec.protocol);
    j["status"] = to_string(rec.status);
    j["alice_outcome"] = rec.alice_outcome;
    j["charlie_outcome"] =
        rec.charlie_outcome ? ordered_json(*rec.charlie_outcome) : ordered_json(nullptr);
    j["correction"] =
        rec.correction
            ? ordered_json(correction_label(*rec.correction, protocol_qubits(rec.protocol)))
            : ordered_json(nullptr);
    j["fidelity"] = rec.fidelity;
    j["sender_bits"] = rec.sender_bits;
    j["controller_bits"] = rec.controller_bits;
    ordered_json msgs = ordered_json::array();
    for (const PartyMessage& m : rec.messages) {
        ordered_json mj;
        mj["from"] = to_string(m.from);
        mj["to"] = to_string(m.to);
        mj["payload_bits"] = m.payload_bits;
        mj["content"] = m.content;
        msgs.push_back(std::move(mj));
    }
    j["messages"] = std::move(msgs);
    return j;
}

inline ordered_json summary_to_json(const Scenario& s, const RunSummary& sum,
                                    const std::optional<std::string>& out) {
    ordered_json j;
    j["config"] = config_to_json(s, sum.trials, sum.seed, out);
    j["success_count"] = sum.success_count;
    j["failure_count"] = sum.failure_count;
    j["blocked_count"] = sum.blocked_count;
    j["empirical_success_rate"] = sum.empirical_success_rate;
    j["mean_success_fidelity"] =
        sum.mean_success_fidelity ? ordered_json(*sum.mean_success_fidelity) : ordered_json(nullptr);
    j["oracle_success_probability"] = sum.oracle_success_probability;
    j["sender_bits_total"] = sum.sender_bits_total;
    j["controller_bits_total"] = sum.controller_bits_total;
    j["wall_time_seconds"] = sum.wall_time_seconds;
    return j;
}

// Shortest round-trip decimal form, locale-independent.
inline std::string format_double(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

struct SweepRow {
    double b;
    double oracle_probability;
    double empirical_success_rate;
    std::optional<double> mean_success_fidelity;
};

// RFC 4180: CRLF line endings, header row first. Values are plain decimals,
// so no quoting is ever needed.
inline std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::string csv = "b,oracle_probability,empirical_success_rate,mean_success_fidelity\r\n";
    for (const SweepRow& r : rows) {
        csv += format_double(r.b);
        csv += ',';
        csv += format_double(r.oracle_probability);
        csv += ',';
        csv += format_double(r.empirical_success_rate);
        csv += ',';
        csv += r.mean_success_fidelity ? format_double(*r.mean_success_fidelity) : std::string();
        csv += "\r\n";
    }
    return csv;
}

// ---- commands ----
// Return the process exit code: 0 ok, 1 verification failure, 2 invalid
// input, 3 I/O error. Reports go to `out_stream`, diagnostics to `err`.

inline constexpr int exit_ok = 0;
inline constexpr int exit_verification_failure = 1;
inline constexpr int exit_invalid_input = 2;
inline constexpr int exit_io_error = 3;

namespace detail {

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    f << content;
    f.flush();
    if (!f) throw std::ios_base::failure("write to '" + path + "' failed");
}

}  // namespace detail

// Monte Carlo run. With cfg.out set, writes <out>.trials.jsonl and
// <out>.summary.json; the summary always goes to out_stream as well.
inline int cmd_run(const RunConfig& cfg, std::ostream& out_stream, std::ostream& err) {
    std::optional<Scenario> scenario;
    try {
        scenario = make_scenario(cfg);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid_input;
    }
    try {
        std::string trials_buf;
        std::function<void(long long, const TrialRecord&)> sink;
        if (cfg.out)
            sink = [&](long long i, const TrialRecord& rec) {
                trials_buf += trial_to_json(i, rec).dump();
                trials_buf += '\n';
            };
        const RunSummary sum = run_trials(*scenario, cfg.trials, cfg.seed, sink);
        const std::string summary = summary_to_json(*scenario, sum, cfg.out).dump(2) + "\n";
        if (cfg.out) {
            detail::write_file(*cfg.out + ".trials.jsonl", trials_buf);
            detail::write_file(*cfg.out + ".summary.json", summary);
        }
        out_stream << summary;
        return exit_ok;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << "\n";
        return exit_io_error;
    }
}

// Exact verification: branch enumeration plus a full correction-table check
// for the configured target and channels. Exit 1 when any table row fails
// or the success probability deviates from the protocol's claim.
inline int cmd_verify(const RunConfig& cfg, std::ostream& out_stream, std::ostream& err) {
    try {
        const Scenario s = make_scenario(cfg);
        const double oracle_p = oracle_probability(s);
        const double claimed = claimed_success_probability(s.protocol);
        const bool prob_ok = std::abs(oracle_p - claimed) <= probability_tolerance;

        std::vector<TableRowVerdict> verdicts;
        if (protocol_qubits(s.protocol) == 1)
            verdicts = verify_table(std::get<SingleTarget>(s.target), s.channel1);
        else
            verdicts = verify_table(std::get<TwoTarget>(s.target), s.channel1, *s.channel2);
        bool rows_ok = true;

        ordered_json rows = ordered_json::array();
        for (const TableRowVerdict& v : verdicts) {
            rows_ok = rows_ok && v.match;
            ordered_json r;
            r["alice_outcome"] = v.entry.alice_outcome;
            r["charlie_outcome"] = v.entry.charlie_outcome;
            r["correction"] = correction_label(v.entry.unitaries, protocol_qubits(s.protocol));
            r["fidelity"] = v.fidelity;
            r["match"] = v.match;
            rows.push_back(std::move(r));
        }

        ordered_json report;
        report["protocol"] = to_string(s.protocol);
        report["target"] = target_to_json(s.target);
        report["b"] = s.channel1.b;
        report["b2"] = s.channel2 ? ordered_json(s.channel2->b) : ordered_json(nullptr);
        report["oracle_success_probability"] = oracle_p;
        report["claimed_success_probability"] = claimed;
        report["probability_match"] = prob_ok;
        report["table_rows"] = std::move(rows);
        report["all_rows_match"] = rows_ok;
        report["ok"] = prob_ok && rows_ok;
        out_stream << report.dump(2) << "\n";
        return (prob_ok && rows_ok) ? exit_ok : exit_verification_failure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid_input;
    }
}

struct SweepConfig {
    RunConfig base;          // protocol, target, trials, seed; base.b is ignored
    double b_min = 0.1;
    double b_max = 0.9;
    int b_points = 9;
};

// Channel sweep: for each grid value of b the scenario is rebuilt (two-qubit
// runs set both channels to b unless --b2 pins the second) and a fresh
// Monte Carlo run is taken with a per-point master seed derived from
// (seed, point index).
inline int cmd_sweep(const SweepConfig& cfg, std::ostream& out_stream, std::ostream& err) {
    std::vector<SweepRow> rows;
    try {
        if (cfg.b_points < 1) throw std::invalid_argument("--b-points must be >= 1");
        if (!(cfg.b_min >= 0.0) || !(cfg.b_max < 1.0) || cfg.b_min > cfg.b_max)
            throw std::invalid_argument("sweep grid must satisfy 0 <= b-min <= b-max < 1");
        for (int k = 0; k < cfg.b_points; ++k) {
            const double b = cfg.b_points == 1
                                 ? cfg.b_min
                                 : cfg.b_min + (cfg.b_max - cfg.b_min) * k / (cfg.b_points - 1);
            RunConfig point = cfg.base;
            point.b = b;
            point.out.reset();
            const Scenario s = make_scenario(point);
            const RunSummary sum =
                run_trials(s, point.trials, trial_seed(point.seed, static_cast<std::uint64_t>(k)));
            rows.push_back({b, sum.oracle_success_probability, sum.empirical_success_rate,
                            sum.mean_success_fidelity});
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_invalid_input;
    }
    try {
        const std::string csv = sweep_to_csv(rows);
        if (cfg.base.out) detail::write_file(*cfg.base.out, csv);
        out_stream << csv;
        return exit_ok;
    } catch (const std::ios_base::failure& e) {
        err << "error: " << e.what() << "\n";
        return exit_io_error;
    }
}

}  // namespace crsp
