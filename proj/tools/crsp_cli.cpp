// crsp_cli.cpp
// Command-line front end: `crsp run|verify|sweep`.
//
// Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 I/O error.

#include <CLI11.hpp>

#include <crsp/crsp.hpp>

#include <iostream>
#include <string>

namespace {

void add_target_options(CLI::App& cmd, crsp::RunConfig& cfg) {
    cmd.add_option("--protocol", cfg.protocol,
                   "Protocol: single_arbitrary, single_amplitude, single_phase, "
                   "two_arbitrary, two_amplitude, two_phase");
    cmd.add_option("--theta", cfg.theta, "One-qubit target polar angle in [0, pi/2] (radians)")
        ->capture_default_str();
    cmd.add_option("--phi", cfg.phi, "One-qubit target phase (radians)")->capture_default_str();
    cmd.add_option("--alpha", cfg.alpha, "Two-qubit target modulus of |00>")->capture_default_str();
    cmd.add_option("--beta", cfg.beta, "Two-qubit target modulus of |01>")->capture_default_str();
    cmd.add_option("--delta", cfg.delta, "Two-qubit target modulus of |10>")->capture_default_str();
    cmd.add_option("--eta", cfg.eta, "Two-qubit target modulus of |11>")->capture_default_str();
    cmd.add_option("--phi1", cfg.phi1, "Two-qubit target phase of |01> (radians)")
        ->capture_default_str();
    cmd.add_option("--phi2", cfg.phi2, "Two-qubit target phase of |10> (radians)")
        ->capture_default_str();
    cmd.add_option("--phi3", cfg.phi3, "Two-qubit target phase of |11> (radians)")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    crsp::RunConfig cfg;
    crsp::SweepConfig sweep_cfg;
    bool no_cooperate = false;
    bool compact_sender = false;

    CLI::App app{"Simulator and exact verifier for controlled remote state preparation "
                 "over partially entangled three-qubit channels"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read option defaults from a config file (flags win)");
    app.set_version_flag("--version", "crsp 0.1.0");

    try {
        cfg.seed = crsp::seed_from_env();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return crsp::exit_invalid_input;
    }

    CLI::App* run = app.add_subcommand(
        "run", "Monte Carlo trials; prints a JSON summary, optionally writes trial records");
    add_target_options(*run, cfg);
    run->add_option("--b", cfg.b, "Channel parameter b in [0, 1)");
    run->add_option("--b2", cfg.b2, "Second channel's b (two-qubit protocols; default: --b)");
    run->add_option("--trials", cfg.trials, "Number of trials")->capture_default_str();
    run->add_option("--seed", cfg.seed, "Master seed (default: CRSP_SEED or 0)");
    run->add_flag("--no-cooperate", no_cooperate, "Controller withholds his outcome");
    run->add_flag("--compact-sender", compact_sender,
                  "Sender broadcasts 1-bit yes/no (two_arbitrary only)");
    run->add_option("--out", cfg.out,
                    "Base path: writes <out>.trials.jsonl and <out>.summary.json");

    CLI::App* verify = app.add_subcommand(
        "verify", "Exact check: branch probabilities and every correction-table row");
    add_target_options(*verify, cfg);
    verify->add_option("--b", cfg.b, "Channel parameter b in [0, 1)");
    verify->add_option("--b2", cfg.b2, "Second channel's b (two-qubit protocols; default: --b)");

    CLI::App* sweep = app.add_subcommand(
        "sweep", "Monte Carlo plus oracle across a grid of b values; prints CSV");
    add_target_options(*sweep, cfg);
    sweep->add_option("--b2", cfg.b2,
                      "Pin the second channel's b (default: follows the grid value)");
    sweep->add_option("--trials", cfg.trials, "Trials per grid point")->capture_default_str();
    sweep->add_option("--seed", cfg.seed, "Master seed (default: CRSP_SEED or 0)");
    sweep->add_option("--b-min", sweep_cfg.b_min, "Grid start")->capture_default_str();
    sweep->add_option("--b-max", sweep_cfg.b_max, "Grid end")->capture_default_str();
    sweep->add_option("--b-points", sweep_cfg.b_points, "Grid size")->capture_default_str();
    sweep->add_option("--out", cfg.out, "CSV output path (also printed to stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : crsp::exit_invalid_input;
    }

    cfg.cooperate = !no_cooperate;
    cfg.sender_compact = compact_sender;

    if (run->parsed()) return crsp::cmd_run(cfg, std::cout, std::cerr);
    if (verify->parsed()) return crsp::cmd_verify(cfg, std::cout, std::cerr);
    sweep_cfg.base = cfg;
    return crsp::cmd_sweep(sweep_cfg, std::cout, std::cerr);
}
