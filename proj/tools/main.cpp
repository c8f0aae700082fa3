// popalloc CLI: popularity-weighted bandwidth allocation for broadcast video.
//
// Subcommands:
//   allocate --snapshot FILE   per-session allocation report for one snapshot
//   sweep    --scenario {1|2} --m-from A --m-to B   Monte-Carlo sweep over M
//   replay   --trace FILE      allocation timeline for a session/viewer trace
//   limits                     capacity head-count bounds (n_hq, n_lq)
//
// Exit codes: 0 ok, 1 usage error, 2 invalid configuration, 3 data/capacity error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "popalloc/popalloc.hpp"

namespace {

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw popalloc::DataError("cannot open output file: " + path);
    return out;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw popalloc::DataError("cannot open input file: " + path);
    return in;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"popularity-based bandwidth allocation for broadcast video sessions"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "flat 'key = value' config file");

    // Built-in defaults: 30 Mbps link, 2 Mbps ceiling / 0.6 Mbps floor per
    // session, 100 kbps enhancement layers.
    double capacity_kbps = 30000.0;
    double beta_max_kbps = 2000.0;
    double beta_min_kbps = 600.0;
    double granularity_kbps = 100.0;
    auto* opt_capacity = app.add_option("--capacity-kbps", capacity_kbps, "total link capacity");
    auto* opt_beta_max = app.add_option("--beta-max-kbps", beta_max_kbps, "per-session ceiling");
    auto* opt_beta_min = app.add_option("--beta-min-kbps", beta_min_kbps, "per-session floor");
    auto* opt_granularity =
        app.add_option("--layer-granularity-kbps", granularity_kbps, "enhancement layer size");

    std::string out_path;
    std::string agg_out_path;
    std::string snapshot_path;
    std::string trace_path;
    std::uint64_t seed = 42;
    int trials = 100;
    int scenario = 1;
    int m_from = 1;
    int m_to = 1;
    std::int64_t users = 200;
    unsigned threads = 1;

    CLI::App* cmd_allocate = app.add_subcommand("allocate", "allocate bandwidth for one snapshot");
    cmd_allocate->add_option("--snapshot", snapshot_path, "snapshot CSV (session_id,viewers)")
        ->required();
    cmd_allocate->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "sweep session counts with random viewers");
    cmd_sweep->add_option("--scenario", scenario, "traffic scenario")
        ->required()
        ->check(CLI::IsMember({1, 2}));
    cmd_sweep->add_option("--m-from", m_from, "first session count")->required();
    cmd_sweep->add_option("--m-to", m_to, "last session count (inclusive)")->required();
    auto* opt_trials = cmd_sweep->add_option("--trials", trials, "trials per session count");
    auto* opt_seed = cmd_sweep->add_option("--seed", seed, "master seed");
    cmd_sweep->add_option("--users", users, "total users in the system");
    cmd_sweep->add_option("--threads", threads, "worker threads");
    cmd_sweep->add_option("--out", out_path, "per-trial CSV file (default stdout)");
    cmd_sweep->add_option("--agg-out", agg_out_path, "per-M aggregate CSV file (default stdout)");

    CLI::App* cmd_replay = app.add_subcommand("replay", "replay a session/viewer event trace");
    cmd_replay->add_option("--trace", trace_path, "trace CSV (timestamp,event,session_id)")
        ->required();
    cmd_replay->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* cmd_limits = app.add_subcommand("limits", "print capacity bounds n_hq and n_lq");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (!config_path.empty()) {
            std::ifstream config_in(config_path);
            if (!config_in)
                throw popalloc::InvalidConfig("cannot open config file: " + config_path);
            const popalloc::cli::FileConfig file = popalloc::cli::parse_config_file(config_in);
            // Flags given on the command line win over file values.
            if (!*opt_capacity && file.capacity_kbps) capacity_kbps = *file.capacity_kbps;
            if (!*opt_beta_max && file.beta_max_kbps) beta_max_kbps = *file.beta_max_kbps;
            if (!*opt_beta_min && file.beta_min_kbps) beta_min_kbps = *file.beta_min_kbps;
            if (!*opt_granularity && file.layer_granularity_kbps)
                granularity_kbps = *file.layer_granularity_kbps;
            if (!*opt_seed && file.seed) seed = *file.seed;
            if (!*opt_trials && file.trials) trials = *file.trials;
        }

        const popalloc::SystemConfig config{capacity_kbps, beta_max_kbps, beta_min_kbps,
                                            granularity_kbps};
        config.validate();

        if (*cmd_limits) {
            if (out_path.empty()) {
                popalloc::cli::run_limits(config, std::cout);
            } else {
                auto out = open_output(out_path);
                popalloc::cli::run_limits(config, out);
            }
        } else if (*cmd_allocate) {
            auto in = open_input(snapshot_path);
            if (out_path.empty()) {
                popalloc::cli::run_allocate(config, in, std::cout);
            } else {
                auto out = open_output(out_path);
                popalloc::cli::run_allocate(config, in, out);
            }
        } else if (*cmd_replay) {
            auto in = open_input(trace_path);
            if (out_path.empty()) {
                popalloc::cli::run_replay(config, in, std::cout);
            } else {
                auto out = open_output(out_path);
                popalloc::cli::run_replay(config, in, out);
            }
        } else if (*cmd_sweep) {
            popalloc::SweepParams params;
            params.kind = scenario == 1 ? popalloc::ScenarioKind::Scenario1
                                        : popalloc::ScenarioKind::Scenario2;
            params.m_from = m_from;
            params.m_to = m_to;
            params.trials = trials;
            params.total_users = users;
            params.seed = seed;
            params.threads = threads;

            std::ofstream trial_file;
            std::ofstream agg_file;
            std::ostream* trial_out = &std::cout;
            std::ostream* agg_out = &std::cout;
            if (!out_path.empty()) {
                trial_file = open_output(out_path);
                trial_out = &trial_file;
            }
            if (!agg_out_path.empty()) {
                agg_file = open_output(agg_out_path);
                agg_out = &agg_file;
            }
            const bool same_stream = trial_out == agg_out;
            popalloc::cli::run_sweep(config, params, *trial_out, *agg_out, same_stream);
        }
        return 0;
    } catch (const popalloc::InvalidConfig& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
