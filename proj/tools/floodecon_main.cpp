#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "floodecon/charts.hpp"
#include "floodecon/config.hpp"
#include "floodecon/engine.hpp"
#include "floodecon/metrics.hpp"

namespace fs = std::filesystem;
using namespace floodecon;

namespace {

std::string resolve_out_dir(const std::string& cli_out, const ScenarioConfig& cfg) {
    if (!cli_out.empty()) return cli_out;
    if (!cfg.output_dir.empty()) return cfg.output_dir;
    if (const char* env = std::getenv("FLOODECON_OUT"); env && *env) return env;
    return "out";
}

// Simulate one scenario and write metrics.csv, summary.json, manifest.json
// and the chart panels under dir.
WorldState run_and_export(const ScenarioConfig& cfg, const std::string& config_path, const std::string& dir,
                          bool quiet) {
    const std::string started = timestamp_utc_now();
    WorldState state = run(cfg, quiet ? ProgressFn{} : [](int done, int total) {
        std::cout << "  step " << done << "/" << total << "\n";
    });
    fs::create_directories(dir);

    const std::string csv_path = (fs::path(dir) / "metrics.csv").string();
    const std::string summary_path = (fs::path(dir) / "summary.json").string();
    write_metrics_csv(csv_path, state.metrics);
    write_summary_json(summary_path, state);

    const auto* as_baseline = cfg.hazard_enabled ? nullptr : &state.metrics;
    const auto* as_hazard = cfg.hazard_enabled ? &state.metrics : nullptr;
    std::vector<std::string> outputs =
        emit_charts(as_baseline, as_hazard, (fs::path(dir) / "charts").string());
    outputs.insert(outputs.begin(), {csv_path, summary_path});

    write_manifest((fs::path(dir) / "manifest.json").string(), cfg, config_path, outputs, started,
                   timestamp_utc_now());
    return state;
}

int cmd_run(const std::string& config_path, bool no_hazard, bool no_evolution, bool seed_set,
            std::uint64_t seed, const std::string& cli_out) {
    ScenarioConfig cfg = parse_config(config_path);
    if (seed_set) cfg.seed = seed;
    if (no_hazard) cfg.hazard_enabled = false;
    if (no_evolution) cfg.evolution_enabled = false;
    const std::string out_dir = resolve_out_dir(cli_out, cfg);

    const WorldState state = run_and_export(cfg, config_path, out_dir, false);
    std::cout << "run complete: " << state.metrics.size() << " steps, outputs in " << out_dir << "\n";
    return 0;
}

int cmd_compare(const std::string& config_path, int n_seeds, const std::string& cli_out, int jobs) {
    const ScenarioConfig base_cfg = parse_config(config_path);
    const std::string out_dir = resolve_out_dir(cli_out, base_cfg);
    fs::create_directories(out_dir);

    struct Job {
        ScenarioConfig cfg;
        std::string dir;
        std::uint64_t seed;
        bool hazard;
    };
    std::vector<Job> jobs_list;
    for (int i = 0; i < n_seeds; ++i) {
        const std::uint64_t seed = base_cfg.seed + static_cast<std::uint64_t>(i);
        for (const bool hazard : {false, true}) {
            Job j;
            j.cfg = base_cfg;
            j.cfg.seed = seed;
            j.cfg.hazard_enabled = hazard;
            j.seed = seed;
            j.hazard = hazard;
            j.dir = (fs::path(out_dir) / ("seed_" + std::to_string(seed)) / (hazard ? "hazard" : "baseline"))
                        .string();
            jobs_list.push_back(std::move(j));
        }
    }

    // Runs are fully independent (own world, own substreams, own output
    // directory), so any worker count yields the same files.
    std::vector<WorldState> results(jobs_list.size());
    std::atomic<std::size_t> next{0};
    std::mutex io_mutex;
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(jobs_list.size())));
    std::vector<std::thread> pool;
    std::string failure;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= jobs_list.size()) return;
                try {
                    results[i] = run_and_export(jobs_list[i].cfg, config_path, jobs_list[i].dir, true);
                    std::lock_guard<std::mutex> lock(io_mutex);
                    std::cout << "finished seed " << jobs_list[i].seed << " "
                              << (jobs_list[i].hazard ? "hazard" : "baseline") << "\n";
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(io_mutex);
                    if (failure.empty()) failure = e.what();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (!failure.empty()) throw std::runtime_error(failure);

    // per-seed summary table + price-gap aggregate
    nlohmann::ordered_json seeds_json = nlohmann::ordered_json::array();
    double ratio_sum = 0.0;
    int hazard_price_higher = 0;
    std::cout << "\nseed        baseline price   hazard price     ratio\n";
    for (int i = 0; i < n_seeds; ++i) {
        const WorldState& b = results[2 * i];
        const WorldState& h = results[2 * i + 1];
        const double pb = b.metrics.back().mean_price;
        const double ph = h.metrics.back().mean_price;
        const double ratio = ph / pb;
        ratio_sum += ratio;
        if (ph > pb) ++hazard_price_higher;
        std::ostringstream row;
        row.setf(std::ios::fixed);
        row.precision(4);
        row << jobs_list[2 * i].seed;
        row << std::string(12 - std::min<std::size_t>(11, row.str().size()), ' ') << pb << "           " << ph
            << "           " << ratio;
        std::cout << row.str() << "\n";
        seeds_json.push_back({{"seed", jobs_list[2 * i].seed},
                              {"baseline_final_price", pb},
                              {"hazard_final_price", ph},
                              {"final_price_ratio", ratio},
                              {"baseline_final_production", b.metrics.back().mean_production},
                              {"hazard_final_production", h.metrics.back().mean_production}});
    }
    const double mean_ratio = ratio_sum / n_seeds;
    std::cout << "mean hazard/baseline final price ratio: " << mean_ratio << "\n";

    nlohmann::ordered_json summary;
    summary["version"] = kArtifactVersion;
    summary["config_path"] = config_path;
    summary["n_seeds"] = n_seeds;
    summary["seeds"] = seeds_json;
    summary["mean_final_price_ratio"] = mean_ratio;
    summary["seeds_with_hazard_price_above_baseline"] = hazard_price_higher;
    const std::string summary_path = (fs::path(out_dir) / "compare_summary.json").string();
    std::ofstream sout(summary_path, std::ios::binary);
    if (!sout) throw std::runtime_error("compare: cannot write " + summary_path);
    sout << summary.dump(2) << "\n";
    std::cout << "compare complete: " << jobs_list.size() << " runs, summary in " << summary_path << "\n";
    return 0;
}

int cmd_validate(const std::string& config_path) {
    const ScenarioConfig cfg = parse_config(config_path);
    cfg.validate();
    for (const auto& epoch : cfg.grids) load_hazard_grid(epoch.path);
    if (!cfg.impact_curve_path.empty()) load_impact_curve(cfg.impact_curve_path);
    std::cout << "OK\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"floodecon: spatial agent-based simulator of a flood-exposed economy"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    std::uint64_t seed = 0;
    bool no_hazard = false, no_evolution = false;
    int n_seeds = 5, jobs = 1;

    CLI::App* run_cmd = app.add_subcommand("run", "run one scenario and export metrics + charts");
    run_cmd->add_option("--config", config_path, "scenario config file")->required();
    auto* seed_opt = run_cmd->add_option("--seed", seed, "override the config seed");
    run_cmd->add_flag("--no-hazard", no_hazard, "force hazard_enabled = false");
    run_cmd->add_flag("--no-evolution", no_evolution, "force evolution_enabled = false");
    run_cmd->add_option("--out", out_dir, "output directory (default: config output_dir, $FLOODECON_OUT, ./out)");

    CLI::App* compare_cmd = app.add_subcommand("compare", "run baseline vs hazard over N seeds");
    compare_cmd->add_option("--config", config_path, "scenario config file")->required();
    compare_cmd->add_option("--seeds", n_seeds, "number of seeds (config seed, +1, ...)")->required();
    compare_cmd->add_option("--out", out_dir, "output directory");
    compare_cmd->add_option("--jobs", jobs, "parallel workers (outputs identical for any value)");

    CLI::App* validate_cmd = app.add_subcommand("validate", "parse the config and load its inputs");
    validate_cmd->add_option("--config", config_path, "scenario config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (run_cmd->parsed())
            return cmd_run(config_path, no_hazard, no_evolution, seed_opt->count() > 0, seed, out_dir);
        if (compare_cmd->parsed()) return cmd_compare(config_path, n_seeds, out_dir, jobs);
        if (validate_cmd->parsed()) return cmd_validate(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
