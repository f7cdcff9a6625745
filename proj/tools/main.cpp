// SPDX-License-Identifier: Apache-2.0
//
// pulsecomp command line tool: joint design of constant-modulus subpulse
// codes and extended mismatched receive filters, plus evaluation and
// synthetic-scene simulation of designed pairs.
//
// Exit codes: 0 success, 2 configuration/input error, 3 solver failure,
// 4 evaluation degeneracy (orthogonal code/filter pair).

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pulsecomp/ao.hpp"
#include "pulsecomp/errors.hpp"
#include "pulsecomp/io.hpp"
#include "pulsecomp/scene.hpp"
#include "pulsecomp/signal_model.hpp"

namespace fs = std::filesystem;
using namespace pulsecomp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitDegenerate = 4;

void log_info(const std::string& message) {
    if (io::log_level() >= io::LogLevel::Info) {
        std::cerr << "pulsecomp: " << message << "\n";
    }
}

void log_debug(const std::string& message) {
    if (io::log_level() >= io::LogLevel::Debug) {
        std::cerr << "pulsecomp[debug]: " << message << "\n";
    }
}

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;
    std::optional<int> restarts;
    std::optional<int> trials;
};

fs::path ensure_out_dir(const std::string& dir) {
    fs::path out(dir);
    std::error_code ec;
    fs::create_directories(out, ec);
    if (ec) {
        throw ConfigError("--out: cannot create directory " + out.string());
    }
    return out;
}

int run_design(const CommonArgs& args) {
    io::RunConfig run = io::load_config(args.config_path);
    if (args.seed) run.design.seed = *args.seed;
    if (args.restarts) run.design.restarts = *args.restarts;

    const ao::DesignConfig cfg = run.design_config();
    log_info("designing N=" + std::to_string(cfg.code_length) +
             " M=" + std::to_string(cfg.pad_length) +
             " seed=" + std::to_string(cfg.seed));
    const ao::DesignResult result = ao::design(cfg);
    log_debug("final mse=" + io::format_double(result.mse));

    const fs::path out = ensure_out_dir(args.out_dir);
    const io::WaveformFile wf = io::WaveformFile::from_result(
        result, cfg.pad_length, run.config_hash, cfg.seed);
    io::save_waveform(wf, out / "waveform.json");
    io::write_convergence_csv(out / "convergence.csv", result.objective_trace,
                              cfg.profile.zeta0());
    log_info("wrote " + (out / "waveform.json").string() + " and convergence.csv");
    return kExitOk;
}

ao::PairMetrics evaluate_waveform(const io::WaveformFile& wf, const io::RunConfig& run) {
    const int max_lag = 2 * wf.pad_length + wf.code_length - 1;
    const ClutterProfile profile = run.profile.materialize(max_lag);
    return ao::evaluate_pair(wf.code(), wf.mismatched_filter(), profile, wf.pad_length);
}

int run_evaluate(const CommonArgs& args, const std::string& waveform_path,
                 bool write_file) {
    const io::WaveformFile wf = io::load_waveform(waveform_path);
    const io::RunConfig run = io::load_config(args.config_path);
    const ao::PairMetrics metrics = evaluate_waveform(wf, run);
    const std::string json = io::metrics_json(metrics);
    std::cout << json;
    if (write_file) {
        const fs::path out = ensure_out_dir(args.out_dir);
        std::ofstream file(out / "metrics.json", std::ios::binary | std::ios::trunc);
        file << json;
        log_info("wrote " + (out / "metrics.json").string());
    }
    return kExitOk;
}

int run_simulate(const CommonArgs& args, const std::string& waveform_path) {
    const io::WaveformFile wf = io::load_waveform(waveform_path);
    const io::RunConfig run = io::load_config(args.config_path);
    if (!run.radar_present) {
        throw ConfigError("radar: section required by the simulate command");
    }
    if (!run.scene.present) {
        throw ConfigError("scene: section required by the simulate command");
    }
    const int trials = args.trials.value_or(run.scene.trials);
    if (trials < 1) {
        throw ConfigError("--trials: must be >= 1");
    }
    const std::uint64_t seed = args.seed.value_or(run.design.seed);

    log_info("simulating " + std::to_string(run.scene.truth_zeta.size()) + " gates x " +
             std::to_string(trials) + " trials");
    const scene::SimulationSummary summary = scene::run_trials(
        wf.code(), wf.mismatched_filter(), wf.pad_length, run.scene.truth_zeta,
        run.scene.velocity, run.radar, run.profile.noise_power, trials, seed);

    const fs::path out = ensure_out_dir(args.out_dir);
    io::write_moments_csv(out / "moments.csv", summary);
    std::ofstream file(out / "summary.json", std::ios::binary | std::ios::trunc);
    file << io::summary_json(summary);
    log_info("wrote " + (out / "moments.csv").string() + " and summary.json");
    return kExitOk;
}

int run_compare(const CommonArgs& args, const std::vector<std::string>& waveform_paths,
                const std::optional<std::string>& out_file) {
    const io::RunConfig run = io::load_config(args.config_path);
    std::vector<std::string> names;
    std::vector<ao::PairMetrics> metrics;
    for (const std::string& path : waveform_paths) {
        const io::WaveformFile wf = io::load_waveform(path);
        names.push_back(fs::path(path).filename().string());
        metrics.push_back(evaluate_waveform(wf, run));
    }

    std::ostringstream table;
    table << "waveform,sinr,mse,psl_db,isl_db\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        table << names[i] << ',' << io::format_double(metrics[i].sinr) << ','
              << io::format_double(metrics[i].mse) << ','
              << io::format_double(metrics[i].psl_db) << ','
              << io::format_double(metrics[i].isl_db) << '\n';
    }
    std::cout << table.str();
    if (out_file) {
        io::write_compare_csv(*out_file, names, metrics);
        log_info("wrote " + *out_file);
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Joint subpulse-code / mismatched-filter design for pulse "
                 "compression, with evaluation and scene simulation"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string waveform_path;
    std::vector<std::string> waveform_paths;
    std::optional<std::string> compare_out;
    bool evaluate_write = false;

    CLI::App* design = app.add_subcommand("design", "Design a code/filter pair");
    design->add_option("config", args.config_path, "Run configuration (JSON)")
        ->required();
    design->add_option("--seed", args.seed, "Override design.seed");
    design->add_option("--restarts", args.restarts, "Override design.restarts");
    design->add_option("--out", args.out_dir, "Output directory (default .)");

    CLI::App* evaluate = app.add_subcommand("evaluate", "Metrics for a waveform file");
    evaluate->add_option("waveform", waveform_path, "Waveform file")->required();
    evaluate->add_option("--config", args.config_path, "Profile configuration (JSON)")
        ->required();
    evaluate->add_flag("--write", evaluate_write, "Also write metrics.json to --out");
    evaluate->add_option("--out", args.out_dir, "Output directory (default .)");

    CLI::App* simulate = app.add_subcommand("simulate", "Moment-estimation simulation");
    simulate->add_option("waveform", waveform_path, "Waveform file")->required();
    simulate->add_option("--config", args.config_path,
                         "Configuration with radar and scene sections (JSON)")
        ->required();
    simulate->add_option("--trials", args.trials, "Override scene.trials");
    simulate->add_option("--seed", args.seed, "Simulation seed (default design.seed)");
    simulate->add_option("--out", args.out_dir, "Output directory (default .)");

    CLI::App* compare = app.add_subcommand("compare", "Side-by-side metrics table");
    compare->add_option("waveforms", waveform_paths, "Waveform files")
        ->required()
        ->expected(-1);
    compare->add_option("--config", args.config_path, "Profile configuration (JSON)")
        ->required();
    compare->add_option("--out", compare_out, "Also write the table as CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (design->parsed()) return run_design(args);
        if (evaluate->parsed()) return run_evaluate(args, waveform_path, evaluate_write);
        if (simulate->parsed()) return run_simulate(args, waveform_path);
        if (compare->parsed()) return run_compare(args, waveform_paths, compare_out);
    } catch (const ConfigError& e) {
        std::cerr << "pulsecomp: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const OrthogonalFilterError& e) {
        std::cerr << "pulsecomp: degenerate pair: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const DegenerateFilterError& e) {
        std::cerr << "pulsecomp: degenerate pair: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const SolverError& e) {
        std::cerr << "pulsecomp: solver error: " << e.what() << "\n";
        return kExitSolver;
    } catch (const ConditioningError& e) {
        std::cerr << "pulsecomp: solver error: " << e.what()
                  << " (condition estimate " << e.condition_estimate() << ")\n";
        return kExitSolver;
    } catch (const std::invalid_argument& e) {
        std::cerr << "pulsecomp: config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "pulsecomp: solver error: " << e.what() << "\n";
        return kExitSolver;
    }
    return kExitOk;
}
