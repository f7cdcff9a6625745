// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file io.hpp
 * @brief Configuration loading/validation, waveform persistence and CSV/JSON
 *        result export. The only part of the library touching the filesystem.
 *
 * Waveform files round-trip bit-exactly: phases and filter coefficients are
 * serialized with shortest round-trip decimal representation, and re-saving a
 * loaded file reproduces it byte for byte.
 */

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pulsecomp/ao.hpp"
#include "pulsecomp/scene.hpp"
#include "pulsecomp/types.hpp"

namespace pulsecomp::io {

/// Clutter profile description from configuration; materialized per length.
struct ProfileSpec {
    enum class Kind { Uniform, Custom };
    Kind kind = Kind::Uniform;
    double zeta0 = 1.0;              ///< uniform value
    std::vector<double> zeta;        ///< custom lag values, odd size
    double noise_power = 1.0;

    /// Builds a profile covering lags up to `required_lag`.
    ClutterProfile materialize(int required_lag) const;
};

struct DesignSection {
    bool present = false;
    int code_length = 0;
    int pad_length = 0;
    int outer_iters = 100;
    double outer_tol = 1e-6;
    std::uint64_t seed = 0;
    int restarts = 3;
};

struct SceneSection {
    bool present = false;
    RVector truth_zeta;
    RVector velocity;
    int trials = 1;
};

/// Parsed and validated run configuration (one JSON file drives all commands).
struct RunConfig {
    DesignSection design;
    admm::AdmmParams admm;
    ProfileSpec profile;
    bool radar_present = false;
    scene::RadarParams radar{0.1, 1e-3, 64, 0.0};
    SceneSection scene;
    std::string config_hash; ///< fnv1a-64 of the raw config bytes

    /// Materializes the full design configuration; throws ConfigError when
    /// the design section is missing.
    ao::DesignConfig design_config() const;
};

/// Loads and validates a config file. Throws ConfigError naming the field.
RunConfig load_config(const std::filesystem::path& path);

/// Persisted code/filter pair with provenance.
struct WaveformFile {
    int schema_version = 1;
    int code_length = 0;
    int pad_length = 0;
    std::vector<double> phases;           ///< radians, length N
    std::vector<Complex> filter;          ///< length 2M + N
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string timestamp;                ///< from SOURCE_DATE_EPOCH, else "unset"

    PhaseCode code() const;
    MismatchedFilter mismatched_filter() const;

    static WaveformFile from_result(const ao::DesignResult& result, int pad_length,
                                    const std::string& config_hash, std::uint64_t seed);
};

void save_waveform(const WaveformFile& wf, const std::filesystem::path& path);
WaveformFile load_waveform(const std::filesystem::path& path);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// fnv1a-64 hex digest of a byte string.
std::string fnv1a_hex(const std::string& bytes);

/// ISO-8601 UTC from the SOURCE_DATE_EPOCH environment variable, or "unset";
/// keeps seeded runs byte-identical.
std::string provenance_timestamp();

/// Columns: iter,mse,sinr_db. sinr_db derives from zeta0/mse.
void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<double>& mse_trace, double zeta0);

/// Columns: gate,truth_dbz,est_dbz,truth_v,est_v.
void write_moments_csv(const std::filesystem::path& path,
                       const scene::SimulationSummary& summary);

std::string metrics_json(const ao::PairMetrics& metrics);
std::string summary_json(const scene::SimulationSummary& summary);

/// Columns: waveform,sinr,mse,psl_db,isl_db; one row per input pair.
void write_compare_csv(const std::filesystem::path& path,
                       const std::vector<std::string>& names,
                       const std::vector<ao::PairMetrics>& metrics);

/// Log verbosity from the PULSECOMP_LOG environment variable.
enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };
LogLevel log_level();

} // namespace pulsecomp::io
