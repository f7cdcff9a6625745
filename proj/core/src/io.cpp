// SPDX-License-Identifier: Apache-2.0
#include "pulsecomp/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

#include "pulsecomp/errors.hpp"

namespace pulsecomp::io {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open file: " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path.string());
    }
    out << content;
}

json parse(const std::string& text, const std::string& what) {
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded()) {
        throw ConfigError(what + ": not valid JSON");
    }
    return parsed;
}

// Typed field accessors with field-path diagnostics.
template <typename T>
T require(const json& node, const std::string& section, const std::string& key) {
    if (!node.contains(key)) {
        throw ConfigError(section + "." + key + ": missing required field");
    }
    try {
        return node.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(section + "." + key + ": wrong type");
    }
}

template <typename T>
T optional_field(const json& node, const std::string& section, const std::string& key,
                 T fallback) {
    if (!node.contains(key)) return fallback;
    try {
        return node.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(section + "." + key + ": wrong type");
    }
}

void check(bool ok, const std::string& field, const std::string& requirement) {
    if (!ok) {
        throw ConfigError(field + ": " + requirement);
    }
}

} // namespace

ClutterProfile ProfileSpec::materialize(int required_lag) const {
    if (kind == Kind::Uniform) {
        return ClutterProfile::uniform(required_lag, zeta0, noise_power);
    }
    const int max_lag = static_cast<int>(zeta.size() / 2);
    if (max_lag < required_lag) {
        throw ConfigError("profile.zeta: covers lags up to " + std::to_string(max_lag) +
                          " but the run needs " + std::to_string(required_lag));
    }
    return ClutterProfile(zeta, noise_power);
}

ao::DesignConfig RunConfig::design_config() const {
    if (!design.present) {
        throw ConfigError("design: section required for this command");
    }
    const int max_lag = 2 * design.pad_length + design.code_length - 1;
    ao::DesignConfig cfg{design.code_length,
                         design.pad_length,
                         profile.materialize(max_lag),
                         admm,
                         design.outer_iters,
                         design.outer_tol,
                         design.seed,
                         design.restarts};
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    const json root = parse(bytes, path.string());

    RunConfig cfg;
    cfg.config_hash = fnv1a_hex(bytes);

    if (root.contains("design")) {
        const json& node = root.at("design");
        cfg.design.present = true;
        cfg.design.code_length = require<int>(node, "design", "code_length");
        cfg.design.pad_length = optional_field<int>(node, "design", "pad_length", 0);
        cfg.design.outer_iters = optional_field<int>(node, "design", "outer_iters", 100);
        cfg.design.outer_tol = optional_field<double>(node, "design", "outer_tol", 1e-6);
        cfg.design.seed = optional_field<std::uint64_t>(node, "design", "seed", 0);
        cfg.design.restarts = optional_field<int>(node, "design", "restarts", 3);
        check(cfg.design.code_length >= 2, "design.code_length", "must be >= 2");
        check(cfg.design.pad_length >= 0, "design.pad_length", "must be >= 0");
        check(cfg.design.outer_iters >= 1, "design.outer_iters", "must be >= 1");
        check(cfg.design.outer_tol > 0.0, "design.outer_tol", "must be > 0");
        check(cfg.design.restarts >= 1, "design.restarts", "must be >= 1");
    }

    if (root.contains("admm")) {
        const json& node = root.at("admm");
        cfg.admm.rho1 = optional_field<double>(node, "admm", "rho1", 1.0);
        cfg.admm.rho2 = optional_field<double>(node, "admm", "rho2", 1.0);
        cfg.admm.max_iters = optional_field<int>(node, "admm", "max_iters", 500);
        cfg.admm.primal_tol = optional_field<double>(node, "admm", "primal_tol", 1e-6);
        check(cfg.admm.rho1 > 0.0, "admm.rho1", "must be > 0");
        check(cfg.admm.rho2 > 0.0, "admm.rho2", "must be > 0");
        check(cfg.admm.max_iters >= 1, "admm.max_iters", "must be >= 1");
        check(cfg.admm.primal_tol > 0.0, "admm.primal_tol", "must be > 0");
    }

    {
        check(root.contains("profile"), "profile", "section is required");
        const json& node = root.at("profile");
        const std::string type = optional_field<std::string>(node, "profile", "type", "uniform");
        cfg.profile.noise_power = require<double>(node, "profile", "noise_power");
        check(cfg.profile.noise_power > 0.0, "profile.noise_power", "must be > 0");
        if (type == "uniform") {
            cfg.profile.kind = ProfileSpec::Kind::Uniform;
            cfg.profile.zeta0 = require<double>(node, "profile", "zeta0");
            check(cfg.profile.zeta0 > 0.0, "profile.zeta0", "must be > 0");
        } else if (type == "custom") {
            cfg.profile.kind = ProfileSpec::Kind::Custom;
            cfg.profile.zeta = require<std::vector<double>>(node, "profile", "zeta");
            check(!cfg.profile.zeta.empty() && cfg.profile.zeta.size() % 2 == 1,
                  "profile.zeta", "must have odd length 2L+1");
            for (double z : cfg.profile.zeta) {
                check(z >= 0.0, "profile.zeta", "values must be >= 0");
            }
            check(cfg.profile.zeta[cfg.profile.zeta.size() / 2] > 0.0,
                  "profile.zeta", "center lag value must be > 0");
        } else {
            throw ConfigError("profile.type: must be \"uniform\" or \"custom\"");
        }
    }

    if (root.contains("radar")) {
        const json& node = root.at("radar");
        cfg.radar_present = true;
        cfg.radar.wavelength = require<double>(node, "radar", "wavelength");
        cfg.radar.pri = require<double>(node, "radar", "pri");
        cfg.radar.n_pulses = require<int>(node, "radar", "n_pulses");
        cfg.radar.calibration_db =
            optional_field<double>(node, "radar", "calibration_db", 0.0);
        check(cfg.radar.wavelength > 0.0, "radar.wavelength", "must be > 0");
        check(cfg.radar.pri > 0.0, "radar.pri", "must be > 0");
        check(cfg.radar.n_pulses >= 2, "radar.n_pulses", "must be >= 2");
    }

    if (root.contains("scene")) {
        const json& node = root.at("scene");
        cfg.scene.present = true;
        const auto zeta = require<std::vector<double>>(node, "scene", "truth_zeta");
        const auto vel = require<std::vector<double>>(node, "scene", "velocity");
        check(!zeta.empty(), "scene.truth_zeta", "must be nonempty");
        check(zeta.size() == vel.size(), "scene.velocity",
              "length must match scene.truth_zeta");
        for (double z : zeta) {
            check(z >= 0.0, "scene.truth_zeta", "values must be >= 0");
        }
        cfg.scene.truth_zeta = Eigen::Map<const RVector>(zeta.data(),
                                                         static_cast<Eigen::Index>(zeta.size()));
        cfg.scene.velocity = Eigen::Map<const RVector>(vel.data(),
                                                       static_cast<Eigen::Index>(vel.size()));
        cfg.scene.trials = optional_field<int>(node, "scene", "trials", 1);
        check(cfg.scene.trials >= 1, "scene.trials", "must be >= 1");
    }

    return cfg;
}

PhaseCode WaveformFile::code() const {
    RVector p = Eigen::Map<const RVector>(phases.data(),
                                          static_cast<Eigen::Index>(phases.size()));
    return PhaseCode::from_phases(p);
}

MismatchedFilter WaveformFile::mismatched_filter() const {
    CVector w(static_cast<Eigen::Index>(filter.size()));
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        w[i] = filter[static_cast<std::size_t>(i)];
    }
    return MismatchedFilter(std::move(w));
}

WaveformFile WaveformFile::from_result(const ao::DesignResult& result, int pad_length,
                                       const std::string& config_hash,
                                       std::uint64_t seed) {
    WaveformFile wf;
    wf.code_length = static_cast<int>(result.code.size());
    wf.pad_length = pad_length;
    const RVector phases = result.code.phases();
    wf.phases.assign(phases.data(), phases.data() + phases.size());
    wf.filter.assign(result.filter.entries().data(),
                     result.filter.entries().data() + result.filter.size());
    wf.config_hash = config_hash;
    wf.seed = seed;
    wf.timestamp = provenance_timestamp();
    return wf;
}

void save_waveform(const WaveformFile& wf, const std::filesystem::path& path) {
    json filter_pairs = json::array();
    for (const Complex& c : wf.filter) {
        filter_pairs.push_back(json::array({c.real(), c.imag()}));
    }
    const json root = {
        {"schema_version", wf.schema_version},
        {"code_length", wf.code_length},
        {"pad_length", wf.pad_length},
        {"phases", wf.phases},
        {"filter", filter_pairs},
        {"provenance",
         {{"config_hash", wf.config_hash}, {"seed", wf.seed}, {"timestamp", wf.timestamp}}},
    };
    write_file(path, root.dump(2) + "\n");
}

WaveformFile load_waveform(const std::filesystem::path& path) {
    const json root = parse(read_file(path), path.string());
    WaveformFile wf;
    try {
        wf.schema_version = require<int>(root, "waveform", "schema_version");
        if (wf.schema_version != 1) {
            throw ConfigError("waveform.schema_version: unsupported version " +
                              std::to_string(wf.schema_version));
        }
        wf.code_length = require<int>(root, "waveform", "code_length");
        wf.pad_length = require<int>(root, "waveform", "pad_length");
        wf.phases = require<std::vector<double>>(root, "waveform", "phases");
        const json filter_pairs = root.at("filter");
        if (!filter_pairs.is_array()) {
            throw ConfigError("waveform.filter: must be an array of [re, im] pairs");
        }
        for (const json& pair : filter_pairs) {
            if (!pair.is_array() || pair.size() != 2) {
                throw ConfigError("waveform.filter: entries must be [re, im] pairs");
            }
            wf.filter.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
        }
        const json& prov = root.at("provenance");
        wf.config_hash = require<std::string>(prov, "waveform.provenance", "config_hash");
        wf.seed = require<std::uint64_t>(prov, "waveform.provenance", "seed");
        wf.timestamp = require<std::string>(prov, "waveform.provenance", "timestamp");
    } catch (const json::exception&) {
        throw ConfigError(path.string() + ": malformed waveform file");
    }
    if (wf.code_length < 2) {
        throw ConfigError("waveform.code_length: must be >= 2");
    }
    if (wf.pad_length < 0) {
        throw ConfigError("waveform.pad_length: must be >= 0");
    }
    if (static_cast<int>(wf.phases.size()) != wf.code_length) {
        throw ConfigError("waveform.phases: length must equal code_length");
    }
    if (static_cast<int>(wf.filter.size()) != wf.code_length + 2 * wf.pad_length) {
        throw ConfigError("waveform.filter: length must equal 2*pad_length + code_length");
    }
    return wf;
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buf);
}

std::string provenance_timestamp() {
    const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
    if (epoch == nullptr) {
        return "unset";
    }
    char* end = nullptr;
    const long long seconds = std::strtoll(epoch, &end, 10);
    if (end == epoch || *end != '\0') {
        return "unset";
    }
    const std::time_t t = static_cast<std::time_t>(seconds);
    std::tm utc{};
    gmtime_r(&t, &utc);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
    return std::string(buf);
}

void write_convergence_csv(const std::filesystem::path& path,
                           const std::vector<double>& mse_trace, double zeta0) {
    std::ostringstream out;
    out << "iter,mse,sinr_db\n";
    for (std::size_t i = 0; i < mse_trace.size(); ++i) {
        const double sinr_db = 10.0 * std::log10(zeta0 / mse_trace[i]);
        out << i << ',' << format_double(mse_trace[i]) << ',' << format_double(sinr_db)
            << '\n';
    }
    write_file(path, out.str());
}

void write_moments_csv(const std::filesystem::path& path,
                       const scene::SimulationSummary& summary) {
    std::ostringstream out;
    out << "gate,truth_dbz,est_dbz,truth_v,est_v\n";
    for (Eigen::Index g = 0; g < summary.truth_dbz.size(); ++g) {
        out << g << ',' << format_double(summary.truth_dbz[g]) << ','
            << format_double(summary.mean_est_dbz[g]) << ','
            << format_double(summary.truth_velocity[g]) << ','
            << format_double(summary.mean_est_velocity[g]) << '\n';
    }
    write_file(path, out.str());
}

std::string metrics_json(const ao::PairMetrics& metrics) {
    const json root = {
        {"sinr", metrics.sinr},
        {"mse", metrics.mse},
        {"psl_db", metrics.psl_db},
        {"isl_db", metrics.isl_db},
    };
    return root.dump(2) + "\n";
}

std::string summary_json(const scene::SimulationSummary& summary) {
    const json root = {
        {"dbz_bias", summary.dbz_bias},
        {"dbz_rmse", summary.dbz_rmse},
        {"vel_rmse", summary.vel_rmse},
    };
    return root.dump(2) + "\n";
}

void write_compare_csv(const std::filesystem::path& path,
                       const std::vector<std::string>& names,
                       const std::vector<ao::PairMetrics>& metrics) {
    if (names.size() != metrics.size()) {
        throw std::invalid_argument("write_compare_csv: names/metrics size mismatch");
    }
    std::ostringstream out;
    out << "waveform,sinr,mse,psl_db,isl_db\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        out << names[i] << ',' << format_double(metrics[i].sinr) << ','
            << format_double(metrics[i].mse) << ',' << format_double(metrics[i].psl_db)
            << ',' << format_double(metrics[i].isl_db) << '\n';
    }
    write_file(path, out.str());
}

LogLevel log_level() {
    const char* env = std::getenv("PULSECOMP_LOG");
    if (env == nullptr) return LogLevel::Info;
    const std::string value(env);
    if (value == "quiet") return LogLevel::Quiet;
    if (value == "debug") return LogLevel::Debug;
    return LogLevel::Info;
}

} // namespace pulsecomp::io
