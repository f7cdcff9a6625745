// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file scene.hpp
 * @brief Synthetic weather-scene simulator: per-gate slow-time scatter
 *        sequences, echo synthesis by convolution with the transmit code,
 *        mismatched-filter compression, and pulse-pair moment estimation.
 *
 * Gate model: a random phasor per gate — constant modulus sqrt(zeta), a
 * uniform random initial phase drawn per realization, and a deterministic
 * Doppler rotation from the gate's constant radial velocity. Gates are
 * mutually independent; E|alpha|^2 = zeta exactly. There is no
 * spectrum-width broadening; the pulse-to-pulse phase progression is exact
 * and the per-realization power estimate is unbiased.
 */

#include <cstdint>

#include "pulsecomp/types.hpp"

namespace pulsecomp::scene {

struct RadarParams {
    double wavelength;        ///< meters, > 0
    double pri;               ///< pulse repetition interval, seconds, > 0
    int n_pulses;             ///< >= 2
    double calibration_db = 0.0; ///< added to 10 log10(power) for dBZ

    void validate() const;

    /// Unambiguous velocity interval is |v| < nyquist_velocity().
    double nyquist_velocity() const { return wavelength / (4.0 * pri); }
};

/// Ground truth plus the realized scatter coefficients (gates x pulses).
struct RangeScene {
    CMatrix alpha;            ///< per-gate, per-pulse scatter coefficients
    RVector truth_zeta;       ///< per-gate power, linear units
    RVector truth_velocity;   ///< per-gate radial velocity, m/s

    Eigen::Index gates() const { return alpha.rows(); }
    Eigen::Index pulses() const { return alpha.cols(); }
};

/// Per-gate moment estimates; zero-power gates carry -inf dBZ and NaN velocity.
struct MomentEstimates {
    RVector reflectivity_dbz;
    RVector velocity;
};

/// Aggregate truth-vs-estimate errors over the defined gates.
struct ErrorStats {
    double dbz_bias = 0.0;
    double dbz_rmse = 0.0;
    double vel_bias = 0.0;
    double vel_rmse = 0.0;
    RVector dbz_residual; ///< per-gate est - truth (NaN where undefined)
    RVector vel_residual;
    Eigen::Index valid_gates = 0;
};

/// Draws a scene realization. Same (inputs, seed) gives identical bits.
RangeScene generate_scene(const RVector& truth_zeta, const RVector& truth_velocity,
                          const RadarParams& radar, std::uint64_t seed);

/**
 * @brief Uncompressed fast-time echo: per pulse, the linear convolution of
 *        the gate coefficients with the padded code. Rows are fast-time
 *        samples (gates + code length - 1), columns pulses.
 */
CMatrix synthesize_echo(const RangeScene& scene, const PaddedCode& padded);

/// Adds circular complex Gaussian noise CN(0, noise_power) per sample.
void add_noise(CMatrix& samples, double noise_power, std::uint64_t seed);

/**
 * @brief Pulse compression: correlates each pulse with the conjugated filter
 *        at every gate and normalizes by w^H x so a unit scatterer maps to 1.
 *        Output is gates x pulses.
 */
CMatrix compress(const CMatrix& echo, const MismatchedFilter& filter,
                 const PaddedCode& padded);

/**
 * @brief Reflectivity from mean power (dBZ with calibration offset) and
 *        radial velocity from the lag-1 pulse-pair phase.
 */
MomentEstimates estimate_moments(const CMatrix& compressed, const RadarParams& radar);

/// Truth-vs-estimate error record; undefined gates are excluded.
ErrorStats compare_profiles(const RangeScene& truth, const MomentEstimates& est,
                            const RadarParams& radar);

/// Aggregated multi-trial simulation results for one code/filter pair.
struct SimulationSummary {
    RVector truth_dbz;
    RVector mean_est_dbz;   ///< per-gate mean over defined trials
    RVector truth_velocity;
    RVector mean_est_velocity;
    RVector dbz_rmse_per_gate; ///< per-gate RMSE across trials (NaN if undefined)
    RVector vel_rmse_per_gate;
    double dbz_bias = 0.0;  ///< over all (gate, trial) residuals
    double dbz_rmse = 0.0;
    double vel_bias = 0.0;
    double vel_rmse = 0.0;
    int trials = 0;
};

/**
 * @brief Runs `trials` independent seeded scene realizations through
 *        synthesize -> add_noise -> compress -> estimate_moments and
 *        aggregates errors. noise_power is the per-sample echo noise.
 */
SimulationSummary run_trials(const PhaseCode& code, const MismatchedFilter& filter,
                             int pad_length, const RVector& truth_zeta,
                             const RVector& truth_velocity, const RadarParams& radar,
                             double noise_power, int trials, std::uint64_t seed);

} // namespace pulsecomp::scene
