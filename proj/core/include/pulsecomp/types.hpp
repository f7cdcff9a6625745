// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file types.hpp
 * @brief Value types of the fast-time signal model: constant-modulus codes,
 *        zero-padded codes, mismatched receive filters, clutter profiles and
 *        the quadratic forms of the code subproblem.
 *
 * All types are immutable after construction and safe to share across
 * threads. Constructors validate their invariants and throw on violation.
 */

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "pulsecomp/errors.hpp"

namespace pulsecomp {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Absolute tolerance on |entry| = 1 for constant-modulus codes.
inline constexpr double kUnimodularTol = 1e-12;

/**
 * @brief Transmit subpulse code with unit-modulus complex entries.
 *
 * Entries satisfy |x_i| = 1 within 1e-12 absolute; length >= 2.
 */
class PhaseCode {
public:
    /// Validates unit modulus of every entry.
    explicit PhaseCode(CVector entries);

    /// Builds the code exp(j*phase_i) from phases in radians.
    static PhaseCode from_phases(const RVector& phases);

    const CVector& entries() const noexcept { return entries_; }
    Eigen::Index size() const noexcept { return entries_.size(); }

    /// Phase of each entry, radians in (-pi, pi].
    RVector phases() const;

private:
    CVector entries_;
};

/**
 * @brief Code embedded in a window of M leading and M trailing zeros.
 *
 * Length is 2M + N. The outer 2M entries are exactly zero; the middle N are
 * unimodular.
 */
class PaddedCode {
public:
    /// Validates the zero pads and the unimodular core.
    PaddedCode(CVector entries, Eigen::Index pad_len);

    const CVector& entries() const noexcept { return entries_; }
    Eigen::Index size() const noexcept { return entries_.size(); }
    Eigen::Index pad_len() const noexcept { return pad_len_; }
    Eigen::Index code_len() const noexcept { return entries_.size() - 2 * pad_len_; }

    /// The middle N (unimodular) entries.
    CVector core() const { return entries_.segment(pad_len_, code_len()); }

private:
    CVector entries_;
    Eigen::Index pad_len_;
};

/**
 * @brief Receive filter of extended length 2M + N. Never the zero vector.
 */
class MismatchedFilter {
public:
    explicit MismatchedFilter(CVector entries);

    const CVector& entries() const noexcept { return entries_; }
    Eigen::Index size() const noexcept { return entries_.size(); }

private:
    CVector entries_;
};

/**
 * @brief Lag-indexed reflectivity powers zeta_k plus noise power sigma^2.
 *
 * Stores zeta for lags -max_lag()..max_lag(); all values nonnegative,
 * zeta(0) > 0 and noise_power > 0. Powers are linear units.
 */
class ClutterProfile {
public:
    /// @param zeta values for lags -L..L in order; size must be odd (2L+1).
    ClutterProfile(std::vector<double> zeta, double noise_power);

    /// Constant profile zeta_k = zeta0 for all |k| <= max_lag.
    static ClutterProfile uniform(int max_lag, double zeta0, double noise_power);

    double zeta(int lag) const;
    double zeta0() const { return zeta_[static_cast<std::size_t>(max_lag_)]; }
    int max_lag() const noexcept { return max_lag_; }
    double noise_power() const noexcept { return noise_power_; }

    /// True when every lag in {-(required)..required} is covered.
    bool covers(int required_lag) const noexcept { return max_lag_ >= required_lag; }

private:
    std::vector<double> zeta_; // index k + max_lag_
    int max_lag_;
    double noise_power_;
};

/**
 * @brief Quadratic forms of the fractional code subproblem.
 *
 * `interference` (N x N, Hermitian PSD) weights the sidelobe-plus-noise power
 * of a candidate code; `gain` = filter_core * filter_core^H (Hermitian,
 * rank 1) is its processing-gain counterpart. `filter_core` is the central
 * length-N slice of the extended filter.
 */
struct QuadraticForms {
    CMatrix interference; // P
    CMatrix gain;         // Q = filter_core filter_core^H
    CVector filter_core;  // w, central slice of the extended filter
};

} // namespace pulsecomp
