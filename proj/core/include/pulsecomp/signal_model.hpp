// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file signal_model.hpp
 * @brief Fast-time pulse-compression signal model: shift operators, the
 *        interference-plus-noise covariance, the code-subproblem quadratic
 *        forms, and the SINR / MSE / gate-estimator formulas.
 *
 * Shift operators are applied matrix-free in O(L); dense shift matrices never
 * exist outside test oracles. Lags and gates are 0-based throughout.
 */

#include "pulsecomp/types.hpp"

namespace pulsecomp {

/**
 * @brief Applies the lag-k shift operator: result[m] = v[m-k], zero outside.
 *
 * Positive lag moves energy toward higher indices. Throws std::domain_error
 * when |lag| >= v.size().
 */
CVector shift_apply(const CVector& v, Eigen::Index lag);

/// Embeds the code in M leading and M trailing zeros.
PaddedCode zero_pad(const PhaseCode& code, Eigen::Index pad_len);

/**
 * @brief Correlation of the conjugated filter with the code at a given lag:
 *        w^H J_k x. Out-of-support lags return 0.
 */
Complex lag_correlation(const CVector& filter, const CVector& code, Eigen::Index lag);

/**
 * @brief Interference-plus-noise covariance
 *        R = sum_{k != 0} zeta_k (J_k x)(J_k x)^H + sigma^2 I,
 *        summed over all lags |k| <= length-1. Hermitian positive definite.
 *
 * The profile must cover lags up to length-1.
 */
CMatrix build_covariance(const PaddedCode& padded, const ClutterProfile& profile);

/**
 * @brief Quadratic forms of the code subproblem for a fixed filter.
 *
 * filter_core is the central N entries of the extended filter;
 * gain = core core^H;
 * interference = sum_{k != 0, |k| <= N-1} zeta_k (J_k^H core)(J_k^H core)^H
 *                + (sigma^2 / N) ||core||^2 I.
 *
 * Throws DegenerateFilterError when the central slice is the zero vector.
 */
QuadraticForms build_quadratic_forms(const MismatchedFilter& filter,
                                     const ClutterProfile& profile,
                                     Eigen::Index pad_len,
                                     Eigen::Index code_len);

/**
 * @brief Exact code-subproblem forms for an extended filter.
 *
 * Like build_quadratic_forms, but each lag term uses the length-N window of
 * the shifted full filter that the code actually correlates against, and the
 * noise term carries the full filter norm. The resulting ratio
 * x^H interference x / x^H gain x reproduces mse(zero_pad(x), filter) for
 * every pad length; at pad 0 the two builders coincide.
 */
QuadraticForms build_windowed_forms(const MismatchedFilter& filter,
                                    const ClutterProfile& profile,
                                    Eigen::Index pad_len,
                                    Eigen::Index code_len);

/// zeta_0 |w^H x|^2 / (w^H R w). Throws OrthogonalFilterError when w^H x ~ 0.
double sinr(const PaddedCode& padded, const MismatchedFilter& filter,
            const ClutterProfile& profile);

/// (w^H R w) / |w^H x|^2, the estimator mean square error. sinr * mse = zeta_0.
double mse(const PaddedCode& padded, const MismatchedFilter& filter,
           const ClutterProfile& profile);

/**
 * @brief Instrumental-variable estimate of the center-gate reflectivity:
 *        sample / (w^H x).
 */
Complex estimate_reflectivity(Complex sample, const MismatchedFilter& filter,
                              const PaddedCode& padded);

/**
 * @brief Filter output at one range gate: w^H applied to the length-(2M+N)
 *        window of `received` starting at sample index `gate`.
 *
 * Throws std::domain_error when the window falls outside `received`.
 */
Complex filter_gate_output(const CVector& received, const MismatchedFilter& filter,
                           Eigen::Index gate);

} // namespace pulsecomp
