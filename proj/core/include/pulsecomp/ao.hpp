// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file ao.hpp
 * @brief Outer alternating optimization: closed-form filter update against
 *        the current code, ADMM code update against the current filter,
 *        repeated until the estimation MSE plateaus. Also the evaluation
 *        metric bundle (SINR, MSE, PSL, ISL).
 */

#include <cstdint>
#include <vector>

#include "pulsecomp/admm.hpp"
#include "pulsecomp/types.hpp"

namespace pulsecomp::ao {

struct DesignConfig {
    int code_length;                ///< N >= 2
    int pad_length;                 ///< M >= 0; filter length is 2M + N
    ClutterProfile profile;         ///< must cover lags up to 2M + N - 1
    admm::AdmmParams admm = {};
    int outer_iters = 100;
    double outer_tol = 1e-6;        ///< stop on relative MSE change below this
    std::uint64_t seed = 0;
    int restarts = 3;

    void validate() const;
};

struct DesignResult {
    PhaseCode code;
    MismatchedFilter filter;
    std::vector<double> objective_trace; ///< MSE after every filter update; nonincreasing
    double sinr = 0.0;
    double mse = 0.0;
    bool converged = false;
};

/**
 * @brief Closed-form filter update: solves R w = x for the padded code's
 *        interference covariance R. Minimizes w^H R w / |w^H x|^2 over all
 *        filters. Throws ConditioningError when the solve cannot reach a
 *        1e-10 relative residual.
 */
MismatchedFilter update_filter(const PaddedCode& padded, const ClutterProfile& profile);

/**
 * @brief Double-loop joint design from `restarts` random unimodular starts.
 *
 * Each restart alternates the filter update with the safeguarded ADMM code
 * update; a code step is only accepted when it does not increase the MSE
 * under the current filter, so the recorded trace is nonincreasing. Returns
 * the best restart (lowest final MSE, earliest seed on ties). Deterministic
 * for a fixed config. Failed restarts are skipped unless all fail.
 */
DesignResult design(const DesignConfig& cfg);

/// Sidelobe and estimation quality of a code/filter pair.
struct PairMetrics {
    double sinr = 0.0;
    double mse = 0.0;
    double psl_db = 0.0; ///< 10 log10(peak power / max sidelobe power)
    double isl_db = 0.0; ///< 10 log10(total sidelobe power / peak power)
};

/**
 * @brief Cross-correlation |w^H J_k x| levels for all lags k = -(L-1)..L-1,
 *        returned with lag 0 at index L-1.
 */
CVector cross_correlation(const PaddedCode& padded, const MismatchedFilter& filter);

/// Metric bundle for a pair under a profile. Throws OrthogonalFilterError for
/// an orthogonal pair.
PairMetrics evaluate_pair(const PhaseCode& code, const MismatchedFilter& filter,
                          const ClutterProfile& profile, int pad_length);

} // namespace pulsecomp::ao
