// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file admm.hpp
 * @brief ADMM solver for the constant-modulus fractional code subproblem
 *
 *            minimize_x  (x^H P x) / (x^H Q x)   s.t. |x_i| = 1,
 *
 * split through slack copies (code = slack_num = slack_den) with scaled
 * duals. One sweep is: phase projection of the code, a Hermitian
 * positive-definite solve for the numerator slack, a rank-one spectral step
 * with a quartic magnitude subproblem for the denominator slack, then dual
 * ascent.
 */

#include <utility>
#include <vector>

#include "pulsecomp/types.hpp"

namespace pulsecomp::admm {

struct AdmmParams {
    /// Penalty on code == slack_num. Inside solve_code_subproblem the
    /// penalties are multiplied by ||P||_F / ||filter_core||^2, so they act
    /// as dimensionless factors on the problem's own scale; the primitive
    /// update functions use them verbatim.
    double rho1 = 1.0;
    double rho2 = 1.0;        ///< penalty on code == slack_den
    int max_iters = 500;
    double primal_tol = 1e-6; ///< stop when both residuals < primal_tol * sqrt(N)

    void validate() const;
};

/// Solver variables. `code` stays unimodular after every sweep.
struct AdmmState {
    CVector code;       ///< unimodular primal iterate
    CVector slack_num;  ///< slack entering the interference (numerator) form
    CVector slack_den;  ///< slack entering the gain (denominator) form
    CVector dual_num;   ///< scaled dual for code == slack_num
    CVector dual_den;   ///< scaled dual for code == slack_den
};

struct AdmmTrace {
    std::vector<double> objective;     ///< (y^H P y)/(z^H Q z) per sweep
    std::vector<double> residual_num;  ///< ||slack_num - code|| per sweep
    std::vector<double> residual_den;  ///< ||slack_den - code|| per sweep
    int iterations = 0;
    bool converged = false;            ///< residual tolerance reached
    bool safeguard_triggered = false;  ///< endpoint rejected, initial code kept
};

/**
 * @brief Phase projection: code_i = exp(j arg(a_i)) with
 *        a = 2/(rho1+rho2) [rho1 (slack_num + dual_num) + rho2 (slack_den + dual_den)].
 *        Exactly-zero entries of a map to 1.
 */
CVector update_code(const AdmmState& state, const AdmmParams& params);

/**
 * @brief Numerator-slack step: solves the Hermitian positive-definite system
 *        (P / (z^H Q z) + rho1/2 I) y = -b/2 with b = rho1 (dual_num - code).
 *
 * Throws DegenerateSlackError when z^H Q z <= 1e-14 ||z||^2 ||Q|| (the
 * denominator slack is orthogonal to the filter core); the solve loop
 * perturbs and retries.
 */
CVector update_slack_num(const AdmmState& state, const QuadraticForms& forms,
                         const AdmmParams& params);

/**
 * @brief Denominator-slack step. Uses the rank-one spectral frame of the
 *        scaled gain form (leading eigenvalue ||w||^2 / (y^H P y), eigenvector
 *        w/||w||): the in-frame magnitude comes from the quartic subproblem,
 *        the orthogonal complement has the closed form -c/rho2 with
 *        c = rho2 (dual_den - code).
 *
 * Throws DegenerateSlackError when y^H P y vanishes numerically.
 */
CVector update_slack_den(const AdmmState& state, const QuadraticForms& forms,
                         const AdmmParams& params);

/// Dual ascent: dual_num += slack_num - code; dual_den += slack_den - code.
void update_duals(AdmmState& state);

/**
 * @brief One full sweep in place (code, slacks, duals). A degenerate slack
 *        step is retried once after nudging the offending slack toward the
 *        filter core; a second failure propagates.
 * @return (||slack_num - code||, ||slack_den - code||) after the sweep.
 */
std::pair<double, double> sweep(AdmmState& state, const QuadraticForms& forms,
                                const AdmmParams& params);

/// x^H P x / (x^H Q x); +infinity when the gain form value vanishes.
double ratio_objective(const QuadraticForms& forms, const CVector& code);

/**
 * @brief Full ADMM loop from a feasible start (slacks = code, duals = 0).
 *
 * Returns the final unimodular code and the per-sweep trace. The endpoint is
 * safeguarded: when it would increase the true ratio objective relative to
 * `init`, `init` is returned unchanged and the trace is flagged.
 */
std::pair<PhaseCode, AdmmTrace> solve_code_subproblem(const QuadraticForms& forms,
                                                      const PhaseCode& init,
                                                      const AdmmParams& params);

} // namespace pulsecomp::admm
