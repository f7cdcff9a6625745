// SPDX-License-Identifier: Apache-2.0
#pragma once

/**
 * @file quartic.hpp
 * @brief Scalar quartic optimality condition of the ADMM denominator-slack
 *        step: penalty * t^4 - linear_mag * t^3 - 2/eigenvalue = 0, t > 0.
 */

#include <vector>

namespace pulsecomp::quartic {

/// Coefficients of the magnitude subproblem. The negative constant term
/// guarantees at least one positive real root.
struct QuarticProblem {
    double penalty;     ///< rho2 > 0, quartic coefficient
    double linear_mag;  ///< >= 0, cubic coefficient magnitude
    double eigenvalue;  ///< > 0, sole nonzero eigenvalue of the scaled gain form

    void validate() const;
};

/// Magnitude objective g(t) = 1/(eigenvalue t^2) + (penalty/2) t^2 - linear_mag t.
double magnitude_objective(const QuarticProblem& p, double t);

/// Quartic residual penalty*t^4 - linear_mag*t^3 - 2/eigenvalue at t.
double residual(const QuarticProblem& p, double t);

/**
 * @brief All positive real roots, via companion-matrix eigenvalues followed
 *        by Newton polishing. Each root r satisfies
 *        |residual(r)| < 1e-10 * max(1, penalty * r^4).
 */
std::vector<double> positive_real_roots(const QuarticProblem& p);

/**
 * @brief The positive root minimizing the magnitude objective; ties broken
 *        toward the larger root.
 */
double optimal_magnitude(const QuarticProblem& p);

} // namespace pulsecomp::quartic
