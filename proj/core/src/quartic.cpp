// SPDX-License-Identifier: Apache-2.0
#include "pulsecomp/quartic.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pulsecomp::quartic {

namespace {

// |Im| below this (relative to |Re|) counts as a real eigenvalue.
bool is_real(std::complex<double> z) {
    return std::abs(z.imag()) < 1e-9 * (1.0 + std::abs(z.real()));
}

double polish(const QuarticProblem& p, double t) {
    for (int i = 0; i < 5; ++i) {
        const double f = residual(p, t);
        const double df = 4.0 * p.penalty * t * t * t - 3.0 * p.linear_mag * t * t;
        if (df == 0.0) break;
        const double step = f / df;
        const double next = t - step;
        if (!(next > 0.0) || !std::isfinite(next)) break;
        t = next;
        if (std::abs(step) < 1e-16 * (1.0 + std::abs(t))) break;
    }
    return t;
}

} // namespace

void QuarticProblem::validate() const {
    if (!(penalty > 0.0)) {
        throw std::invalid_argument("QuarticProblem: penalty must be > 0");
    }
    if (!(linear_mag >= 0.0)) {
        throw std::invalid_argument("QuarticProblem: linear_mag must be >= 0");
    }
    if (!(eigenvalue > 0.0)) {
        throw std::invalid_argument("QuarticProblem: eigenvalue must be > 0");
    }
}

double magnitude_objective(const QuarticProblem& p, double t) {
    return 1.0 / (p.eigenvalue * t * t) + 0.5 * p.penalty * t * t - p.linear_mag * t;
}

double residual(const QuarticProblem& p, double t) {
    const double t2 = t * t;
    return p.penalty * t2 * t2 - p.linear_mag * t2 * t - 2.0 / p.eigenvalue;
}

std::vector<double> positive_real_roots(const QuarticProblem& p) {
    p.validate();

    // Monic form t^4 + a3 t^3 + a2 t^2 + a1 t + a0.
    const double a3 = -p.linear_mag / p.penalty;
    const double a0 = -2.0 / (p.penalty * p.eigenvalue);

    Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
    companion(0, 3) = -a0;
    companion(1, 0) = 1.0;
    companion(2, 1) = 1.0;
    companion(3, 2) = 1.0;
    companion(3, 3) = -a3;

    const Eigen::EigenSolver<Eigen::Matrix4d> solver(companion);

    std::vector<double> roots;
    for (Eigen::Index i = 0; i < 4; ++i) {
        const std::complex<double> z = solver.eigenvalues()[i];
        if (!is_real(z) || !(z.real() > 0.0)) continue;
        const double t = polish(p, z.real());
        const double tol = 1e-10 * std::max(1.0, p.penalty * t * t * t * t);
        if (!(t > 0.0) || std::abs(residual(p, t)) >= tol) continue;
        // Drop near-duplicates from conjugate pairs hugging the real axis.
        const bool dup = std::any_of(roots.begin(), roots.end(), [&](double r) {
            return std::abs(r - t) <= 1e-9 * (1.0 + std::abs(t));
        });
        if (!dup) roots.push_back(t);
    }
    std::sort(roots.begin(), roots.end());

    if (roots.empty()) {
        // Sign change on (0, inf) is structural; fall back to bisection.
        double lo = 1e-300;
        double hi = 1.0;
        while (residual(p, hi) <= 0.0) {
            hi *= 2.0;
            if (!std::isfinite(hi)) {
                throw std::runtime_error("positive_real_roots: bracketing failed");
            }
        }
        for (int i = 0; i < 200; ++i) {
            const double mid = 0.5 * (lo + hi);
            (residual(p, mid) <= 0.0 ? lo : hi) = mid;
        }
        roots.push_back(polish(p, 0.5 * (lo + hi)));
    }
    return roots;
}

double optimal_magnitude(const QuarticProblem& p) {
    const std::vector<double> roots = positive_real_roots(p);
    double best = roots.front();
    double best_g = magnitude_objective(p, best);
    for (std::size_t i = 1; i < roots.size(); ++i) {
        const double g = magnitude_objective(p, roots[i]);
        if (g < best_g || (g == best_g && roots[i] > best)) {
            best = roots[i];
            best_g = g;
        }
    }
    return best;
}

} // namespace pulsecomp::quartic
