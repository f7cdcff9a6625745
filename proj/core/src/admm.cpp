// SPDX-License-Identifier: Apache-2.0
#include "pulsecomp/admm.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "pulsecomp/quartic.hpp"

namespace pulsecomp::admm {

namespace {

// Gain-form value z^H Q z = |w^H z|^2 for rank-one Q = w w^H.
double gain_value(const QuadraticForms& forms, const CVector& v) {
    return std::norm(forms.filter_core.dot(v));
}

double interference_value(const QuadraticForms& forms, const CVector& v) {
    return (v.adjoint() * forms.interference * v).value().real();
}

CVector perturb_toward_core(const CVector& v, const QuadraticForms& forms) {
    return v + 1e-8 * forms.filter_core.normalized();
}

} // namespace

void AdmmParams::validate() const {
    if (!(rho1 > 0.0)) throw std::invalid_argument("AdmmParams: rho1 must be > 0");
    if (!(rho2 > 0.0)) throw std::invalid_argument("AdmmParams: rho2 must be > 0");
    if (max_iters < 1) throw std::invalid_argument("AdmmParams: max_iters must be >= 1");
    if (!(primal_tol > 0.0)) throw std::invalid_argument("AdmmParams: primal_tol must be > 0");
}

CVector update_code(const AdmmState& state, const AdmmParams& params) {
    const CVector combined =
        2.0 / (params.rho1 + params.rho2) *
        (params.rho1 * (state.slack_num + state.dual_num) +
         params.rho2 * (state.slack_den + state.dual_den));
    CVector code(combined.size());
    for (Eigen::Index i = 0; i < combined.size(); ++i) {
        const double mag = std::abs(combined[i]);
        code[i] = (mag == 0.0) ? Complex(1.0, 0.0) : combined[i] / mag;
    }
    return code;
}

CVector update_slack_num(const AdmmState& state, const QuadraticForms& forms,
                         const AdmmParams& params) {
    const double gain = gain_value(forms, state.slack_den);
    const double gain_scale = state.slack_den.squaredNorm() * forms.filter_core.squaredNorm();
    if (gain <= 1e-14 * gain_scale) {
        throw DegenerateSlackError(DegenerateSlackError::Which::DenominatorSlack,
                                   "update_slack_num: denominator slack orthogonal "
                                   "to the filter core");
    }

    CMatrix scaled = forms.interference / gain;
    scaled.diagonal().array() += 0.5 * params.rho1;
    const CVector rhs_b = params.rho1 * (state.dual_num - state.code);
    const CVector rhs = -0.5 * rhs_b;

    const Eigen::LDLT<CMatrix> ldlt(scaled);
    if (ldlt.info() != Eigen::Success) {
        throw DegenerateSlackError(DegenerateSlackError::Which::DenominatorSlack,
                                   "update_slack_num: factorization failed");
    }
    CVector y = ldlt.solve(rhs);

    // Refine until ||2 P~ y + b|| <= 1e-10 max(1, ||b||).
    const double target = 1e-10 * std::max(1.0, rhs_b.norm());
    for (int i = 0; i < 3; ++i) {
        const CVector res = rhs - scaled * y;
        if (2.0 * res.norm() <= target) break;
        y += ldlt.solve(res);
    }
    return y;
}

CVector update_slack_den(const AdmmState& state, const QuadraticForms& forms,
                         const AdmmParams& params) {
    const double interference = interference_value(forms, state.slack_num);
    const double scale =
        forms.interference.norm() * state.slack_num.squaredNorm();
    if (!(interference > 0.0) || interference <= 1e-14 * scale) {
        throw DegenerateSlackError(DegenerateSlackError::Which::NumeratorSlack,
                                   "update_slack_den: numerator slack gives a "
                                   "vanishing interference-form value");
    }

    const double core_norm_sq = forms.filter_core.squaredNorm();
    const double eigenvalue = core_norm_sq / interference;
    const CVector unit_core = forms.filter_core / std::sqrt(core_norm_sq);

    const CVector linear = params.rho2 * (state.dual_den - state.code);
    const Complex rotated = unit_core.dot(linear); // first frame coefficient
    const double rotated_mag = std::abs(rotated);

    const double t = quartic::optimal_magnitude(
        {params.rho2, rotated_mag, eigenvalue});
    const Complex phase =
        (rotated_mag == 0.0) ? Complex(1.0, 0.0) : rotated / rotated_mag;
    const Complex leading = -t * phase;

    // Assemble U^H z~ without materializing the frame: the complement block
    // is the projection of -linear/rho2 off the leading eigenvector.
    return (leading + rotated / params.rho2) * unit_core - linear / params.rho2;
}

void update_duals(AdmmState& state) {
    state.dual_num += state.slack_num - state.code;
    state.dual_den += state.slack_den - state.code;
}

std::pair<double, double> sweep(AdmmState& state, const QuadraticForms& forms,
                                const AdmmParams& params) {
    state.code = update_code(state, params);

    try {
        state.slack_num = update_slack_num(state, forms, params);
    } catch (const DegenerateSlackError&) {
        state.slack_den = perturb_toward_core(state.slack_den, forms);
        state.slack_num = update_slack_num(state, forms, params);
    }
    try {
        state.slack_den = update_slack_den(state, forms, params);
    } catch (const DegenerateSlackError&) {
        state.slack_num = perturb_toward_core(state.slack_num, forms);
        state.slack_den = update_slack_den(state, forms, params);
    }
    update_duals(state);

    return {(state.slack_num - state.code).norm(),
            (state.slack_den - state.code).norm()};
}

double ratio_objective(const QuadraticForms& forms, const CVector& code) {
    const double gain = gain_value(forms, code);
    if (gain <= 0.0) return std::numeric_limits<double>::infinity();
    return interference_value(forms, code) / gain;
}

std::pair<PhaseCode, AdmmTrace> solve_code_subproblem(const QuadraticForms& forms,
                                                      const PhaseCode& init,
                                                      const AdmmParams& params) {
    params.validate();
    if (init.size() != forms.filter_core.size()) {
        throw std::invalid_argument("solve_code_subproblem: code/forms size mismatch");
    }

    // Penalties are dimensionless factors on the problem's own scale
    // ||P|| / ||w||^2, which makes the iterates invariant to rescaling the
    // interference form (the ratio's minimizer already is).
    AdmmParams scaled = params;
    const double scale =
        forms.interference.norm() / forms.filter_core.squaredNorm();
    if (scale > 0.0 && std::isfinite(scale)) {
        scaled.rho1 = params.rho1 * scale;
        scaled.rho2 = params.rho2 * scale;
    }

    AdmmState state;
    state.code = init.entries();
    state.slack_num = state.code;
    state.slack_den = state.code;
    state.dual_num = CVector::Zero(init.size());
    state.dual_den = CVector::Zero(init.size());

    AdmmTrace trace;
    const double stop = params.primal_tol * std::sqrt(static_cast<double>(init.size()));

    for (int iter = 0; iter < params.max_iters; ++iter) {
        const auto [res_num, res_den] = sweep(state, forms, scaled);
        const double gain = gain_value(forms, state.slack_den);
        trace.objective.push_back(
            gain > 0.0 ? interference_value(forms, state.slack_num) / gain
                       : std::numeric_limits<double>::infinity());
        trace.residual_num.push_back(res_num);
        trace.residual_den.push_back(res_den);
        trace.iterations = iter + 1;

        if (res_num < stop && res_den < stop) {
            trace.converged = true;
            break;
        }
    }

    PhaseCode candidate(state.code);
    const double before = ratio_objective(forms, init.entries());
    const double after = ratio_objective(forms, candidate.entries());
    if (!(after <= before + 1e-12)) {
        trace.safeguard_triggered = true;
        return {init, std::move(trace)};
    }
    return {std::move(candidate), std::move(trace)};
}

} // namespace pulsecomp::admm
