// SPDX-License-Identifier: Apache-2.0
#include "pulsecomp/ao.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <optional>
#include <stdexcept>

#include "pulsecomp/random.hpp"
#include "pulsecomp/signal_model.hpp"

namespace pulsecomp::ao {

void DesignConfig::validate() const {
    if (code_length < 2) {
        throw std::invalid_argument("DesignConfig: code_length must be >= 2");
    }
    if (pad_length < 0) {
        throw std::invalid_argument("DesignConfig: pad_length must be >= 0");
    }
    if (!profile.covers(2 * pad_length + code_length - 1)) {
        throw std::invalid_argument("DesignConfig: profile must cover lags up to 2M+N-1");
    }
    if (outer_iters < 1) {
        throw std::invalid_argument("DesignConfig: outer_iters must be >= 1");
    }
    if (!(outer_tol > 0.0)) {
        throw std::invalid_argument("DesignConfig: outer_tol must be > 0");
    }
    if (restarts < 1) {
        throw std::invalid_argument("DesignConfig: restarts must be >= 1");
    }
    admm.validate();
}

MismatchedFilter update_filter(const PaddedCode& padded, const ClutterProfile& profile) {
    const CMatrix cov = build_covariance(padded, profile);
    const Eigen::LLT<CMatrix> llt(cov);
    if (llt.info() != Eigen::Success) {
        const Eigen::SelfAdjointEigenSolver<CMatrix> eig(cov, Eigen::EigenvaluesOnly);
        const double cond = eig.eigenvalues().maxCoeff() /
                            std::max(eig.eigenvalues().minCoeff(), 1e-300);
        throw ConditioningError("update_filter: covariance factorization failed", cond);
    }

    const CVector& rhs = padded.entries();
    CVector w = llt.solve(rhs);
    const double target = 1e-10 * rhs.norm();
    for (int i = 0; i < 3; ++i) {
        const CVector res = rhs - cov * w;
        if (res.norm() <= target) break;
        w += llt.solve(res);
    }
    const double res_norm = (rhs - cov * w).norm();
    if (res_norm > target) {
        const Eigen::SelfAdjointEigenSolver<CMatrix> eig(cov, Eigen::EigenvaluesOnly);
        const double cond = eig.eigenvalues().maxCoeff() /
                            std::max(eig.eigenvalues().minCoeff(), 1e-300);
        throw ConditioningError("update_filter: solve residual " + std::to_string(res_norm) +
                                " exceeds tolerance", cond);
    }
    return MismatchedFilter(std::move(w));
}

namespace {

DesignResult run_restart(const DesignConfig& cfg, std::uint64_t restart_seed) {
    auto gen = rng::engine(restart_seed);
    PhaseCode code(rng::random_unimodular(cfg.code_length, gen));
    PaddedCode padded = zero_pad(code, cfg.pad_length);

    MismatchedFilter filter = update_filter(padded, cfg.profile);
    double current = mse(padded, filter, cfg.profile);

    std::vector<double> trace{current};
    bool converged = false;

    for (int iter = 0; iter < cfg.outer_iters; ++iter) {
        // Windowed forms make the ADMM ratio equal the true MSE at any pad
        // length (they reduce to the central-slice forms at pad 0).
        const QuadraticForms forms =
            build_windowed_forms(filter, cfg.profile, cfg.pad_length, cfg.code_length);
        auto [candidate, admm_trace] =
            admm::solve_code_subproblem(forms, code, cfg.admm);

        // Accept the code step only when it does not worsen the MSE under
        // the current filter, keeping the recorded trace nonincreasing.
        const PaddedCode candidate_padded = zero_pad(candidate, cfg.pad_length);
        if (mse(candidate_padded, filter, cfg.profile) <= current) {
            code = std::move(candidate);
            padded = candidate_padded;
        }

        filter = update_filter(padded, cfg.profile);
        const double next = mse(padded, filter, cfg.profile);
        trace.push_back(next);

        const double rel = (current - next) / std::max(current, 1e-300);
        current = next;
        if (rel < cfg.outer_tol) {
            converged = true;
            break;
        }
    }

    DesignResult result{std::move(code), std::move(filter), std::move(trace),
                        0.0, 0.0, converged};
    const PaddedCode final_padded = zero_pad(result.code, cfg.pad_length);
    result.sinr = sinr(final_padded, result.filter, cfg.profile);
    result.mse = mse(final_padded, result.filter, cfg.profile);
    return result;
}

} // namespace

DesignResult design(const DesignConfig& cfg) {
    cfg.validate();

    std::optional<DesignResult> best;
    std::string last_error = "no restarts executed";
    for (int r = 0; r < cfg.restarts; ++r) {
        try {
            DesignResult candidate = run_restart(cfg, rng::derive(cfg.seed, r));
            if (!best || candidate.mse < best->mse) {
                best = std::move(candidate);
            }
        } catch (const std::exception& e) {
            last_error = e.what();
        }
    }
    if (!best) {
        throw SolverError("design: all restarts failed; last error: " + last_error);
    }
    return *std::move(best);
}

CVector cross_correlation(const PaddedCode& padded, const MismatchedFilter& filter) {
    const Eigen::Index len = padded.size();
    if (filter.size() != len) {
        throw std::domain_error("cross_correlation: length mismatch");
    }
    CVector levels(2 * len - 1);
    for (Eigen::Index k = -(len - 1); k <= len - 1; ++k) {
        levels[k + len - 1] = lag_correlation(filter.entries(), padded.entries(), k);
    }
    return levels;
}

PairMetrics evaluate_pair(const PhaseCode& code, const MismatchedFilter& filter,
                          const ClutterProfile& profile, int pad_length) {
    const PaddedCode padded = zero_pad(code, pad_length);
    const Eigen::Index len = padded.size();
    const CVector levels = cross_correlation(padded, filter);

    const double peak = std::norm(levels[len - 1]);
    const double scale = filter.entries().norm() * padded.entries().norm();
    if (std::sqrt(peak) <= 1e-12 * scale) {
        throw OrthogonalFilterError("evaluate_pair: filter orthogonal to padded code");
    }

    double max_side = 0.0;
    double total_side = 0.0;
    for (Eigen::Index i = 0; i < levels.size(); ++i) {
        if (i == len - 1) continue;
        const double p = std::norm(levels[i]);
        max_side = std::max(max_side, p);
        total_side += p;
    }
    // Floor keeps the dB metrics finite for pathological all-zero sidelobes.
    max_side = std::max(max_side, peak * 1e-30);
    total_side = std::max(total_side, peak * 1e-30);

    PairMetrics metrics;
    metrics.psl_db = 10.0 * std::log10(peak / max_side);
    metrics.isl_db = 10.0 * std::log10(total_side / peak);
    metrics.sinr = sinr(padded, filter, profile);
    metrics.mse = mse(padded, filter, profile);
    return metrics;
}

} // namespace pulsecomp::ao
