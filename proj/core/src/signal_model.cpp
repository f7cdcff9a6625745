// SPDX-License-Identifier: Apache-2.0
#include "pulsecomp/signal_model.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace pulsecomp {

namespace {

// Relative threshold below which w^H x counts as orthogonal.
constexpr double kOrthogonalTol = 1e-12;

struct RatioParts {
    double gain;         // |w^H x|^2
    double interference; // w^H R w
};

// Both quadratic quantities of the MSE/SINR ratio, computed matrix-free from
// lag correlations: w^H R w = sum_{k != 0} zeta_k |w^H J_k x|^2 + sigma^2 ||w||^2.
RatioParts ratio_parts(const PaddedCode& padded, const MismatchedFilter& filter,
                       const ClutterProfile& profile) {
    const Eigen::Index len = padded.size();
    if (filter.size() != len) {
        throw std::domain_error("signal_model: filter and padded code lengths differ");
    }
    if (!profile.covers(static_cast<int>(len) - 1)) {
        throw std::domain_error("signal_model: clutter profile does not cover lags up to " +
                                std::to_string(len - 1));
    }
    const CVector& w = filter.entries();
    const CVector& x = padded.entries();

    double interference = profile.noise_power() * w.squaredNorm();
    for (Eigen::Index k = -(len - 1); k <= len - 1; ++k) {
        if (k == 0) continue;
        interference += profile.zeta(static_cast<int>(k)) *
                        std::norm(lag_correlation(w, x, k));
    }
    const double gain = std::norm(lag_correlation(w, x, 0));
    return {gain, interference};
}

void check_not_orthogonal(double gain_sq, const MismatchedFilter& filter,
                          const PaddedCode& padded) {
    const double scale = filter.entries().norm() * padded.entries().norm();
    if (std::sqrt(gain_sq) <= kOrthogonalTol * scale) {
        throw OrthogonalFilterError("filter is orthogonal to the padded code; "
                                    "gate estimator undefined");
    }
}

} // namespace

CVector shift_apply(const CVector& v, Eigen::Index lag) {
    const Eigen::Index len = v.size();
    if (lag <= -len || lag >= len) {
        throw std::domain_error("shift_apply: |lag| " + std::to_string(std::abs(lag)) +
                                " exceeds vector support " + std::to_string(len));
    }
    CVector out = CVector::Zero(len);
    if (lag >= 0) {
        out.segment(lag, len - lag) = v.segment(0, len - lag);
    } else {
        out.segment(0, len + lag) = v.segment(-lag, len + lag);
    }
    return out;
}

PaddedCode zero_pad(const PhaseCode& code, Eigen::Index pad_len) {
    if (pad_len < 0) {
        throw std::invalid_argument("zero_pad: pad length must be >= 0");
    }
    CVector padded = CVector::Zero(code.size() + 2 * pad_len);
    padded.segment(pad_len, code.size()) = code.entries();
    return PaddedCode(std::move(padded), pad_len);
}

Complex lag_correlation(const CVector& filter, const CVector& code, Eigen::Index lag) {
    const Eigen::Index len = filter.size();
    if (code.size() != len) {
        throw std::domain_error("lag_correlation: vector lengths differ");
    }
    if (lag >= len || lag <= -len) {
        return Complex(0.0, 0.0);
    }
    // w^H J_k x = sum_m conj(w[m]) x[m-k] over the overlapping support.
    if (lag >= 0) {
        return filter.segment(lag, len - lag).dot(code.segment(0, len - lag));
    }
    return filter.segment(0, len + lag).dot(code.segment(-lag, len + lag));
}

CMatrix build_covariance(const PaddedCode& padded, const ClutterProfile& profile) {
    const Eigen::Index len = padded.size();
    if (!profile.covers(static_cast<int>(len) - 1)) {
        throw std::domain_error("build_covariance: profile must cover lags up to " +
                                std::to_string(len - 1));
    }
    CMatrix cov = CMatrix::Zero(len, len);
    for (Eigen::Index k = -(len - 1); k <= len - 1; ++k) {
        if (k == 0) continue;
        const double power = profile.zeta(static_cast<int>(k));
        if (power == 0.0) continue;
        const CVector shifted = shift_apply(padded.entries(), k);
        cov.selfadjointView<Eigen::Lower>().rankUpdate(shifted, power);
    }
    cov = cov.selfadjointView<Eigen::Lower>();
    cov.diagonal().array() += profile.noise_power();
    return cov;
}

QuadraticForms build_quadratic_forms(const MismatchedFilter& filter,
                                     const ClutterProfile& profile,
                                     Eigen::Index pad_len,
                                     Eigen::Index code_len) {
    if (filter.size() != 2 * pad_len + code_len) {
        throw std::domain_error("build_quadratic_forms: filter length != 2*pad + code_len");
    }
    if (!profile.covers(static_cast<int>(code_len) - 1)) {
        throw std::domain_error("build_quadratic_forms: profile must cover lags up to " +
                                std::to_string(code_len - 1));
    }
    CVector core = filter.entries().segment(pad_len, code_len);
    if (core.norm() <= 1e-12) {
        throw DegenerateFilterError("build_quadratic_forms: central filter slice is zero");
    }

    QuadraticForms forms;
    forms.interference = CMatrix::Zero(code_len, code_len);
    for (Eigen::Index k = -(code_len - 1); k <= code_len - 1; ++k) {
        if (k == 0) continue;
        const double power = profile.zeta(static_cast<int>(k));
        if (power == 0.0) continue;
        // J_k^H w = J_{-k} w
        const CVector shifted = shift_apply(core, -k);
        forms.interference.selfadjointView<Eigen::Lower>().rankUpdate(shifted, power);
    }
    forms.interference = forms.interference.selfadjointView<Eigen::Lower>();
    forms.interference.diagonal().array() +=
        profile.noise_power() / static_cast<double>(code_len) * core.squaredNorm();

    forms.gain = core * core.adjoint();
    forms.filter_core = std::move(core);
    return forms;
}

QuadraticForms build_windowed_forms(const MismatchedFilter& filter,
                                    const ClutterProfile& profile,
                                    Eigen::Index pad_len,
                                    Eigen::Index code_len) {
    const Eigen::Index len = 2 * pad_len + code_len;
    if (filter.size() != len) {
        throw std::domain_error("build_windowed_forms: filter length != 2*pad + code_len");
    }
    if (!profile.covers(static_cast<int>(pad_len + code_len) - 1)) {
        throw std::domain_error("build_windowed_forms: profile must cover lags up to " +
                                std::to_string(pad_len + code_len - 1));
    }
    CVector core = filter.entries().segment(pad_len, code_len);
    if (core.norm() <= 1e-12) {
        throw DegenerateFilterError("build_windowed_forms: central filter slice is zero");
    }

    QuadraticForms forms;
    forms.interference = CMatrix::Zero(code_len, code_len);
    // Lag-k term: the code sees filter taps M+k .. M+k+N-1, clipped at the
    // filter support; |w~^H J_k x~|^2 = |window_k^H x|^2.
    for (Eigen::Index k = -(pad_len + code_len - 1); k <= pad_len + code_len - 1; ++k) {
        if (k == 0) continue;
        const double power = profile.zeta(static_cast<int>(k));
        if (power == 0.0) continue;
        CVector window = CVector::Zero(code_len);
        for (Eigen::Index i = 0; i < code_len; ++i) {
            const Eigen::Index tap = pad_len + k + i;
            if (tap >= 0 && tap < len) window[i] = filter.entries()[tap];
        }
        if (window.isZero(0.0)) continue;
        forms.interference.selfadjointView<Eigen::Lower>().rankUpdate(window, power);
    }
    forms.interference = forms.interference.selfadjointView<Eigen::Lower>();
    forms.interference.diagonal().array() +=
        profile.noise_power() / static_cast<double>(code_len) *
        filter.entries().squaredNorm();

    forms.gain = core * core.adjoint();
    forms.filter_core = std::move(core);
    return forms;
}

double sinr(const PaddedCode& padded, const MismatchedFilter& filter,
            const ClutterProfile& profile) {
    const RatioParts parts = ratio_parts(padded, filter, profile);
    check_not_orthogonal(parts.gain, filter, padded);
    return profile.zeta0() * parts.gain / parts.interference;
}

double mse(const PaddedCode& padded, const MismatchedFilter& filter,
           const ClutterProfile& profile) {
    const RatioParts parts = ratio_parts(padded, filter, profile);
    check_not_orthogonal(parts.gain, filter, padded);
    return parts.interference / parts.gain;
}

Complex estimate_reflectivity(Complex sample, const MismatchedFilter& filter,
                              const PaddedCode& padded) {
    const Complex denom = lag_correlation(filter.entries(), padded.entries(), 0);
    check_not_orthogonal(std::norm(denom), filter, padded);
    return sample / denom;
}

Complex filter_gate_output(const CVector& received, const MismatchedFilter& filter,
                           Eigen::Index gate) {
    const Eigen::Index window = filter.size();
    if (gate < 0 || gate + window > received.size()) {
        throw std::domain_error("filter_gate_output: gate window [" + std::to_string(gate) +
                                ", " + std::to_string(gate + window) +
                                ") outside received samples");
    }
    return filter.entries().dot(received.segment(gate, window));
}

} // namespace pulsecomp
