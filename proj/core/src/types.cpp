// SPDX-License-Identifier: Apache-2.0
#include "pulsecomp/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace pulsecomp {

namespace {

void check_unimodular(const CVector& v, Eigen::Index offset, Eigen::Index count) {
    for (Eigen::Index i = 0; i < count; ++i) {
        const double mag = std::abs(v[offset + i]);
        if (std::abs(mag - 1.0) > kUnimodularTol) {
            throw std::invalid_argument(
                "code entry " + std::to_string(offset + i) +
                " has modulus " + std::to_string(mag) + ", expected 1");
        }
    }
}

} // namespace

PhaseCode::PhaseCode(CVector entries) : entries_(std::move(entries)) {
    if (entries_.size() < 2) {
        throw std::invalid_argument("PhaseCode: length must be >= 2");
    }
    check_unimodular(entries_, 0, entries_.size());
}

PhaseCode PhaseCode::from_phases(const RVector& phases) {
    CVector v(phases.size());
    for (Eigen::Index i = 0; i < phases.size(); ++i) {
        v[i] = std::polar(1.0, phases[i]);
    }
    return PhaseCode(std::move(v));
}

RVector PhaseCode::phases() const {
    RVector p(entries_.size());
    for (Eigen::Index i = 0; i < entries_.size(); ++i) {
        p[i] = std::arg(entries_[i]);
    }
    return p;
}

PaddedCode::PaddedCode(CVector entries, Eigen::Index pad_len)
    : entries_(std::move(entries)), pad_len_(pad_len) {
    if (pad_len_ < 0) {
        throw std::invalid_argument("PaddedCode: pad length must be >= 0");
    }
    if (entries_.size() < 2 * pad_len_ + 2) {
        throw std::invalid_argument("PaddedCode: length must be >= 2*pad + 2");
    }
    for (Eigen::Index i = 0; i < pad_len_; ++i) {
        if (entries_[i] != Complex(0.0, 0.0) ||
            entries_[entries_.size() - 1 - i] != Complex(0.0, 0.0)) {
            throw std::invalid_argument("PaddedCode: pad entries must be exactly zero");
        }
    }
    check_unimodular(entries_, pad_len_, code_len());
}

MismatchedFilter::MismatchedFilter(CVector entries) : entries_(std::move(entries)) {
    if (entries_.size() < 2) {
        throw std::invalid_argument("MismatchedFilter: length must be >= 2");
    }
    if (entries_.norm() <= 1e-12) {
        throw DegenerateFilterError("MismatchedFilter: norm must exceed 1e-12");
    }
}

ClutterProfile::ClutterProfile(std::vector<double> zeta, double noise_power)
    : zeta_(std::move(zeta)), noise_power_(noise_power) {
    if (zeta_.empty() || zeta_.size() % 2 == 0) {
        throw std::invalid_argument("ClutterProfile: zeta must have odd size 2L+1");
    }
    max_lag_ = static_cast<int>(zeta_.size() / 2);
    for (std::size_t i = 0; i < zeta_.size(); ++i) {
        if (!(zeta_[i] >= 0.0)) {
            throw std::invalid_argument("ClutterProfile: zeta values must be >= 0");
        }
    }
    if (!(zeta0() > 0.0)) {
        throw std::invalid_argument("ClutterProfile: zeta(0) must be > 0");
    }
    if (!(noise_power_ > 0.0)) {
        throw std::invalid_argument("ClutterProfile: noise power must be > 0");
    }
}

ClutterProfile ClutterProfile::uniform(int max_lag, double zeta0, double noise_power) {
    if (max_lag < 0) {
        throw std::invalid_argument("ClutterProfile: max_lag must be >= 0");
    }
    return ClutterProfile(std::vector<double>(2 * static_cast<std::size_t>(max_lag) + 1, zeta0),
                          noise_power);
}

double ClutterProfile::zeta(int lag) const {
    if (lag < -max_lag_ || lag > max_lag_) {
        throw std::out_of_range("ClutterProfile: lag " + std::to_string(lag) +
                                " outside covered range +-" + std::to_string(max_lag_));
    }
    return zeta_[static_cast<std::size_t>(lag + max_lag_)];
}

} // namespace pulsecomp
