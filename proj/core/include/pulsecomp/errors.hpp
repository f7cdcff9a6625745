// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace pulsecomp {

/// The receive filter is (numerically) orthogonal to the padded code, so the
/// gate estimator denominator vanishes and SINR/MSE are undefined.
class OrthogonalFilterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A filter (or its central slice) has vanishing norm.
class DegenerateFilterError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One of the ADMM slack variables produced a vanishing quadratic-form value.
class DegenerateSlackError : public std::runtime_error {
public:
    enum class Which { NumeratorSlack, DenominatorSlack };

    DegenerateSlackError(Which which, const std::string& what)
        : std::runtime_error(what), which_(which) {}

    Which which() const noexcept { return which_; }

private:
    Which which_;
};

/// A linear solve failed or the system is too ill-conditioned to trust.
class ConditioningError : public std::runtime_error {
public:
    ConditioningError(const std::string& what, double condition_estimate)
        : std::runtime_error(what), condition_estimate_(condition_estimate) {}

    double condition_estimate() const noexcept { return condition_estimate_; }

private:
    double condition_estimate_;
};

/// Configuration file failed validation; message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The design driver could not produce a result (all restarts failed).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace pulsecomp
