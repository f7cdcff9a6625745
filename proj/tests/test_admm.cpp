// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <tuple>
#include <vector>

#include "pulsecomp/admm.hpp"
#include "pulsecomp/quartic.hpp"
#include "pulsecomp/signal_model.hpp"
#include "support/oracles.hpp"

using namespace pulsecomp;
using namespace pulsecomp::admm;

namespace {

const Complex kJ(0.0, 1.0);

CVector cvec(std::initializer_list<Complex> values) {
    CVector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (const Complex& c : values) v[i++] = c;
    return v;
}

QuadraticForms make_forms(const CMatrix& interference, const CVector& core) {
    QuadraticForms forms;
    forms.interference = interference;
    forms.gain = core * core.adjoint();
    forms.filter_core = core;
    return forms;
}

QuadraticForms random_forms(Eigen::Index n, std::mt19937_64& gen) {
    CMatrix a(n, n);
    for (Eigen::Index col = 0; col < n; ++col) {
        a.col(col) = oracles::random_complex_vector(n, gen);
    }
    CMatrix psd = a * a.adjoint();
    psd.diagonal().array() += 0.05; // keep the interference form positive definite
    return make_forms(psd, oracles::random_complex_vector(n, gen));
}

AdmmState zero_dual_state(const CVector& code) {
    AdmmState state;
    state.code = code;
    state.slack_num = code;
    state.slack_den = code;
    state.dual_num = CVector::Zero(code.size());
    state.dual_den = CVector::Zero(code.size());
    return state;
}

} // namespace

TEST_CASE("update_code is the phase projection") {
    AdmmState state = zero_dual_state(cvec({1.0, 1.0, 1.0}));
    // With rho1 = rho2 = 1 the projected point is (y+u) + (z+v).
    state.slack_num = cvec({0.5, -1.0, 1.5 * kJ});
    state.slack_den = state.slack_num;
    const CVector code = update_code(state, {});
    CHECK((code - cvec({1.0, -1.0, kJ})).norm() < 1e-15);
}

TEST_CASE("update_code fixed point and zero tie-break") {
    auto gen = oracles::test_rng(61);
    const CVector x = oracles::random_unimodular(5, gen);
    AdmmState state = zero_dual_state(x);
    CHECK((update_code(state, {}) - x).norm() < 1e-15);

    // Exactly-zero projection input maps to 1.
    AdmmState zero = zero_dual_state(cvec({1.0, 1.0}));
    zero.slack_num = cvec({0.0, kJ});
    zero.slack_den = -zero.slack_num;
    AdmmParams equal_weights;
    const CVector code = update_code(zero, equal_weights);
    CHECK(code[0] == Complex(1.0, 0.0));
    CHECK(code[1] == Complex(1.0, 0.0));
}

TEST_CASE("update_code maximizes the aligned real part entrywise") {
    auto gen = oracles::test_rng(62);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 4;
        AdmmState state = zero_dual_state(oracles::random_unimodular(n, gen));
        state.slack_num = oracles::random_complex_vector(n, gen);
        state.slack_den = oracles::random_complex_vector(n, gen);
        state.dual_num = oracles::random_complex_vector(n, gen);
        state.dual_den = oracles::random_complex_vector(n, gen);
        AdmmParams params;
        params.rho1 = 0.7;
        params.rho2 = 2.1;

        const CVector projected =
            2.0 / (params.rho1 + params.rho2) *
            (params.rho1 * (state.slack_num + state.dual_num) +
             params.rho2 * (state.slack_den + state.dual_den));
        const CVector code = update_code(state, params);
        for (Eigen::Index i = 0; i < n; ++i) {
            CHECK(std::abs(std::abs(code[i]) - 1.0) < 1e-12);
            const double attained = (std::conj(projected[i]) * code[i]).real();
            for (int step = 0; step < 360; ++step) {
                const double theta = 2.0 * M_PI * step / 360.0;
                const double grid =
                    (std::conj(projected[i]) * std::polar(1.0, theta)).real();
                CHECK(attained >= grid - 1e-12);
            }
        }
    }
}

TEST_CASE("update_slack_num closed forms") {
    const Eigen::Index n = 3;
    auto gen = oracles::test_rng(63);
    const CVector core = oracles::random_complex_vector(n, gen);

    // Zero interference form: solution collapses to code - dual_num.
    QuadraticForms zero_p = make_forms(CMatrix::Zero(n, n), core);
    AdmmState state = zero_dual_state(oracles::random_unimodular(n, gen));
    state.dual_num = oracles::random_complex_vector(n, gen);
    const CVector y = update_slack_num(state, zero_p, {});
    CHECK((y - (state.code - state.dual_num)).norm() < 1e-12);

    // dual_num = code makes the linear term vanish.
    state.dual_num = state.code;
    CHECK(update_slack_num(state, zero_p, {}).norm() < 1e-14);
}

TEST_CASE("update_slack_num solve residual") {
    auto gen = oracles::test_rng(64);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(gen() % 7);
        const QuadraticForms forms = random_forms(n, gen);
        AdmmState state = zero_dual_state(oracles::random_unimodular(n, gen));
        state.slack_den = oracles::random_complex_vector(n, gen);
        state.dual_num = oracles::random_complex_vector(n, gen);
        AdmmParams params;
        params.rho1 = 0.9;

        const CVector y = update_slack_num(state, forms, params);
        const double gain = std::norm(forms.filter_core.dot(state.slack_den));
        CMatrix scaled = forms.interference / gain;
        scaled.diagonal().array() += 0.5 * params.rho1;
        const CVector b = params.rho1 * (state.dual_num - state.code);
        CHECK((2.0 * scaled * y + b).norm() <= 1e-10 * std::max(1.0, b.norm()));
    }
}

TEST_CASE("update_slack_num rejects a denominator slack orthogonal to the core") {
    const CVector core = cvec({1.0, 0.0});
    QuadraticForms forms = make_forms(CMatrix::Identity(2, 2), core);
    AdmmState state = zero_dual_state(cvec({1.0, 1.0}));
    state.slack_den = cvec({0.0, 1.0}); // orthogonal to core
    CHECK_THROWS_AS(update_slack_num(state, forms, {}), DegenerateSlackError);
}

TEST_CASE("update_slack_den closed forms") {
    auto gen = oracles::test_rng(65);
    const Eigen::Index n = 4;
    const QuadraticForms forms = random_forms(n, gen);
    AdmmParams params;
    params.rho2 = 1.7;

    // dual_den = code gives a vanishing linear term: the step lands on
    // -t* core/||core|| with t* from the quartic closed form.
    AdmmState state = zero_dual_state(oracles::random_unimodular(n, gen));
    state.slack_num = oracles::random_complex_vector(n, gen);
    state.dual_den = state.code;
    const CVector z = update_slack_den(state, forms, params);

    const double interference =
        (state.slack_num.adjoint() * forms.interference * state.slack_num).value().real();
    const double eigenvalue = forms.filter_core.squaredNorm() / interference;
    const double expected_mag =
        std::pow(2.0 / (params.rho2 * eigenvalue), 0.25);
    CHECK((z + expected_mag * forms.filter_core.normalized()).norm() < 1e-10);
    CHECK(std::abs(forms.filter_core.normalized().dot(z)) ==
          doctest::Approx(expected_mag).epsilon(1e-10));
}

TEST_CASE("update_slack_den equals the explicit reflector-frame construction") {
    auto gen = oracles::test_rng(66);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(gen() % 7);
        const QuadraticForms forms = random_forms(n, gen);
        AdmmState state = zero_dual_state(oracles::random_unimodular(n, gen));
        state.slack_num = oracles::random_complex_vector(n, gen);
        state.dual_den = oracles::random_complex_vector(n, gen);
        AdmmParams params;
        params.rho2 = 0.4 + 0.1 * static_cast<double>(trial % 5);

        const CVector z = update_slack_den(state, forms, params);

        // Oracle: materialize the unitary frame, rotate, solve, rotate back.
        const CMatrix frame = oracles::reflector_frame(forms.filter_core);
        REQUIRE((frame * frame.adjoint() - CMatrix::Identity(n, n)).norm() < 1e-12);
        REQUIRE((frame.row(0).transpose().conjugate() -
                 forms.filter_core.normalized()).norm() < 1e-12);

        const double interference =
            (state.slack_num.adjoint() * forms.interference * state.slack_num)
                .value().real();
        const double eigenvalue = forms.filter_core.squaredNorm() / interference;
        const CVector linear = params.rho2 * (state.dual_den - state.code);
        const CVector rotated = frame * linear;
        const double lead_mag = std::abs(rotated[0]);
        const double t = quartic::optimal_magnitude({params.rho2, lead_mag, eigenvalue});
        CVector z_frame(n);
        z_frame[0] = -t * ((lead_mag == 0.0) ? Complex(1.0, 0.0) : rotated[0] / lead_mag);
        for (Eigen::Index i = 1; i < n; ++i) z_frame[i] = -rotated[i] / params.rho2;
        const CVector z_oracle = frame.adjoint() * z_frame;

        CHECK((z - z_oracle).norm() < 1e-10 * std::max(1.0, z_oracle.norm()));
    }
}

TEST_CASE("update_slack_den beats random candidates on its subproblem") {
    auto gen = oracles::test_rng(67);
    for (int trial = 0; trial < 5; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(gen() % 3);
        const QuadraticForms forms = random_forms(n, gen);
        AdmmState state = zero_dual_state(oracles::random_unimodular(n, gen));
        state.slack_num = oracles::random_complex_vector(n, gen);
        state.dual_den = oracles::random_complex_vector(n, gen);
        AdmmParams params;
        params.rho2 = 1.3;

        const double interference =
            (state.slack_num.adjoint() * forms.interference * state.slack_num)
                .value().real();
        const CVector linear = params.rho2 * (state.dual_den - state.code);
        const auto objective = [&](const CVector& z) {
            const double quad = std::norm(forms.filter_core.dot(z)) / interference;
            if (quad <= 0.0) return std::numeric_limits<double>::infinity();
            return 1.0 / quad + 0.5 * params.rho2 * z.squaredNorm() +
                   (linear.dot(z)).real();
        };

        const CVector z = update_slack_den(state, forms, params);
        const double attained = objective(z);
        std::uniform_real_distribution<double> radius(-2.0, 2.0);
        for (int candidate = 0; candidate < 100000; ++candidate) {
            const double scale = std::pow(10.0, radius(gen));
            CHECK(attained <=
                  objective(z + scale * oracles::random_complex_vector(n, gen)) + 1e-9);
        }
    }
}

TEST_CASE("update_duals accumulates the primal residuals") {
    auto gen = oracles::test_rng(68);
    const CVector x = oracles::random_unimodular(4, gen);
    AdmmState state = zero_dual_state(x);
    update_duals(state); // slacks equal code: no change
    CHECK(state.dual_num.norm() == 0.0);
    CHECK(state.dual_den.norm() == 0.0);

    const CVector d = oracles::random_complex_vector(4, gen);
    state.slack_num = state.code + d;
    update_duals(state);
    CHECK((state.dual_num - d).norm() < 1e-15);
}

TEST_CASE("a converged run is a fixed point of the sweep") {
    auto gen = oracles::test_rng(71);
    const Eigen::Index n = 4;
    QuadraticForms forms = random_forms(n, gen);
    // The primal residuals contract at a rate set by ||P|| relative to the
    // penalties; normalize so the run settles within the iteration budget.
    forms.interference *= 5.0 / forms.interference.norm();
    AdmmParams params;
    params.max_iters = 5000;
    params.primal_tol = 1e-9;

    AdmmState state = zero_dual_state(oracles::random_unimodular(n, gen));
    double res_num = 1.0, res_den = 1.0;
    for (int i = 0; i < params.max_iters && (res_num > 1e-11 || res_den > 1e-11); ++i) {
        std::tie(res_num, res_den) = sweep(state, forms, params);
    }
    REQUIRE(res_num <= 1e-11);
    REQUIRE(res_den <= 1e-11);

    const AdmmState before = state;
    sweep(state, forms, params);
    CHECK((state.code - before.code).norm() < 1e-8);
    CHECK((state.slack_num - before.slack_num).norm() < 1e-8);
    CHECK((state.slack_den - before.slack_den).norm() < 1e-8);
}

TEST_CASE("solve keeps the all-ones optimum of the averaging instance") {
    // interference = I, core = ones/sqrt(N): the ratio is N / |sum x_i|^2 with
    // minimum 1 at any constant-phase code.
    const Eigen::Index n = 3;
    const CVector core = CVector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    const QuadraticForms forms = make_forms(CMatrix::Identity(n, n), core);
    const PhaseCode ones(CVector::Constant(n, 1.0));

    auto [solution, trace] = solve_code_subproblem(forms, ones, {});
    CHECK(ratio_objective(forms, solution.entries()) ==
          doctest::Approx(1.0).epsilon(1e-9));

    // Exhaustive 64-level phase grid confirms 1 is the global optimum.
    double grid_best = 1e300;
    const int levels = 64;
    for (int a = 0; a < levels; ++a) {
        for (int b = 0; b < levels; ++b) {
            for (int c = 0; c < levels; ++c) {
                CVector x(3);
                x << std::polar(1.0, 2.0 * M_PI * a / levels),
                    std::polar(1.0, 2.0 * M_PI * b / levels),
                    std::polar(1.0, 2.0 * M_PI * c / levels);
                grid_best = std::min(grid_best, ratio_objective(forms, x));
            }
        }
    }
    CHECK(grid_best == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ratio_objective(forms, solution.entries()) <= grid_best + 1e-9);
}

TEST_CASE("solve returns the initial code when it is already optimal") {
    // Zero-interference shape: interference proportional to I; the ratio is
    // minimized by phase-aligning the code with the core. Starting there, the
    // solver must not move (fixed point or safeguard).
    auto gen = oracles::test_rng(70);
    const Eigen::Index n = 5;
    const CVector core = oracles::random_complex_vector(n, gen);
    const QuadraticForms forms = make_forms(0.37 * CMatrix::Identity(n, n), core);

    CVector aligned(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        aligned[i] = std::polar(1.0, std::arg(core[i]));
    }
    const PhaseCode init(aligned);
    auto [solution, trace] = solve_code_subproblem(forms, init, {});
    CHECK(std::abs(ratio_objective(forms, solution.entries()) -
                   ratio_objective(forms, init.entries())) < 1e-9);
}

TEST_CASE("solve output is always unimodular and never worse") {
    auto gen = oracles::test_rng(71);
    for (int trial = 0; trial < 30; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(gen() % 7);
        const QuadraticForms forms = random_forms(n, gen);
        const PhaseCode init(oracles::random_unimodular(n, gen));
        auto [solution, trace] = solve_code_subproblem(forms, init, {});

        for (Eigen::Index i = 0; i < n; ++i) {
            CHECK(std::abs(std::abs(solution.entries()[i]) - 1.0) < 1e-12);
        }
        CHECK(ratio_objective(forms, solution.entries()) <=
              ratio_objective(forms, init.entries()) + 1e-12);
        CHECK(trace.iterations >= 1);
        CHECK(trace.objective.size() == static_cast<std::size_t>(trace.iterations));
        CHECK(trace.residual_num.size() == trace.objective.size());
        CHECK(trace.residual_den.size() == trace.objective.size());
    }
}

TEST_CASE("residuals trend down over a tolerance-stopped run") {
    auto gen = oracles::test_rng(72);
    int checked = 0;
    for (int trial = 0; trial < 10 && checked < 5; ++trial) {
        const Eigen::Index n = 6;
        const QuadraticForms forms = random_forms(n, gen);
        const PhaseCode init(oracles::random_unimodular(n, gen));
        AdmmParams params;
        params.primal_tol = 1e-8;
        params.max_iters = 5000;
        auto [solution, trace] = solve_code_subproblem(forms, init, params);
        if (!trace.converged || trace.iterations < 20) continue;

        double first = 0.0, last = 0.0;
        const std::size_t count = trace.residual_num.size();
        for (std::size_t i = 0; i < 10; ++i) {
            first += trace.residual_num[i] + trace.residual_den[i];
            last += trace.residual_num[count - 1 - i] + trace.residual_den[count - 1 - i];
        }
        CHECK(last < first);
        ++checked;
    }
    CHECK(checked > 0);
}

TEST_CASE("solve approaches the exhaustive phase-grid optimum on small instances") {
    auto gen = oracles::test_rng(73);
    const Eigen::Index n = 3;
    const int levels = 16;
    int hits = 0;
    const int instances = 10;
    for (int trial = 0; trial < instances; ++trial) {
        const QuadraticForms forms = random_forms(n, gen);

        // Global phase leaves the ratio unchanged, so entry 0 stays at level 0.
        double grid_best = 1e300;
        for (int b = 0; b < levels; ++b) {
            for (int c = 0; c < levels; ++c) {
                CVector x(3);
                x << 1.0, std::polar(1.0, 2.0 * M_PI * b / levels),
                    std::polar(1.0, 2.0 * M_PI * c / levels);
                grid_best = std::min(grid_best, ratio_objective(forms, x));
            }
        }

        double achieved = 1e300;
        for (int restart = 0; restart < 3; ++restart) {
            const PhaseCode init(oracles::random_unimodular(n, gen));
            auto [solution, trace] = solve_code_subproblem(forms, init, {});
            achieved = std::min(achieved, ratio_objective(forms, solution.entries()));
        }
        if (achieved <= 1.05 * grid_best) ++hits;
    }
    CHECK(hits >= instances * 6 / 10);
}
