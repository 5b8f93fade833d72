// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>

#include "twrs/channel.hpp"
#include "twrs/rs_solver.hpp"
#include "test_util.hpp"

using namespace twrs;

namespace {

SystemConfig scalar_config() {
    SystemConfig cfg;
    cfg.n_b = cfg.n_r = cfg.n_u = 1;
    cfg.p_u = cfg.p_b = cfg.p_r = 1.0;
    cfg.sigma_r = cfg.sigma = 1.0;
    return cfg;
}

QuadraticForms scalar_forms() {
    const SystemConfig cfg = scalar_config();
    ChannelSet ch;
    ch.h1 = cmat::Ones(1, 1);
    ch.h2 = cmat::Ones(1, 1);
    return build_rs_quadforms(effective_matrices(ch, cmat::Ones(1, 1), cfg), cfg);
}

// Two relay antennas, one user; small enough for brute-force cross checks.
QuadraticForms small_forms(std::uint64_t seed) {
    SystemConfig cfg;
    cfg.n_r = 2;
    cfg.n_u = cfg.n_b = 1;
    Rng rng(seed);
    const CorrelationSpec corr;
    const ChannelSet ch = draw_channels(rng, cfg, corr);
    cmat w = test::random_matrix(rng, 1, 1);
    w *= std::sqrt(cfg.p_b) / w.norm();
    return build_rs_quadforms(effective_matrices(ch, w, cfg), cfg);
}

QuadraticForms reference_forms(std::uint64_t seed) {
    const SystemConfig cfg;
    Rng rng(seed);
    const CorrelationSpec corr;
    const ChannelSet ch = draw_channels(rng, cfg, corr);
    const cmat w = std::sqrt(cfg.p_b / cfg.n_b) * cmat::Identity(cfg.n_b, cfg.n_u);
    return build_rs_quadforms(effective_matrices(ch, w, cfg), cfg);
}

double power_of(const cvec& omega, const QuadraticForms& forms) {
    return (omega.adjoint() * (forms.z * omega)).value().real();
}

}  // namespace

TEST_CASE("minimax bound of the scalar all-ones system is 1/4") {
    const auto forms = scalar_forms();
    const MinimaxBound bound = minimax_bound(forms);
    CHECK(bound.gamma_hat == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(power_of(bound.omega0, forms) == doctest::Approx(forms.power_rs));
}

TEST_CASE("minimax bound vanishes without signal") {
    auto forms = scalar_forms();
    for (auto& q : forms.q) q.setZero();
    for (auto& qv : forms.q_vec) qv.setZero();
    const MinimaxBound bound = minimax_bound(forms);
    CHECK(bound.gamma_hat == doctest::Approx(0.0));
}

TEST_CASE("minimax bound equals the rank-1 closed form per stream") {
    // Oracle: lambda_max(p_tilde^{-1} q q^H) = q^H p_tilde^{-1} q.
    const auto forms = reference_forms(314);
    double expected = std::numeric_limits<double>::infinity();
    for (int i = 0; i < forms.n_streams(); ++i) {
        const double value =
            forms.q_vec[i].dot(forms.p_tilde[i].llt().solve(forms.q_vec[i])).real();
        expected = std::min(expected, value);
    }
    const MinimaxBound bound = minimax_bound(forms);
    CHECK(bound.gamma_hat == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("residuals vanish for the zero vector") {
    const auto forms = reference_forms(21);
    const cvec zero = cvec::Zero(forms.z.rows());
    CHECK(lm_residuals(zero, 0.7, forms).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("scalar residual is zero exactly at the bound") {
    const auto forms = scalar_forms();
    cvec omega(1);
    omega << std::sqrt(forms.power_rs / forms.z(0, 0).real());
    const rvec r = lm_residuals(omega, 0.25, forms);
    CHECK(r.lpNorm<Eigen::Infinity>() <= 1e-14);
}

TEST_CASE("residuals expand into SINR numerator and substituted denominator") {
    Rng rng(33);
    const auto forms = reference_forms(64);
    const Eigen::Index n = forms.z.rows();
    for (int rep = 0; rep < 10; ++rep) {
        const cvec omega = test::random_vector(rng, n);
        const double gamma = rng.uniform();
        const rvec r = lm_residuals(omega, gamma, forms);
        const double shell = power_of(omega, forms);
        for (int i = 0; i < forms.n_streams(); ++i) {
            const double numerator = std::norm(forms.q_vec[i].dot(omega));
            const double load =
                (omega.adjoint() * (forms.p[i] * omega)).value().real() +
                (forms.sigma_sq / forms.power_rs) * shell;
            const double expected = numerator - gamma * load;
            CHECK(std::abs(r(i) - expected) <=
                  1e-12 * std::max(std::abs(expected), std::abs(numerator)));
        }
    }
}

TEST_CASE("LM started at the scalar root stops immediately") {
    const auto forms = scalar_forms();
    cvec root(1);
    root << std::sqrt(forms.power_rs / forms.z(0, 0).real());
    const LmResult result = lm_solve(root, 0.25, forms);
    CHECK(result.converged);
    CHECK(result.iters <= 1);
}

TEST_CASE("LM at gamma zero stays finite and on the power shell") {
    const auto forms = reference_forms(77);
    const MinimaxBound bound = minimax_bound(forms);
    LmParams params;
    for (const int budget : {1, 2, 5, 50}) {
        params.max_iters = budget;
        const LmResult result = lm_solve(bound.omega0, 0.0, forms, params);
        CHECK(result.omega.allFinite());
        CHECK(power_of(result.omega, forms) ==
              doctest::Approx(forms.power_rs).epsilon(1e-9));
    }
}

TEST_CASE("LM certifies feasibility slightly below the bound") {
    const auto forms = small_forms(5);
    const MinimaxBound bound = minimax_bound(forms);
    const double target = 0.9 * bound.gamma_hat;
    const LmResult result = lm_solve(bound.omega0, target, forms);
    CHECK(result.converged);
    CHECK(sinr_quadform(result.omega, forms).minCoeff() >= target * (1.0 - 1e-6));
}

TEST_CASE("LM rejects a zero start") {
    const auto forms = small_forms(6);
    CHECK_THROWS_AS(lm_solve(cvec::Zero(4), 0.1, forms), std::invalid_argument);
}

TEST_CASE("scalar bisection recovers the closed-form optimum") {
    const RsSolveResult result = bisection_solve(scalar_forms());
    CHECK(std::abs(result.gamma_star - 0.25) <= 1e-3);
    CHECK(std::abs(result.gamma_hat - 0.25) <= 1e-9);
}

TEST_CASE("bisection never exceeds the minimax bound") {
    for (const std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
        const auto forms = reference_forms(seed);
        const RsSolveResult result = bisection_solve(forms);
        CHECK(result.gamma_star <= result.gamma_hat * (1.0 + 1e-6));
        CHECK(result.gamma_star >= 0.0);
    }
}

TEST_CASE("returned precoder sits exactly on the power constraint") {
    const auto forms = reference_forms(42);
    const RsSolveResult result = bisection_solve(forms);
    const double power = power_of(vec(result.omega), forms);
    CHECK(power == doctest::Approx(forms.power_rs).epsilon(1e-9));
}

TEST_CASE("per-stream SINRs are consistent with gamma_star") {
    const auto forms = reference_forms(43);
    const RsSolveResult result = bisection_solve(forms);
    const rvec again = sinr_quadform(vec(result.omega), forms);
    CHECK(again.minCoeff() == doctest::Approx(result.gamma_star).epsilon(1e-9));
    int argmin = 0;
    again.minCoeff(&argmin);
    CHECK(std::abs(again(argmin) - result.gamma_star) <= 1e-6 * result.gamma_star);
}

TEST_CASE("cold-start bisection satisfies the same invariants") {
    const auto forms = reference_forms(44);
    const RsSolveResult warm = bisection_solve(forms, LmParams{}, 1e-3, true);
    const RsSolveResult cold = bisection_solve(forms, LmParams{}, 1e-3, false);
    for (const auto& result : {warm, cold}) {
        CHECK(result.gamma_star <= result.gamma_hat * (1.0 + 1e-6));
        CHECK(power_of(vec(result.omega), forms) ==
              doctest::Approx(forms.power_rs).epsilon(1e-9));
    }
}

TEST_CASE("accepted bisection targets grow monotonically") {
    // The probed feasible set is downward closed: rerunning with a coarser
    // tolerance can only return a gamma_star below the fine run's bound.
    const auto forms = reference_forms(45);
    const RsSolveResult fine = bisection_solve(forms, LmParams{}, 1e-4);
    const RsSolveResult coarse = bisection_solve(forms, LmParams{}, 1e-1);
    CHECK(coarse.gamma_star <= fine.gamma_hat * (1.0 + 1e-6));
    CHECK(fine.bisection_iters >= coarse.bisection_iters);
}
