// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include <doctest.h>

#include <cmath>

#include "twrs/model.hpp"
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

ChannelSet all_ones_channel() {
    ChannelSet ch;
    ch.h1 = cmat::Ones(1, 1);
    ch.h2 = cmat::Ones(1, 1);
    return ch;
}

struct RandomInstance {
    SystemConfig cfg;
    ChannelSet ch;
    cmat w;
    cmat omega;
    EffectiveMatrices eff;
};

RandomInstance random_instance(Rng& rng) {
    RandomInstance inst;
    inst.cfg = SystemConfig{};
    const CorrelationSpec corr;
    inst.ch = draw_channels(rng, inst.cfg, corr);
    inst.w = test::random_matrix(rng, inst.cfg.n_b, inst.cfg.n_u);
    inst.w *= std::sqrt(inst.cfg.p_b) / inst.w.norm();
    inst.omega = test::random_matrix(rng, inst.cfg.n_r, inst.cfg.n_r);
    inst.eff = effective_matrices(inst.ch, inst.w, inst.cfg);
    return inst;
}

// Eq.-level oracle: interference plus relay-noise power seen by one stream,
// taken straight from the link matrices.
double denominator_minus_noise(const cmat& omega, const EffectiveMatrices& eff,
                               const SystemConfig& cfg, int stream) {
    const bool downlink = stream < cfg.n_u;
    const int i = downlink ? stream : stream - cfg.n_u;
    const cmat& a = downlink ? eff.a1 : eff.a2;
    const cmat& b = downlink ? eff.b1 : eff.b2;
    const cmat& c = downlink ? eff.c1 : eff.c2;
    const cmat a_omega = a * omega;
    const cmat sig = a_omega * b;
    const cmat intf = a_omega * c;
    double total = cfg.sigma_r * cfg.sigma_r * a_omega.row(i).squaredNorm();
    for (int j = 0; j < cfg.n_u; ++j) {
        if (j == i) continue;
        total += std::norm(sig(i, j)) + std::norm(intf(i, j));
    }
    return total;
}

}  // namespace

TEST_CASE("effective matrices of the scalar all-ones system") {
    const SystemConfig cfg = scalar_config();
    const auto eff = effective_matrices(all_ones_channel(), cmat::Ones(1, 1), cfg);
    CHECK(eff.y(0, 0).real() == doctest::Approx(3.0));
    CHECK(eff.z(0, 0).real() == doctest::Approx(3.0));
    CHECK(eff.c2.norm() == 0.0);
}

TEST_CASE("zero BS precoder removes the BS contribution to y") {
    Rng rng(5);
    const SystemConfig cfg;
    const CorrelationSpec corr;
    const ChannelSet ch = draw_channels(rng, cfg, corr);
    const auto eff = effective_matrices(ch, cmat::Zero(cfg.n_b, cfg.n_u), cfg);
    const cmat expected = (cfg.p_u / cfg.n_u) * ch.h1 * ch.h1.adjoint() +
                          cfg.sigma * cfg.sigma * cmat::Identity(cfg.n_r, cfg.n_r);
    CHECK((eff.y - expected).norm() <= 1e-12 * expected.norm());
}

TEST_CASE("z is Hermitian positive definite with the Kronecker trace") {
    Rng rng(8);
    const auto inst = random_instance(rng);
    CHECK((inst.eff.z - inst.eff.z.adjoint()).norm() <= 1e-12 * inst.eff.z.norm());
    CHECK(hermitian_eig(inst.eff.z).eigenvalues(0) > 0.0);
    CHECK(inst.eff.z.trace().real() ==
          doctest::Approx(inst.cfg.n_r * inst.eff.y.trace().real()));
}

TEST_CASE("effective_matrices rejects mismatched dimensions") {
    const SystemConfig cfg;
    Rng rng(4);
    const CorrelationSpec corr;
    const ChannelSet ch = draw_channels(rng, cfg, corr);
    CHECK_THROWS_AS(effective_matrices(ch, cmat::Zero(2, 2), cfg), std::invalid_argument);
}

TEST_CASE("scalar all-ones SINR is 1/2 on both streams") {
    const SystemConfig cfg = scalar_config();
    const auto eff = effective_matrices(all_ones_channel(), cmat::Ones(1, 1), cfg);
    const rvec gammas = sinr_direct(cmat::Ones(1, 1), eff, cfg);
    CHECK(gammas.size() == 2);
    CHECK(gammas(0) == doctest::Approx(0.5));
    CHECK(gammas(1) == doctest::Approx(0.5));
}

TEST_CASE("silent relay gives zero SINR everywhere") {
    Rng rng(10);
    const auto inst = random_instance(rng);
    const rvec gammas =
        sinr_direct(cmat::Zero(inst.cfg.n_r, inst.cfg.n_r), inst.eff, inst.cfg);
    CHECK(gammas.maxCoeff() == 0.0);
}

TEST_CASE("direct and quadratic-form SINRs agree") {
    Rng rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        const auto inst = random_instance(rng);
        const auto forms = build_rs_quadforms(inst.eff, inst.cfg);
        const rvec direct = sinr_direct(inst.omega, inst.eff, inst.cfg);
        const rvec quad = sinr_quadform(vec(inst.omega), forms);
        for (int i = 0; i < direct.size(); ++i) {
            CHECK(std::abs(direct(i) - quad(i)) <= 1e-10 * std::abs(direct(i)));
        }
    }
}

TEST_CASE("scalar quadratic forms have the closed-form values") {
    const SystemConfig cfg = scalar_config();
    const auto eff = effective_matrices(all_ones_channel(), cmat::Ones(1, 1), cfg);
    const auto forms = build_rs_quadforms(eff, cfg);
    REQUIRE(forms.n_streams() == 2);
    CHECK(forms.q[0](0, 0).real() == doctest::Approx(1.0));
    CHECK(forms.p[0](0, 0).real() == doctest::Approx(1.0));
    CHECK(forms.p_tilde[0](0, 0).real() == doctest::Approx(4.0));
    CHECK(forms.q[1](0, 0).real() == doctest::Approx(1.0));
    CHECK(forms.p_tilde[1](0, 0).real() == doctest::Approx(4.0));
}

TEST_CASE("single-user interference sums are empty") {
    SystemConfig cfg;
    cfg.n_u = cfg.n_b = 1;
    cfg.n_r = 3;
    Rng rng(15);
    const CorrelationSpec corr;
    const ChannelSet ch = draw_channels(rng, cfg, corr);
    cmat w = test::random_matrix(rng, 1, 1);
    w *= std::sqrt(cfg.p_b) / w.norm();
    const auto eff = effective_matrices(ch, w, cfg);
    const auto forms = build_rs_quadforms(eff, cfg);

    const double sigma_r_sq = cfg.sigma_r * cfg.sigma_r;
    for (int stream = 0; stream < 2; ++stream) {
        const cmat& a = stream == 0 ? eff.a1 : eff.a2;
        const Eigen::RowVectorXcd row = a.row(0);
        const cmat noise_only =
            kron(sigma_r_sq * cmat::Identity(cfg.n_r, cfg.n_r), row.adjoint() * row);
        CHECK((forms.p[stream] - noise_only).norm() <= 1e-12 * noise_only.norm());
    }
}

TEST_CASE("signal forms are rank one and loads match the direct denominator") {
    Rng rng(18);
    const auto inst = random_instance(rng);
    const auto forms = build_rs_quadforms(inst.eff, inst.cfg);
    const cvec omega_vec = vec(inst.omega);

    for (int i = 0; i < forms.n_streams(); ++i) {
        const Eigen::JacobiSVD<cmat> svd(forms.q[i]);
        CHECK(svd.singularValues()(1) <= 1e-10 * svd.singularValues()(0));

        const double via_form =
            (omega_vec.adjoint() * (forms.p[i] * omega_vec)).value().real();
        const double via_direct =
            denominator_minus_noise(inst.omega, inst.eff, inst.cfg, i);
        CHECK(std::abs(via_form - via_direct) <= 1e-10 * via_direct);
    }
}

TEST_CASE("uplink forms ignore the BS precoder") {
    Rng rng(21);
    const SystemConfig cfg;
    const CorrelationSpec corr;
    const ChannelSet ch = draw_channels(rng, cfg, corr);
    const cmat omega = test::random_matrix(rng, cfg.n_r, cfg.n_r);

    cmat w1 = test::random_matrix(rng, cfg.n_b, cfg.n_u);
    w1 *= std::sqrt(cfg.p_b) / w1.norm();
    cmat w2 = test::random_matrix(rng, cfg.n_b, cfg.n_u);
    w2 *= std::sqrt(cfg.p_b) / w2.norm();

    const rvec g1 = sinr_direct(omega, effective_matrices(ch, w1, cfg), cfg);
    const rvec g2 = sinr_direct(omega, effective_matrices(ch, w2, cfg), cfg);
    for (int i = cfg.n_u; i < 2 * cfg.n_u; ++i) {
        CHECK(std::abs(g1(i) - g2(i)) <= 1e-12 * std::abs(g1(i)));
    }
}

TEST_CASE("vectorized power form equals the trace form") {
    Rng rng(25);
    const auto inst = random_instance(rng);
    const cvec omega_vec = vec(inst.omega);
    const double via_z =
        (omega_vec.adjoint() * (inst.eff.z * omega_vec)).value().real();
    const double via_trace =
        (inst.omega * inst.eff.y * inst.omega.adjoint()).trace().real();
    CHECK(std::abs(via_z - via_trace) <= 1e-12 * via_trace);
}

TEST_CASE("all p_tilde forms are positive definite") {
    Rng rng(28);
    const auto inst = random_instance(rng);
    const auto forms = build_rs_quadforms(inst.eff, inst.cfg);
    for (const cmat& pt : forms.p_tilde) {
        CHECK(hermitian_eig(pt).eigenvalues(0) > 0.0);
    }
}

TEST_CASE("BS forms vanish with a silent relay") {
    Rng rng(31);
    const SystemConfig cfg;
    const CorrelationSpec corr;
    const ChannelSet ch = draw_channels(rng, cfg, corr);
    const auto bs = build_bs_quadforms(cmat::Zero(cfg.n_r, cfg.n_r), ch, cfg);
    CHECK(bs.f.norm() == 0.0);
    for (int i = 0; i < cfg.n_u; ++i) {
        CHECK(bs.sigma_w_sq(i) == doctest::Approx(cfg.sigma * cfg.sigma));
    }
}

TEST_CASE("single-user BS noise power has no interference term") {
    SystemConfig cfg;
    cfg.n_u = cfg.n_b = 1;
    cfg.n_r = 4;
    Rng rng(34);
    const CorrelationSpec corr;
    const ChannelSet ch = draw_channels(rng, cfg, corr);
    const cmat omega = test::random_matrix(rng, cfg.n_r, cfg.n_r);
    const auto bs = build_bs_quadforms(omega, ch, cfg);
    const double expected =
        cfg.sigma_r * cfg.sigma_r * (ch.h1.transpose() * omega).row(0).squaredNorm() +
        cfg.sigma * cfg.sigma;
    CHECK(bs.sigma_w_sq(0) == doctest::Approx(expected));
}

TEST_CASE("downlink SINR factors through the BS quadratic forms") {
    Rng rng(37);
    for (int rep = 0; rep < 10; ++rep) {
        const auto inst = random_instance(rng);
        const auto bs = build_bs_quadforms(inst.omega, inst.ch, inst.cfg);
        const rvec direct = sinr_direct(inst.omega, inst.eff, inst.cfg);

        const cmat fw = bs.f * inst.w;
        const cvec theta = vec(inst.w);
        for (int i = 0; i < inst.cfg.n_u; ++i) {
            double interference = 0.0;
            for (int j = 0; j < inst.cfg.n_u; ++j) {
                if (j != i) interference += std::norm(fw(i, j));
            }
            const double expected =
                std::norm(fw(i, i)) / (interference + bs.sigma_w_sq(i));
            CHECK(std::abs(direct(i) - expected) <= 1e-10 * expected);

            // theta-domain forms reproduce the same powers
            const double sig_form =
                (theta.adjoint() * (bs.c[i] * theta)).value().real();
            const double intf_form =
                (theta.adjoint() * (bs.d[i] * theta)).value().real();
            CHECK(std::abs(sig_form - std::norm(fw(i, i))) <=
                  1e-10 * std::max(1.0, sig_form));
            CHECK(std::abs(intf_form - interference) <=
                  1e-10 * std::max(1.0, intf_form));
        }
    }
}

TEST_CASE("worst_user_rate closed forms") {
    rvec two(2);
    two << 1.0, 1.0;
    CHECK(worst_user_rate(two) == doctest::Approx(0.5));

    rvec with_zero(3);
    with_zero << 0.0, 2.0, 5.0;
    CHECK(worst_user_rate(with_zero) == doctest::Approx(0.0));

    rvec three(3);
    three << 3.0, 8.0, 3.0;
    CHECK(worst_user_rate(three) == doctest::Approx(1.0));

    CHECK(worst_user_rate(three, 1.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(worst_user_rate(rvec()), std::invalid_argument);
}
