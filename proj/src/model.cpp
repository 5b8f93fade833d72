// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "twrs/model.hpp"

#include <cmath>
#include <stdexcept>

namespace twrs {

EffectiveMatrices effective_matrices(const ChannelSet& ch, const cmat& w,
                                     const SystemConfig& cfg) {
    validate(cfg);
    if (ch.h1.rows() != cfg.n_r || ch.h1.cols() != cfg.n_u ||
        ch.h2.rows() != cfg.n_r || ch.h2.cols() != cfg.n_b) {
        throw std::invalid_argument("effective_matrices: channel dimensions do not match config");
    }
    if (w.rows() != cfg.n_b || w.cols() != cfg.n_u) {
        throw std::invalid_argument("effective_matrices: w must be n_b x n_u");
    }

    const double t1 = std::sqrt(cfg.p_u / cfg.n_u);  // per-user amplitude, equal budgets

    EffectiveMatrices eff;
    eff.a1 = ch.h1.transpose();
    eff.a2 = ch.h2.transpose();
    eff.b1 = ch.h2 * w;
    eff.b2 = t1 * ch.h1;
    eff.c1 = t1 * ch.h1;
    eff.c2 = cmat::Zero(cfg.n_r, cfg.n_u);  // BS self-interference removed

    eff.y = eff.b1 * eff.b1.adjoint() + (cfg.p_u / cfg.n_u) * ch.h1 * ch.h1.adjoint() +
            cfg.sigma * cfg.sigma * cmat::Identity(cfg.n_r, cfg.n_r);
    eff.y = 0.5 * (eff.y + eff.y.adjoint());
    eff.z = kron(eff.y.transpose(), cmat::Identity(cfg.n_r, cfg.n_r));
    return eff;
}

namespace {

// q vector of one (receive row, transmit column) pair:
// [A Omega B]_{i,j} = q^H vec(Omega) with q = (b_j^T (x) a_i)^H.
cvec stream_vector(const Eigen::RowVectorXcd& a_row, const cvec& b_col) {
    const Eigen::Index n = a_row.size();
    cvec q(n * b_col.size());
    for (Eigen::Index k = 0; k < b_col.size(); ++k) {
        q.segment(k * n, n) = std::conj(b_col(k)) * a_row.adjoint();
    }
    return q;
}

}  // namespace

QuadraticForms build_rs_quadforms(const EffectiveMatrices& eff, const SystemConfig& cfg) {
    const int n_u = cfg.n_u;
    const Eigen::Index n_r = eff.y.rows();
    const double sigma_r_sq = cfg.sigma_r * cfg.sigma_r;

    QuadraticForms forms;
    forms.n_users = n_u;
    forms.sigma_sq = cfg.sigma * cfg.sigma;
    forms.power_rs = cfg.p_r;
    forms.z = eff.z;
    forms.q_vec.reserve(2 * n_u);
    forms.q.reserve(2 * n_u);
    forms.p.reserve(2 * n_u);
    forms.p_tilde.reserve(2 * n_u);

    for (int hop = 0; hop < 2; ++hop) {
        const cmat& a = hop == 0 ? eff.a1 : eff.a2;
        const cmat& b = hop == 0 ? eff.b1 : eff.b2;
        const cmat& c = hop == 0 ? eff.c1 : eff.c2;
        const bool has_c = hop == 0;  // c2 == 0, its S terms vanish

        for (int i = 0; i < n_u; ++i) {
            const Eigen::RowVectorXcd a_row = a.row(i);
            cmat noise = kron(sigma_r_sq * cmat::Identity(n_r, n_r),
                              a_row.adjoint() * a_row);
            cmat p = noise;
            for (int j = 0; j < n_u; ++j) {
                if (j == i) continue;
                const cvec qij = stream_vector(a_row, b.col(j));
                p.noalias() += qij * qij.adjoint();
                if (has_c) {
                    const cvec sij = stream_vector(a_row, c.col(j));
                    p.noalias() += sij * sij.adjoint();
                }
            }
            p = 0.5 * (p + p.adjoint());

            cvec qii = stream_vector(a_row, b.col(i));
            forms.q.push_back(qii * qii.adjoint());
            forms.q_vec.push_back(std::move(qii));
            forms.p_tilde.push_back(p + (forms.sigma_sq / forms.power_rs) * forms.z);
            forms.p.push_back(std::move(p));
        }
    }
    return forms;
}

BsQuadraticForms build_bs_quadforms(const cmat& omega, const ChannelSet& ch,
                                    const SystemConfig& cfg) {
    validate(cfg);
    const int n_u = cfg.n_u;
    const double t1 = std::sqrt(cfg.p_u / cfg.n_u);
    const cmat h1t_omega = ch.h1.transpose() * omega;

    BsQuadraticForms bs;
    bs.f = h1t_omega * ch.h2;
    bs.sigma_w_sq.resize(n_u);

    const cmat back_prop = t1 * (h1t_omega * ch.h1);
    for (int i = 0; i < n_u; ++i) {
        double interference = 0.0;
        for (int j = 0; j < n_u; ++j) {
            if (j != i) interference += std::norm(back_prop(i, j));
        }
        bs.sigma_w_sq(i) = interference +
                           cfg.sigma_r * cfg.sigma_r * h1t_omega.row(i).squaredNorm() +
                           cfg.sigma * cfg.sigma;
    }

    const cmat eye = cmat::Identity(n_u, n_u);
    for (int i = 0; i < n_u; ++i) {
        const Eigen::RowVectorXcd f_row = bs.f.row(i);
        const cmat f_outer = f_row.adjoint() * f_row;
        cmat d = cmat::Zero(n_u * bs.f.cols(), n_u * bs.f.cols());
        for (int j = 0; j < n_u; ++j) {
            const cmat sel = eye.col(j) * eye.row(j);
            if (j == i) {
                bs.c.push_back(kron(sel, f_outer));
            } else {
                d += kron(sel, f_outer);
            }
        }
        bs.d.push_back(std::move(d));
    }
    return bs;
}

rvec sinr_direct(const cmat& omega, const EffectiveMatrices& eff, const SystemConfig& cfg) {
    const int n_u = cfg.n_u;
    const double sigma_sq = cfg.sigma * cfg.sigma;
    const double sigma_r_sq = cfg.sigma_r * cfg.sigma_r;

    rvec gammas(2 * n_u);
    for (int hop = 0; hop < 2; ++hop) {
        const cmat& a = hop == 0 ? eff.a1 : eff.a2;
        const cmat& b = hop == 0 ? eff.b1 : eff.b2;
        const cmat a_omega = a * omega;
        const cmat signal = a_omega * b;
        const cmat interf_c = hop == 0 ? cmat(a_omega * eff.c1) : cmat();

        for (int i = 0; i < n_u; ++i) {
            double denom = sigma_r_sq * a_omega.row(i).squaredNorm() + sigma_sq;
            for (int j = 0; j < n_u; ++j) {
                if (j == i) continue;
                denom += std::norm(signal(i, j));
                if (hop == 0) denom += std::norm(interf_c(i, j));
            }
            gammas(hop * n_u + i) = std::norm(signal(i, i)) / denom;
        }
    }
    return gammas;
}

rvec sinr_quadform(const cvec& omega_vec, const QuadraticForms& forms) {
    rvec gammas(forms.n_streams());
    for (int i = 0; i < forms.n_streams(); ++i) {
        const double num = std::norm(forms.q_vec[i].dot(omega_vec));
        const double den =
            (omega_vec.adjoint() * (forms.p[i] * omega_vec)).value().real() + forms.sigma_sq;
        gammas(i) = num / den;
    }
    return gammas;
}

double worst_user_rate(const rvec& gammas, double prelog) {
    if (gammas.size() == 0) {
        throw std::invalid_argument("worst_user_rate: empty SINR sequence");
    }
    return prelog * std::log2(1.0 + gammas.minCoeff());
}

}  // namespace twrs
