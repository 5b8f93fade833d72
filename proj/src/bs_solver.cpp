// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "twrs/bs_solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "twrs/errors.hpp"

namespace twrs {

namespace {

constexpr double kPsiCap = 1e6;

// Rank-1 shortcut: lambda_max(p_tilde^{-1} q q^H) = q^H p_tilde^{-1} q,
// evaluated with a Cholesky solve.
rvec downlink_bound_values(const QuadraticForms& forms) {
    rvec values(forms.n_users);
    for (int i = 0; i < forms.n_users; ++i) {
        const Eigen::LLT<cmat> llt(forms.p_tilde[i]);
        if (llt.info() != Eigen::Success) {
            throw IllConditionedError("bs_solver: p_tilde is not positive definite");
        }
        values(i) = forms.q_vec[i].dot(llt.solve(forms.q_vec[i])).real();
    }
    return values;
}

// lambda_max(x_i^{-1} q_i) with x_i = p_tilde_i + q_i, via the symmetrized
// pencil; independent of the Cholesky route above.
rvec downlink_shifted_pencil_values(const QuadraticForms& forms) {
    rvec mu(forms.n_users);
    for (int i = 0; i < forms.n_users; ++i) {
        const cmat x = forms.p_tilde[i] + forms.q[i];
        mu(i) = generalized_max_eig(forms.q[i], x).value;
    }
    return mu;
}

double harmonic_mean(const rvec& values) {
    double inv_sum = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (values(i) <= 0.0) return 0.0;
        inv_sum += 1.0 / values(i);
    }
    return static_cast<double>(values.size()) / inv_sum;
}

cmat renormalize_power(const cmat& w, double p_b) {
    const double power = w.squaredNorm();
    return std::sqrt(p_b / power) * w;
}

}  // namespace

WhiteningBasis whitening_basis(const ChannelSet& ch) {
    const cmat gram = ch.h2.adjoint() * ch.h2;
    const HermitianEigResult eig = hermitian_eig(gram);
    const double max_eig = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (eig.eigenvalues(0) <= 1e-12 * max_eig) {
        throw SingularChannelError("whitening_basis: h2^H h2 is numerically singular");
    }
    WhiteningBasis basis;
    basis.u = eig.eigenvectors;
    basis.lambda = eig.eigenvalues;
    basis.h0 = basis.u * eig.eigenvalues.cwiseInverse().cwiseSqrt().asDiagonal();
    return basis;
}

BsInitializer initializer_select(const ChannelSet& ch, const SystemConfig& cfg,
                                 const FormsBuilder& builder) {
    const Eigen::Index n = cfg.n_b;
    const cmat w_identity = std::sqrt(cfg.p_b / cfg.n_b) * cmat::Identity(n, cfg.n_u);

    const WhiteningBasis basis = whitening_basis(ch);
    const double inv_trace = basis.lambda.cwiseInverse().sum();
    const cmat w_whitened = std::sqrt(cfg.p_b / inv_trace) * basis.h0;

    const double hm_identity = harmonic_mean(downlink_bound_values(builder(w_identity)));
    const double hm_whitened = harmonic_mean(downlink_bound_values(builder(w_whitened)));

    BsInitializer init;
    init.used_h0 = hm_whitened > hm_identity;
    init.w0 = init.used_h0 ? w_whitened : w_identity;
    return init;
}

rvec psi_update(const QuadraticForms& forms) {
    const rvec mu = downlink_shifted_pencil_values(forms);
    rvec psi(mu.size());
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        psi(i) = mu(i) > 1.0 / kPsiCap ? 1.0 / mu(i) : kPsiCap;
    }
    return psi;
}

BsSolveResult bs_iterate(const ChannelSet& ch, const SystemConfig& cfg,
                         double tol, int max_iters) {
    if (max_iters < 1) {
        throw std::invalid_argument("bs_iterate: max_iters must be >= 1");
    }
    const FormsBuilder builder = [&](const cmat& w) {
        return build_rs_quadforms(effective_matrices(ch, w, cfg), cfg);
    };
    const BsInitializer init = initializer_select(ch, cfg, builder);

    BsSolveResult result;
    result.w = init.w0;
    result.used_h0 = init.used_h0;
    result.iters = max_iters;

    for (int l = 1; l <= max_iters; ++l) {
        const QuadraticForms forms = builder(result.w);
        const rvec bounds = downlink_bound_values(forms);
        result.lambda_history.push_back(bounds);

        const double worst = bounds.minCoeff();
        const double best = bounds.maxCoeff();
        if (best <= 0.0 || (worst > 0.0 && best / worst - 1.0 <= tol)) {
            result.iters = l;
            break;
        }

        const rvec mu = downlink_shifted_pencil_values(forms);
        result.mu_history.push_back(mu);
        rvec psi(mu.size());
        for (Eigen::Index i = 0; i < mu.size(); ++i) {
            psi(i) = mu(i) > 1.0 / kPsiCap ? 1.0 / mu(i) : kPsiCap;
        }

        result.w = renormalize_power(result.w * psi.cast<cdouble>().asDiagonal(), cfg.p_b);
        result.iters = l;
    }
    return result;
}

}  // namespace twrs
