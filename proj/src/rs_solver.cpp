// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "twrs/rs_solver.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace twrs {

namespace {

double power_form(const cvec& omega, const cmat& z) {
    return (omega.adjoint() * (z * omega)).value().real();
}

cvec rescale_to_power(const cvec& omega, const cmat& z, double power_rs) {
    const double current = power_form(omega, z);
    if (!(current > 0.0)) {
        throw std::invalid_argument("rs_solver: cannot power-normalize a zero vector");
    }
    return std::sqrt(power_rs / current) * omega;
}

}  // namespace

MinimaxBound minimax_bound(const QuadraticForms& forms) {
    MinimaxBound bound;
    bound.gamma_hat = std::numeric_limits<double>::infinity();
    cvec best_vector;
    for (int i = 0; i < forms.n_streams(); ++i) {
        const MaxEigPair pair = generalized_max_eig(forms.q[i], forms.p_tilde[i]);
        if (pair.value < bound.gamma_hat) {
            bound.gamma_hat = pair.value;
            best_vector = pair.vector;
        }
    }
    bound.omega0 = rescale_to_power(best_vector, forms.z, forms.power_rs);
    return bound;
}

rvec lm_residuals(const cvec& omega_vec, double gamma, const QuadraticForms& forms) {
    rvec r(forms.n_streams());
    for (int i = 0; i < forms.n_streams(); ++i) {
        const double signal = std::norm(forms.q_vec[i].dot(omega_vec));
        const double load =
            (omega_vec.adjoint() * (forms.p_tilde[i] * omega_vec)).value().real();
        r(i) = signal - gamma * load;
    }
    return r;
}

LmResult lm_solve(const cvec& omega0, double gamma, const QuadraticForms& forms,
                  const LmParams& params) {
    if (gamma < 0.0) {
        throw std::invalid_argument("lm_solve: gamma must be nonnegative");
    }
    const int n_streams = forms.n_streams();
    const Eigen::Index n = omega0.size();

    // gamma is fixed for the whole solve, so the Hermitian forms
    // m_i = q_i - gamma * p_tilde_i can be assembled once.
    std::vector<cmat> m(n_streams);
    for (int i = 0; i < n_streams; ++i) {
        m[i] = forms.q[i] - gamma * forms.p_tilde[i];
    }

    cvec omega = rescale_to_power(omega0, forms.z, forms.power_rs);

    // Residuals are composed with the power rescaling, so they are evaluated
    // on the shell and are scale invariant. The Jacobian therefore carries a
    // radial correction term: without it every Gauss-Newton step is mostly
    // "shrink omega", which the rescaling undoes, and the solver stalls.
    const auto eval = [&](const cvec& w, rvec& r, Eigen::MatrixXd* jac) {
        r.resize(n_streams);
        const cvec zw = jac != nullptr ? cvec(forms.z * w) : cvec();
        for (int i = 0; i < n_streams; ++i) {
            const cvec mw = m[i] * w;
            r(i) = w.dot(mw).real();
            if (jac != nullptr) {
                const cvec tangent = 2.0 * (mw - (r(i) / forms.power_rs) * zw);
                jac->row(i).head(n) = tangent.real().transpose();
                jac->row(i).tail(n) = tangent.imag().transpose();
            }
        }
    };

    Eigen::MatrixXd jac(n_streams, 2 * n);
    rvec r;
    eval(omega, r, &jac);
    double cost = r.squaredNorm();

    LmResult result{omega, false, 0};
    if (r.lpNorm<Eigen::Infinity>() <= params.residual_tol) {
        result.omega = omega;
        result.converged = true;
        return result;
    }

    double damping = params.damping_init;
    bool refresh_jacobian = false;

    while (result.iters < params.max_iters) {
        ++result.iters;
        if (refresh_jacobian) {
            eval(omega, r, &jac);
            cost = r.squaredNorm();
            refresh_jacobian = false;
        }

        // Far fewer residuals than unknowns, so solve the damped step in its
        // dual form: (J^T J + mu I)^{-1} J^T r == J^T (J J^T + mu I)^{-1} r.
        const Eigen::MatrixXd gram =
            jac * jac.transpose() +
            damping * Eigen::MatrixXd::Identity(n_streams, n_streams);
        const rvec step = -jac.transpose() * gram.ldlt().solve(r);

        const cvec omega_trial = rescale_to_power(
            omega + cvec(step.head(n).cast<cdouble>() +
                         cdouble(0.0, 1.0) * step.tail(n).cast<cdouble>()),
            forms.z, forms.power_rs);

        rvec r_trial;
        eval(omega_trial, r_trial, nullptr);
        const double cost_trial = r_trial.squaredNorm();

        if (cost_trial < cost && std::isfinite(cost_trial)) {
            omega = omega_trial;
            r = r_trial;
            cost = cost_trial;
            damping = std::max(damping * params.damping_down, 1e-15);
            refresh_jacobian = true;
            if (r.lpNorm<Eigen::Infinity>() <= params.residual_tol ||
                step.norm() <= params.step_tol) {
                result.converged = true;
                break;
            }
        } else {
            damping *= params.damping_up;
            if (step.norm() <= params.step_tol) {
                // No usable descent direction left; treat as stationary.
                result.converged = true;
                break;
            }
            if (damping > 1e15) break;
        }
    }

    result.omega = omega;
    if (!result.converged && r.lpNorm<Eigen::Infinity>() <= params.residual_tol) {
        result.converged = true;
    }
    return result;
}

RsSolveResult bisection_solve(const QuadraticForms& forms, const LmParams& params,
                              double bis_tol, bool warm_start) {
    const MinimaxBound bound = minimax_bound(forms);
    const Eigen::Index n_r = static_cast<Eigen::Index>(
        std::llround(std::sqrt(static_cast<double>(bound.omega0.size()))));

    RsSolveResult result;
    result.gamma_hat = bound.gamma_hat;
    result.bisection_iters = 0;
    result.lm_iters_total = 0;

    const auto achieved_min = [&](const cvec& w) {
        return sinr_quadform(w, forms).minCoeff();
    };

    cvec best_omega = bound.omega0;
    double best_achieved = achieved_min(best_omega);

    double lo = 0.0;
    double hi = bound.gamma_hat;
    cvec warm = bound.omega0;
    const int max_bisection_steps = 40;

    while (hi - lo > bis_tol * bound.gamma_hat &&
           result.bisection_iters < max_bisection_steps) {
        ++result.bisection_iters;
        const double target = 0.5 * (lo + hi);
        const cvec& start = warm_start ? warm : bound.omega0;
        const LmResult lm = lm_solve(start, target, forms, params);
        result.lm_iters_total += lm.iters;

        const double lm_achieved = achieved_min(lm.omega);
        if (lm_achieved > best_achieved) {
            best_achieved = lm_achieved;
            best_omega = lm.omega;
        }
        const bool feasible = lm.converged && lm_achieved >= target * (1.0 - 1e-6);
        if (feasible) {
            lo = target;
            warm = lm.omega;
        } else {
            hi = target;
        }
    }

    const cvec final_omega = rescale_to_power(best_omega, forms.z, forms.power_rs);
    result.per_stream_sinr = sinr_quadform(final_omega, forms);
    result.gamma_star = result.per_stream_sinr.minCoeff();
    result.omega = unvec(final_omega, n_r, n_r);
    return result;
}

}  // namespace twrs
