// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "twrs/model.hpp"
#include "twrs/numkernel.hpp"

namespace twrs {

/// Damped Gauss-Newton (Levenberg-Marquardt) tuning knobs.
struct LmParams {
    int max_iters = 200;
    double damping_init = 1e-3;
    double damping_up = 10.0;
    double damping_down = 0.1;
    double residual_tol = 1e-8;
    double step_tol = 1e-12;
};

/// Minimax upper bound gamma_hat on the max-min SINR, together with the
/// power-scaled eigenvector of the bound-attaining stream. omega0 satisfies
/// omega0^H z omega0 == power_rs and serves as the LM starting point.
struct MinimaxBound {
    double gamma_hat;
    cvec omega0;
};

/// gamma_hat = min over streams of lambda_max(p_tilde_i^{-1} q_i), evaluated
/// through the symmetrized pencil. Ties pick the lowest stream index.
MinimaxBound minimax_bound(const QuadraticForms& forms);

/// Residuals r_i = omega^H q_i omega - gamma * omega^H p_tilde_i omega.
/// Real by Hermitian symmetry; all zero exactly when every stream meets the
/// SINR target gamma with the noise floor absorbed at full relay power.
rvec lm_residuals(const cvec& omega_vec, double gamma, const QuadraticForms& forms);

struct LmResult {
    cvec omega;
    bool converged;
    int iters;
};

/// Levenberg-Marquardt on the stacked real/imaginary parts of omega. Every
/// iterate is rescaled onto the power shell omega^H z omega == power_rs.
/// Stops when ||r||_inf <= residual_tol, the step norm drops below step_tol,
/// or max_iters is exhausted (converged == false in the last case).
LmResult lm_solve(const cvec& omega0, double gamma, const QuadraticForms& forms,
                  const LmParams& params = {});

struct RsSolveResult {
    cmat omega;            // n_r x n_r relay precoder
    double gamma_star;     // achieved min-stream SINR
    double gamma_hat;      // minimax upper bound
    int bisection_iters;
    int lm_iters_total;
    rvec per_stream_sinr;
};

/// Bisection on the SINR target over [0, gamma_hat]. A target is feasible
/// when LM converges and the achieved min-stream SINR (true noise floor,
/// full relay power) reaches it within 1e-6 relative. Warm-starting reuses
/// the last feasible omega; disabled, every probe restarts from omega0.
RsSolveResult bisection_solve(const QuadraticForms& forms, const LmParams& params = {},
                              double bis_tol = 1e-3, bool warm_start = true);

}  // namespace twrs
