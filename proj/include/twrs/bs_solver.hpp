// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <vector>

#include "twrs/channel.hpp"
#include "twrs/model.hpp"

namespace twrs {

/// Eigenbasis of the BS-to-RS Gram matrix h2^H h2 = u diag(lambda) u^H
/// (lambda ascending). h0 = u diag(lambda)^{-1/2} whitens the channel:
/// h0^H h2^H h2 h0 == I, so W = h0 Psi gives W^H h2^H h2 W = Psi^2.
struct WhiteningBasis {
    cmat u;
    rvec lambda;
    cmat h0;
};

/// Throws SingularChannelError when h2^H h2 is numerically rank deficient
/// (min eigenvalue <= 1e-12 * max). Such trials are discarded upstream.
WhiteningBasis whitening_basis(const ChannelSet& ch);

/// Builds the relay-stage quadratic forms for a candidate BS precoder.
using FormsBuilder = std::function<QuadraticForms(const cmat& w)>;

struct BsInitializer {
    cmat w0;
    bool used_h0;
};

/// Evaluates the scaled-identity and whitened candidates under the harmonic
/// mean of the downlink eigenvalue bounds and keeps the better one.
/// Identity wins ties.
BsInitializer initializer_select(const ChannelSet& ch, const SystemConfig& cfg,
                                 const FormsBuilder& builder);

/// Per-user power reallocation: psi_i = 1 / lambda_max(x_i^{-1} q_i) with
/// x_i = p_tilde_i + q_i, over the downlink streams. Each psi_i > 1; streams
/// with vanishing signal are capped at 1e6.
rvec psi_update(const QuadraticForms& forms);

struct BsSolveResult {
    cmat w;
    int iters;
    bool used_h0;
    // Downlink lambda_max(p_tilde_i^{-1} q_i) at every evaluated iterate,
    // and the matching lambda_max(x_i^{-1} q_i) of each applied update.
    std::vector<rvec> lambda_history;
    std::vector<rvec> mu_history;
};

/// Iterative equalization of the downlink eigenvalue bounds: starting from
/// initializer_select, alternates the Psi reallocation with the closed-form
/// power renormalization until the relative spread of the downlink bounds
/// drops to tol or max_iters passes run out. trace(W^H W) == p_b holds at
/// every iterate. The update contracts by roughly 0.74 per pass, so the
/// default tolerance corresponds to the 10-iteration scale.
BsSolveResult bs_iterate(const ChannelSet& ch, const SystemConfig& cfg,
                         double tol = 3e-2, int max_iters = 50);

}  // namespace twrs
