// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "twrs/numkernel.hpp"
#include "twrs/rng.hpp"
#include "twrs/system_config.hpp"

namespace twrs {

/// Exponential correlation coefficients of the Kronecker channel model,
/// one per antenna array. Each must lie in [0, 1).
struct CorrelationSpec {
    double rho_bs = 0.6172;
    double rho_rs = 0.5883;
    double rho_ms = 0.1;
};

/// Throws std::invalid_argument when a coefficient is outside [0, 1).
void validate(const CorrelationSpec& corr);

/// One fading realization: h1 is the users-to-relay channel (n_r x n_u),
/// h2 the BS-to-relay channel (n_r x n_b).
struct ChannelSet {
    cmat h1;
    cmat h2;
};

/// Real symmetric Toeplitz matrix with entry (i, j) = rho^|i-j|.
/// Positive definite for rho in [0, 1); rho >= 1 throws.
cmat correlation_matrix(double rho, Eigen::Index n);

/// Draws a correlated Rayleigh channel pair: i.i.d. CN(0,1) entries shaped
/// as R_rs^{1/2} G R_ms^{1/2} (users side) and R_rs^{1/2} G R_bs^{1/2}
/// (BS side). Deterministic for a given rng state.
ChannelSet draw_channels(Rng& rng, const SystemConfig& cfg, const CorrelationSpec& corr);

}  // namespace twrs
