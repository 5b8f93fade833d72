// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "twrs/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace twrs {

void validate(const SystemConfig& cfg) {
    if (cfg.n_u < 1 || cfg.n_u > cfg.n_r) {
        throw std::invalid_argument("SystemConfig: requires 1 <= n_u <= n_r");
    }
    if (cfg.n_u != cfg.n_b) {
        throw std::invalid_argument("SystemConfig: requires n_u == n_b");
    }
    if (cfg.p_u <= 0.0 || cfg.p_b <= 0.0 || cfg.p_r <= 0.0) {
        throw std::invalid_argument("SystemConfig: power budgets must be positive");
    }
    if (cfg.sigma_r <= 0.0 || cfg.sigma <= 0.0) {
        throw std::invalid_argument("SystemConfig: noise levels must be positive");
    }
}

void validate(const CorrelationSpec& corr) {
    for (const double rho : {corr.rho_bs, corr.rho_rs, corr.rho_ms}) {
        if (rho < 0.0 || rho >= 1.0) {
            throw std::invalid_argument("CorrelationSpec: coefficients must lie in [0, 1)");
        }
    }
}

cmat correlation_matrix(double rho, Eigen::Index n) {
    if (rho < 0.0 || rho >= 1.0) {
        throw std::invalid_argument("correlation_matrix: rho must lie in [0, 1)");
    }
    if (n < 1) {
        throw std::invalid_argument("correlation_matrix: n must be >= 1");
    }
    cmat r(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            r(i, j) = std::pow(rho, std::abs(static_cast<double>(i - j)));
        }
    }
    return r;
}

namespace {

cmat draw_iid(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    cmat g(rows, cols);
    // Column-major fill order is part of the reproducibility contract.
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) {
            g(i, j) = rng.cgaussian();
        }
    }
    return g;
}

}  // namespace

ChannelSet draw_channels(Rng& rng, const SystemConfig& cfg, const CorrelationSpec& corr) {
    validate(cfg);
    validate(corr);
    const cmat r_rs_half = psd_sqrt(correlation_matrix(corr.rho_rs, cfg.n_r));
    const cmat r_ms_half = psd_sqrt(correlation_matrix(corr.rho_ms, cfg.n_u));
    const cmat r_bs_half = psd_sqrt(correlation_matrix(corr.rho_bs, cfg.n_b));

    ChannelSet ch;
    ch.h1 = r_rs_half * draw_iid(rng, cfg.n_r, cfg.n_u) * r_ms_half;
    ch.h2 = r_rs_half * draw_iid(rng, cfg.n_r, cfg.n_b) * r_bs_half;
    return ch;
}

}  // namespace twrs
