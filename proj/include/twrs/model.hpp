// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <vector>

#include "twrs/channel.hpp"
#include "twrs/numkernel.hpp"
#include "twrs/system_config.hpp"

namespace twrs {

/// Deterministic link matrices for a fixed BS precoder W.
///
/// Downlink (user receivers): r = a1 * Omega * b1 * x_bs + a1 * Omega * c1 * x_ms + noise.
/// Uplink (BS receiver):      r = a2 * Omega * b2 * x_ms + noise; the BS cancels its own
/// back-propagated signal, so c2 is identically zero.
/// y is the relay transmit covariance shaping matrix: the RS power constraint reads
/// trace(Omega y Omega^H) <= p_r, equivalently vec(Omega)^H z vec(Omega) <= p_r with
/// z = y^T (x) I.
struct EffectiveMatrices {
    cmat a1, a2;
    cmat b1, b2;
    cmat c1, c2;
    cmat y;
    cmat z;
};

EffectiveMatrices effective_matrices(const ChannelSet& ch, const cmat& w,
                                     const SystemConfig& cfg);

/// Per-stream quadratic forms over omega = vec(Omega), merged stream order:
/// downlink users 1..n_u first, uplink streams n_u+1..2*n_u after.
///
/// For each stream i, the SINR is omega^H q[i] omega / (omega^H p[i] omega + sigma_sq),
/// with q[i] = q_vec[i] q_vec[i]^H rank one. p_tilde[i] = p[i] + (sigma_sq / power_rs) * z
/// absorbs the noise floor under an active power constraint and is positive definite.
struct QuadraticForms {
    std::vector<cvec> q_vec;
    std::vector<cmat> q;
    std::vector<cmat> p;
    std::vector<cmat> p_tilde;
    cmat z;
    double sigma_sq = 0.0;
    double power_rs = 0.0;
    int n_users = 0;

    int n_streams() const { return 2 * n_users; }
};

QuadraticForms build_rs_quadforms(const EffectiveMatrices& eff, const SystemConfig& cfg);

/// Quadratic forms of the BS subproblem over theta = vec(W), for a fixed
/// relay precoder Omega. f = h1^T Omega h2; sigma_w_sq[i] collects the
/// W-independent interference plus noise power of downlink stream i.
/// c[i] / d[i] give signal / interference powers: theta^H c[i] theta =
/// |[f W]_{i,i}|^2 and theta^H d[i] theta = sum_{j != i} |[f W]_{i,j}|^2.
struct BsQuadraticForms {
    cmat f;
    rvec sigma_w_sq;
    std::vector<cmat> d;
    std::vector<cmat> c;
};

BsQuadraticForms build_bs_quadforms(const cmat& omega, const ChannelSet& ch,
                                    const SystemConfig& cfg);

/// Per-stream SINRs evaluated straight from the link matrices
/// (downlink 1..n_u, then uplink). Self-interference is removed: the
/// diagonal c1 term per user, and the whole c2 term at the BS.
rvec sinr_direct(const cmat& omega, const EffectiveMatrices& eff, const SystemConfig& cfg);

/// Same SINRs evaluated through the vectorized quadratic forms.
rvec sinr_quadform(const cvec& omega_vec, const QuadraticForms& forms);

/// Worst-stream rate: prelog * log2(1 + min_i gamma_i). The default prelog
/// of 1/2 accounts for the two-hop half-duplex protocol.
double worst_user_rate(const rvec& gammas, double prelog = 0.5);

}  // namespace twrs
