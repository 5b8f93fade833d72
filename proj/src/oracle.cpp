// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#include "twrs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "twrs/rng.hpp"

namespace twrs {

OracleReport random_search_rs(const QuadraticForms& forms, std::int64_t samples,
                              std::uint64_t seed) {
    if (samples < 1) {
        throw std::invalid_argument("random_search_rs: samples must be >= 1");
    }
    const Eigen::Index n = forms.z.rows();
    constexpr std::int64_t kBlock = 1 << 16;

    OracleReport report;
    report.samples = samples;
    report.seed = seed;
    report.best_gamma = -1.0;

    cvec omega(n);
    for (std::int64_t block = 0, done = 0; done < samples; ++block) {
        Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(block)}));
        const std::int64_t batch = std::min(kBlock, samples - done);
        for (std::int64_t s = 0; s < batch; ++s) {
            for (Eigen::Index k = 0; k < n; ++k) omega(k) = rng.cgaussian();
            const double power = (omega.adjoint() * (forms.z * omega)).value().real();
            omega *= std::sqrt(forms.power_rs / power);

            double worst = std::numeric_limits<double>::infinity();
            for (int i = 0; i < forms.n_streams(); ++i) {
                const double num = std::norm(forms.q_vec[i].dot(omega));
                const double den =
                    (omega.adjoint() * (forms.p[i] * omega)).value().real() +
                    forms.sigma_sq;
                worst = std::min(worst, num / den);
                if (worst <= report.best_gamma) break;
            }
            if (worst > report.best_gamma) {
                report.best_gamma = worst;
                report.best_omega = omega;
            }
        }
        done += batch;
    }
    return report;
}

OracleReport grid_search_scalar(const QuadraticForms& forms, int grid) {
    if (forms.z.rows() != 1) {
        throw std::invalid_argument("grid_search_scalar: only the n_r == 1 system is supported");
    }
    if (grid < 2) {
        throw std::invalid_argument("grid_search_scalar: grid must have at least 2 points");
    }
    const double z = forms.z(0, 0).real();
    const double max_mag = std::sqrt(forms.power_rs / z);

    OracleReport report;
    report.samples = grid;
    report.best_gamma = -1.0;
    for (int g = 0; g < grid; ++g) {
        const double mag = max_mag * static_cast<double>(g + 1) / grid;
        const double mag_sq = mag * mag;
        double worst = std::numeric_limits<double>::infinity();
        for (int i = 0; i < forms.n_streams(); ++i) {
            const double num = std::norm(forms.q_vec[i](0)) * mag_sq;
            const double den = forms.p[i](0, 0).real() * mag_sq + forms.sigma_sq;
            worst = std::min(worst, num / den);
        }
        if (worst > report.best_gamma) {
            report.best_gamma = worst;
            report.best_omega = cvec::Constant(1, cdouble(mag, 0.0));
        }
    }
    return report;
}

}  // namespace twrs
