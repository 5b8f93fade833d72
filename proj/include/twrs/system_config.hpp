// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

namespace twrs {

/// Antenna counts, power budgets and noise levels of one relay cell.
///
/// n_u users with a single antenna each talk to an n_b-antenna base station
/// through an n_r-antenna amplify-and-forward relay. The model assumes
/// n_u == n_b and 1 <= n_u <= n_r. Powers are sum budgets in watts, sigma_r
/// and sigma are noise standard deviations at the relay and the terminals.
struct SystemConfig {
    int n_b = 3;
    int n_r = 6;
    int n_u = 3;
    double p_u = 31.6227766016837933;  // 10^1.5
    double p_b = 31.6227766016837933;
    double p_r = 31.6227766016837933;
    double sigma_r = 1.0;
    double sigma = 1.0;
};

/// Throws std::invalid_argument when a field violates the documented bounds.
void validate(const SystemConfig& cfg);

}  // namespace twrs
