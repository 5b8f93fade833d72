// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>

#include "twrs/model.hpp"

namespace twrs {

/// Best relay beamformer found by a brute-force baseline.
struct OracleReport {
    double best_gamma = 0.0;
    cvec best_omega;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Random search: draws complex Gaussian omega vectors, rescales each onto
/// the relay power shell and keeps the best min-stream SINR. Sampling is
/// partitioned into fixed-size blocks with sub-seeds derived from (seed,
/// block index), so results do not depend on how blocks are scheduled.
OracleReport random_search_rs(const QuadraticForms& forms, std::int64_t samples,
                              std::uint64_t seed);

/// Exhaustive magnitude grid for the scalar relay (n_r == 1), where only
/// |omega| matters. Throws std::invalid_argument for larger systems.
OracleReport grid_search_scalar(const QuadraticForms& forms, int grid);

}  // namespace twrs
