// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace twrs {

/// Matrix argument fails a positive-semidefiniteness requirement.
struct NotPsdError : std::runtime_error {
    explicit NotPsdError(const std::string& what) : std::runtime_error(what) {}
};

/// A pencil or linear system is too ill-conditioned to solve reliably.
struct IllConditionedError : std::runtime_error {
    explicit IllConditionedError(const std::string& what) : std::runtime_error(what) {}
};

/// The BS-RS channel is (numerically) rank deficient; the trial should be discarded.
struct SingularChannelError : std::runtime_error {
    explicit SingularChannelError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace twrs
