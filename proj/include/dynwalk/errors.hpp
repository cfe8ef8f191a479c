// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>

namespace dynwalk {

/// A requested computation exceeds a hard size/step budget.
class ResourceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An iterative solve did not reach its tolerance within the sweep cap.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An estimator declined to run because its statistical floor is violated.
class RefusalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace dynwalk
