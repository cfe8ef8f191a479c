// Copyright (c) 2026 dynwalk contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace dynwalk {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace dynwalk
