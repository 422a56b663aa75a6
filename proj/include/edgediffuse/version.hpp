// Copyright 2026 The edge-diffuse Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

namespace edgediffuse {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace edgediffuse
