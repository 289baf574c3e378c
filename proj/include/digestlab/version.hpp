// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace digestlab
{
std::string_view version() noexcept;
}  // namespace digestlab
