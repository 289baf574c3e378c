// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/version.hpp>

namespace digestlab
{
std::string_view version() noexcept
{
    return DIGESTLAB_VERSION;
}
}  // namespace digestlab
