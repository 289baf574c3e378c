// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>

namespace digestlab::cli
{
enum ExitCode : int
{
    exit_ok = 0,
    exit_failure = 1,
    exit_usage = 2,
    exit_exhausted = 3,
    exit_rejected = 4,
};

/// Runs one `digestlab` invocation. Results go to `out` (and to --out when
/// given), diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
}  // namespace digestlab::cli
