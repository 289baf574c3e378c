// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/cli.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    return digestlab::cli::run(argc, argv, std::cout, std::cerr);
}
