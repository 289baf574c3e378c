// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <digestlab/digest.hpp>

#include <span>

namespace digestlab
{
inline constexpr size_t keccak256_rate = 136;
inline constexpr size_t keccak_simd_lanes = 8;

/// Eight independent Keccak-256 digests with one AVX-512 permutation. Every
/// message must be shorter than one rate block. Only call when the CPU
/// reports avx512f.
void keccak256_x8_single_block(std::span<const BytesView> messages, std::span<Digest256> out);
}  // namespace digestlab
