// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

// Fully unrolled Keccak-f[1600] over an abstract lane type. Instantiated for
// uint64_t (one state) and for SIMD vectors (one state per vector element).
// Everything here has internal linkage: the SIMD translation unit is compiled
// with different target flags and must not share instantiations.
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <utility>

namespace digestlab
{
namespace
{
constexpr std::array<uint64_t, 24> keccak_round_constants = {
    0x0000000000000001, 0x0000000000008082, 0x800000000000808a, 0x8000000080008000,
    0x000000000000808b, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008a, 0x0000000000000088, 0x0000000080008009, 0x000000008000000a,
    0x000000008000808b, 0x800000000000008b, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800a, 0x800000008000000a,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
};

// Rotation offset of lane (x, y), indexed x + 5y.
constexpr std::array<int, 25> keccak_rotations = {
    0, 1, 62, 28, 27,
    36, 44, 6, 55, 20,
    3, 10, 43, 25, 39,
    41, 45, 15, 21, 8,
    18, 2, 61, 56, 14,
};

// Ops must provide: xor2, xor3, rol<N>, chi(a, b, c) = a ^ (~b & c),
// and xor_constant(a, uint64_t).
template <class Ops, class Lane>
inline void keccak_round(std::array<Lane, 25>& a, uint64_t rc)
{
    Lane c[5];
    [&]<std::size_t... X>(std::index_sequence<X...>) {
        ((c[X] = Ops::xor3(Ops::xor3(a[X], a[X + 5], a[X + 10]), a[X + 15], a[X + 20])), ...);
    }(std::make_index_sequence<5>{});

    Lane d[5];
    [&]<std::size_t... X>(std::index_sequence<X...>) {
        ((d[X] = Ops::xor2(c[(X + 4) % 5], Ops::template rol<1>(c[(X + 1) % 5]))), ...);
    }(std::make_index_sequence<5>{});

    // theta + rho + pi: B[y, 2x + 3y] = rol(A[x, y] ^ D[x], r[x, y])
    std::array<Lane, 25> b;
    [&]<std::size_t... I>(std::index_sequence<I...>) {
        ((b[((I / 5) % 5) + 5 * ((2 * (I % 5) + 3 * (I / 5)) % 5)] =
                 Ops::template rol<keccak_rotations[I]>(Ops::xor2(a[I], d[I % 5]))),
            ...);
    }(std::make_index_sequence<25>{});

    // chi
    [&]<std::size_t... I>(std::index_sequence<I...>) {
        ((a[I] = Ops::chi(b[I], b[(I / 5) * 5 + (I % 5 + 1) % 5], b[(I / 5) * 5 + (I % 5 + 2) % 5])),
            ...);
    }(std::make_index_sequence<25>{});

    a[0] = Ops::xor_constant(a[0], rc);
}

template <class Ops, class Lane>
inline void keccak_permute(std::array<Lane, 25>& state)
{
    for (const uint64_t rc : keccak_round_constants)
        keccak_round<Ops>(state, rc);
}

struct ScalarOps
{
    static uint64_t xor2(uint64_t a, uint64_t b) { return a ^ b; }
    static uint64_t xor3(uint64_t a, uint64_t b, uint64_t c) { return a ^ b ^ c; }
    template <int N>
    static uint64_t rol(uint64_t v)
    {
        if constexpr (N == 0)
            return v;
        else
            return (v << N) | (v >> (64 - N));
    }
    static uint64_t chi(uint64_t a, uint64_t b, uint64_t c) { return a ^ (~b & c); }
    static uint64_t xor_constant(uint64_t a, uint64_t k) { return a ^ k; }
};
}  // namespace
}  // namespace digestlab
