// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

// Compiled with -mavx512f. Reached only through the runtime check in keccak.cpp.

#include "keccak_round.hpp"
#include "keccak_simd.hpp"

#include <immintrin.h>

#include <cstring>

// std::array<__m512i, N> drops the vector alignment attribute from the
// template argument; the array is still correctly aligned.
#pragma GCC diagnostic ignored "-Wignored-attributes"

namespace digestlab
{
namespace
{
struct Avx512Ops
{
    static __m512i xor2(__m512i a, __m512i b) { return _mm512_xor_si512(a, b); }
    static __m512i xor3(__m512i a, __m512i b, __m512i c)
    {
        return _mm512_ternarylogic_epi64(a, b, c, 0x96);
    }
    template <int N>
    static __m512i rol(__m512i v)
    {
        if constexpr (N == 0)
            return v;
        else
            return _mm512_rol_epi64(v, N);
    }
    // a ^ (~b & c)
    static __m512i chi(__m512i a, __m512i b, __m512i c)
    {
        return _mm512_ternarylogic_epi64(a, b, c, 0xd2);
    }
    static __m512i xor_constant(__m512i a, uint64_t k)
    {
        return _mm512_xor_si512(a, _mm512_set1_epi64(static_cast<long long>(k)));
    }
};
}  // namespace

__attribute__((flatten)) void keccak256_x8_single_block(
    std::span<const BytesView> messages, std::span<Digest256> out)
{
    alignas(64) uint8_t blocks[keccak_simd_lanes][keccak256_rate] = {};
    for (size_t lane = 0; lane < keccak_simd_lanes; ++lane)
    {
        const auto& m = messages[lane];
        if (!m.empty())
            std::memcpy(blocks[lane], m.data(), m.size());
        blocks[lane][m.size()] ^= 0x01;
        blocks[lane][keccak256_rate - 1] ^= 0x80;
    }

    const __m512i stride = _mm512_setr_epi64(0, 1 * keccak256_rate, 2 * keccak256_rate,
        3 * keccak256_rate, 4 * keccak256_rate, 5 * keccak256_rate, 6 * keccak256_rate,
        7 * keccak256_rate);
    std::array<__m512i, 25> state;
    for (size_t w = 0; w < keccak256_rate / 8; ++w)
        state[w] = _mm512_i64gather_epi64(stride, blocks[0] + 8 * w, 1);
    for (size_t w = keccak256_rate / 8; w < 25; ++w)
        state[w] = _mm512_setzero_si512();

    keccak_permute<Avx512Ops>(state);

    alignas(64) uint64_t words[4][keccak_simd_lanes];
    for (size_t w = 0; w < 4; ++w)
        _mm512_store_si512(words[w], state[w]);
    for (size_t lane = 0; lane < keccak_simd_lanes; ++lane)
        for (size_t w = 0; w < 4; ++w)
            std::memcpy(out[lane].bytes.data() + 8 * w, &words[w][lane], 8);
}
}  // namespace digestlab
