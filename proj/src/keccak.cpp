// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "keccak_round.hpp"
#include "keccak_simd.hpp"

#include <digestlab/digest.hpp>

#include <bit>
#include <cstring>

namespace digestlab
{
namespace
{
inline uint64_t load_le64(const uint8_t* p) noexcept
{
    uint64_t v;
    std::memcpy(&v, p, 8);
    if constexpr (std::endian::native == std::endian::big)
        v = __builtin_bswap64(v);
    return v;
}

inline void absorb_block(std::array<uint64_t, 25>& state, const uint8_t* block) noexcept
{
    for (size_t i = 0; i < keccak256_rate / 8; ++i)
        state[i] ^= load_le64(block + 8 * i);
    keccakf1600(state);
}

bool simd_available() noexcept
{
#if defined(DIGESTLAB_HAVE_AVX512)
    static const bool available = __builtin_cpu_supports("avx512f");
    return available;
#else
    return false;
#endif
}
}  // namespace

__attribute__((flatten)) void keccakf1600(std::array<uint64_t, 25>& state) noexcept
{
    keccak_permute<ScalarOps>(state);
}

Digest256 keccak256(BytesView message) noexcept
{
    std::array<uint64_t, 25> state{};

    const uint8_t* p = message.data();
    size_t remaining = message.size();
    while (remaining >= keccak256_rate)
    {
        absorb_block(state, p);
        p += keccak256_rate;
        remaining -= keccak256_rate;
    }

    uint8_t last[keccak256_rate] = {};
    if (remaining != 0)
        std::memcpy(last, p, remaining);
    last[remaining] ^= 0x01;
    last[keccak256_rate - 1] ^= 0x80;
    absorb_block(state, last);

    Digest256 out;
    for (size_t i = 0; i < 4; ++i)
    {
        const uint64_t lane = state[i];
        for (size_t j = 0; j < 8; ++j)
            out.bytes[8 * i + j] = static_cast<uint8_t>(lane >> (8 * j));
    }
    return out;
}

void keccak256_many(std::span<const BytesView> messages, std::span<Digest256> out)
{
    if (out.size() < messages.size())
        throw ParameterError("keccak256_many: output span too small");

    size_t i = 0;
    if (simd_available())
    {
        for (; i + keccak_simd_lanes <= messages.size(); i += keccak_simd_lanes)
        {
            const auto group = messages.subspan(i, keccak_simd_lanes);
            bool single_block = true;
            for (const auto& m : group)
                single_block = single_block && m.size() < keccak256_rate;
            if (!single_block)
                break;
            keccak256_x8_single_block(group, out.subspan(i, keccak_simd_lanes));
        }
    }
    for (; i < messages.size(); ++i)
        out[i] = keccak256(messages[i]);
}

bool keccak_simd_enabled() noexcept
{
    return simd_available();
}
}  // namespace digestlab
