// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace digestlab
{
using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;

/// Raised when an operation is called outside its documented parameter range.
class ParameterError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Lowercase, 0x-prefixed, big-endian hex.
std::string to_hex(BytesView bytes);

/// Accepts an optional 0x prefix and either letter case. Odd length or
/// non-hex characters raise ParameterError.
Bytes from_hex(std::string_view hex);

inline Bytes to_bytes(std::string_view s)
{
    return {s.begin(), s.end()};
}

/// Appends the low `width` bytes of `value` in big-endian order.
void append_be(Bytes& out, uint64_t value, size_t width);

/// SplitMix64 finalizer. Used to derive independent streams from a
/// (master seed, index) pair.
constexpr uint64_t mix64(uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr uint64_t derive_seed(uint64_t master, uint64_t index) noexcept
{
    return mix64(mix64(master) ^ mix64(index + 0x632be59bd9b4e019ULL));
}
}  // namespace digestlab
