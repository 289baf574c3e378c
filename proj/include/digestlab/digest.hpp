// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <digestlab/bytes.hpp>

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace digestlab
{
enum class DigestAlgorithm
{
    keccak256,
};

/// Parses "keccak256". Anything else raises ParameterError.
DigestAlgorithm parse_digest_algorithm(std::string_view name);
std::string_view to_string(DigestAlgorithm algorithm) noexcept;

/// Digest algorithm plus truncation width t, the security-parameter knob of
/// every experiment. Invariant: 8 <= t <= 256.
class DigestSpec
{
public:
    static constexpr int min_bits = 8;
    static constexpr int max_bits = 256;

    explicit DigestSpec(int truncation_bits, DigestAlgorithm algorithm = DigestAlgorithm::keccak256);

    [[nodiscard]] int truncation_bits() const noexcept { return truncation_bits_; }
    [[nodiscard]] DigestAlgorithm algorithm() const noexcept { return algorithm_; }

    friend bool operator==(const DigestSpec&, const DigestSpec&) = default;

private:
    DigestAlgorithm algorithm_;
    int truncation_bits_;
};

struct Digest256
{
    std::array<uint8_t, 32> bytes{};

    [[nodiscard]] std::string to_hex() const { return digestlab::to_hex(bytes); }

    friend bool operator==(const Digest256&, const Digest256&) = default;
};

/// Unsigned integer in [0, 2^width), stored big-endian in 32 bytes with every
/// bit above `width` cleared.
class TruncatedDigest
{
public:
    TruncatedDigest() = default;

    [[nodiscard]] int width() const noexcept { return width_; }
    [[nodiscard]] const std::array<uint8_t, 32>& big_endian() const noexcept { return value_; }

    /// Low 64 bits of the value (the whole value when width <= 64).
    [[nodiscard]] uint64_t low64() const noexcept;

    /// 0x-prefixed hex of ceil(width/8) bytes.
    [[nodiscard]] std::string to_hex() const;

    /// Parses the output of to_hex() back at the given width.
    static TruncatedDigest from_hex(std::string_view hex, int width);

    friend bool operator==(const TruncatedDigest&, const TruncatedDigest&) = default;

private:
    friend TruncatedDigest truncate(const Digest256& digest, int t);

    std::array<uint8_t, 32> value_{};
    int width_ = 0;
};

/// Ethereum Keccak-256: rate 1088, capacity 512, pad10*1 with domain byte
/// 0x01 (not the NIST SHA3 0x06 padding).
Digest256 keccak256(BytesView message) noexcept;

/// keccak256 of every message into out[i]. Groups of eight single-block
/// messages go through an 8-lane AVX-512 permutation when the CPU has one.
void keccak256_many(std::span<const BytesView> messages, std::span<Digest256> out);

/// True when keccak256_many can use the vector path on this machine.
bool keccak_simd_enabled() noexcept;

/// Keccak-f[1600] applied in place to a 25-lane state.
void keccakf1600(std::array<uint64_t, 25>& state) noexcept;

/// Big-endian digest reduced mod 2^t, i.e. its low-order t bits. For t=160
/// this is the last 20 bytes. Raises ParameterError unless 8 <= t <= 256.
TruncatedDigest truncate(const Digest256& digest, int t);

/// truncate(keccak256(message), t): one evaluation in every attack budget.
TruncatedDigest truncated_digest(BytesView message, const DigestSpec& spec);
}  // namespace digestlab
