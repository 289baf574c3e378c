// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "../oracles/vectors.hpp"
#include "../support/reference_keccak.hpp"

#include <digestlab/digest.hpp>

#include <gtest/gtest.h>

#include <bit>
#include <random>

using namespace digestlab;

namespace
{
std::string hex_of(const std::string& s)
{
    return keccak256(to_bytes(s)).to_hex();
}
}  // namespace

TEST(keccak, known_answers)
{
    EXPECT_EQ(hex_of(""), oracle::keccak_empty);
    EXPECT_EQ(hex_of("abc"), oracle::keccak_abc);
    EXPECT_EQ(hex_of(std::string(136, 'a')), oracle::keccak_a136);
    EXPECT_EQ(hex_of(std::string(137, 'a')), oracle::keccak_a137);

    Bytes range(200);
    for (size_t i = 0; i < range.size(); ++i)
        range[i] = static_cast<uint8_t>(i);
    EXPECT_EQ(keccak256(range).to_hex(), oracle::keccak_range200);
}

TEST(keccak, not_sha3_padding)
{
    // SHA3-256("") starts with a7ffc6f8.
    EXPECT_NE(hex_of("").substr(0, 10), "0xa7ffc6f8");
}

TEST(keccak, matches_reference_on_every_length)
{
    std::mt19937_64 rng(7);
    for (size_t len = 0; len <= 300; ++len)
    {
        Bytes m(len);
        for (auto& b : m)
            b = static_cast<uint8_t>(rng());
        const auto expect = reference::keccak256(m);
        ASSERT_EQ(keccak256(m).bytes, expect) << "length " << len;
    }
}

TEST(keccak, batched_equals_scalar)
{
    std::mt19937_64 rng(11);
    std::vector<Bytes> messages;
    for (size_t i = 0; i < 37; ++i)
    {
        // Mostly single-block, with a few long ones that force the fallback.
        Bytes m(i % 9 == 4 ? 150 + i : i * 3);
        for (auto& b : m)
            b = static_cast<uint8_t>(rng());
        messages.push_back(std::move(m));
    }
    std::vector<BytesView> views(messages.begin(), messages.end());
    std::vector<Digest256> out(views.size());
    keccak256_many(views, out);
    for (size_t i = 0; i < views.size(); ++i)
        EXPECT_EQ(out[i], keccak256(views[i])) << i;

    std::vector<Digest256> small(3);
    EXPECT_THROW(keccak256_many(views, small), ParameterError);
}

TEST(keccak, avalanche)
{
    // A one-bit input change flips about half of the 256 output bits.
    std::mt19937_64 rng(3);
    double total = 0;
    constexpr int trials = 400;
    for (int i = 0; i < trials; ++i)
    {
        Bytes m(32);
        for (auto& b : m)
            b = static_cast<uint8_t>(rng());
        const Digest256 a = keccak256(m);
        m[rng() % 32] ^= static_cast<uint8_t>(1u << (rng() % 8));
        const Digest256 b = keccak256(m);
        int flipped = 0;
        for (size_t k = 0; k < 32; ++k)
            flipped += std::popcount(static_cast<unsigned>(a.bytes[k] ^ b.bytes[k]));
        total += flipped;
    }
    EXPECT_NEAR(total / trials, 128.0, 2.0);
}

TEST(truncate, low_order_bits)
{
    const Digest256 d = keccak256({});
    EXPECT_EQ(truncate(d, 8).to_hex(), "0x70");
    EXPECT_EQ(truncate(d, 256).to_hex(), oracle::keccak_empty);
    EXPECT_EQ(truncate(d, 12).to_hex(), "0x0470");
    EXPECT_EQ(truncate(d, 12).low64(), 0x470u);
    EXPECT_EQ(truncate(d, 64).low64(), 0x3b7bfad8045d85a470u);
    EXPECT_EQ(truncate(d, 160).to_hex(), "0xdcc703c0e500b653ca82273b7bfad8045d85a470");
}

TEST(truncate, nests)
{
    // truncate(truncate(d, a), b) == truncate(d, b) for b <= a.
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i)
    {
        Bytes m(16);
        for (auto& b : m)
            b = static_cast<uint8_t>(rng());
        const Digest256 d = keccak256(m);
        const int a = 8 + static_cast<int>(rng() % 249);
        const int b = 8 + static_cast<int>(rng() % static_cast<uint64_t>(a - 7));
        Digest256 wide;
        wide.bytes = truncate(d, a).big_endian();
        EXPECT_EQ(truncate(wide, b), truncate(d, b));
    }
}

TEST(truncate, hex_round_trip)
{
    const Digest256 d = keccak256(to_bytes("x"));
    for (int t : {8, 9, 15, 16, 24, 33, 64, 160, 255, 256})
    {
        const TruncatedDigest v = truncate(d, t);
        EXPECT_EQ(TruncatedDigest::from_hex(v.to_hex(), t), v) << t;
    }
    EXPECT_THROW(TruncatedDigest::from_hex("0x1ff", 8), ParameterError);
}

TEST(digest_spec, range)
{
    EXPECT_THROW(DigestSpec{7}, ParameterError);
    EXPECT_THROW(DigestSpec{257}, ParameterError);
    EXPECT_EQ(DigestSpec{8}.truncation_bits(), 8);
    EXPECT_THROW(truncate(keccak256({}), 0), ParameterError);
    EXPECT_EQ(parse_digest_algorithm("keccak256"), DigestAlgorithm::keccak256);
    EXPECT_THROW(parse_digest_algorithm("sha3-256"), ParameterError);
}

TEST(hex, codec)
{
    EXPECT_EQ(to_hex(Bytes{}), "0x");
    EXPECT_EQ(from_hex("0xABcd"), (Bytes{0xab, 0xcd}));
    EXPECT_EQ(from_hex("abcd"), (Bytes{0xab, 0xcd}));
    EXPECT_EQ(from_hex(""), Bytes{});
    EXPECT_THROW(from_hex("0xabc"), ParameterError);
    EXPECT_THROW(from_hex("zz"), ParameterError);
}
