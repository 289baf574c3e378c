// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "../oracles/vectors.hpp"

#include <digestlab/address.hpp>
#include <digestlab/rlp.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace digestlab;

TEST(address, zero_record)
{
    const DeploymentRecord r;
    EXPECT_EQ(to_hex(address_preimage_bytes(r)), oracle::zero_record_preimage);
    EXPECT_EQ(derive_address(r, DigestSpec(256)).to_hex(), oracle::zero_record_digest);
    EXPECT_EQ(derive_address(r, DigestSpec(160)).to_hex(), oracle::zero_record_address160);
}

TEST(address, sample_record)
{
    DeploymentRecord r;
    r.creator = parse_account(oracle::sample_creator);
    r.nonce = 1;
    r.initcode = from_hex("6000");
    EXPECT_EQ(to_hex(address_preimage_bytes(r)), oracle::sample_record_preimage);
    EXPECT_EQ(derive_address(r, DigestSpec(256)).to_hex(), oracle::sample_record_digest);
}

TEST(address, preimage_is_rlp_list)
{
    std::mt19937_64 rng(9);
    Bytes scratch;
    for (int i = 0; i < 200; ++i)
    {
        DeploymentRecord r;
        for (auto& b : r.creator)
            b = static_cast<uint8_t>(rng());
        r.nonce = rng() >> (rng() % 64);
        r.initcode.resize(rng() % 300);
        for (auto& b : r.initcode)
            b = static_cast<uint8_t>(rng());

        const Bytes expect = rlp::encode(rlp::Item::list({
            rlp::Item::leaf(Bytes(r.creator.begin(), r.creator.end())),
            rlp::encode_uint(r.nonce),
            rlp::Item::leaf(r.initcode),
        }));
        ASSERT_EQ(address_preimage_bytes(r), expect);
        write_address_preimage(scratch, r);
        ASSERT_EQ(scratch, expect);

        const auto decoded = rlp::decode(expect);
        ASSERT_EQ(decoded.items().size(), 3u);
        EXPECT_EQ(decoded.items()[2].bytes(), r.initcode);
    }
}

TEST(address, any_field_changes_address)
{
    DeploymentRecord r;
    r.initcode = from_hex("600160005260206000f3");
    const DigestSpec spec(160);
    const auto base = derive_address(r, spec);

    DeploymentRecord c = r;
    c.creator[19] ^= 1;
    EXPECT_NE(derive_address(c, spec), base);
    DeploymentRecord n = r;
    n.nonce = 1;
    EXPECT_NE(derive_address(n, spec), base);
    DeploymentRecord i = r;
    i.initcode.back() ^= 1;
    EXPECT_NE(derive_address(i, spec), base);
}

TEST(address, truncation_is_consistent)
{
    DeploymentRecord r;
    r.nonce = 77;
    const auto full = derive_address(r, DigestSpec(256));
    for (int t : {8, 24, 32, 160})
        EXPECT_EQ(derive_address(r, DigestSpec(t)).value,
            truncate(Digest256{full.value.big_endian()}, t));
}

TEST(address, validation)
{
    EXPECT_THROW(parse_account("0x1234"), ParameterError);
    DeploymentRecord r;
    r.initcode.resize(4096);
    EXPECT_NO_THROW(derive_address(r, DigestSpec(160)));
    r.initcode.resize(4097);
    EXPECT_THROW(derive_address(r, DigestSpec(160)), ParameterError);
}
