// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/rlp.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace digestlab;
using rlp::Item;

namespace
{
std::string enc(const Item& item)
{
    return to_hex(rlp::encode(item));
}

Item random_item(std::mt19937_64& rng, int depth)
{
    if (depth < 3 && rng() % 4 == 0)
    {
        Item::List items(rng() % 5);
        for (auto& i : items)
            i = random_item(rng, depth + 1);
        return Item::list(std::move(items));
    }
    // Lengths around the 1 / 55 / 56 / 256 boundaries.
    static constexpr size_t lengths[] = {0, 1, 1, 2, 55, 56, 57, 255, 256, 1024};
    Bytes b(lengths[rng() % std::size(lengths)]);
    for (auto& x : b)
        x = static_cast<uint8_t>(rng() % (rng() % 2 ? 0x80 : 0x100));
    return Item::leaf(std::move(b));
}

void expect_rejected(const std::string& hex)
{
    EXPECT_THROW(rlp::decode(from_hex(hex)), rlp::DecodeError) << hex;
}
}  // namespace

TEST(rlp, hand_derived_encodings)
{
    EXPECT_EQ(enc(Item::leaf(Bytes{})), "0x80");
    EXPECT_EQ(enc(Item::leaf("dog")), "0x83646f67");
    EXPECT_EQ(enc(Item::list({Item::leaf("cat"), Item::leaf("dog")})), "0xc88363617483646f67");
    EXPECT_EQ(enc(Item::list({})), "0xc0");
    EXPECT_EQ(enc(rlp::encode_uint(0)), "0x80");
    EXPECT_EQ(enc(rlp::encode_uint(15)), "0x0f");
    EXPECT_EQ(enc(rlp::encode_uint(1024)), "0x820400");
    EXPECT_EQ(enc(Item::leaf(Bytes{0x7f})), "0x7f");
    EXPECT_EQ(enc(Item::leaf(Bytes{0x80})), "0x8180");

    const std::string lorem = "Lorem ipsum dolor sit amet, consectetur adipisicing elit";
    EXPECT_EQ(enc(Item::leaf(lorem)).substr(0, 6), "0xb838");

    // [ [], [[]], [ [], [[]] ] ]
    const Item e = Item::list({});
    const Item set = Item::list({e, Item::list({e}), Item::list({e, Item::list({e})})});
    EXPECT_EQ(enc(set), "0xc7c0c1c0c3c0c1c0");
}

TEST(rlp, round_trip_fuzz)
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 1000; ++i)
    {
        const Item item = random_item(rng, 0);
        const Bytes bytes = rlp::encode(item);
        ASSERT_EQ(rlp::encoded_length(item), bytes.size());
        ASSERT_EQ(rlp::decode(bytes), item) << to_hex(bytes);
    }
}

TEST(rlp, injective_on_samples)
{
    std::mt19937_64 rng(2);
    std::vector<Item> items;
    for (int i = 0; i < 500; ++i)
        items.push_back(random_item(rng, 0));
    for (const auto& a : items)
        for (const auto& b : items)
            if (!(a == b))
                ASSERT_NE(rlp::encode(a), rlp::encode(b));
}

TEST(rlp, rejects_non_canonical)
{
    expect_rejected("0x8100");          // single byte < 0x80 wrapped
    expect_rejected("0x817f");
    expect_rejected("0xb80100");        // long form for a 1-byte payload
    expect_rejected("0xb837" + std::string(110, '0'));  // long form for 55 bytes
    expect_rejected("0xb9003800");      // leading zero in the length
    expect_rejected("0xf800");          // long list form for an empty list
    expect_rejected("0x83646f");        // short input
    expect_rejected("0x83646f6767");    // trailing byte
    expect_rejected("0xc283");          // truncated nested item
    expect_rejected("0x");              // empty input
}

TEST(rlp, error_offsets)
{
    try
    {
        rlp::decode(from_hex("0xc3808100"));
        FAIL();
    }
    catch (const rlp::DecodeError& e)
    {
        EXPECT_EQ(e.offset(), 2u);
    }
}

TEST(rlp, integers_have_no_leading_zeros)
{
    for (uint64_t n : {uint64_t{1}, uint64_t{127}, uint64_t{128}, uint64_t{255}, uint64_t{256},
             uint64_t{1} << 32, ~uint64_t{0}})
    {
        const Bytes& b = rlp::encode_uint(n).bytes();
        ASSERT_FALSE(b.empty());
        EXPECT_NE(b.front(), 0) << n;
    }
}
