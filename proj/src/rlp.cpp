// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/rlp.hpp>

namespace digestlab::rlp
{
namespace
{
constexpr uint8_t short_string_base = 0x80;
constexpr uint8_t long_string_base = 0xb7;
constexpr uint8_t short_list_base = 0xc0;
constexpr uint8_t long_list_base = 0xf7;
constexpr size_t short_limit = 55;

size_t length_of_length(size_t n) noexcept
{
    size_t len = 0;
    for (; n != 0; n >>= 8)
        ++len;
    return len;
}

size_t payload_length(const Item& item)
{
    if (!item.is_list())
        return item.bytes().size();
    size_t total = 0;
    for (const auto& child : item.items())
        total += encoded_length(child);
    return total;
}

struct Header
{
    bool list = false;
    size_t payload_length = 0;
    size_t header_length = 0;
};

Header decode_header(BytesView input, size_t offset)
{
    if (input.empty())
        throw DecodeError("input is empty", offset);

    const uint8_t prefix = input[0];
    if (prefix < short_string_base)
        return {false, 1, 0};

    const bool list = prefix >= short_list_base;
    const uint8_t short_base = list ? short_list_base : short_string_base;
    const uint8_t long_base = list ? long_list_base : long_string_base;

    Header h{.list = list};
    if (prefix <= long_base)
    {
        h.payload_length = prefix - short_base;
        h.header_length = 1;
        if (!list && h.payload_length == 1)
        {
            if (input.size() < 2)
                throw DecodeError("input too short", offset);
            if (input[1] < short_string_base)
                throw DecodeError("single byte below 0x80 must encode as itself", offset);
        }
    }
    else
    {
        const size_t len_of_len = prefix - long_base;
        if (len_of_len > sizeof(size_t))
            throw DecodeError("length of length too large", offset);
        if (input.size() < 1 + len_of_len)
            throw DecodeError("input too short for length field", offset);
        if (input[1] == 0)
            throw DecodeError("length field has leading zero byte", offset + 1);
        size_t len = 0;
        for (size_t i = 0; i < len_of_len; ++i)
            len = (len << 8) | input[1 + i];
        if (len <= short_limit)
            throw DecodeError("long form used for payload of at most 55 bytes", offset);
        h.payload_length = len;
        h.header_length = 1 + len_of_len;
    }

    if (input.size() - h.header_length < h.payload_length)
        throw DecodeError("input too short for payload", offset);
    return h;
}

Item decode_item(BytesView input, size_t offset, size_t& consumed)
{
    const Header h = decode_header(input, offset);
    const auto payload = input.subspan(h.header_length, h.payload_length);
    consumed = h.header_length + h.payload_length;
    if (!h.list)
        return Item::leaf(Bytes(payload.begin(), payload.end()));

    Item::List children;
    size_t pos = 0;
    while (pos < payload.size())
    {
        size_t used = 0;
        children.push_back(
            decode_item(payload.subspan(pos), offset + h.header_length + pos, used));
        pos += used;
    }
    return Item::list(std::move(children));
}
}  // namespace

void encode_header(Bytes& out, bool list, size_t payload_length)
{
    const uint8_t short_base = list ? short_list_base : short_string_base;
    const uint8_t long_base = list ? long_list_base : long_string_base;
    if (payload_length <= short_limit)
    {
        out.push_back(static_cast<uint8_t>(short_base + payload_length));
        return;
    }
    const size_t len_of_len = length_of_length(payload_length);
    out.push_back(static_cast<uint8_t>(long_base + len_of_len));
    append_be(out, payload_length, len_of_len);
}

size_t encoded_string_length(BytesView s) noexcept
{
    if (s.size() == 1 && s[0] < short_string_base)
        return 1;
    const size_t header = s.size() <= short_limit ? 1 : 1 + length_of_length(s.size());
    return header + s.size();
}

void encode_string(Bytes& out, BytesView s)
{
    if (s.size() == 1 && s[0] < short_string_base)
    {
        out.push_back(s[0]);
        return;
    }
    encode_header(out, false, s.size());
    out.insert(out.end(), s.begin(), s.end());
}

size_t encoded_length(const Item& item)
{
    if (!item.is_list())
        return encoded_string_length(item.bytes());
    const size_t payload = payload_length(item);
    const size_t header = payload <= short_limit ? 1 : 1 + length_of_length(payload);
    return header + payload;
}

void encode_to(Bytes& out, const Item& item)
{
    if (!item.is_list())
    {
        encode_string(out, item.bytes());
        return;
    }
    encode_header(out, true, payload_length(item));
    for (const auto& child : item.items())
        encode_to(out, child);
}

Bytes encode(const Item& item)
{
    Bytes out;
    out.reserve(encoded_length(item));
    encode_to(out, item);
    return out;
}

Item encode_uint(uint64_t n)
{
    Bytes b;
    append_be(b, n, length_of_length(n));
    return Item::leaf(std::move(b));
}

Item decode(BytesView input)
{
    size_t consumed = 0;
    Item item = decode_item(input, 0, consumed);
    if (consumed != input.size())
        throw DecodeError("trailing bytes after item", consumed);
    return item;
}
}  // namespace digestlab::rlp
