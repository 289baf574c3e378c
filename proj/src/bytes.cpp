// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/bytes.hpp>

namespace digestlab
{
namespace
{
int nibble(char c)
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}
}  // namespace

std::string to_hex(BytesView bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 + 2 * bytes.size());
    out += "0x";
    for (const auto b : bytes)
    {
        out += digits[b >> 4];
        out += digits[b & 0x0f];
    }
    return out;
}

Bytes from_hex(std::string_view hex)
{
    if (hex.starts_with("0x") || hex.starts_with("0X"))
        hex.remove_prefix(2);
    if (hex.size() % 2 != 0)
        throw ParameterError("hex string has odd length");

    Bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2)
    {
        const int hi = nibble(hex[i]);
        const int lo = nibble(hex[i + 1]);
        if (hi < 0 || lo < 0)
            throw ParameterError("invalid hex character at position " + std::to_string(i));
        out.push_back(static_cast<uint8_t>((hi << 4) | lo));
    }
    return out;
}

void append_be(Bytes& out, uint64_t value, size_t width)
{
    for (size_t i = width; i-- > 0;)
        out.push_back(i < 8 ? static_cast<uint8_t>(value >> (8 * i)) : uint8_t{0});
}
}  // namespace digestlab
