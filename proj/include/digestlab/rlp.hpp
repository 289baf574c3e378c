// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

// Canonical Recursive Length Prefix encoding of byte strings and nested lists.
#pragma once

#include <digestlab/bytes.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace digestlab::rlp
{
/// Either a byte-string leaf or an ordered list of items.
class Item
{
public:
    using List = std::vector<Item>;

    Item() = default;

    static Item leaf(Bytes bytes) { return Item{std::move(bytes)}; }
    static Item leaf(std::string_view s) { return Item{to_bytes(s)}; }
    static Item list(List items) { return Item{std::move(items)}; }

    [[nodiscard]] bool is_list() const noexcept { return std::holds_alternative<List>(value_); }
    [[nodiscard]] const Bytes& bytes() const { return std::get<Bytes>(value_); }
    [[nodiscard]] const List& items() const { return std::get<List>(value_); }

    friend bool operator==(const Item&, const Item&) = default;

private:
    explicit Item(Bytes b) : value_(std::move(b)) {}
    explicit Item(List l) : value_(std::move(l)) {}

    std::variant<Bytes, List> value_;
};

class DecodeError : public std::runtime_error
{
public:
    DecodeError(const std::string& what, size_t offset)
      : std::runtime_error("rlp decoding error at offset " + std::to_string(offset) + ": " + what),
        offset_(offset)
    {}

    [[nodiscard]] size_t offset() const noexcept { return offset_; }

private:
    size_t offset_;
};

Bytes encode(const Item& item);
void encode_to(Bytes& out, const Item& item);

/// Predicted encoded size of `item`, computed from the length rules alone.
size_t encoded_length(const Item& item);

/// Leaf holding the minimal big-endian representation of n; 0 is the empty leaf.
Item encode_uint(uint64_t n);

/// Appends the header for a string (or list) of `payload_length` bytes.
void encode_header(Bytes& out, bool list, size_t payload_length);

/// Leaf-level helpers that skip building an Item.
void encode_string(Bytes& out, BytesView s);
size_t encoded_string_length(BytesView s) noexcept;

/// Strict canonical decode of exactly one item occupying all of `input`.
Item decode(BytesView input);
}  // namespace digestlab::rlp
