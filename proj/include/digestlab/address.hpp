// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <digestlab/bytes.hpp>
#include <digestlab/digest.hpp>

#include <array>
#include <cstdint>

namespace digestlab
{
using AccountId = std::array<uint8_t, 20>;

AccountId parse_account(std::string_view hex);

/// The (creator, nonce, initcode) triple whose digest yields a contract
/// address. initcode is capped at 4096 bytes.
struct DeploymentRecord
{
    static constexpr size_t max_initcode_size = 4096;

    AccountId creator{};
    uint64_t nonce = 0;
    Bytes initcode;

    /// Throws ParameterError when initcode exceeds the cap.
    void validate() const;

    friend bool operator==(const DeploymentRecord&, const DeploymentRecord&) = default;
};

struct AddressValue
{
    TruncatedDigest value;

    [[nodiscard]] std::string to_hex() const { return value.to_hex(); }

    friend bool operator==(const AddressValue&, const AddressValue&) = default;
};

/// rlp([creator, nonce, initcode]): the exact bytes fed to the digest.
Bytes address_preimage_bytes(const DeploymentRecord& record);

/// Writes the preimage into `out` (cleared first). Allocation-free once
/// `out` has capacity; used by the search encoders.
void write_address_preimage(Bytes& out, const DeploymentRecord& record);

/// keccak256(rlp([creator, nonce, initcode])) mod 2^t.
AddressValue derive_address(const DeploymentRecord& record, const DigestSpec& spec);
}  // namespace digestlab
