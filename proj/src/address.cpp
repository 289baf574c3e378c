// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/address.hpp>
#include <digestlab/rlp.hpp>

#include <algorithm>

namespace digestlab
{
AccountId parse_account(std::string_view hex)
{
    const Bytes raw = from_hex(hex);
    if (raw.size() != 20)
        throw ParameterError("account identifier must be 20 bytes, got " + std::to_string(raw.size()));
    AccountId id;
    std::copy(raw.begin(), raw.end(), id.begin());
    return id;
}

void DeploymentRecord::validate() const
{
    if (initcode.size() > max_initcode_size)
        throw ParameterError("initcode exceeds 4096 bytes");
}

void write_address_preimage(Bytes& out, const DeploymentRecord& record)
{
    record.validate();

    // Built directly rather than through rlp::Item so the search loop does
    // not allocate a tree per candidate.
    uint8_t nonce_buf[8];
    size_t nonce_len = 0;
    for (uint64_t n = record.nonce; n != 0; n >>= 8)
        ++nonce_len;
    for (size_t i = 0; i < nonce_len; ++i)
        nonce_buf[i] = static_cast<uint8_t>(record.nonce >> (8 * (nonce_len - 1 - i)));
    const BytesView nonce{nonce_buf, nonce_len};

    const size_t payload = rlp::encoded_string_length(record.creator) +
                           rlp::encoded_string_length(nonce) +
                           rlp::encoded_string_length(record.initcode);

    out.clear();
    rlp::encode_header(out, true, payload);
    rlp::encode_string(out, record.creator);
    rlp::encode_string(out, nonce);
    rlp::encode_string(out, record.initcode);
}

Bytes address_preimage_bytes(const DeploymentRecord& record)
{
    Bytes out;
    write_address_preimage(out, record);
    return out;
}

AddressValue derive_address(const DeploymentRecord& record, const DigestSpec& spec)
{
    return {truncated_digest(address_preimage_bytes(record), spec)};
}
}  // namespace digestlab
