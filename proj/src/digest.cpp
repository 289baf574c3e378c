// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/digest.hpp>

#include <algorithm>

namespace digestlab
{
DigestAlgorithm parse_digest_algorithm(std::string_view name)
{
    if (name == "keccak256")
        return DigestAlgorithm::keccak256;
    throw ParameterError("unknown digest algorithm: " + std::string(name));
}

std::string_view to_string(DigestAlgorithm algorithm) noexcept
{
    switch (algorithm)
    {
    case DigestAlgorithm::keccak256:
        return "keccak256";
    }
    return "unknown";
}

DigestSpec::DigestSpec(int truncation_bits, DigestAlgorithm algorithm)
  : algorithm_(algorithm), truncation_bits_(truncation_bits)
{
    if (truncation_bits < min_bits || truncation_bits > max_bits)
        throw ParameterError(
            "truncation bits must be in [8, 256], got " + std::to_string(truncation_bits));
}

uint64_t TruncatedDigest::low64() const noexcept
{
    uint64_t v = 0;
    for (size_t i = 24; i < 32; ++i)
        v = (v << 8) | value_[i];
    return v;
}

std::string TruncatedDigest::to_hex() const
{
    const size_t nbytes = (static_cast<size_t>(width_) + 7) / 8;
    return digestlab::to_hex(BytesView{value_}.last(nbytes));
}

TruncatedDigest TruncatedDigest::from_hex(std::string_view hex, int width)
{
    const Bytes raw = digestlab::from_hex(hex);
    if (raw.size() > 32)
        throw ParameterError("truncated digest longer than 32 bytes");
    Digest256 padded;
    std::copy(raw.begin(), raw.end(), padded.bytes.end() - static_cast<ptrdiff_t>(raw.size()));
    const TruncatedDigest out = truncate(padded, width);
    if (out.value_ != padded.bytes)
        throw ParameterError("truncated digest value exceeds its width");
    return out;
}

TruncatedDigest truncate(const Digest256& digest, int t)
{
    if (t < DigestSpec::min_bits || t > DigestSpec::max_bits)
        throw ParameterError("truncation bits must be in [8, 256], got " + std::to_string(t));

    TruncatedDigest out;
    out.width_ = t;
    out.value_ = digest.bytes;

    // Bytes wholly above the low t bits are cleared; the straddling byte is masked.
    const int full_bytes = t / 8;
    const int partial_bits = t % 8;
    const int keep_from = 32 - full_bytes - (partial_bits != 0 ? 1 : 0);
    for (int i = 0; i < keep_from; ++i)
        out.value_[static_cast<size_t>(i)] = 0;
    if (partial_bits != 0)
        out.value_[static_cast<size_t>(keep_from)] &= static_cast<uint8_t>((1u << partial_bits) - 1);
    return out;
}

TruncatedDigest truncated_digest(BytesView message, const DigestSpec& spec)
{
    return truncate(keccak256(message), spec.truncation_bits());
}
}  // namespace digestlab
