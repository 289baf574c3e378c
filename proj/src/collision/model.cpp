// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/collision.hpp>

#include <cmath>
#include <numbers>

namespace digestlab::collision
{
MessageEncoder::MessageEncoder(std::string label, WriteFn write)
  : label_(std::move(label)), write_(std::move(write))
{
    if (!write_)
        throw ParameterError("message encoder needs a write function");
}

MessageEncoder MessageEncoder::counter(std::string label, uint64_t offset)
{
    Bytes prefix = to_bytes(label);
    return MessageEncoder(std::move(label), [prefix = std::move(prefix), offset](uint64_t c, Bytes& out) {
        out.assign(prefix.begin(), prefix.end());
        append_be(out, c + offset, 8);
    });
}

Bytes MessageEncoder::operator()(uint64_t counter) const
{
    Bytes out;
    write_(counter, out);
    return out;
}

bool verify_pair(const CollisionPair& pair, const DigestSpec& spec)
{
    if (pair.m1 == pair.m2)
        return false;
    return truncated_digest(pair.m1, spec) == pair.digest_value &&
           truncated_digest(pair.m2, spec) == pair.digest_value;
}

AttackBudget::AttackBudget(uint64_t max_evaluations) : max_evaluations_(max_evaluations)
{
    if (max_evaluations == 0)
        throw ParameterError("attack budget must allow at least one evaluation");
}

AttackBudget AttackBudget::from_rate(double hash_rate, double window_seconds)
{
    if (!(hash_rate > 0) || !(window_seconds > 0))
        throw ParameterError("hash rate and window must be positive");
    const double evaluations = std::floor(hash_rate * window_seconds);
    if (evaluations < 1)
        throw ParameterError("hash rate x window affords no evaluation");
    if (evaluations >= 18446744073709551616.0)
        throw ParameterError("hash rate x window exceeds 2^64 evaluations");
    return AttackBudget(static_cast<uint64_t>(evaluations));
}

int default_distinguished_bits(int t) noexcept
{
    return std::max(4, t / 4);
}

double expected_work(int t)
{
    if (t < 1 || t > 256)
        throw ParameterError("expected_work needs 1 <= t <= 256");
    return std::sqrt(std::ldexp(std::numbers::pi / 2, t));
}

double success_probability(double evaluations, int t)
{
    if (evaluations < 0)
        throw ParameterError("evaluation count must be non-negative");
    if (evaluations < 2)
        return 0.0;
    const double exponent = evaluations * (evaluations - 1) / std::ldexp(1.0, t + 1);
    return -std::expm1(-exponent);
}
}  // namespace digestlab::collision
