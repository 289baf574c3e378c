// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evaluator.hpp"

#include <unordered_map>

namespace digestlab::collision
{
Outcome<CollisionPair> find_collision_brute(const MessageEncoder& encoder, const DigestSpec& spec,
    AttackBudget budget, const SearchHooks& hooks)
{
    if (spec.truncation_bits() > 32)
        throw ParameterError("brute-force search is limited to truncation bits <= 32");

    const detail::Evaluator evaluate(encoder, spec, hooks);
    std::unordered_map<uint64_t, uint64_t> seen;
    Bytes message;

    for (uint64_t counter = 0; counter < budget.max_evaluations(); ++counter)
    {
        const TruncatedDigest d = evaluate(counter, message);
        const auto [it, inserted] = seen.try_emplace(d.low64(), counter);
        if (hooks.progress && (counter & 0xffff) == 0xffff)
            hooks.progress({counter + 1, 0});
        if (inserted)
            continue;

        CollisionPair pair;
        pair.m1 = encoder(it->second);
        pair.m2 = std::move(message);
        pair.digest_value = d;
        pair.evaluations_used = counter + 1;
        pair.counter1 = it->second;
        pair.counter2 = counter;
        if (pair.m1 == pair.m2)
            throw ParameterError("message encoder is not injective");
        return pair;
    }
    return Exhausted{budget.max_evaluations()};
}
}  // namespace digestlab::collision
