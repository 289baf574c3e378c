// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evaluator.hpp"

namespace digestlab::collision
{
namespace
{
class Walk
{
public:
    Walk(const detail::Evaluator& evaluate, uint64_t max_evaluations, const ProgressCallback& progress)
      : evaluate_(evaluate), max_(max_evaluations), progress_(progress)
    {}

    /// f(x) into `message`; nullopt once the budget is spent.
    std::optional<TruncatedDigest> step(uint64_t x, Bytes& message)
    {
        if (used_ == max_)
            return std::nullopt;
        ++used_;
        if (progress_ && (used_ & 0xffff) == 0)
            progress_({used_, 0});
        return evaluate_(x, message);
    }

    [[nodiscard]] uint64_t used() const noexcept { return used_; }

private:
    const detail::Evaluator& evaluate_;
    uint64_t max_;
    uint64_t used_ = 0;
    const ProgressCallback& progress_;
};
}  // namespace

Outcome<CollisionPair> find_collision_rho(const MessageEncoder& encoder, const DigestSpec& spec,
    uint64_t seed, AttackBudget budget, const SearchHooks& hooks)
{
    detail::require_walkable(spec);
    const detail::Evaluator evaluate(encoder, spec, hooks);
    Walk walk(evaluate, budget.max_evaluations(), hooks.progress);
    Bytes scratch, tortoise_msg, hare_msg;

    for (uint64_t attempt_seed = seed;; ++attempt_seed)
    {
        const uint64_t x0 = mix64(attempt_seed);

        // Brent: find the cycle length.
        uint64_t power = 1, cycle = 1;
        uint64_t tortoise = x0;
        auto next = walk.step(x0, scratch);
        if (!next)
            return Exhausted{walk.used()};
        uint64_t hare = next->low64();
        while (tortoise != hare)
        {
            if (power == cycle)
            {
                tortoise = hare;
                power *= 2;
                cycle = 0;
            }
            next = walk.step(hare, scratch);
            if (!next)
                return Exhausted{walk.used()};
            hare = next->low64();
            ++cycle;
        }

        // Put the hare one cycle ahead of the tortoise, then advance both
        // until their images meet. The inputs just before the meeting point
        // are the colliding pair.
        tortoise = hare = x0;
        for (uint64_t i = 0; i < cycle; ++i)
        {
            next = walk.step(hare, scratch);
            if (!next)
                return Exhausted{walk.used()};
            hare = next->low64();
        }
        if (tortoise == hare)
            continue;  // start point lies on the cycle: no tail, no collision

        TruncatedDigest meeting;
        while (true)
        {
            const auto ft = walk.step(tortoise, tortoise_msg);
            if (!ft)
                return Exhausted{walk.used()};
            const auto fh = walk.step(hare, hare_msg);
            if (!fh)
                return Exhausted{walk.used()};
            if (*ft == *fh)
            {
                meeting = *ft;
                break;
            }
            tortoise = ft->low64();
            hare = fh->low64();
        }
        if (tortoise_msg == hare_msg)
            continue;

        CollisionPair pair;
        pair.m1 = std::move(tortoise_msg);
        pair.m2 = std::move(hare_msg);
        pair.digest_value = meeting;
        pair.evaluations_used = walk.used();
        pair.counter1 = tortoise;
        pair.counter2 = hare;
        return pair;
    }
}
}  // namespace digestlab::collision
