// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <digestlab/collision.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <span>

namespace digestlab::collision::detail
{
/// One evaluation = encode + truncated digest. Every searcher goes through
/// this so the hook sees exactly the evaluations the searcher counts.
class Evaluator
{
public:
    Evaluator(const MessageEncoder& encoder, const DigestSpec& spec, const SearchHooks& hooks)
      : encoder_(encoder), spec_(spec), hooks_(hooks)
    {}

    TruncatedDigest operator()(uint64_t x, Bytes& message) const
    {
        encoder_.write(x, message);
        return hooks_.digest ? hooks_.digest(message, spec_) : truncated_digest(message, spec_);
    }

    /// Evaluates xs[i] into messages[i] / out[i]. Without a digest hook the
    /// digests go through keccak256_many (vectorized where available).
    void batch(std::span<const uint64_t> xs, std::span<Bytes> messages, std::span<TruncatedDigest> out) const
    {
        for (size_t i = 0; i < xs.size(); ++i)
            encoder_.write(xs[i], messages[i]);
        if (hooks_.digest)
        {
            for (size_t i = 0; i < xs.size(); ++i)
                out[i] = hooks_.digest(messages[i], spec_);
            return;
        }
        std::array<BytesView, max_batch> views;
        std::array<Digest256, max_batch> digests;
        for (size_t i = 0; i < xs.size(); ++i)
            views[i] = messages[i];
        keccak256_many(std::span{views}.first(xs.size()), digests);
        for (size_t i = 0; i < xs.size(); ++i)
            out[i] = truncate(digests[i], spec_.truncation_bits());
    }

    static constexpr size_t max_batch = 8;

    [[nodiscard]] const DigestSpec& spec() const noexcept { return spec_; }

private:
    const MessageEncoder& encoder_;
    const DigestSpec& spec_;
    const SearchHooks& hooks_;
};

/// Global evaluation budget shared by all workers. Workers reserve chunks
/// so the hot loop touches only thread-local counters.
class SharedBudget
{
public:
    explicit SharedBudget(uint64_t max_evaluations) : max_(max_evaluations) {}

    uint64_t reserve(uint64_t want) noexcept
    {
        uint64_t current = reserved_.load(std::memory_order_relaxed);
        uint64_t grant = 0;
        do
        {
            grant = std::min(want, max_ - current);
            if (grant == 0)
                return 0;
        } while (!reserved_.compare_exchange_weak(current, current + grant, std::memory_order_relaxed));
        return grant;
    }

    [[nodiscard]] uint64_t reserved() const noexcept { return reserved_.load(std::memory_order_relaxed); }

private:
    uint64_t max_;
    std::atomic<uint64_t> reserved_{0};
};

class Meter
{
public:
    Meter(SharedBudget& budget, uint64_t chunk) : budget_(budget), chunk_(chunk) {}

    /// Consumes one evaluation; false once the global budget is spent.
    bool take() noexcept
    {
        if (allowance_ == 0)
        {
            allowance_ = budget_.reserve(chunk_);
            if (allowance_ == 0)
                return false;
        }
        --allowance_;
        ++used_;
        return true;
    }

    [[nodiscard]] uint64_t used() const noexcept { return used_; }

private:
    SharedBudget& budget_;
    uint64_t chunk_;
    uint64_t allowance_ = 0;
    uint64_t used_ = 0;
};

/// Step domain limit for walking searchers.
inline void require_walkable(const DigestSpec& spec)
{
    if (spec.truncation_bits() > 64)
        throw ParameterError("walking searchers need truncation bits <= 64");
}

using AcceptFn = std::function<bool(uint64_t x1, uint64_t x2)>;

/// Distinguished-point search shared by find_collision_parallel and
/// find_cross_family_collision. Located collisions for which `accept`
/// returns false are discarded and the search continues.
Outcome<CollisionPair> distinguished_point_search(const MessageEncoder& encoder,
    const DigestSpec& spec, const ParallelOptions& options, uint64_t seed, AttackBudget budget,
    const SearchHooks& hooks, const AcceptFn& accept);
}  // namespace digestlab::collision::detail
