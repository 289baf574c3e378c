// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include "evaluator.hpp"

#include <deque>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>
#include <vector>

namespace digestlab::collision
{
namespace detail
{
namespace
{
struct Trail
{
    uint64_t start = 0;
    uint64_t length = 0;
};

/// Endpoint -> trail. All access is serialized by one mutex; trails are
/// published once per 2^d evaluations so contention stays low.
class TrailTable
{
public:
    explicit TrailTable(size_t capacity) : capacity_(std::max<size_t>(capacity, 1)) {}

    /// Returns the trail already stored under `endpoint`, or stores `trail`
    /// and returns nullopt.
    std::optional<Trail> insert_or_match(uint64_t endpoint, const Trail& trail, uint64_t& stored)
    {
        std::lock_guard lock(mutex_);
        if (const auto it = trails_.find(endpoint); it != trails_.end())
        {
            stored = trails_.size();
            return it->second;
        }
        if (trails_.size() == capacity_)
        {
            trails_.erase(order_.front());
            order_.pop_front();
        }
        trails_.emplace(endpoint, trail);
        order_.push_back(endpoint);
        stored = trails_.size();
        return std::nullopt;
    }

private:
    std::mutex mutex_;
    size_t capacity_;
    std::unordered_map<uint64_t, Trail> trails_;
    std::deque<uint64_t> order_;
};

enum class LocateStatus
{
    collision,
    degenerate,
    exhausted,
};

struct Located
{
    LocateStatus status = LocateStatus::degenerate;
    CollisionPair pair;
};

struct SharedState
{
    SharedState(uint64_t max_evaluations, size_t table_capacity)
      : budget(max_evaluations), table(table_capacity)
    {}

    SharedBudget budget;
    TrailTable table;
    std::atomic<bool> stop{false};

    std::mutex result_mutex;
    std::optional<CollisionPair> result;
    std::exception_ptr error;
};

class Worker
{
public:
    Worker(SharedState& shared, const Evaluator& evaluate, const ParallelOptions& options,
        int distinguished_bits, uint64_t seed, int index, const SearchHooks& hooks,
        const AcceptFn& accept)
      : shared_(shared),
        evaluate_(evaluate),
        meter_(shared.budget, 1024),
        dp_mask_(distinguished_bits == 0 ? 0 : (~uint64_t{0} >> (64 - distinguished_bits))),
        max_trail_(distinguished_bits >= 58 ? ~uint64_t{0} : uint64_t{20} << distinguished_bits),
        stream_(derive_seed(seed, static_cast<uint64_t>(index))),
        hooks_(hooks),
        accept_(accept)
    {}

    /// Walks `lanes` trails side by side so each step hashes a full batch.
    void run()
    {
        constexpr size_t lanes = Evaluator::max_batch;
        std::array<LaneState, lanes> lane;
        for (auto& l : lane)
            restart(l);

        std::array<uint64_t, lanes> xs;
        std::array<TruncatedDigest, lanes> digests;
        while (!stopped())
        {
            size_t active = 0;
            while (active < lanes && meter_.take())
                ++active;
            const bool budget_spent = active < lanes;

            for (size_t i = 0; i < active; ++i)
                xs[i] = lane[i].x;
            evaluate_.batch(std::span{xs}.first(active), std::span{messages_}.first(active),
                std::span{digests}.first(active));

            for (size_t i = 0; i < active; ++i)
            {
                LaneState& l = lane[i];
                l.x = digests[i].low64();
                ++l.length;
                if ((l.x & dp_mask_) == 0)
                {
                    if (finish_trail(l) != TrailResult::keep_walking)
                        return;
                    restart(l);
                }
                else if (l.length >= max_trail_)
                    restart(l);  // trapped in a cycle without a distinguished point
            }
            if (budget_spent)
                return;
        }
    }

    [[nodiscard]] uint64_t used() const noexcept { return meter_.used(); }

private:
    struct LaneState
    {
        uint64_t start = 0;
        uint64_t x = 0;
        uint64_t length = 0;
    };

    enum class TrailResult
    {
        keep_walking,
        done,
    };

    void restart(LaneState& l) noexcept
    {
        l.start = l.x = derive_seed(stream_, next_trail_++);
        l.length = 0;
    }

    /// Publishes a trail that reached a distinguished point and resolves an
    /// endpoint match if there is one.
    TrailResult finish_trail(const LaneState& l)
    {
        uint64_t stored = 0;
        const Trail mine{l.start, l.length};
        const auto other = shared_.table.insert_or_match(l.x, mine, stored);
        if (hooks_.progress && (stored & 0x3ff) == 0)
            hooks_.progress({shared_.budget.reserved(), stored});
        if (!other)
            return TrailResult::keep_walking;

        Located located = locate(*other, mine);
        if (located.status == LocateStatus::exhausted)
            return TrailResult::done;
        if (located.status == LocateStatus::degenerate ||
            !accept_(located.pair.counter1, located.pair.counter2))
            return TrailResult::keep_walking;

        std::lock_guard lock(shared_.result_mutex);
        if (!shared_.result)
            shared_.result = std::move(located.pair);
        shared_.stop.store(true, std::memory_order_relaxed);
        return TrailResult::done;
    }

    bool stopped() const noexcept { return shared_.stop.load(std::memory_order_relaxed); }

    /// Re-walks two trails that share an endpoint to the step where they merge.
    Located locate(Trail a, Trail b)
    {
        uint64_t xa = a.start, xb = b.start;
        for (; a.length > b.length; --a.length)
        {
            if (!meter_.take())
                return {LocateStatus::exhausted, {}};
            xa = evaluate_(xa, scratch_).low64();
        }
        for (; b.length > a.length; --b.length)
        {
            if (!meter_.take())
                return {LocateStatus::exhausted, {}};
            xb = evaluate_(xb, scratch_).low64();
        }

        // Equal positions after alignment: one start lies on the other trail.
        for (uint64_t i = 0; i < a.length && xa != xb; ++i)
        {
            if (!meter_.take())
                return {LocateStatus::exhausted, {}};
            const TruncatedDigest da = evaluate_(xa, msg_a_);
            if (!meter_.take())
                return {LocateStatus::exhausted, {}};
            const TruncatedDigest db = evaluate_(xb, msg_b_);
            if (da == db)
            {
                if (msg_a_ == msg_b_)
                    return {LocateStatus::degenerate, {}};
                Located out{LocateStatus::collision, {}};
                out.pair.m1 = msg_a_;
                out.pair.m2 = msg_b_;
                out.pair.digest_value = da;
                out.pair.counter1 = xa;
                out.pair.counter2 = xb;
                return out;
            }
            xa = da.low64();
            xb = db.low64();
        }
        return {LocateStatus::degenerate, {}};
    }

    SharedState& shared_;
    const Evaluator& evaluate_;
    Meter meter_;
    uint64_t dp_mask_;
    uint64_t max_trail_;
    uint64_t stream_;
    const SearchHooks& hooks_;
    const AcceptFn& accept_;
    uint64_t next_trail_ = 0;
    std::array<Bytes, Evaluator::max_batch> messages_;
    Bytes scratch_, msg_a_, msg_b_;
};
}  // namespace

Outcome<CollisionPair> distinguished_point_search(const MessageEncoder& encoder,
    const DigestSpec& spec, const ParallelOptions& options, uint64_t seed, AttackBudget budget,
    const SearchHooks& hooks, const AcceptFn& accept)
{
    require_walkable(spec);
    const int t = spec.truncation_bits();
    const int dbits = options.distinguished_bits.value_or(default_distinguished_bits(t));
    if (dbits < 0 || dbits > t - 4)
        throw ParameterError("distinguished bits must lie in [0, t-4]");
    if (options.workers < 1)
        throw ParameterError("need at least one worker");

    const Evaluator evaluate(encoder, spec, hooks);
    SharedState shared(budget.max_evaluations(), options.table_capacity);

    std::vector<Worker> workers;
    workers.reserve(static_cast<size_t>(options.workers));
    for (int i = 0; i < options.workers; ++i)
        workers.emplace_back(shared, evaluate, options, dbits, seed, i, hooks, accept);

    auto guarded = [&shared](Worker& w) {
        try
        {
            w.run();
        }
        catch (...)
        {
            std::lock_guard lock(shared.result_mutex);
            if (!shared.error)
                shared.error = std::current_exception();
            shared.stop.store(true);
        }
    };

    if (options.workers == 1)
        guarded(workers.front());
    else
    {
        std::vector<std::jthread> threads;
        threads.reserve(workers.size());
        for (auto& w : workers)
            threads.emplace_back(guarded, std::ref(w));
    }

    if (shared.error)
        std::rethrow_exception(shared.error);

    uint64_t used = 0;
    for (const auto& w : workers)
        used += w.used();
    if (!shared.result)
        return Exhausted{used};
    shared.result->evaluations_used = used;
    return std::move(*shared.result);
}
}  // namespace detail

Outcome<CollisionPair> find_collision_parallel(const MessageEncoder& encoder,
    const DigestSpec& spec, const ParallelOptions& options, uint64_t seed, AttackBudget budget,
    const SearchHooks& hooks)
{
    return detail::distinguished_point_search(
        encoder, spec, options, seed, budget, hooks, [](uint64_t, uint64_t) { return true; });
}

Outcome<CrossFamilyPair> find_cross_family_collision(const MessageEncoder& encoder_a,
    const MessageEncoder& encoder_b, const DigestSpec& spec, uint64_t seed, AttackBudget budget,
    const ParallelOptions& options, const SearchHooks& hooks)
{
    const MessageEncoder combined(
        encoder_a.label() + "|" + encoder_b.label(), [&](uint64_t x, Bytes& out) {
            if ((x & 1) == 0)
                encoder_a.write(x >> 1, out);
            else
                encoder_b.write(x >> 1, out);
        });

    auto outcome = detail::distinguished_point_search(combined, spec, options, seed, budget, hooks,
        [](uint64_t x1, uint64_t x2) { return ((x1 ^ x2) & 1) != 0; });
    if (const auto* exhausted = std::get_if<Exhausted>(&outcome))
        return *exhausted;

    CollisionPair pair = std::get<CollisionPair>(std::move(outcome));
    if ((pair.counter1 & 1) != 0)
    {
        std::swap(pair.m1, pair.m2);
        std::swap(pair.counter1, pair.counter2);
    }
    pair.counter1 >>= 1;
    pair.counter2 >>= 1;
    return CrossFamilyPair{std::move(pair), encoder_a.label(), encoder_b.label()};
}
}  // namespace digestlab::collision
