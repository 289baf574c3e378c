// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

// Birthday-collision search over truncated digests.
//
// Three searchers share one contract: every evaluation is one call of
// truncated_digest(encode(x), spec), the total is bounded by an AttackBudget,
// and a returned CollisionPair always holds two distinct messages with equal
// truncated digests.
//
//  - find_collision_brute: table of every digest seen, counters 0, 1, 2, ...
//    Memory grows with evaluations, so it is limited to t <= 32. Used as the
//    reference oracle for the others.
//  - find_collision_rho: Pollard rho with Brent cycle detection over
//    f(x) = truncated_digest(encode(x)). Constant memory, single-threaded.
//  - find_collision_parallel: van Oorschot-Wiener distinguished points.
//    Workers walk trails from pseudorandom starts until they reach a point
//    whose low bits are zero and publish (start, length, endpoint) into a
//    shared table. Two trails with one endpoint have merged; re-walking both
//    from aligned positions yields the colliding step.
//
// The rho and parallel searchers walk inside the truncated-digest space, so
// they need t <= 64.
#pragma once

#include <digestlab/bytes.hpp>
#include <digestlab/digest.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>

namespace digestlab::collision
{
/// Deterministic injective map from a 64-bit counter to a message: the
/// attacker's controlled input space.
class MessageEncoder
{
public:
    /// Must clear `out` and write the message for `counter`.
    using WriteFn = std::function<void(uint64_t counter, Bytes& out)>;

    MessageEncoder(std::string label, WriteFn write);

    /// "<label>" followed by the 8-byte big-endian value of counter + offset.
    static MessageEncoder counter(std::string label = "counter", uint64_t offset = 0);

    [[nodiscard]] const std::string& label() const noexcept { return label_; }

    void write(uint64_t counter, Bytes& out) const { write_(counter, out); }
    Bytes operator()(uint64_t counter) const;

private:
    std::string label_;
    WriteFn write_;
};

struct CollisionPair
{
    Bytes m1;
    Bytes m2;
    TruncatedDigest digest_value;
    uint64_t evaluations_used = 0;
    /// Encoder inputs that produced m1 and m2.
    uint64_t counter1 = 0;
    uint64_t counter2 = 0;
};

/// Recomputes both digests; true iff m1 != m2 and both equal digest_value.
bool verify_pair(const CollisionPair& pair, const DigestSpec& spec);

/// Search ran out of budget before a collision was found.
struct Exhausted
{
    uint64_t evaluations_used = 0;
};

template <class T>
using Outcome = std::variant<T, Exhausted>;

template <class T>
bool found(const Outcome<T>& outcome) noexcept
{
    return std::holds_alternative<T>(outcome);
}

/// Upper bound on digest evaluations. Always at least 1.
class AttackBudget
{
public:
    explicit AttackBudget(uint64_t max_evaluations);

    /// floor(hash_rate * window_seconds) evaluations.
    static AttackBudget from_rate(double hash_rate, double window_seconds);

    [[nodiscard]] uint64_t max_evaluations() const noexcept { return max_evaluations_; }

private:
    uint64_t max_evaluations_;
};

struct SearchProgress
{
    uint64_t evaluations = 0;
    uint64_t trails_stored = 0;
};

using ProgressCallback = std::function<void(const SearchProgress&)>;
using DigestFunction = std::function<TruncatedDigest(BytesView, const DigestSpec&)>;

/// Optional instrumentation. `digest` replaces truncated_digest for every
/// evaluation (it must compute the same function and be thread-safe);
/// `progress` is called periodically from the searching thread(s).
struct SearchHooks
{
    DigestFunction digest;
    ProgressCallback progress;
};

Outcome<CollisionPair> find_collision_brute(const MessageEncoder& encoder, const DigestSpec& spec,
    AttackBudget budget, const SearchHooks& hooks = {});

Outcome<CollisionPair> find_collision_rho(const MessageEncoder& encoder, const DigestSpec& spec,
    uint64_t seed, AttackBudget budget, const SearchHooks& hooks = {});

/// max(4, floor(t/4)).
int default_distinguished_bits(int t) noexcept;

struct ParallelOptions
{
    int workers = 1;
    /// Defaults to default_distinguished_bits(t). Must lie in [0, t-4].
    std::optional<int> distinguished_bits;
    /// Trail-table capacity; the oldest trail is evicted when full.
    size_t table_capacity = size_t{1} << 22;
};

/// With workers == 1 the search runs on the calling thread and is
/// bit-reproducible for a given seed.
Outcome<CollisionPair> find_collision_parallel(const MessageEncoder& encoder,
    const DigestSpec& spec, const ParallelOptions& options, uint64_t seed, AttackBudget budget,
    const SearchHooks& hooks = {});

/// m1 always comes from family a, m2 from family b.
struct CrossFamilyPair
{
    CollisionPair pair;
    std::string label_a;
    std::string label_b;
};

/// Searches the combined encoder where the low bit of the walk input picks
/// the family and the remaining 63 bits feed that family's encoder.
/// Collisions inside one family are discarded and the search continues.
Outcome<CrossFamilyPair> find_cross_family_collision(const MessageEncoder& encoder_a,
    const MessageEncoder& encoder_b, const DigestSpec& spec, uint64_t seed, AttackBudget budget,
    const ParallelOptions& options = {}, const SearchHooks& hooks = {});

/// sqrt(pi/2 * 2^t): expected evaluations to the first collision.
double expected_work(int t);

/// 1 - exp(-q(q-1) / 2^(t+1)).
double success_probability(double evaluations, int t);
}  // namespace digestlab::collision
