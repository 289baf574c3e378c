// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

// Commit-reveal XOR randomness beacon.
//
// Each participant commits to truncated_digest(commit_preimage(binding, v))
// and later reveals v. The agreed value R is the XOR of all reveals and picks
// the next proposer. An adversary holding two reveal values with the same
// commitment digest waits for everyone else, then reveals whichever value
// makes it the proposer.
#pragma once

#include <digestlab/bytes.hpp>
#include <digestlab/collision.hpp>
#include <digestlab/digest.hpp>

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace digestlab::beacon
{
struct BeaconConfig
{
    int participants = 10;
    std::optional<int> adversary_index;
    /// Reveal width k in bits: a multiple of 8 in [8, 64], and k >= t.
    int reveal_bits = 64;
    DigestSpec spec{24};
    /// Commitments include a fresh per-round value from a recent block.
    bool temporal_binding = false;

    /// Throws ParameterError on a violated invariant.
    void validate() const;
};

struct Commitment
{
    int participant = 0;
    TruncatedDigest commit;

    friend bool operator==(const Commitment&, const Commitment&) = default;
};

struct RevealRecord
{
    int participant = 0;
    uint64_t value = 0;

    friend bool operator==(const RevealRecord&, const RevealRecord&) = default;
};

struct RoundTranscript
{
    std::optional<Bytes> binding;
    std::vector<Commitment> commitments;
    std::vector<RevealRecord> reveals;
    uint64_t result = 0;
    int proposer = 0;

    friend bool operator==(const RoundTranscript&, const RoundTranscript&) = default;
};

/// Without binding: the k/8-byte big-endian value. With binding: one length
/// byte, the binding bytes, then the value bytes. Bindings are at most 255
/// bytes.
Bytes commit_preimage(const std::optional<Bytes>& binding, uint64_t value, int reveal_bits);

/// Inverse of commit_preimage for a known binding; nullopt when the bytes do
/// not have that layout.
std::optional<uint64_t> decode_commit_preimage(
    BytesView preimage, const std::optional<Bytes>& binding, int reveal_bits);

/// Uniform index in [0, n) from a k-bit value: successive ceil(log2 n)-bit
/// windows of `result`, most significant first, are tried until one is
/// below n. If every window is rejected the stream continues with Keccak-256
/// of (result, counter).
int select_proposer(uint64_t result, int participants, int reveal_bits);

/// The epoch value a round commits under (nullopt without temporal binding).
/// Drawn first from the round's generator, so it exists before any
/// adversary work for that round can start.
std::optional<Bytes> round_binding(const BeaconConfig& config, uint64_t rng_seed);

/// Assembles a fully honest transcript from given reveal values. This is the
/// commit/reveal/combine path of run_honest_round with the draws replaced.
RoundTranscript build_round(
    const BeaconConfig& config, std::optional<Bytes> binding, const std::vector<uint64_t>& values);

/// Requires a config without an adversary.
RoundTranscript run_honest_round(const BeaconConfig& config, uint64_t rng_seed);

struct PrepareOptions
{
    collision::ParallelOptions search;
    collision::SearchHooks hooks;
};

/// The adversary's reveal value for a search counter: a fixed 64-bit
/// bijection of the counter, reduced mod 2^k.
uint64_t reveal_for_counter(uint64_t counter, int reveal_bits) noexcept;

/// Collision search over
/// counter -> commit_preimage(binding, reveal_for_counter(counter, k)).
/// With temporal binding the binding must be supplied: the search cannot
/// start before it exists, and `budget` is what fits in the remaining window.
collision::Outcome<collision::CollisionPair> adversary_prepare(const BeaconConfig& config,
    const std::optional<Bytes>& binding, collision::AttackBudget budget, uint64_t seed,
    const PrepareOptions& options = {});

/// Honest participants play as in run_honest_round. The adversary commits the
/// pair's shared digest, reveals last, and picks the value that makes it the
/// proposer (the first value on a tie or when neither does). Throws
/// ParameterError if the pair is not a valid equivocation under this round's
/// binding.
RoundTranscript run_attacked_round(
    const BeaconConfig& config, const collision::CollisionPair& pair, uint64_t rng_seed);

enum class RejectReason
{
    malformed,
    commitment_mismatch,
    result_mismatch,
    proposer_mismatch,
};

std::string_view to_string(RejectReason reason) noexcept;

struct Verdict
{
    std::optional<RejectReason> reason;
    std::string detail;

    [[nodiscard]] bool accepted() const noexcept { return !reason.has_value(); }
};

/// The checks an honest node performs, in order: shape, every commitment,
/// the XOR, the proposer.
Verdict verify_round(const RoundTranscript& transcript, const BeaconConfig& config);

enum class ScenarioKind
{
    honest,
    attacked,
    attacked_with_binding,
};

std::string_view to_string(ScenarioKind kind) noexcept;
ScenarioKind parse_scenario(std::string_view name);

struct Scenario
{
    ScenarioKind kind = ScenarioKind::honest;
    /// Per-round search budget. Optional for attacked (default
    /// 64 x expected_work), required for attacked_with_binding.
    std::optional<collision::AttackBudget> budget;
};

struct BiasReport
{
    ScenarioKind scenario = ScenarioKind::honest;
    int participants = 0;
    int truncation_bits = 0;
    uint64_t rounds = 0;
    uint64_t adversary_selected = 0;
    double frequency = 0;
    double honest_expected = 0;
    double attacked_predicted = 0;
    /// Rounds in which the adversary held a valid equivocation pair.
    uint64_t collisions_found = 0;
    double attack_success_rate = 0;
    /// Composed prediction for the scenario: honest p, 2p - p^2, or the
    /// success-probability-weighted mix of the two.
    double scenario_predicted = 0;
    std::optional<uint64_t> per_round_budget;
    uint64_t transcripts_rejected = 0;
};

using TranscriptSink = std::function<void(uint64_t round, const RoundTranscript&)>;

struct BiasOptions
{
    /// Rounds run on this many threads; the report does not depend on it.
    unsigned threads = 1;
    collision::ParallelOptions search;
    /// Called for every round in round order after the run.
    TranscriptSink sink;
};

/// Requires config.adversary_index: in the honest scenario it is the
/// participant whose selection frequency is tracked. In both attacked
/// scenarios the adversary searches a fresh pair for every round and plays
/// honestly in rounds where the search is exhausted. attacked needs
/// temporal_binding off; attacked_with_binding needs it on.
BiasReport measure_bias(const BeaconConfig& config, uint64_t rounds, const Scenario& scenario,
    uint64_t seed, const BiasOptions& options = {});

/// 1/n.
double honest_frequency(int participants);
/// 2p - p^2: two independent chances at probability p.
double attacked_frequency(int participants);

inline constexpr std::string_view transcript_schema = "digestlab.transcript.v1";

/// One line of the transcript log: schema, round, scenario, binding,
/// commits, reveals, result, proposer. Hex fields follow the repo-wide
/// convention; reveals and result are k/8 bytes wide.
nlohmann::ordered_json transcript_log_entry(uint64_t round, ScenarioKind scenario,
    const RoundTranscript& transcript, const BeaconConfig& config);
/// Reads the transcript fields of a log entry. Throws ParameterError on a
/// schema mismatch or malformed field.
RoundTranscript transcript_from_json(const nlohmann::json& j, const BeaconConfig& config);
nlohmann::ordered_json to_json(const BeaconConfig& config);
BeaconConfig config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const BiasReport& report);
}  // namespace digestlab::beacon
