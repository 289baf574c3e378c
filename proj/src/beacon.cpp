// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/beacon.hpp>

#include "parallel.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace digestlab::beacon
{
namespace
{
constexpr size_t binding_size = 32;

uint64_t reveal_mask(int reveal_bits) noexcept
{
    return reveal_bits == 64 ? ~uint64_t{0} : (uint64_t{1} << reveal_bits) - 1;
}

std::vector<uint64_t> draw_values(const BeaconConfig& config, std::mt19937_64& rng)
{
    std::vector<uint64_t> values(static_cast<size_t>(config.participants));
    for (auto& v : values)
        v = rng() & reveal_mask(config.reveal_bits);
    return values;
}

/// Generator positioned after the binding draw.
std::mt19937_64 round_generator(const BeaconConfig& config, uint64_t rng_seed, std::optional<Bytes>& binding)
{
    std::mt19937_64 rng(rng_seed);
    if (config.temporal_binding)
    {
        Bytes b;
        for (size_t i = 0; i < binding_size / 8; ++i)
            append_be(b, rng(), 8);
        binding = std::move(b);
    }
    return rng;
}

void check_binding_matches(const BeaconConfig& config, const std::optional<Bytes>& binding)
{
    if (config.temporal_binding && !binding)
        throw ParameterError("temporal binding is enabled but no binding was supplied");
    if (!config.temporal_binding && binding)
        throw ParameterError("a binding was supplied but temporal binding is disabled");
}
}  // namespace

void BeaconConfig::validate() const
{
    if (participants < 2)
        throw ParameterError("a beacon needs at least 2 participants");
    if (adversary_index && (*adversary_index < 0 || *adversary_index >= participants))
        throw ParameterError("adversary index out of range");
    if (reveal_bits < 8 || reveal_bits > 64 || reveal_bits % 8 != 0)
        throw ParameterError("reveal bits must be a multiple of 8 in [8, 64]");
    if (reveal_bits < spec.truncation_bits())
        throw ParameterError("reveal bits must be at least the truncation width");
}

uint64_t reveal_for_counter(uint64_t counter, int reveal_bits) noexcept
{
    return mix64(counter) & reveal_mask(reveal_bits);
}

Bytes commit_preimage(const std::optional<Bytes>& binding, uint64_t value, int reveal_bits)
{
    if (reveal_bits < 64 && (value >> reveal_bits) != 0)
        throw ParameterError("reveal value exceeds reveal width");
    Bytes out;
    if (binding)
    {
        if (binding->size() > 0xff)
            throw ParameterError("binding longer than 255 bytes");
        out.reserve(1 + binding->size() + 8);
        out.push_back(static_cast<uint8_t>(binding->size()));
        out.insert(out.end(), binding->begin(), binding->end());
    }
    append_be(out, value, static_cast<size_t>(reveal_bits / 8));
    return out;
}

std::optional<uint64_t> decode_commit_preimage(
    BytesView preimage, const std::optional<Bytes>& binding, int reveal_bits)
{
    const size_t value_bytes = static_cast<size_t>(reveal_bits / 8);
    size_t prefix = 0;
    if (binding)
    {
        prefix = 1 + binding->size();
        if (preimage.size() < prefix || preimage[0] != binding->size() ||
            !std::equal(binding->begin(), binding->end(), preimage.begin() + 1))
            return std::nullopt;
    }
    if (preimage.size() != prefix + value_bytes)
        return std::nullopt;
    uint64_t value = 0;
    for (size_t i = prefix; i < preimage.size(); ++i)
        value = (value << 8) | preimage[i];
    return value;
}

int select_proposer(uint64_t result, int participants, int reveal_bits)
{
    if (participants < 1)
        throw ParameterError("need at least one participant");
    const int window = std::bit_width(static_cast<unsigned>(participants - 1));
    if (window == 0)
        return 0;
    const uint64_t mask = (uint64_t{1} << window) - 1;

    uint64_t stream = result;
    int stream_bits = reveal_bits;
    for (uint64_t extension = 0;; ++extension)
    {
        for (int used = window; used <= stream_bits; used += window)
        {
            const uint64_t candidate = (stream >> (stream_bits - used)) & mask;
            if (candidate < static_cast<uint64_t>(participants))
                return static_cast<int>(candidate);
        }
        Bytes seed_bytes;
        append_be(seed_bytes, result, 8);
        append_be(seed_bytes, extension, 8);
        const Digest256 d = keccak256(seed_bytes);
        stream = 0;
        for (size_t i = 0; i < 8; ++i)
            stream = (stream << 8) | d.bytes[i];
        stream_bits = 64;
    }
}

std::optional<Bytes> round_binding(const BeaconConfig& config, uint64_t rng_seed)
{
    std::optional<Bytes> binding;
    round_generator(config, rng_seed, binding);
    return binding;
}

RoundTranscript build_round(
    const BeaconConfig& config, std::optional<Bytes> binding, const std::vector<uint64_t>& values)
{
    config.validate();
    check_binding_matches(config, binding);
    if (values.size() != static_cast<size_t>(config.participants))
        throw ParameterError("need one reveal value per participant");

    RoundTranscript t;
    t.binding = std::move(binding);
    // Commit phase completes before any reveal is published.
    for (int i = 0; i < config.participants; ++i)
    {
        const uint64_t v = values[static_cast<size_t>(i)];
        t.commitments.push_back(
            {i, truncated_digest(commit_preimage(t.binding, v, config.reveal_bits), config.spec)});
    }
    for (int i = 0; i < config.participants; ++i)
    {
        const uint64_t v = values[static_cast<size_t>(i)];
        t.reveals.push_back({i, v});
        t.result ^= v;
    }
    t.proposer = select_proposer(t.result, config.participants, config.reveal_bits);
    return t;
}

RoundTranscript run_honest_round(const BeaconConfig& config, uint64_t rng_seed)
{
    if (config.adversary_index)
        throw ParameterError("run_honest_round needs a config without an adversary");
    config.validate();
    std::optional<Bytes> binding;
    auto rng = round_generator(config, rng_seed, binding);
    const auto values = draw_values(config, rng);
    return build_round(config, std::move(binding), values);
}

collision::Outcome<collision::CollisionPair> adversary_prepare(const BeaconConfig& config,
    const std::optional<Bytes>& binding, collision::AttackBudget budget, uint64_t seed,
    const PrepareOptions& options)
{
    config.validate();
    if (!config.adversary_index)
        throw ParameterError("adversary_prepare needs an adversary in the config");
    check_binding_matches(config, binding);

    const int k = config.reveal_bits;
    Bytes prefix;
    if (binding)
    {
        prefix.push_back(static_cast<uint8_t>(binding->size()));
        prefix.insert(prefix.end(), binding->begin(), binding->end());
    }
    // Walk inputs are t-bit digests, so raw counters would give two reveal
    // values that agree on their top k - t bits, and the proposer rule reads
    // the top bits first. A fixed bijection spreads them over all k bits.
    const collision::MessageEncoder encoder(
        "reveal", [prefix = std::move(prefix), k](uint64_t counter, Bytes& out) {
            const size_t width = static_cast<size_t>(k / 8);
            out.resize(prefix.size() + width);
            std::copy(prefix.begin(), prefix.end(), out.begin());
            const uint64_t v = reveal_for_counter(counter, k);
            for (size_t i = 0; i < width; ++i)
                out[prefix.size() + i] = static_cast<uint8_t>(v >> (8 * (width - 1 - i)));
        });
    return collision::find_collision_parallel(
        encoder, config.spec, options.search, seed, budget, options.hooks);
}

RoundTranscript run_attacked_round(
    const BeaconConfig& config, const collision::CollisionPair& pair, uint64_t rng_seed)
{
    config.validate();
    if (!config.adversary_index)
        throw ParameterError("run_attacked_round needs an adversary in the config");
    const auto adversary = static_cast<size_t>(*config.adversary_index);

    std::optional<Bytes> binding;
    auto rng = round_generator(config, rng_seed, binding);

    const auto v1 = decode_commit_preimage(pair.m1, binding, config.reveal_bits);
    const auto v2 = decode_commit_preimage(pair.m2, binding, config.reveal_bits);
    if (!v1 || !v2)
        throw ParameterError("collision pair does not encode reveal values under this binding");
    if (*v1 == *v2)
        throw ParameterError("collision pair encodes the same reveal value twice");
    const TruncatedDigest shared = truncated_digest(pair.m1, config.spec);
    if (truncated_digest(pair.m2, config.spec) != shared)
        throw ParameterError("collision pair digests differ");

    auto values = draw_values(config, rng);

    // The adversary has seen every honest reveal before choosing its own.
    uint64_t honest_xor = 0;
    for (size_t i = 0; i < values.size(); ++i)
        if (i != adversary)
            honest_xor ^= values[i];
    const bool first_wins = select_proposer(honest_xor ^ *v1, config.participants,
                                config.reveal_bits) == *config.adversary_index;
    const bool second_wins = select_proposer(honest_xor ^ *v2, config.participants,
                                 config.reveal_bits) == *config.adversary_index;
    values[adversary] = (!first_wins && second_wins) ? *v2 : *v1;

    // Either choice opens the same commitment: the shared digest.
    return build_round(config, std::move(binding), values);
}

std::string_view to_string(RejectReason reason) noexcept
{
    switch (reason)
    {
    case RejectReason::malformed:
        return "malformed";
    case RejectReason::commitment_mismatch:
        return "commitment-mismatch";
    case RejectReason::result_mismatch:
        return "result-mismatch";
    case RejectReason::proposer_mismatch:
        return "proposer-mismatch";
    }
    return "unknown";
}

Verdict verify_round(const RoundTranscript& transcript, const BeaconConfig& config)
{
    auto reject = [](RejectReason r, std::string detail) { return Verdict{r, std::move(detail)}; };

    const auto n = static_cast<size_t>(config.participants);
    if (transcript.commitments.size() != n || transcript.reveals.size() != n)
        return reject(RejectReason::malformed, "participant count mismatch");
    if (transcript.binding.has_value() != config.temporal_binding)
        return reject(RejectReason::malformed, "binding presence does not match config");
    if (transcript.binding && transcript.binding->size() > 0xff)
        return reject(RejectReason::malformed, "binding longer than 255 bytes");

    const uint64_t mask = reveal_mask(config.reveal_bits);
    uint64_t combined = 0;
    for (size_t i = 0; i < n; ++i)
    {
        const auto& c = transcript.commitments[i];
        const auto& r = transcript.reveals[i];
        if (c.participant != static_cast<int>(i) || r.participant != static_cast<int>(i))
            return reject(RejectReason::malformed, "participants out of order at " + std::to_string(i));
        if (c.commit.width() != config.spec.truncation_bits())
            return reject(RejectReason::malformed, "commitment width mismatch at " + std::to_string(i));
        if ((r.value & ~mask) != 0)
            return reject(RejectReason::malformed, "reveal exceeds reveal width at " + std::to_string(i));
    }
    for (size_t i = 0; i < n; ++i)
    {
        const auto& r = transcript.reveals[i];
        const auto recomputed = truncated_digest(
            commit_preimage(transcript.binding, r.value, config.reveal_bits), config.spec);
        if (recomputed != transcript.commitments[i].commit)
            return reject(RejectReason::commitment_mismatch, "participant " + std::to_string(i));
        combined ^= r.value;
    }
    if (combined != transcript.result)
        return reject(RejectReason::result_mismatch, "XOR of reveals differs from result");
    if (select_proposer(transcript.result, config.participants, config.reveal_bits) !=
        transcript.proposer)
        return reject(RejectReason::proposer_mismatch, "selection rule gives a different proposer");
    return {};
}

std::string_view to_string(ScenarioKind kind) noexcept
{
    switch (kind)
    {
    case ScenarioKind::honest:
        return "honest";
    case ScenarioKind::attacked:
        return "attacked";
    case ScenarioKind::attacked_with_binding:
        return "attacked_with_binding";
    }
    return "unknown";
}

ScenarioKind parse_scenario(std::string_view name)
{
    if (name == "honest")
        return ScenarioKind::honest;
    if (name == "attacked")
        return ScenarioKind::attacked;
    if (name == "attacked_with_binding" || name == "temporal")
        return ScenarioKind::attacked_with_binding;
    throw ParameterError("unknown scenario: " + std::string(name));
}

double honest_frequency(int participants)
{
    return 1.0 / participants;
}

double attacked_frequency(int participants)
{
    const double p = honest_frequency(participants);
    return 2 * p - p * p;
}

BiasReport measure_bias(const BeaconConfig& config, uint64_t rounds, const Scenario& scenario,
    uint64_t seed, const BiasOptions& options)
{
    config.validate();
    if (rounds < 1)
        throw ParameterError("need at least one round");
    if (!config.adversary_index)
        throw ParameterError("measure_bias needs the tracked adversary index");
    if (scenario.kind == ScenarioKind::attacked && config.temporal_binding)
        throw ParameterError("the attacked scenario precomputes its pair; disable temporal binding");
    if (scenario.kind == ScenarioKind::attacked_with_binding && !config.temporal_binding)
        throw ParameterError("attacked_with_binding needs temporal binding enabled");
    if (scenario.kind == ScenarioKind::attacked_with_binding && !scenario.budget)
        throw ParameterError("attacked_with_binding needs a per-round budget");

    const int t = config.spec.truncation_bits();
    BeaconConfig honest_config = config;
    honest_config.adversary_index.reset();

    // One pair per round. Without temporal binding the search may run any
    // time before the round, so it gets a generous default budget.
    const collision::AttackBudget prepare_budget = scenario.budget.value_or(
        collision::AttackBudget(static_cast<uint64_t>(std::ceil(64 * collision::expected_work(t)))));

    struct RoundResult
    {
        bool selected = false;
        bool had_pair = false;
        bool rejected = false;
        RoundTranscript transcript;
    };
    std::vector<RoundResult> results(rounds);

    auto play = [&](uint64_t r) {
        const uint64_t round_seed = derive_seed(seed, r);
        RoundResult& out = results[r];
        std::optional<collision::CollisionPair> pair;
        if (scenario.kind != ScenarioKind::honest)
        {
            const auto binding = round_binding(config, round_seed);
            auto outcome = adversary_prepare(
                config, binding, prepare_budget, mix64(round_seed ^ 0xad), {options.search, {}});
            if (auto* p = std::get_if<collision::CollisionPair>(&outcome))
                pair = std::move(*p);
        }

        if (pair)
            out.transcript = run_attacked_round(config, *pair, round_seed);
        else
            out.transcript = run_honest_round(honest_config, round_seed);
        out.had_pair = pair.has_value();
        out.selected = out.transcript.proposer == *config.adversary_index;
        out.rejected = !verify_round(out.transcript, config).accepted();
        if (!options.sink)
            out.transcript = {};
    };

    detail::parallel_for(rounds, options.threads, play);

    BiasReport report;
    report.scenario = scenario.kind;
    report.participants = config.participants;
    report.truncation_bits = t;
    report.rounds = rounds;
    for (uint64_t r = 0; r < rounds; ++r)
    {
        report.adversary_selected += results[r].selected;
        report.collisions_found += results[r].had_pair;
        report.transcripts_rejected += results[r].rejected;
        if (options.sink)
            options.sink(r, results[r].transcript);
    }
    const auto n = static_cast<double>(rounds);
    report.frequency = static_cast<double>(report.adversary_selected) / n;
    report.attack_success_rate = static_cast<double>(report.collisions_found) / n;
    report.honest_expected = honest_frequency(config.participants);
    report.attacked_predicted = attacked_frequency(config.participants);
    switch (scenario.kind)
    {
    case ScenarioKind::honest:
        report.scenario_predicted = report.honest_expected;
        break;
    case ScenarioKind::attacked:
    case ScenarioKind::attacked_with_binding:
    {
        const double s = collision::success_probability(
            static_cast<double>(prepare_budget.max_evaluations()), t);
        report.scenario_predicted = s * report.attacked_predicted + (1 - s) * report.honest_expected;
        report.per_round_budget = prepare_budget.max_evaluations();
        break;
    }
    }
    return report;
}
}  // namespace digestlab::beacon
