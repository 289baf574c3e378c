// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/beacon.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace digestlab;
using namespace digestlab::beacon;

namespace
{
BeaconConfig small_config(int n = 10, int t = 16)
{
    BeaconConfig c;
    c.participants = n;
    c.adversary_index = 0;
    c.spec = DigestSpec(t);
    return c;
}

BeaconConfig honest_config(int n = 10, int t = 16)
{
    BeaconConfig c = small_config(n, t);
    c.adversary_index.reset();
    return c;
}

double three_sigma(double p, double rounds)
{
    return 3 * std::sqrt(p * (1 - p) / rounds);
}
}  // namespace

TEST(commit, preimage_layout)
{
    EXPECT_EQ(to_hex(commit_preimage(std::nullopt, 0x0102, 16)), "0x0102");
    EXPECT_EQ(to_hex(commit_preimage(std::nullopt, 5, 64)), "0x0000000000000005");
    EXPECT_EQ(to_hex(commit_preimage(Bytes{0xaa, 0xbb}, 7, 8)), "0x02aabb07");
    EXPECT_THROW(commit_preimage(std::nullopt, 0x100, 8), ParameterError);

    const Bytes binding(32, 0x5c);
    for (uint64_t v : {uint64_t{0}, uint64_t{1}, ~uint64_t{0}})
        EXPECT_EQ(decode_commit_preimage(commit_preimage(binding, v, 64), binding, 64), v);
    EXPECT_FALSE(decode_commit_preimage(commit_preimage(binding, 1, 64), Bytes(32, 0), 64));
    EXPECT_FALSE(decode_commit_preimage(commit_preimage(std::nullopt, 1, 64), binding, 64));
}

TEST(config, validation)
{
    BeaconConfig c = small_config();
    EXPECT_NO_THROW(c.validate());
    c.participants = 1;
    EXPECT_THROW(c.validate(), ParameterError);
    c = small_config();
    c.adversary_index = 10;
    EXPECT_THROW(c.validate(), ParameterError);
    c = small_config();
    c.reveal_bits = 12;
    EXPECT_THROW(c.validate(), ParameterError);
    c = small_config(10, 24);
    c.reveal_bits = 16;
    EXPECT_THROW(c.validate(), ParameterError);
}

TEST(proposer, uniform_chi_square)
{
    std::mt19937_64 rng(4);
    for (int n : {3, 10, 32})
    {
        std::vector<double> counts(static_cast<size_t>(n), 0);
        constexpr int draws = 100000;
        for (int i = 0; i < draws; ++i)
            counts[static_cast<size_t>(select_proposer(rng(), n, 64))] += 1;
        const double expect = static_cast<double>(draws) / n;
        double chi2 = 0;
        for (const double c : counts)
            chi2 += (c - expect) * (c - expect) / expect;
        // 0.999 quantiles: df 2 -> 13.8, df 9 -> 27.9, df 31 -> 61.1
        const double limit = n == 3 ? 13.8 : n == 10 ? 27.9 : 61.1;
        EXPECT_LT(chi2, limit) << n;
    }
}

TEST(proposer, fallback_when_every_window_is_rejected)
{
    // n = 3, k = 8: windows 11 11 11 11 all reject, so the digest stream decides.
    const int p = select_proposer(0xff, 3, 8);
    EXPECT_GE(p, 0);
    EXPECT_LT(p, 3);
    EXPECT_EQ(select_proposer(0xff, 3, 8), p);
    EXPECT_EQ(select_proposer(0b10110111, 3, 8), 2);
    EXPECT_EQ(select_proposer(0, 2, 8), 0);
}

TEST(round, honest_rounds_verify_and_xor)
{
    const BeaconConfig c = honest_config();
    for (uint64_t s = 0; s < 50; ++s)
    {
        const RoundTranscript t = run_honest_round(c, s);
        EXPECT_TRUE(verify_round(t, c).accepted());
        uint64_t x = 0;
        for (const auto& r : t.reveals)
            x ^= r.value;
        EXPECT_EQ(x, t.result);
        EXPECT_EQ(run_honest_round(c, s), t);
    }
    EXPECT_THROW(run_honest_round(small_config(), 1), ParameterError);
}

TEST(round, single_reveal_perturbs_result)
{
    // Changing one reveal by d changes R by exactly d.
    const BeaconConfig c = honest_config(5, 16);
    std::mt19937_64 rng(6);
    std::vector<uint64_t> values(5);
    for (auto& v : values)
        v = rng();
    const RoundTranscript base = build_round(c, std::nullopt, values);
    for (size_t i = 0; i < values.size(); ++i)
    {
        auto changed = values;
        const uint64_t d = rng() | 1;
        changed[i] ^= d;
        EXPECT_EQ(build_round(c, std::nullopt, changed).result, base.result ^ d);
    }
}

TEST(round, verify_rejects_tampering)
{
    const BeaconConfig c = honest_config();
    const RoundTranscript good = run_honest_round(c, 3);

    RoundTranscript t = good;
    t.reveals[4].value ^= 1;
    EXPECT_EQ(verify_round(t, c).reason, RejectReason::commitment_mismatch);

    t = good;
    t.result ^= 1;
    EXPECT_EQ(verify_round(t, c).reason, RejectReason::result_mismatch);

    t = good;
    t.proposer = (t.proposer + 1) % c.participants;
    EXPECT_EQ(verify_round(t, c).reason, RejectReason::proposer_mismatch);

    t = good;
    t.reveals.pop_back();
    EXPECT_EQ(verify_round(t, c).reason, RejectReason::malformed);

    t = good;
    t.binding = Bytes(32, 0);
    EXPECT_EQ(verify_round(t, c).reason, RejectReason::malformed);
}

TEST(round, temporal_binding_comes_first)
{
    BeaconConfig c = honest_config(10, 24);
    c.temporal_binding = true;
    const auto b = round_binding(c, 77);
    ASSERT_TRUE(b.has_value());
    EXPECT_EQ(b->size(), 32u);
    const RoundTranscript t = run_honest_round(c, 77);
    EXPECT_EQ(t.binding, b);
    EXPECT_TRUE(verify_round(t, c).accepted());
    EXPECT_NE(round_binding(c, 78), b);
    EXPECT_FALSE(round_binding(honest_config(), 77).has_value());
}

TEST(adversary, pair_gives_a_choice)
{
    const BeaconConfig c = small_config(10, 16);
    int wins = 0;
    for (uint64_t s = 0; s < 200; ++s)
    {
        const auto o = adversary_prepare(c, std::nullopt, collision::AttackBudget(1 << 20), s);
        const auto& pair = std::get<collision::CollisionPair>(o);
        EXPECT_TRUE(collision::verify_pair(pair, c.spec));
        const RoundTranscript t = run_attacked_round(c, pair, s);
        ASSERT_TRUE(verify_round(t, c).accepted());
        EXPECT_EQ(t.commitments[0].commit, pair.digest_value);
        wins += t.proposer == 0;
    }
    EXPECT_GT(wins, 20);
}

TEST(adversary, binding_rules)
{
    BeaconConfig c = small_config(10, 16);
    EXPECT_THROW(adversary_prepare(c, Bytes(32, 1), collision::AttackBudget(10), 1), ParameterError);
    c.temporal_binding = true;
    EXPECT_THROW(adversary_prepare(c, std::nullopt, collision::AttackBudget(10), 1), ParameterError);

    // A pair found under one binding is useless under the next round's binding.
    const auto b = round_binding(c, 1);
    const auto o = adversary_prepare(c, b, collision::AttackBudget(1 << 20), 1);
    const auto& pair = std::get<collision::CollisionPair>(o);
    EXPECT_NO_THROW(run_attacked_round(c, pair, 1));
    EXPECT_THROW(run_attacked_round(c, pair, 2), ParameterError);

    EXPECT_THROW(adversary_prepare(honest_config(), std::nullopt, collision::AttackBudget(10), 1),
        ParameterError);
}

TEST(bias, honest_frequency_is_one_over_n)
{
    for (int n : {4, 10, 32})
    {
        const auto r = measure_bias(small_config(n), 20000, {ScenarioKind::honest, {}}, 1);
        EXPECT_NEAR(r.frequency, 1.0 / n, three_sigma(1.0 / n, 20000)) << n;
        EXPECT_EQ(r.transcripts_rejected, 0u);
        EXPECT_EQ(r.collisions_found, 0u);
    }
}

TEST(bias, attacked_frequency_is_two_p_minus_p_squared)
{
    for (int n : {4, 10, 32})
    {
        const uint64_t rounds = 4000;
        const auto r = measure_bias(small_config(n), rounds, {ScenarioKind::attacked, {}}, 2);
        const double p = 1.0 / n;
        EXPECT_DOUBLE_EQ(r.attacked_predicted, 2 * p - p * p);
        EXPECT_NEAR(r.frequency, 2 * p - p * p, three_sigma(2 * p - p * p, rounds)) << n;
        EXPECT_EQ(r.collisions_found, rounds);
        EXPECT_EQ(r.transcripts_rejected, 0u);
    }
}

TEST(bias, thread_count_does_not_change_the_report)
{
    BeaconConfig c = small_config(10, 16);
    std::vector<uint64_t> proposers_1, proposers_3;
    BiasOptions one;
    one.sink = [&](uint64_t, const RoundTranscript& t) {
        proposers_1.push_back(static_cast<uint64_t>(t.proposer));
    };
    BiasOptions three = one;
    three.threads = 3;
    three.sink = [&](uint64_t, const RoundTranscript& t) {
        proposers_3.push_back(static_cast<uint64_t>(t.proposer));
    };
    const auto a = measure_bias(c, 300, {ScenarioKind::attacked, {}}, 9, one);
    const auto b = measure_bias(c, 300, {ScenarioKind::attacked, {}}, 9, three);
    EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
    EXPECT_EQ(proposers_1, proposers_3);
}

TEST(bias, scenario_preconditions)
{
    BeaconConfig c = small_config();
    EXPECT_THROW(measure_bias(c, 10, {ScenarioKind::attacked_with_binding, collision::AttackBudget(5)}, 1),
        ParameterError);
    c.temporal_binding = true;
    EXPECT_THROW(measure_bias(c, 10, {ScenarioKind::attacked, {}}, 1), ParameterError);
    EXPECT_THROW(measure_bias(c, 10, {ScenarioKind::attacked_with_binding, {}}, 1), ParameterError);
    EXPECT_THROW(measure_bias(honest_config(), 10, {ScenarioKind::honest, {}}, 1), ParameterError);
    EXPECT_EQ(parse_scenario("temporal"), ScenarioKind::attacked_with_binding);
    EXPECT_THROW(parse_scenario("bogus"), ParameterError);
}

TEST(bias, budget_one_never_attacks)
{
    BeaconConfig c = small_config(10, 24);
    c.temporal_binding = true;
    const auto r =
        measure_bias(c, 500, {ScenarioKind::attacked_with_binding, collision::AttackBudget(1)}, 4);
    EXPECT_EQ(r.collisions_found, 0u);
    EXPECT_EQ(r.scenario_predicted, r.honest_expected);
}

TEST(transcript, json_round_trip)
{
    BeaconConfig c = small_config(7, 24);
    c.temporal_binding = true;
    c.reveal_bits = 32;
    const auto o = adversary_prepare(c, round_binding(c, 5), collision::AttackBudget(1 << 22), 5);
    const RoundTranscript t = run_attacked_round(c, std::get<collision::CollisionPair>(o), 5);
    const auto j = transcript_log_entry(3, ScenarioKind::attacked_with_binding, t, c);
    EXPECT_EQ(j["schema"], transcript_schema);
    EXPECT_EQ(j["round"], 3);
    EXPECT_EQ(j["reveals"][0].get<std::string>().size(), 2u + 8u);
    const auto parsed = nlohmann::json::parse(j.dump());
    EXPECT_EQ(transcript_from_json(parsed, c), t);
    EXPECT_EQ(config_from_json(nlohmann::json::parse(to_json(c).dump())).participants, 7);

    auto bad = parsed;
    bad["schema"] = "other";
    EXPECT_THROW(transcript_from_json(bad, c), ParameterError);
}
