// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/scenarios.hpp>

#include <gtest/gtest.h>

using namespace digestlab;
using namespace digestlab::scenarios;

namespace
{
const AccountId creator = parse_account("0x00000000000000000000000000000000000000aa");

ForgeryEvidence forge(int t, uint64_t seed, VaryMode mode = VaryMode::field)
{
    ForgeOptions o;
    o.vary = mode;
    const auto r = forge_address_collision(creator, default_template(TemplateLabel::benign),
        default_template(TemplateLabel::nefarious), 3, DigestSpec(t), seed,
        collision::AttackBudget(100000000), o);
    return std::get<ForgeryEvidence>(r);
}
}  // namespace

TEST(contract_template, layout)
{
    ContractTemplate t{TemplateLabel::benign, {0xaa}, 4, {0xbb, 0xcc}};
    EXPECT_EQ(to_hex(t.initcode(0x0102030405)), "0xaa02030405bbcc");
    EXPECT_TRUE(t.embedded_in(t.initcode(9)));
    EXPECT_FALSE(t.embedded_in(from_hex("0xaa02030405bbcd")));
    t.mutable_field_width = 10;
    EXPECT_EQ(to_hex(t.initcode(1)), "0xaa00000000000000000001bbcc");
    t.mutable_field_width = 0;
    EXPECT_THROW(t.validate(), ParameterError);
    t.mutable_field_width = 8;
    t.code_suffix.resize(4090);
    EXPECT_THROW(t.validate(), ParameterError);
}

TEST(forge, field_mode_evidence)
{
    for (uint64_t seed = 0; seed < 5; ++seed)
    {
        const ForgeryEvidence ev = forge(24, seed);
        EXPECT_EQ(derive_address(ev.benign, ev.spec), ev.shared_address);
        EXPECT_EQ(derive_address(ev.nefarious, ev.spec), ev.shared_address);
        EXPECT_NE(ev.benign.initcode, ev.nefarious.initcode);
        EXPECT_EQ(ev.benign.nonce, 3u);
        EXPECT_EQ(ev.nefarious.nonce, 3u);
        EXPECT_TRUE(ev.benign_template.embedded_in(ev.benign.initcode));
        EXPECT_TRUE(ev.nefarious_template.embedded_in(ev.nefarious.initcode));
        EXPECT_TRUE(verify_bundle(nlohmann::json::parse(to_json(ev).dump())).accepted);
    }
}

TEST(forge, nonce_mode_evidence)
{
    const ForgeryEvidence ev = forge(24, 1, VaryMode::nonce);
    EXPECT_EQ(derive_address(ev.nefarious, ev.spec), derive_address(ev.benign, ev.spec));
    EXPECT_EQ(ev.benign.initcode, ev.benign_template.initcode(0));
    EXPECT_EQ(ev.nefarious.initcode, ev.nefarious_template.initcode(0));
    EXPECT_GE(ev.benign.nonce, 3u);
    EXPECT_TRUE(verify_bundle(nlohmann::json::parse(to_json(ev).dump())).accepted);
}

TEST(forge, limits)
{
    const auto b = default_template(TemplateLabel::benign);
    const auto n = default_template(TemplateLabel::nefarious);
    EXPECT_THROW(forge_address_collision(creator, b, n, 0, DigestSpec(49), 1,
                     collision::AttackBudget(10)),
        ParameterError);
    EXPECT_THROW(forge_address_collision(creator, b, b, 0, DigestSpec(24), 1,
                     collision::AttackBudget(10)),
        ParameterError);
    const auto r = forge_address_collision(creator, b, n, 0, DigestSpec(48), 1,
        collision::AttackBudget(10000));
    ASSERT_TRUE(std::holds_alternative<collision::Exhausted>(r));
    EXPECT_EQ(std::get<collision::Exhausted>(r).evaluations_used, 10000u);
}

TEST(forge, verify_catches_tampering)
{
    const auto doc = nlohmann::json::parse(to_json(forge(20, 4)).dump());

    auto t = doc;
    t["benign"]["nonce"] = 4;
    EXPECT_EQ(verify_bundle(t).check, "benign-address");

    t = doc;
    t["nefarious"] = doc["benign"];
    auto v = verify_bundle(t);
    EXPECT_FALSE(v.accepted);

    t = doc;
    t["shared_address"] = "0x000000";
    EXPECT_FALSE(verify_bundle(t).accepted);

    t = doc;
    t["benign"]["template"]["code_suffix"] = "0x00";
    EXPECT_EQ(verify_bundle(t).check, "benign-template");

    t = doc;
    t["benign"]["initcode"] = "0xzz";
    EXPECT_EQ(verify_bundle(t).check, "malformed");

    t = doc;
    t["schema"] = "nope";
    EXPECT_THROW(verify_bundle(t), ParameterError);
}

TEST(narrate, bundle_verifies_and_tracks_frequency)
{
    beacon::BeaconConfig c;
    c.adversary_index = 2;
    c.spec = DigestSpec(16);
    const auto bundle = narrate_beacon_attack(c, collision::AttackBudget(1000000), 400, 8);
    EXPECT_TRUE(bundle.prepared);
    EXPECT_EQ(bundle.rounds.size(), 400u);
    EXPECT_EQ(bundle.collisions_found, 400u);
    EXPECT_DOUBLE_EQ(bundle.predicted, 0.19);
    for (const auto& r : bundle.rounds)
        ASSERT_TRUE(beacon::verify_round(r.transcript, c).accepted());

    const auto doc = nlohmann::json::parse(to_json(bundle).dump());
    EXPECT_TRUE(verify_bundle(doc).accepted);

    auto t = doc;
    std::string reveal = t["rounds"][7]["reveals"][5];
    reveal.back() = reveal.back() == '0' ? '1' : '0';
    t["rounds"][7]["reveals"][5] = reveal;
    const auto v = verify_bundle(t);
    EXPECT_EQ(v.check, "commitment-mismatch");
    EXPECT_NE(v.detail.find("round 7"), std::string::npos);

    t = doc;
    t["frequency"] = 0.5;
    EXPECT_EQ(verify_bundle(t).check, "frequency");

    t = doc;
    t["rounds"][3]["pair"]["m2"] = t["rounds"][3]["pair"]["m1"];
    EXPECT_EQ(verify_bundle(t).check, "pair-collision");
}

TEST(narrate, failed_preparation_gives_honest_baseline)
{
    beacon::BeaconConfig c;
    c.adversary_index = 0;
    c.spec = DigestSpec(48);
    const auto bundle = narrate_beacon_attack(c, collision::AttackBudget(1000), 200, 1);
    EXPECT_FALSE(bundle.prepared);
    EXPECT_EQ(bundle.collisions_found, 0u);
    EXPECT_EQ(bundle.preparation_evaluations, 1000u);
    EXPECT_DOUBLE_EQ(bundle.predicted, 0.1);
    EXPECT_TRUE(verify_bundle(nlohmann::json::parse(to_json(bundle).dump())).accepted);
}
