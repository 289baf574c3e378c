// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/beacon.hpp>

namespace digestlab::beacon
{
namespace
{
std::string value_hex(uint64_t value, int reveal_bits)
{
    Bytes b;
    append_be(b, value, static_cast<size_t>(reveal_bits / 8));
    return to_hex(b);
}

uint64_t parse_value(const std::string& hex, int reveal_bits)
{
    const Bytes b = from_hex(hex);
    if (b.size() != static_cast<size_t>(reveal_bits / 8))
        throw ParameterError("reveal value has the wrong width: " + hex);
    uint64_t v = 0;
    for (const auto byte : b)
        v = (v << 8) | byte;
    return v;
}

template <class T>
T field(const nlohmann::json& j, const char* name)
{
    if (!j.contains(name))
        throw ParameterError(std::string("missing field: ") + name);
    try
    {
        return j.at(name).get<T>();
    }
    catch (const nlohmann::json::exception&)
    {
        throw ParameterError(std::string("malformed field: ") + name);
    }
}
}  // namespace

nlohmann::ordered_json transcript_log_entry(uint64_t round, ScenarioKind scenario,
    const RoundTranscript& transcript, const BeaconConfig& config)
{
    nlohmann::ordered_json j;
    j["schema"] = transcript_schema;
    j["round"] = round;
    j["scenario"] = to_string(scenario);
    j["binding"] = transcript.binding ? nlohmann::ordered_json(to_hex(*transcript.binding))
                                      : nlohmann::ordered_json(nullptr);
    auto& commits = j["commits"] = nlohmann::ordered_json::array();
    for (const auto& c : transcript.commitments)
        commits.push_back(c.commit.to_hex());
    auto& reveals = j["reveals"] = nlohmann::ordered_json::array();
    for (const auto& r : transcript.reveals)
        reveals.push_back(value_hex(r.value, config.reveal_bits));
    j["result"] = value_hex(transcript.result, config.reveal_bits);
    j["proposer"] = transcript.proposer;
    return j;
}

RoundTranscript transcript_from_json(const nlohmann::json& j, const BeaconConfig& config)
{
    if (field<std::string>(j, "schema") != transcript_schema)
        throw ParameterError("unsupported transcript schema");

    RoundTranscript t;
    if (!j.contains("binding"))
        throw ParameterError("missing field: binding");
    if (!j.at("binding").is_null())
        t.binding = from_hex(field<std::string>(j, "binding"));

    const auto commits = field<std::vector<std::string>>(j, "commits");
    const auto reveals = field<std::vector<std::string>>(j, "reveals");
    for (size_t i = 0; i < commits.size(); ++i)
        t.commitments.push_back({static_cast<int>(i),
            TruncatedDigest::from_hex(commits[i], config.spec.truncation_bits())});
    for (size_t i = 0; i < reveals.size(); ++i)
        t.reveals.push_back({static_cast<int>(i), parse_value(reveals[i], config.reveal_bits)});
    t.result = parse_value(field<std::string>(j, "result"), config.reveal_bits);
    t.proposer = field<int>(j, "proposer");
    return t;
}

nlohmann::ordered_json to_json(const BeaconConfig& config)
{
    nlohmann::ordered_json j;
    j["participants"] = config.participants;
    j["adversary_index"] = config.adversary_index ? nlohmann::ordered_json(*config.adversary_index)
                                                  : nlohmann::ordered_json(nullptr);
    j["reveal_bits"] = config.reveal_bits;
    j["algorithm"] = to_string(config.spec.algorithm());
    j["truncation_bits"] = config.spec.truncation_bits();
    j["temporal_binding"] = config.temporal_binding;
    return j;
}

BeaconConfig config_from_json(const nlohmann::json& j)
{
    BeaconConfig c;
    c.participants = field<int>(j, "participants");
    if (j.contains("adversary_index") && !j.at("adversary_index").is_null())
        c.adversary_index = field<int>(j, "adversary_index");
    c.reveal_bits = field<int>(j, "reveal_bits");
    c.spec = DigestSpec(field<int>(j, "truncation_bits"),
        parse_digest_algorithm(field<std::string>(j, "algorithm")));
    c.temporal_binding = field<bool>(j, "temporal_binding");
    c.validate();
    return c;
}

nlohmann::ordered_json to_json(const BiasReport& report)
{
    nlohmann::ordered_json j;
    j["scenario"] = to_string(report.scenario);
    j["participants"] = report.participants;
    j["truncation_bits"] = report.truncation_bits;
    j["rounds"] = report.rounds;
    j["adversary_selected"] = report.adversary_selected;
    j["frequency"] = report.frequency;
    j["honest_expected"] = report.honest_expected;
    j["attacked_predicted"] = report.attacked_predicted;
    j["scenario_predicted"] = report.scenario_predicted;
    j["collisions_found"] = report.collisions_found;
    j["attack_success_rate"] = report.attack_success_rate;
    j["per_round_budget"] = report.per_round_budget ? nlohmann::ordered_json(*report.per_round_budget)
                                                    : nlohmann::ordered_json(nullptr);
    j["transcripts_rejected"] = report.transcripts_rejected;
    return j;
}
}  // namespace digestlab::beacon
