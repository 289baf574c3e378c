// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/mitigation.hpp>
#include <digestlab/scenarios.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace digestlab::scenarios
{
std::string_view to_string(TemplateLabel label) noexcept
{
    return label == TemplateLabel::benign ? "benign" : "nefarious";
}

TemplateLabel parse_template_label(std::string_view name)
{
    if (name == "benign")
        return TemplateLabel::benign;
    if (name == "nefarious")
        return TemplateLabel::nefarious;
    throw ParameterError("unknown template label: " + std::string(name));
}

std::string_view to_string(VaryMode mode) noexcept
{
    return mode == VaryMode::field ? "field" : "nonce";
}

VaryMode parse_vary_mode(std::string_view name)
{
    if (name == "field" || name == "initcode")
        return VaryMode::field;
    if (name == "nonce")
        return VaryMode::nonce;
    throw ParameterError("unknown vary mode: " + std::string(name));
}

void ContractTemplate::validate() const
{
    if (mutable_field_width < 1 || mutable_field_width > 32)
        throw ParameterError("mutable field width must lie in [1, 32] bytes");
    if (initcode_size() > DeploymentRecord::max_initcode_size)
        throw ParameterError("template initcode exceeds 4096 bytes");
}

size_t ContractTemplate::initcode_size() const noexcept
{
    return code_prefix.size() + static_cast<size_t>(std::max(mutable_field_width, 0)) +
           code_suffix.size();
}

void ContractTemplate::write_initcode(uint64_t counter, Bytes& out) const
{
    out.clear();
    out.insert(out.end(), code_prefix.begin(), code_prefix.end());
    const auto width = static_cast<size_t>(mutable_field_width);
    if (width > 8)
        out.insert(out.end(), width - 8, 0);
    for (size_t i = std::min<size_t>(width, 8); i-- > 0;)
        out.push_back(static_cast<uint8_t>(counter >> (8 * i)));
    out.insert(out.end(), code_suffix.begin(), code_suffix.end());
}

Bytes ContractTemplate::initcode(uint64_t counter) const
{
    Bytes out;
    write_initcode(counter, out);
    return out;
}

bool ContractTemplate::embedded_in(BytesView initcode) const noexcept
{
    if (initcode.size() != initcode_size())
        return false;
    return std::equal(code_prefix.begin(), code_prefix.end(), initcode.begin()) &&
           std::equal(code_suffix.begin(), code_suffix.end(),
               initcode.end() - static_cast<std::ptrdiff_t>(code_suffix.size()));
}

ContractTemplate default_template(TemplateLabel label)
{
    // PUSH8 <field> at offset 1 in both. Benign: store it and return 32
    // bytes. Nefarious: CALLER SELFDESTRUCT.
    ContractTemplate t;
    t.label = label;
    t.mutable_field_width = 8;
    t.code_prefix = {0x67};
    if (label == TemplateLabel::benign)
        t.code_suffix = {0x60, 0x00, 0x52, 0x60, 0x20, 0x60, 0x00, 0xf3};
    else
        t.code_suffix = {0x50, 0x33, 0xff};
    return t;
}

namespace
{
constexpr uint64_t nonce_span = uint64_t{1} << 32;

void fill_record(DeploymentRecord& r, const ContractTemplate& tmpl, const AccountId& creator,
    uint64_t nonce, VaryMode mode, uint64_t counter)
{
    r.creator = creator;
    if (mode == VaryMode::field)
    {
        r.nonce = nonce;
        tmpl.write_initcode(counter, r.initcode);
    }
    else
    {
        r.nonce = nonce + (counter & (nonce_span - 1));
        tmpl.write_initcode(0, r.initcode);
    }
}

DeploymentRecord record_for(const ContractTemplate& tmpl, const AccountId& creator,
    uint64_t nonce, VaryMode mode, uint64_t counter)
{
    DeploymentRecord r;
    fill_record(r, tmpl, creator, nonce, mode, counter);
    return r;
}

collision::MessageEncoder family_encoder(
    const ContractTemplate& tmpl, const AccountId& creator, uint64_t nonce, VaryMode mode)
{
    return collision::MessageEncoder(
        std::string(to_string(tmpl.label)), [&tmpl, creator, nonce, mode](uint64_t c, Bytes& out) {
            thread_local DeploymentRecord r;
            fill_record(r, tmpl, creator, nonce, mode, c);
            write_address_preimage(out, r);
        });
}
}  // namespace

collision::Outcome<ForgeryEvidence> forge_address_collision(const AccountId& creator,
    const ContractTemplate& benign, const ContractTemplate& nefarious, uint64_t nonce,
    const DigestSpec& spec, uint64_t seed, collision::AttackBudget budget,
    const ForgeOptions& options)
{
    if (spec.truncation_bits() > mitigation::max_study_bits)
        throw ParameterError("address forgery is capped at t = 48");
    benign.validate();
    nefarious.validate();
    if (benign.label != TemplateLabel::benign || nefarious.label != TemplateLabel::nefarious)
        throw ParameterError("templates must be labelled benign and nefarious");
    if (benign.code_prefix == nefarious.code_prefix && benign.code_suffix == nefarious.code_suffix)
        throw ParameterError("benign and nefarious templates must differ outside the field");
    if (options.vary == VaryMode::nonce)
    {
        if (nonce > ~uint64_t{0} - nonce_span)
            throw ParameterError("nonce too large for a 2^32 sweep");
        if (benign.initcode(0) == nefarious.initcode(0))
            throw ParameterError("nonce mode needs distinct initcodes");
        budget = collision::AttackBudget(std::min(budget.max_evaluations(), nonce_span));
    }

    const auto enc_a = family_encoder(benign, creator, nonce, options.vary);
    const auto enc_b = family_encoder(nefarious, creator, nonce, options.vary);
    auto outcome =
        collision::find_cross_family_collision(enc_a, enc_b, spec, seed, budget, options.search);
    if (const auto* exhausted = std::get_if<collision::Exhausted>(&outcome))
        return *exhausted;

    const auto& found = std::get<collision::CrossFamilyPair>(outcome);
    ForgeryEvidence ev;
    ev.benign = record_for(benign, creator, nonce, options.vary, found.pair.counter1);
    ev.nefarious = record_for(nefarious, creator, nonce, options.vary, found.pair.counter2);
    ev.shared_address = derive_address(ev.benign, spec);
    ev.evaluations_used = found.pair.evaluations_used;
    ev.spec = spec;
    ev.vary = options.vary;
    ev.benign_template = benign;
    ev.nefarious_template = nefarious;

    if (derive_address(ev.nefarious, spec) != ev.shared_address ||
        address_preimage_bytes(ev.benign) != found.pair.m1 ||
        address_preimage_bytes(ev.nefarious) != found.pair.m2)
        throw std::logic_error("forged records do not reproduce the search result");
    return ev;
}

BeaconAttackBundle narrate_beacon_attack(const beacon::BeaconConfig& config,
    collision::AttackBudget budget, uint64_t rounds, uint64_t seed,
    const collision::ParallelOptions& search)
{
    config.validate();
    if (!config.adversary_index)
        throw ParameterError("the attack needs an adversary");
    if (rounds < 1)
        throw ParameterError("need at least one round");

    beacon::BeaconConfig honest_config = config;
    honest_config.adversary_index.reset();

    BeaconAttackBundle bundle;
    bundle.config = config;
    bundle.seed = seed;
    bundle.budget = budget.max_evaluations();
    bundle.rounds.reserve(rounds);

    for (uint64_t r = 0; r < rounds; ++r)
    {
        const uint64_t round_seed = derive_seed(seed, r);
        BeaconRoundEvidence ev;
        if (r == 0 || bundle.prepared)
        {
            const auto binding = beacon::round_binding(config, round_seed);
            auto outcome = beacon::adversary_prepare(
                config, binding, budget, mix64(round_seed ^ 0xad), {search, {}});
            if (auto* pair = std::get_if<collision::CollisionPair>(&outcome))
            {
                if (r == 0)
                    bundle.preparation_evaluations = pair->evaluations_used;
                ev.pair = std::move(*pair);
            }
            else if (r == 0)
                bundle.preparation_evaluations =
                    std::get<collision::Exhausted>(outcome).evaluations_used;
            if (r == 0)
                bundle.prepared = ev.pair.has_value();
        }
        ev.transcript = ev.pair ? beacon::run_attacked_round(config, *ev.pair, round_seed)
                                : beacon::run_honest_round(honest_config, round_seed);
        bundle.adversary_selected += ev.transcript.proposer == *config.adversary_index;
        bundle.collisions_found += ev.pair.has_value();
        bundle.rounds.push_back(std::move(ev));
    }

    bundle.frequency = static_cast<double>(bundle.adversary_selected) / static_cast<double>(rounds);
    bundle.honest_expected = beacon::honest_frequency(config.participants);
    bundle.predicted =
        bundle.prepared ? beacon::attacked_frequency(config.participants) : bundle.honest_expected;
    return bundle;
}

namespace
{
nlohmann::ordered_json template_json(const ContractTemplate& t)
{
    return {{"label", to_string(t.label)}, {"code_prefix", to_hex(t.code_prefix)},
        {"mutable_field_width", t.mutable_field_width}, {"code_suffix", to_hex(t.code_suffix)}};
}

nlohmann::ordered_json record_json(const DeploymentRecord& r, const ContractTemplate& t)
{
    return {{"creator", to_hex(r.creator)}, {"nonce", r.nonce},
        {"initcode", to_hex(r.initcode)}, {"template", template_json(t)}};
}

nlohmann::ordered_json pair_json(const collision::CollisionPair& p)
{
    return {{"m1", to_hex(p.m1)}, {"m2", to_hex(p.m2)}, {"digest", p.digest_value.to_hex()},
        {"evaluations_used", p.evaluations_used}};
}
}  // namespace

nlohmann::ordered_json to_json(const ForgeryEvidence& ev)
{
    nlohmann::ordered_json j;
    j["schema"] = forgery_schema;
    j["algorithm"] = to_string(ev.spec.algorithm());
    j["truncation_bits"] = ev.spec.truncation_bits();
    j["vary"] = to_string(ev.vary);
    j["shared_address"] = ev.shared_address.to_hex();
    j["evaluations_used"] = ev.evaluations_used;
    j["benign"] = record_json(ev.benign, ev.benign_template);
    j["nefarious"] = record_json(ev.nefarious, ev.nefarious_template);
    return j;
}

nlohmann::ordered_json to_json(const BeaconAttackBundle& b)
{
    nlohmann::ordered_json j;
    j["schema"] = beacon_bundle_schema;
    j["config"] = beacon::to_json(b.config);
    j["seed"] = b.seed;
    j["budget"] = b.budget;
    j["prepared"] = b.prepared;
    j["preparation_evaluations"] = b.preparation_evaluations;
    j["round_count"] = b.rounds.size();
    j["adversary_selected"] = b.adversary_selected;
    j["collisions_found"] = b.collisions_found;
    j["frequency"] = b.frequency;
    j["predicted"] = b.predicted;
    j["honest_expected"] = b.honest_expected;
    auto& rounds = j["rounds"] = nlohmann::ordered_json::array();
    for (size_t r = 0; r < b.rounds.size(); ++r)
    {
        const auto& ev = b.rounds[r];
        auto entry = beacon::transcript_log_entry(r,
            ev.pair ? beacon::ScenarioKind::attacked : beacon::ScenarioKind::honest, ev.transcript,
            b.config);
        entry["pair"] = ev.pair ? pair_json(*ev.pair) : nlohmann::ordered_json(nullptr);
        rounds.push_back(std::move(entry));
    }
    return j;
}

namespace
{
struct Reject
{
    std::string check;
    std::string detail;
};

BundleVerdict reject(std::string check, std::string detail)
{
    return {false, std::move(check), std::move(detail)};
}

template <class T>
T get(const nlohmann::json& j, const char* name)
{
    if (!j.is_object() || !j.contains(name))
        throw Reject{"malformed", std::string("missing field: ") + name};
    try
    {
        return j.at(name).get<T>();
    }
    catch (const nlohmann::json::exception&)
    {
        throw Reject{"malformed", std::string("malformed field: ") + name};
    }
}

Bytes hex_field(const nlohmann::json& j, const char* name)
{
    try
    {
        return from_hex(get<std::string>(j, name));
    }
    catch (const ParameterError& e)
    {
        throw Reject{"malformed", std::string(name) + ": " + e.what()};
    }
}

ContractTemplate read_template(const nlohmann::json& j)
{
    ContractTemplate t;
    try
    {
        t.label = parse_template_label(get<std::string>(j, "label"));
    }
    catch (const ParameterError& e)
    {
        throw Reject{"malformed", e.what()};
    }
    t.code_prefix = hex_field(j, "code_prefix");
    t.mutable_field_width = get<int>(j, "mutable_field_width");
    t.code_suffix = hex_field(j, "code_suffix");
    return t;
}

DeploymentRecord read_record(const nlohmann::json& j)
{
    DeploymentRecord r;
    const Bytes creator = hex_field(j, "creator");
    if (creator.size() != r.creator.size())
        throw Reject{"malformed", "creator must be 20 bytes"};
    std::copy(creator.begin(), creator.end(), r.creator.begin());
    r.nonce = get<uint64_t>(j, "nonce");
    r.initcode = hex_field(j, "initcode");
    if (r.initcode.size() > DeploymentRecord::max_initcode_size)
        throw Reject{"malformed", "initcode exceeds 4096 bytes"};
    return r;
}

BundleVerdict verify_forgery(const nlohmann::json& j)
{
    const int t = get<int>(j, "truncation_bits");
    std::optional<DigestSpec> spec;
    try
    {
        spec.emplace(t, parse_digest_algorithm(get<std::string>(j, "algorithm")));
    }
    catch (const ParameterError& e)
    {
        return reject("malformed", e.what());
    }
    const auto& jb = j.at("benign");
    const auto& jn = j.at("nefarious");
    const DeploymentRecord benign = read_record(jb);
    const DeploymentRecord nefarious = read_record(jn);
    const ContractTemplate tb = read_template(get<nlohmann::json>(jb, "template"));
    const ContractTemplate tn = read_template(get<nlohmann::json>(jn, "template"));

    TruncatedDigest claimed;
    try
    {
        claimed = TruncatedDigest::from_hex(get<std::string>(j, "shared_address"), t);
    }
    catch (const ParameterError& e)
    {
        return reject("malformed", std::string("shared_address: ") + e.what());
    }

    const AddressValue a = derive_address(benign, *spec);
    const AddressValue b = derive_address(nefarious, *spec);
    if (a.value != claimed)
        return reject("benign-address", "benign record derives " + a.to_hex());
    if (b.value != claimed)
        return reject("nefarious-address", "nefarious record derives " + b.to_hex());
    if (benign.initcode == nefarious.initcode)
        return reject("distinct-initcode", "both records carry the same initcode");
    if (tb.label != TemplateLabel::benign || tn.label != TemplateLabel::nefarious)
        return reject("family", "records must be one benign and one nefarious");
    if (!tb.embedded_in(benign.initcode))
        return reject("benign-template", "benign initcode does not embed its template");
    if (!tn.embedded_in(nefarious.initcode))
        return reject("nefarious-template", "nefarious initcode does not embed its template");
    return {true, {}, {}};
}

BundleVerdict verify_beacon(const nlohmann::json& j)
{
    beacon::BeaconConfig config;
    try
    {
        config = beacon::config_from_json(get<nlohmann::json>(j, "config"));
    }
    catch (const ParameterError& e)
    {
        return reject("malformed", std::string("config: ") + e.what());
    }
    if (!config.adversary_index)
        return reject("malformed", "config has no adversary");
    const int adversary = *config.adversary_index;

    const auto rounds = get<nlohmann::json>(j, "rounds");
    if (!rounds.is_array() || rounds.empty())
        return reject("malformed", "rounds must be a non-empty array");
    if (get<uint64_t>(j, "round_count") != rounds.size())
        return reject("round-count", "round_count does not match the rounds array");

    const bool prepared = get<bool>(j, "prepared");
    uint64_t selected = 0, pairs = 0;
    bool first_round_pair = false;
    for (size_t r = 0; r < rounds.size(); ++r)
    {
        const auto& entry = rounds[r];
        const std::string where = "round " + std::to_string(r) + ": ";
        if (get<uint64_t>(entry, "round") != r)
            return reject("round-order", where + "round index out of order");

        beacon::RoundTranscript transcript;
        try
        {
            transcript = beacon::transcript_from_json(entry, config);
        }
        catch (const ParameterError& e)
        {
            return reject("malformed", where + e.what());
        }
        const beacon::Verdict v = beacon::verify_round(transcript, config);
        if (!v.accepted())
            return reject(std::string(beacon::to_string(*v.reason)), where + v.detail);

        selected += transcript.proposer == adversary;
        if (!entry.contains("pair") || entry.at("pair").is_null())
            continue;
        ++pairs;
        first_round_pair = first_round_pair || r == 0;

        const auto& jp = entry.at("pair");
        collision::CollisionPair pair;
        pair.m1 = hex_field(jp, "m1");
        pair.m2 = hex_field(jp, "m2");
        const TruncatedDigest digest = truncated_digest(pair.m1, config.spec);
        if (pair.m1 == pair.m2 || truncated_digest(pair.m2, config.spec) != digest)
            return reject("pair-collision", where + "pair messages do not collide");
        const auto v1 = beacon::decode_commit_preimage(pair.m1, transcript.binding, config.reveal_bits);
        const auto v2 = beacon::decode_commit_preimage(pair.m2, transcript.binding, config.reveal_bits);
        if (!v1 || !v2)
            return reject("pair-layout", where + "pair messages are not commit preimages");
        const auto idx = static_cast<size_t>(adversary);
        if (transcript.commitments[idx].commit != digest)
            return reject("pair-commitment", where + "adversary commitment is not the pair digest");
        const uint64_t revealed = transcript.reveals[idx].value;
        if (revealed != *v1 && revealed != *v2)
            return reject("pair-reveal", where + "adversary reveal is neither pair value");
    }

    if (get<uint64_t>(j, "adversary_selected") != selected)
        return reject("frequency", "stored adversary_selected disagrees with the transcripts");
    if (get<uint64_t>(j, "collisions_found") != pairs)
        return reject("collisions", "stored collisions_found disagrees with the rounds");
    if (prepared != first_round_pair || (!prepared && pairs > 0))
        return reject("prepared", "prepared flag disagrees with the rounds");
    const double frequency = static_cast<double>(selected) / static_cast<double>(rounds.size());
    if (get<double>(j, "frequency") != frequency)
        return reject("frequency", "stored frequency disagrees with the transcripts");
    const double predicted = prepared ? beacon::attacked_frequency(config.participants)
                                      : beacon::honest_frequency(config.participants);
    if (std::abs(get<double>(j, "predicted") - predicted) > 1e-12)
        return reject("prediction", "stored prediction disagrees with the model");
    return {true, {}, {}};
}
}  // namespace

BundleVerdict verify_bundle(const nlohmann::json& document)
{
    if (!document.is_object() || !document.contains("schema") || !document.at("schema").is_string())
        throw ParameterError("not an evidence bundle: missing schema");
    const auto schema = document.at("schema").get<std::string>();
    try
    {
        if (schema == forgery_schema)
            return verify_forgery(document);
        if (schema == beacon_bundle_schema)
            return verify_beacon(document);
    }
    catch (const Reject& r)
    {
        return reject(r.check, r.detail);
    }
    catch (const nlohmann::json::exception& e)
    {
        return reject("malformed", e.what());
    }
    throw ParameterError("unknown bundle schema: " + schema);
}
}  // namespace digestlab::scenarios
