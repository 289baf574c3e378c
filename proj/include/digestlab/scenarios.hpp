// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

// End-to-end attacks that produce evidence bundles. A bundle is a JSON
// document that verify_bundle() checks by recomputing every digest from the
// records it contains.
#pragma once

#include <digestlab/address.hpp>
#include <digestlab/beacon.hpp>
#include <digestlab/collision.hpp>

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace digestlab::scenarios
{
enum class TemplateLabel
{
    benign,
    nefarious,
};

std::string_view to_string(TemplateLabel label) noexcept;
TemplateLabel parse_template_label(std::string_view name);

/// Initcode as prefix, a mutable field, then suffix. The counter goes into
/// the field big-endian; a field narrower than 8 bytes keeps the low bytes.
struct ContractTemplate
{
    TemplateLabel label = TemplateLabel::benign;
    Bytes code_prefix;
    int mutable_field_width = 8;
    Bytes code_suffix;

    /// Field width in [1, 32] and total length within the initcode cap.
    void validate() const;

    [[nodiscard]] size_t initcode_size() const noexcept;
    void write_initcode(uint64_t counter, Bytes& out) const;
    [[nodiscard]] Bytes initcode(uint64_t counter) const;

    /// True when `initcode` is prefix + (any field) + suffix.
    [[nodiscard]] bool embedded_in(BytesView initcode) const noexcept;

    friend bool operator==(const ContractTemplate&, const ContractTemplate&) = default;
};

/// Two small initcodes that differ outside the field: the benign one
/// returns its field as data, the nefarious one ends in SELFDESTRUCT.
ContractTemplate default_template(TemplateLabel label);

enum class VaryMode
{
    /// Fixed nonce, the counter fills each template's field.
    field,
    /// Field fixed at zero, the nonce sweeps nonce .. nonce + 2^32 - 1.
    nonce,
};

std::string_view to_string(VaryMode mode) noexcept;
VaryMode parse_vary_mode(std::string_view name);

struct ForgeryEvidence
{
    DeploymentRecord benign;
    DeploymentRecord nefarious;
    AddressValue shared_address;
    uint64_t evaluations_used = 0;
    DigestSpec spec{24};
    VaryMode vary = VaryMode::field;
    ContractTemplate benign_template;
    ContractTemplate nefarious_template;
};

struct ForgeOptions
{
    VaryMode vary = VaryMode::field;
    collision::ParallelOptions search;
};

/// Cross-family collision search between the benign and nefarious deployment
/// families. t is capped at 48. The nonce mode caps the budget at 2^32.
collision::Outcome<ForgeryEvidence> forge_address_collision(const AccountId& creator,
    const ContractTemplate& benign, const ContractTemplate& nefarious, uint64_t nonce,
    const DigestSpec& spec, uint64_t seed, collision::AttackBudget budget,
    const ForgeOptions& options = {});

struct BeaconRoundEvidence
{
    beacon::RoundTranscript transcript;
    /// The adversary's equivocation pair for this round, if it had one.
    std::optional<collision::CollisionPair> pair;
};

struct BeaconAttackBundle
{
    beacon::BeaconConfig config;
    uint64_t seed = 0;
    uint64_t budget = 0;
    /// False when the first search was exhausted; every round is then honest.
    bool prepared = false;
    uint64_t preparation_evaluations = 0;
    std::vector<BeaconRoundEvidence> rounds;
    uint64_t adversary_selected = 0;
    uint64_t collisions_found = 0;
    double frequency = 0;
    /// 2p - p^2 when prepared, else 1/n.
    double predicted = 0;
    double honest_expected = 0;
};

/// Round r uses derive_seed(seed, r) as in beacon::measure_bias. The
/// adversary searches a fresh pair with `budget` evaluations before every
/// round. If the first search fails it gives up and all rounds are honest;
/// a later failure makes only that round honest.
BeaconAttackBundle narrate_beacon_attack(const beacon::BeaconConfig& config,
    collision::AttackBudget budget, uint64_t rounds, uint64_t seed,
    const collision::ParallelOptions& search = {});

inline constexpr std::string_view forgery_schema = "digestlab.forgery.v1";
inline constexpr std::string_view beacon_bundle_schema = "digestlab.beacon-attack.v1";

nlohmann::ordered_json to_json(const ForgeryEvidence& evidence);
nlohmann::ordered_json to_json(const BeaconAttackBundle& bundle);

struct BundleVerdict
{
    bool accepted = false;
    /// Name of the first failed check, empty when accepted.
    std::string check;
    std::string detail;
};

/// Dispatches on the "schema" field and re-derives everything: addresses,
/// commitments, XORs, proposers, pair digests and the stored frequency.
/// Throws ParameterError if the document is not a bundle of a known schema.
BundleVerdict verify_bundle(const nlohmann::json& document);
}  // namespace digestlab::scenarios
