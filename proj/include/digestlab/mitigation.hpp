// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

// Experiments for the two countermeasures: a wider digest (work grows as
// 2^(t/2)) and a commitment bound to a fresh value (the search must finish
// inside a short window).
#pragma once

#include <digestlab/collision.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace digestlab::mitigation
{
/// Studies stay at desk scale.
inline constexpr int max_study_bits = 48;

enum class SearcherKind
{
    rho,
    parallel,
};

std::string_view to_string(SearcherKind kind) noexcept;
SearcherKind parse_searcher(std::string_view name);

struct ScalingStudyConfig
{
    std::vector<int> t_values;
    int seeds_per_t = 20;
    SearcherKind searcher = SearcherKind::parallel;
    /// Used when searcher is parallel.
    collision::ParallelOptions parallel;
    /// Each search gets ceil(multiplier * expected_work(t)) evaluations.
    double budget_multiplier = 64;

    void validate() const;
};

struct TemporalStudyConfig
{
    int t = 40;
    /// Evaluations per second. A fixed input, never measured during a study.
    double hash_rate = 1e6;
    std::vector<double> windows;
    int trials_per_window = 200;
    collision::ParallelOptions search;

    void validate() const;
};

struct StudyOptions
{
    /// Trials run on this many threads; the report does not depend on it.
    unsigned threads = 1;
    /// Copied into the metadata verbatim. Left empty so reports are
    /// reproducible byte for byte.
    std::optional<std::string> timestamp;
};

struct ScalingRow
{
    int t = 0;
    uint64_t samples = 0;
    /// Evaluations of each successful search, in seed order.
    std::vector<uint64_t> evaluations;
    double median_evaluations = 0;
    double predicted = 0;
    /// median / predicted
    double ratio = 0;
};

/// Consecutive scaling rows compared.
struct GrowthRow
{
    int t_from = 0;
    int t_to = 0;
    double empirical_ratio = 0;
    double predicted_ratio = 0;
    /// log2(ratio) / (t_to - t_from); the model gives 0.5.
    double empirical_bits_per_bit = 0;
    double predicted_bits_per_bit = 0.5;
};

struct AnomalyRow
{
    int t = 0;
    int seed_index = 0;
    uint64_t evaluations_used = 0;
    std::string note;
};

struct TemporalRow
{
    double window = 0;
    uint64_t budget = 0;
    uint64_t trials = 0;
    uint64_t successes = 0;
    double empirical_rate = 0;
    double predicted = 0;
    /// 3 sqrt(p(1-p)/trials) + 0.02
    double tolerance = 0;
};

struct StudyMetadata
{
    uint64_t seed = 0;
    std::optional<std::string> timestamp;
    std::string version;
};

struct StudyReport
{
    std::string study;  // "scaling" or "temporal"
    StudyMetadata metadata;
    std::vector<ScalingRow> scaling;
    std::vector<GrowthRow> growth;
    std::vector<AnomalyRow> anomalies;
    std::vector<TemporalRow> temporal;
};

StudyReport run_scaling_study(
    const ScalingStudyConfig& config, uint64_t seed, const StudyOptions& options = {});

StudyReport run_temporal_study(
    const TemporalStudyConfig& config, uint64_t seed, const StudyOptions& options = {});

/// Median of a non-empty sample; the mean of the two middle values for even
/// sizes.
double median(std::vector<uint64_t> values);

inline constexpr std::string_view study_schema = "digestlab.study.v1";

nlohmann::ordered_json to_json(const StudyReport& report);

/// Aligned plain-text tables, one per row kind present.
std::string to_table(const StudyReport& report);

/// Times truncated-digest evaluations through the batched path for roughly
/// `seconds` and returns evaluations per second. Only a suggestion for
/// --hash-rate; studies never call it.
double benchmark_hash_rate(int t, double seconds = 1.0);
}  // namespace digestlab::mitigation
