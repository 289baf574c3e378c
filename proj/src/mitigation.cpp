// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/beacon.hpp>
#include <digestlab/mitigation.hpp>
#include <digestlab/version.hpp>

#include "parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace digestlab::mitigation
{
std::string_view to_string(SearcherKind kind) noexcept
{
    return kind == SearcherKind::rho ? "rho" : "parallel";
}

SearcherKind parse_searcher(std::string_view name)
{
    if (name == "rho")
        return SearcherKind::rho;
    if (name == "parallel")
        return SearcherKind::parallel;
    throw ParameterError("unknown searcher: " + std::string(name));
}

void ScalingStudyConfig::validate() const
{
    if (t_values.empty())
        throw ParameterError("scaling study needs at least one t value");
    for (size_t i = 0; i < t_values.size(); ++i)
    {
        DigestSpec{t_values[i]};
        if (t_values[i] > max_study_bits)
            throw ParameterError("t values are capped at 48 bits");
        if (i > 0 && t_values[i] <= t_values[i - 1])
            throw ParameterError("t values must be strictly increasing");
    }
    if (seeds_per_t < 5)
        throw ParameterError("need at least 5 seeds per t");
    if (!(budget_multiplier >= 10))
        throw ParameterError("budget multiplier must be at least 10");
    if (searcher == SearcherKind::parallel && parallel.workers < 1)
        throw ParameterError("need at least one worker");
}

void TemporalStudyConfig::validate() const
{
    DigestSpec{t};
    if (t > max_study_bits)
        throw ParameterError("t is capped at 48 bits");
    if (!(hash_rate > 0) || !std::isfinite(hash_rate))
        throw ParameterError("hash rate must be positive");
    if (windows.empty())
        throw ParameterError("temporal study needs at least one window");
    for (const double w : windows)
        if (!(w > 0) || !std::isfinite(w))
            throw ParameterError("windows must be positive");
    if (trials_per_window < 50)
        throw ParameterError("need at least 50 trials per window");
    if (search.workers < 1)
        throw ParameterError("need at least one worker");
}

double median(std::vector<uint64_t> values)
{
    if (values.empty())
        throw ParameterError("median of an empty sample");
    const size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const auto upper = static_cast<double>(values[mid]);
    if (values.size() % 2 == 1)
        return upper;
    const auto lower = static_cast<double>(
        *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid)));
    return (lower + upper) / 2;
}

namespace
{
StudyMetadata make_metadata(uint64_t seed, const StudyOptions& options)
{
    return {seed, options.timestamp, std::string(version())};
}
}  // namespace

StudyReport run_scaling_study(
    const ScalingStudyConfig& config, uint64_t seed, const StudyOptions& options)
{
    config.validate();

    StudyReport report;
    report.study = "scaling";
    report.metadata = make_metadata(seed, options);

    const auto seeds = static_cast<uint64_t>(config.seeds_per_t);
    for (size_t ti = 0; ti < config.t_values.size(); ++ti)
    {
        const int t = config.t_values[ti];
        const DigestSpec spec(t);
        const double predicted = collision::expected_work(t);
        const collision::AttackBudget budget(
            static_cast<uint64_t>(std::ceil(config.budget_multiplier * predicted)));
        const uint64_t t_seed = derive_seed(seed, static_cast<uint64_t>(t));

        std::vector<collision::Outcome<collision::CollisionPair>> outcomes(seeds);
        detail::parallel_for(seeds, options.threads, [&](uint64_t i) {
            const uint64_t s = derive_seed(t_seed, i);
            // A different encoder offset per seed gives independent functions.
            const auto encoder = collision::MessageEncoder::counter("scaling", s);
            outcomes[i] = config.searcher == SearcherKind::rho
                              ? collision::find_collision_rho(encoder, spec, s, budget)
                              : collision::find_collision_parallel(
                                    encoder, spec, config.parallel, s, budget);
        });

        ScalingRow row;
        row.t = t;
        row.predicted = predicted;
        for (uint64_t i = 0; i < seeds; ++i)
        {
            if (const auto* pair = std::get_if<collision::CollisionPair>(&outcomes[i]))
                row.evaluations.push_back(pair->evaluations_used);
            else
                report.anomalies.push_back({t, static_cast<int>(i),
                    std::get<collision::Exhausted>(outcomes[i]).evaluations_used,
                    "search exhausted its budget"});
        }
        row.samples = row.evaluations.size();
        if (!row.evaluations.empty())
        {
            row.median_evaluations = median(row.evaluations);
            row.ratio = row.median_evaluations / predicted;
        }
        report.scaling.push_back(std::move(row));
    }

    for (size_t i = 1; i < report.scaling.size(); ++i)
    {
        const ScalingRow& a = report.scaling[i - 1];
        const ScalingRow& b = report.scaling[i];
        if (a.samples == 0 || b.samples == 0)
            continue;
        GrowthRow g;
        g.t_from = a.t;
        g.t_to = b.t;
        g.empirical_ratio = b.median_evaluations / a.median_evaluations;
        g.predicted_ratio = b.predicted / a.predicted;
        g.empirical_bits_per_bit = std::log2(g.empirical_ratio) / (b.t - a.t);
        report.growth.push_back(g);
    }
    return report;
}

StudyReport run_temporal_study(
    const TemporalStudyConfig& config, uint64_t seed, const StudyOptions& options)
{
    config.validate();

    StudyReport report;
    report.study = "temporal";
    report.metadata = make_metadata(seed, options);

    beacon::BeaconConfig beacon_config;
    beacon_config.adversary_index = 0;
    beacon_config.spec = DigestSpec(config.t);
    beacon_config.temporal_binding = true;

    const auto trials = static_cast<uint64_t>(config.trials_per_window);
    for (size_t wi = 0; wi < config.windows.size(); ++wi)
    {
        const double window = config.windows[wi];
        const double raw = std::floor(config.hash_rate * window);
        const uint64_t budget = raw >= 1.8e19 ? ~uint64_t{0} : static_cast<uint64_t>(raw);
        const uint64_t w_seed = derive_seed(seed, wi);

        std::vector<uint8_t> success(trials, 0);
        if (budget > 0)
        {
            detail::parallel_for(trials, options.threads, [&](uint64_t i) {
                const uint64_t trial_seed = derive_seed(w_seed, i);
                // The binding only exists once the trial starts.
                const auto binding = beacon::round_binding(beacon_config, trial_seed);
                const auto outcome = beacon::adversary_prepare(beacon_config, binding,
                    collision::AttackBudget(budget), mix64(trial_seed ^ 0xad), {config.search, {}});
                success[i] = collision::found(outcome) ? 1 : 0;
            });
        }

        TemporalRow row;
        row.window = window;
        row.budget = budget;
        row.trials = trials;
        for (const uint8_t s : success)
            row.successes += s;
        row.empirical_rate = static_cast<double>(row.successes) / static_cast<double>(trials);
        row.predicted = collision::success_probability(static_cast<double>(budget), config.t);
        row.tolerance =
            3 * std::sqrt(row.predicted * (1 - row.predicted) / static_cast<double>(trials)) + 0.02;
        report.temporal.push_back(row);
    }
    return report;
}

nlohmann::ordered_json to_json(const StudyReport& report)
{
    nlohmann::ordered_json j;
    j["schema"] = study_schema;
    j["study"] = report.study;
    j["metadata"] = {
        {"seed", report.metadata.seed},
        {"timestamp",
            report.metadata.timestamp ? nlohmann::ordered_json(*report.metadata.timestamp)
                                      : nlohmann::ordered_json(nullptr)},
        {"version", report.metadata.version},
    };
    if (report.study == "scaling")
    {
        auto& rows = j["rows"] = nlohmann::ordered_json::array();
        for (const auto& r : report.scaling)
            rows.push_back({{"t", r.t}, {"samples", r.samples},
                {"median_evaluations", r.median_evaluations}, {"predicted", r.predicted},
                {"ratio", r.ratio}, {"evaluations", r.evaluations}});
        auto& growth = j["growth"] = nlohmann::ordered_json::array();
        for (const auto& g : report.growth)
            growth.push_back({{"t_from", g.t_from}, {"t_to", g.t_to},
                {"empirical_ratio", g.empirical_ratio}, {"predicted_ratio", g.predicted_ratio},
                {"empirical_bits_per_bit", g.empirical_bits_per_bit},
                {"predicted_bits_per_bit", g.predicted_bits_per_bit}});
        auto& anomalies = j["anomalies"] = nlohmann::ordered_json::array();
        for (const auto& a : report.anomalies)
            anomalies.push_back({{"t", a.t}, {"seed_index", a.seed_index},
                {"evaluations_used", a.evaluations_used}, {"note", a.note}});
    }
    else
    {
        auto& rows = j["rows"] = nlohmann::ordered_json::array();
        for (const auto& r : report.temporal)
            rows.push_back({{"window", r.window}, {"budget", r.budget}, {"trials", r.trials},
                {"successes", r.successes}, {"empirical_rate", r.empirical_rate},
                {"predicted", r.predicted}, {"tolerance", r.tolerance}});
    }
    return j;
}

namespace
{
std::string fmt(const char* spec, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

/// Right-aligned columns, two spaces apart.
std::string render(const std::vector<std::vector<std::string>>& table)
{
    std::vector<size_t> width(table.front().size(), 0);
    for (const auto& row : table)
        for (size_t c = 0; c < row.size(); ++c)
            width[c] = std::max(width[c], row[c].size());
    std::string out;
    for (const auto& row : table)
    {
        for (size_t c = 0; c < row.size(); ++c)
        {
            if (c > 0)
                out += "  ";
            out.append(width[c] - row[c].size(), ' ');
            out += row[c];
        }
        out += '\n';
    }
    return out;
}
}  // namespace

std::string to_table(const StudyReport& report)
{
    std::ostringstream out;
    out << report.study << " study  seed=" << report.metadata.seed
        << "  version=" << report.metadata.version;
    if (report.metadata.timestamp)
        out << "  timestamp=" << *report.metadata.timestamp;
    out << "\n\n";

    if (report.study == "scaling")
    {
        std::vector<std::vector<std::string>> rows{
            {"t", "samples", "median_evals", "predicted", "ratio"}};
        for (const auto& r : report.scaling)
            rows.push_back({std::to_string(r.t), std::to_string(r.samples),
                fmt("%.1f", r.median_evaluations), fmt("%.1f", r.predicted), fmt("%.3f", r.ratio)});
        out << render(rows);

        if (!report.growth.empty())
        {
            std::vector<std::vector<std::string>> g{
                {"t_from", "t_to", "ratio", "predicted", "bits/bit", "predicted"}};
            for (const auto& r : report.growth)
                g.push_back({std::to_string(r.t_from), std::to_string(r.t_to),
                    fmt("%.3f", r.empirical_ratio), fmt("%.3f", r.predicted_ratio),
                    fmt("%.3f", r.empirical_bits_per_bit), fmt("%.3f", r.predicted_bits_per_bit)});
            out << '\n' << render(g);
        }
        if (!report.anomalies.empty())
        {
            std::vector<std::vector<std::string>> a{{"t", "seed_index", "evaluations", "note"}};
            for (const auto& r : report.anomalies)
                a.push_back({std::to_string(r.t), std::to_string(r.seed_index),
                    std::to_string(r.evaluations_used), r.note});
            out << '\n' << render(a);
        }
    }
    else
    {
        std::vector<std::vector<std::string>> rows{
            {"window_s", "budget", "trials", "successes", "rate", "predicted", "tolerance"}};
        for (const auto& r : report.temporal)
            rows.push_back({fmt("%g", r.window), std::to_string(r.budget),
                std::to_string(r.trials), std::to_string(r.successes),
                fmt("%.4f", r.empirical_rate), fmt("%.4f", r.predicted), fmt("%.4f", r.tolerance)});
        out << render(rows);
    }
    return out.str();
}

double benchmark_hash_rate(int t, double seconds)
{
    const DigestSpec spec(t);
    constexpr size_t batch = 64;
    std::vector<Bytes> messages(batch);
    std::vector<BytesView> views(batch);
    std::vector<Digest256> digests(batch);
    const auto encoder = collision::MessageEncoder::counter("bench");

    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const auto limit = std::chrono::duration<double>(seconds);
    uint64_t done = 0;
    uint64_t sink = 0;
    while (clock::now() - start < limit)
    {
        for (size_t i = 0; i < batch; ++i)
        {
            encoder.write(done + i, messages[i]);
            views[i] = messages[i];
        }
        keccak256_many(views, digests);
        for (const auto& d : digests)
            sink ^= truncate(d, spec.truncation_bits()).low64();
        done += batch;
    }
    const double elapsed = std::chrono::duration<double>(clock::now() - start).count();
    // Keep the digests observable so the loop is not optimized away.
    if (sink == 0x5eed)
        done += 1;
    return static_cast<double>(done) / elapsed;
}
}  // namespace digestlab::mitigation
