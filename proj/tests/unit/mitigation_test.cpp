// digestlab: collision attacks against truncated message digests
// Copyright 2026 The digestlab Authors.
// SPDX-License-Identifier: Apache-2.0

#include <digestlab/mitigation.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace digestlab;
using namespace digestlab::mitigation;

TEST(median, odd_and_even)
{
    EXPECT_EQ(median({5, 1, 3}), 3.0);
    EXPECT_EQ(median({4, 1, 3, 2}), 2.5);
    EXPECT_THROW(median({}), ParameterError);
}

TEST(scaling_config, validation)
{
    ScalingStudyConfig c;
    EXPECT_THROW(c.validate(), ParameterError);
    c.t_values = {16, 16};
    EXPECT_THROW(c.validate(), ParameterError);
    c.t_values = {20, 16};
    EXPECT_THROW(c.validate(), ParameterError);
    c.t_values = {16, 49};
    EXPECT_THROW(c.validate(), ParameterError);
    c.t_values = {16};
    c.seeds_per_t = 4;
    EXPECT_THROW(c.validate(), ParameterError);
    c.seeds_per_t = 5;
    c.budget_multiplier = 9.9;
    EXPECT_THROW(c.validate(), ParameterError);
    c.budget_multiplier = 10;
    EXPECT_NO_THROW(c.validate());
}

TEST(temporal_config, validation)
{
    TemporalStudyConfig c;
    EXPECT_THROW(c.validate(), ParameterError);
    c.windows = {1, -1};
    EXPECT_THROW(c.validate(), ParameterError);
    c.windows = {1};
    c.t = 49;
    EXPECT_THROW(c.validate(), ParameterError);
    c.t = 32;
    c.trials_per_window = 49;
    EXPECT_THROW(c.validate(), ParameterError);
    c.trials_per_window = 50;
    EXPECT_NO_THROW(c.validate());
}

TEST(scaling, t16_median_near_birthday_bound)
{
    ScalingStudyConfig c;
    c.t_values = {16};
    const auto r = run_scaling_study(c, 42);
    ASSERT_EQ(r.scaling.size(), 1u);
    EXPECT_EQ(r.scaling[0].samples, 20u);
    EXPECT_NEAR(r.scaling[0].predicted, 320.85, 0.01);
    EXPECT_GE(r.scaling[0].ratio, 0.3);
    EXPECT_LE(r.scaling[0].ratio, 3.0);
}

TEST(scaling, growth_between_24_and_28)
{
    for (auto searcher : {SearcherKind::parallel, SearcherKind::rho})
    {
        ScalingStudyConfig c;
        c.t_values = {24, 28};
        c.searcher = searcher;
        const auto r = run_scaling_study(c, 7);
        ASSERT_EQ(r.growth.size(), 1u);
        EXPECT_DOUBLE_EQ(r.growth[0].predicted_ratio, 4.0);
        EXPECT_GE(r.growth[0].empirical_ratio, 2.8) << to_string(searcher);
        EXPECT_LE(r.growth[0].empirical_ratio, 5.7) << to_string(searcher);
        EXPECT_NEAR(r.growth[0].empirical_bits_per_bit, 0.5, 0.15);
    }
}

TEST(scaling, reproducible_and_thread_independent)
{
    ScalingStudyConfig c;
    c.t_values = {12, 16, 20};
    c.seeds_per_t = 8;
    StudyOptions threaded;
    threaded.threads = 3;
    const auto a = to_json(run_scaling_study(c, 5)).dump();
    EXPECT_EQ(a, to_json(run_scaling_study(c, 5)).dump());
    EXPECT_EQ(a, to_json(run_scaling_study(c, 5, threaded)).dump());
    EXPECT_NE(a, to_json(run_scaling_study(c, 6)).dump());
}

TEST(scaling, every_row_has_empirical_and_predicted)
{
    ScalingStudyConfig c;
    c.t_values = {12, 16};
    c.seeds_per_t = 5;
    const auto j = to_json(run_scaling_study(c, 1));
    EXPECT_EQ(j["schema"], study_schema);
    EXPECT_TRUE(j["metadata"]["timestamp"].is_null());
    for (const auto& row : j["rows"])
    {
        EXPECT_TRUE(row.contains("median_evaluations"));
        EXPECT_TRUE(row.contains("predicted"));
        EXPECT_TRUE(row.contains("samples"));
    }
    const std::string table = to_table(run_scaling_study(c, 1));
    EXPECT_NE(table.find("median_evals"), std::string::npos);
}

TEST(temporal, budget_one_never_succeeds_and_predictions_grow)
{
    TemporalStudyConfig c;
    c.t = 24;
    c.hash_rate = 1000;
    c.windows = {0.001, 0.5, 1, 4};
    c.trials_per_window = 60;
    const auto r = run_temporal_study(c, 3);
    ASSERT_EQ(r.temporal.size(), 4u);
    EXPECT_EQ(r.temporal[0].budget, 1u);
    EXPECT_EQ(r.temporal[0].successes, 0u);
    EXPECT_EQ(r.temporal[0].predicted, 0.0);
    for (size_t i = 1; i < r.temporal.size(); ++i)
        EXPECT_GE(r.temporal[i].predicted, r.temporal[i - 1].predicted);
    for (const auto& row : r.temporal)
        EXPECT_LE(std::abs(row.empirical_rate - row.predicted), row.tolerance) << row.window;
}

TEST(temporal, half_birthday_budget_at_t24)
{
    TemporalStudyConfig c;
    c.t = 24;
    c.hash_rate = 4096;
    c.windows = {1};
    c.trials_per_window = 200;
    // Short trails: with 2^6-step trails a 4096 budget loses too much to
    // walks still in flight when it runs out.
    c.search.distinguished_bits = 2;
    const auto r = run_temporal_study(c, 11);
    EXPECT_NEAR(r.temporal[0].predicted, 1 - std::exp(-0.5), 1e-3);
    EXPECT_NEAR(r.temporal[0].empirical_rate, 0.393, 0.08);
}

TEST(bench, positive_rate)
{
    EXPECT_GT(benchmark_hash_rate(32, 0.05), 1000.0);
}
