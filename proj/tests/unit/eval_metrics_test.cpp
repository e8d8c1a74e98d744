// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "windtunnel/eval_metrics.hpp"

using namespace windtunnel;

namespace {

std::vector<QRelRecord> fixture_qrels() {
    return {{"a", "q1", 1}, {"b", "q1", 2}, {"c", "q1", 0}, {"x", "q2", 1}, {"y", "q2", 0}};
}

std::vector<RunRecord> fixture_run() {
    return {{"q1", "a", 1, 9.0, "t"}, {"q1", "c", 2, 8.0, "t"}, {"q1", "b", 3, 7.0, "t"},
            {"q1", "x", 4, 6.0, "t"}, {"q2", "y", 1, 5.0, "t"}, {"q2", "x", 2, 4.0, "t"},
            {"q2", "z", 3, 3.0, "t"}};
}

} // namespace

TEST(PrecisionAtK, TwoQueryFixture) {
    auto report = precision_at_k(fixture_run(), fixture_qrels(), 3);
    EXPECT_EQ(report.mean, 0.5);
    EXPECT_EQ(report.per_query.at("q1"), 2.0 / 3.0);
    EXPECT_EQ(report.per_query.at("q2"), 1.0 / 3.0);
    EXPECT_EQ(report.judged_queries, 2u);
    EXPECT_EQ(report.k, 3u);
}

TEST(PrecisionAtK, NoRelevantAnywhere) {
    std::vector<QRelRecord> qrels{{"a", "q1", 0}, {"b", "q2", 0.5}};
    EXPECT_EQ(precision_at_k(fixture_run(), qrels, 3).mean, 0.0);
}

TEST(PrecisionAtK, MissingQueryCountsAsZero) {
    auto qrels = fixture_qrels();
    qrels.push_back({"a", "q3", 1});
    auto report = precision_at_k(fixture_run(), qrels, 3);
    EXPECT_EQ(report.per_query.at("q3"), 0.0);
    EXPECT_DOUBLE_EQ(report.mean, 1.0 / 3.0);
}

TEST(PrecisionAtK, ShortRankingDividesByK) {
    std::vector<RunRecord> run{{"q1", "a", 1, 1.0, "t"}};
    EXPECT_DOUBLE_EQ(precision_at_k(run, {{"a", "q1", 1}}, 3).mean, 1.0 / 3.0);
}

TEST(PrecisionAtK, ThresholdControlsRelevance) {
    EXPECT_DOUBLE_EQ(precision_at_k(fixture_run(), fixture_qrels(), 3, 2.0).mean, 1.0 / 6.0);
    EXPECT_DOUBLE_EQ(precision_at_k(fixture_run(), fixture_qrels(), 3, 0.0).mean, 5.0 / 6.0);
}

TEST(PrecisionAtK, RowOrderInvariant) {
    auto run = fixture_run();
    auto reference = precision_at_k(run, fixture_qrels(), 3);
    std::mt19937_64 gen(8);
    for (int i = 0; i < 20; ++i) {
        std::shuffle(run.begin(), run.end(), gen);
        auto report = precision_at_k(run, fixture_qrels(), 3);
        EXPECT_EQ(report.mean, reference.mean);
        EXPECT_EQ(report.per_query, reference.per_query);
    }
}

TEST(PrecisionAtK, ScoreScaleInvariant) {
    auto run = fixture_run();
    for (auto& r : run) {
        r.score *= 1000.0;
    }
    EXPECT_EQ(precision_at_k(run, fixture_qrels(), 3).mean, 0.5);
}

TEST(PrecisionAtK, ZeroK) {
    EXPECT_THROW(precision_at_k(fixture_run(), fixture_qrels(), 0), ValidationError);
}

TEST(QueryDensity, Ratio) {
    CorpusSample s{{{"q1", ""}}, {{"e1", ""}, {"e2", ""}}, {{"e1", "q1", 1}}};
    auto d = query_density(s);
    EXPECT_EQ(d.rho_q, 0.5);
    EXPECT_EQ(d.query_count, 1u);
    EXPECT_EQ(d.entity_count, 2u);
    EXPECT_EQ(d.qrel_count, 1u);
}

TEST(QueryDensity, EmptyEntities) {
    EXPECT_THROW(query_density(CorpusSample{}), ValidationError);
}

TEST(PairwiseSum, MatchesExactForDyadic) {
    std::vector<double> v;
    for (int i = 0; i < 1000; ++i) {
        v.push_back(i / 4.0);
    }
    EXPECT_EQ(pairwise_sum(v), 999.0 * 1000.0 / 8.0);
    EXPECT_EQ(pairwise_sum({}), 0.0);
}
