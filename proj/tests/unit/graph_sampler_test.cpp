// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "support/oracles.hpp"
#include "support/temp_dir.hpp"
#include "windtunnel/graph_sampler.hpp"

using namespace windtunnel;

namespace {

std::map<std::string, std::string> as_map(const std::vector<LabelState>& labels) {
    std::map<std::string, std::string> m;
    for (const auto& s : labels) {
        m[s.node_id] = s.label;
    }
    return m;
}

std::vector<AffinityEdge> triangle(const std::string& a, const std::string& b,
                                   const std::string& c) {
    return {{a, b, 1.0}, {a, c, 1.0}, {b, c, 1.0}};
}

ClusterAssignment cluster(const std::string& label, std::size_t size) {
    ClusterAssignment c{label, {}};
    for (std::size_t i = 0; i < size; ++i) {
        c.members.push_back(label + "-" + std::to_string(i));
    }
    return c;
}

} // namespace

TEST(PropagateLabels, TriangleConvergesToSmallestId) {
    Engine engine;
    auto result = propagate_labels(engine, triangle("a", "b", "c"), 3);
    EXPECT_EQ(as_map(result.labels),
              (std::map<std::string, std::string>{{"a", "a"}, {"b", "a"}, {"c", "a"}}));
    EXPECT_EQ(result.final_change_fraction, 0.0);
    for (const auto& s : result.labels) {
        EXPECT_EQ(s.round, 3u);
    }
}

TEST(PropagateLabels, TriangleFirstRoundByHand) {
    // a sees {b:1, c:1} and takes b; b and c both take a.
    Engine engine;
    auto result = propagate_labels(engine, triangle("a", "b", "c"), 1);
    EXPECT_EQ(as_map(result.labels),
              (std::map<std::string, std::string>{{"a", "b"}, {"b", "a"}, {"c", "a"}}));
    EXPECT_DOUBLE_EQ(result.final_change_fraction, 1.0);
}

TEST(PropagateLabels, DisjointTrianglesGiveTwoLabels) {
    Engine engine;
    auto edges = triangle("a", "b", "c");
    auto other = triangle("x", "y", "z");
    edges.insert(edges.end(), other.begin(), other.end());
    auto labels = as_map(propagate_labels(engine, edges, 3).labels);
    EXPECT_EQ(labels, (std::map<std::string, std::string>{
                          {"a", "a"}, {"b", "a"}, {"c", "a"}, {"x", "x"}, {"y", "x"}, {"z", "x"}}));
}

TEST(PropagateLabels, IsolatedNodesAreAbsent) {
    Engine engine;
    EXPECT_TRUE(propagate_labels(engine, {}, 3).labels.empty());
}

TEST(PropagateLabels, ZeroRoundsRejected) {
    Engine engine;
    EXPECT_THROW(propagate_labels(engine, triangle("a", "b", "c"), 0), ValidationError);
}

TEST(PropagateLabels, StarMatchesReferenceSimulator) {
    std::vector<AffinityEdge> star;
    for (int i = 1; i <= 4; ++i) {
        star.push_back({"l" + std::to_string(i), "s", 1.0});
    }
    Engine engine;
    auto got = as_map(propagate_labels(engine, star, 2).labels);
    auto expected = windtunnel::testing::reference_propagation(star, 2).back();
    EXPECT_EQ(got, expected);
    // Round 1: leaves take "s", the centre takes "l1"; round 2 swaps back.
    EXPECT_EQ(got.at("s"), "s");
    EXPECT_EQ(got.at("l1"), "l1");
}

TEST(PropagateLabels, WeightsDecideTheWinner) {
    // b is pulled towards c by the heavier edge despite a being smaller.
    std::vector<AffinityEdge> edges{{"a", "b", 0.25}, {"b", "c", 0.75}};
    Engine engine;
    auto labels = as_map(propagate_labels(engine, edges, 1).labels);
    EXPECT_EQ(labels.at("b"), "c");
}

TEST(PropagateLabels, MatchesReferenceSimulatorOnRandomGraphs) {
    std::mt19937_64 gen(31);
    Engine engine(EngineConfig{.workers = 4});
    for (int trial = 0; trial < 40; ++trial) {
        auto edges = windtunnel::testing::random_graph(gen, 120);
        for (std::uint32_t rounds : {1u, 2u, 4u}) {
            auto expected = windtunnel::testing::reference_propagation(edges, rounds);
            auto got = propagate_labels(engine, edges, rounds);
            ASSERT_EQ(as_map(got.labels), expected.back()) << trial << "/" << rounds;
            if (rounds > 1) {
                const auto& before = expected[expected.size() - 2];
                std::size_t changed = 0;
                for (const auto& [node, label] : expected.back()) {
                    changed += before.at(node) != label;
                }
                EXPECT_DOUBLE_EQ(got.final_change_fraction,
                                 static_cast<double>(changed) / expected.back().size());
            }
        }
    }
}

TEST(PropagateLabels, LabelsStayInsideComponents) {
    std::mt19937_64 gen(32);
    Engine engine;
    for (int trial = 0; trial < 30; ++trial) {
        auto edges = windtunnel::testing::random_graph(gen, 60);
        auto comp = windtunnel::testing::components(edges);
        for (const auto& s : propagate_labels(engine, edges, 5).labels) {
            ASSERT_TRUE(comp.contains(s.label));
            EXPECT_EQ(comp.at(s.label), comp.at(s.node_id));
        }
    }
}

TEST(PropagateLabels, PartitionAndWorkerInvariance) {
    std::mt19937_64 gen(33);
    auto edges = windtunnel::testing::random_graph(gen, 150);
    auto reference = propagate_labels(Engine(EngineConfig{.workers = 1}), edges, 5, 1).labels;
    for (std::size_t p : {2, 7, 32}) {
        EXPECT_EQ(propagate_labels(Engine(EngineConfig{.workers = 8}), edges, 5, p).labels,
                  reference);
    }
}

TEST(ExtractClusters, GroupsByLabel) {
    Engine engine;
    std::vector<LabelState> labels{{"a", "a"}, {"b", "a"}, {"c", "a"},
                                   {"x", "x"}, {"y", "x"}, {"z", "x"}};
    auto clusters = extract_clusters(engine, labels);
    EXPECT_EQ(clusters, (std::vector<ClusterAssignment>{{"a", {"a", "b", "c"}},
                                                        {"x", {"x", "y", "z"}}}));
}

TEST(ExtractClusters, SingleNode) {
    Engine engine;
    auto clusters = extract_clusters(engine, {{"a", "a"}});
    ASSERT_EQ(clusters.size(), 1u);
    EXPECT_EQ(clusters[0].size(), 1u);
}

TEST(ExtractClusters, ConflictingLabelsAreAnError) {
    Engine engine;
    EXPECT_THROW(extract_clusters(engine, {{"a", "a"}, {"a", "b"}}), ValidationError);
}

TEST(ExtractClusters, DisjointCover) {
    std::mt19937_64 gen(34);
    Engine engine;
    auto edges = windtunnel::testing::random_graph(gen, 100);
    auto labels = propagate_labels(engine, edges, 3).labels;
    auto clusters = extract_clusters(engine, labels);
    std::set<std::string> seen;
    std::size_t total = 0;
    for (const auto& c : clusters) {
        ASSERT_FALSE(c.members.empty());
        for (const auto& m : c.members) {
            EXPECT_TRUE(seen.insert(m).second);
        }
        total += c.size();
    }
    EXPECT_EQ(total, labels.size());
}

TEST(SampleClusters, WholeCorpusClusterAlwaysSelected) {
    std::vector<ClusterAssignment> clusters{cluster("L", 100)};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto plan = sample_clusters(clusters, 100, seed, 1.0);
        EXPECT_EQ(plan.decisions[0].probability, 1.0);
        EXPECT_TRUE(plan.decisions[0].selected);
    }
}

TEST(SampleClusters, InclusionFrequenciesMatchSizeShare) {
    std::vector<ClusterAssignment> clusters{cluster("big", 60), cluster("mid", 30),
                                            cluster("small", 10)};
    std::map<std::string, int> hits;
    constexpr int kSeeds = 10000;
    for (std::uint64_t seed = 0; seed < kSeeds; ++seed) {
        for (const auto& label : sample_clusters(clusters, 100, seed, 1.0).selected_labels()) {
            ++hits[label];
        }
    }
    EXPECT_NEAR(hits["big"] / double(kSeeds), 0.6, 0.02);
    EXPECT_NEAR(hits["mid"] / double(kSeeds), 0.3, 0.02);
    EXPECT_NEAR(hits["small"] / double(kSeeds), 0.1, 0.02);
}

TEST(SampleClusters, RejectsNonPositiveScaleAndSmallN) {
    std::vector<ClusterAssignment> clusters{cluster("a", 5)};
    EXPECT_THROW(sample_clusters(clusters, 10, 1, 0.0), ValidationError);
    EXPECT_THROW(sample_clusters(clusters, 10, 1, -1.0), ValidationError);
    EXPECT_THROW(sample_clusters(clusters, 4, 1, 1.0), ValidationError);
}

TEST(SampleClusters, DecisionIndependentOfOtherClusters) {
    std::vector<ClusterAssignment> clusters{cluster("a", 5), cluster("b", 7), cluster("c", 9)};
    auto full = sample_clusters(clusters, 40, 77, 2.0);
    std::vector<ClusterAssignment> reversed(clusters.rbegin(), clusters.rend());
    reversed.pop_back();
    auto partial = sample_clusters(reversed, 40, 77, 2.0);
    EXPECT_EQ(full.decisions[1].selected, partial.decisions[0].selected);
    EXPECT_EQ(full.decisions[2].selected, partial.decisions[1].selected);
}

TEST(CalibrateScale, SaturatedSingleCluster) {
    EXPECT_NEAR(calibrate_scale({cluster("a", 100)}, 100, 100), 1.0, 1e-9);
}

TEST(CalibrateScale, ClosedFormTwoClusters) {
    // 50 * (c / 2) + 50 * (c / 2) = 25  =>  c = 0.5
    auto c = calibrate_scale({cluster("a", 50), cluster("b", 50)}, 100, 25);
    EXPECT_NEAR(c, 0.5, 1e-6);
}

TEST(CalibrateScale, HitsTargetExpectation) {
    std::vector<ClusterAssignment> clusters{cluster("a", 3), cluster("b", 40), cluster("c", 7),
                                            cluster("d", 120)};
    for (std::uint64_t target : {1, 10, 50, 100, 150, 170}) {
        auto c = calibrate_scale(clusters, 1000, target);
        EXPECT_NEAR(expected_sample_size(clusters, 1000, c), double(target), 1e-6 * target);
    }
}

TEST(CalibrateScale, MonotoneInTarget) {
    std::vector<ClusterAssignment> clusters{cluster("a", 2), cluster("b", 13), cluster("c", 31)};
    double previous = 0.0;
    for (std::uint64_t target = 1; target <= 46; ++target) {
        auto c = calibrate_scale(clusters, 500, target);
        EXPECT_GE(c, previous);
        previous = c;
    }
}

TEST(CalibrateScale, UnreachableTarget) {
    try {
        calibrate_scale({cluster("a", 10), cluster("b", 5)}, 100, 16);
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("15"), std::string::npos);
    }
}

TEST(ClusterAndPlanFiles, RoundTrip) {
    windtunnel::testing::TempDir dir;
    std::vector<ClusterAssignment> clusters{{"a", {"a", "b"}}, {"x", {"x"}}};
    write_clusters(clusters, dir / "clusters.tsv");
    EXPECT_EQ(windtunnel::testing::slurp(dir / "clusters.tsv"), "a\ta\nb\ta\nx\tx\n");
    EXPECT_EQ(read_clusters(dir / "clusters.tsv"), clusters);

    auto plan = sample_clusters(clusters, 10, 3, 1.5);
    write_plan(plan, dir / "plan.tsv");
    auto back = read_plan(dir / "plan.tsv");
    ASSERT_EQ(back.decisions.size(), 2u);
    EXPECT_EQ(back.selected_labels(), plan.selected_labels());
    EXPECT_EQ(back.decisions[0].probability, plan.decisions[0].probability);
}
