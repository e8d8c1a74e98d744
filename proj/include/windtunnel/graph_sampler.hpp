// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "windtunnel/engine.hpp"
#include "windtunnel/graph_builder.hpp"

namespace windtunnel {

/// Community label of one node after some number of propagation rounds.
struct LabelState {
    std::string node_id;
    std::string label;
    std::uint32_t round = 0;

    friend bool operator==(const LabelState&, const LabelState&) = default;
};

struct ClusterAssignment {
    std::string label;
    std::vector<std::string> members; ///< sorted, non-empty

    std::size_t size() const noexcept { return members.size(); }

    friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;
};

struct ClusterDecision {
    std::string label;
    std::size_t size = 0;
    double probability = 0.0;
    bool selected = false;
};

struct SamplePlan {
    std::vector<ClusterDecision> decisions; ///< one per cluster, sorted by label
    std::uint64_t seed = 0;
    double scale = 1.0;
    std::optional<std::uint64_t> target_entities;

    std::vector<std::string> selected_labels() const;
};

inline constexpr std::uint32_t kDefaultRounds = 5;

struct PropagationResult {
    std::vector<LabelState> labels; ///< final round, sorted by node_id
    /// Fraction of nodes whose label changed in the last round.
    double final_change_fraction = 0.0;
};

/// Synchronous weighted label propagation. Every node starts with its own id;
/// in each round a node takes the neighbour label with the largest summed
/// incident affinity (ties: bytewise smallest label). Nodes without edges do
/// not appear in the output.
PropagationResult propagate_labels(const Engine& engine, const std::vector<AffinityEdge>& edges,
                                   std::uint32_t rounds = kDefaultRounds,
                                   std::size_t partition_count = 16);

/// Groups final labels into disjoint clusters, sorted by label. A node that
/// appears with two different labels is an internal error.
std::vector<ClusterAssignment> extract_clusters(const Engine& engine,
                                                const std::vector<LabelState>& labels,
                                                std::size_t partition_count = 16);

/// Inclusion probability min(1, scale * size / total_entities).
double inclusion_probability(std::size_t cluster_size, std::uint64_t total_entities,
                             double scale) noexcept;

/// The uniform draw in [0, 1) that decides whether a label is included.
double inclusion_draw(std::uint64_t seed, std::string_view label) noexcept;

/// Size-proportional cluster sampling: each cluster is included independently
/// when inclusion_draw(seed, label) < inclusion_probability(...).
SamplePlan sample_clusters(const std::vector<ClusterAssignment>& clusters,
                           std::uint64_t total_entities, std::uint64_t seed, double scale = 1.0);

/// Expected number of sampled entities under a given scale.
double expected_sample_size(const std::vector<ClusterAssignment>& clusters,
                            std::uint64_t total_entities, double scale);

/// Smallest scale whose expected sample size reaches target_entities, found by
/// bisection (relative tolerance well below 1e-6).
double calibrate_scale(const std::vector<ClusterAssignment>& clusters,
                       std::uint64_t total_entities, std::uint64_t target_entities);

/// Cluster file: "node_id<TAB>label", sorted by node_id.
void write_clusters(const std::vector<ClusterAssignment>& clusters,
                    const std::filesystem::path& path);
std::vector<ClusterAssignment> read_clusters(const std::filesystem::path& path);

/// Plan file: "label<TAB>selected(0|1)<TAB>probability", sorted by label.
void write_plan(const SamplePlan& plan, const std::filesystem::path& path);
SamplePlan read_plan(const std::filesystem::path& path);

} // namespace windtunnel
