// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#pragma once

#include <cstddef>
#include <filesystem>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "windtunnel/corpus_io.hpp"
#include "windtunnel/engine.hpp"

namespace windtunnel {

/// Weighted undirected entity pair, stored with entity_a < entity_b (bytewise).
struct AffinityEdge {
    std::string entity_a;
    std::string entity_b;
    double affinity = 0.0;

    friend bool operator==(const AffinityEdge&, const AffinityEdge&) = default;
};

inline constexpr double kNoThreshold = -std::numeric_limits<double>::infinity();
inline constexpr std::size_t kDefaultMaxQueryFanout = 1000;

/// Keeps exactly the qrels with score > tau.
std::vector<QRelRecord> filter_qrels(const std::vector<QRelRecord>& qrels,
                                     double tau = kNoThreshold);

/// Returns the tau for which filter_qrels keeps the ceil(top_fraction * n)
/// highest-scored qrels, plus every qrel tied with the lowest kept score.
double percentile_cutoff(const std::vector<QRelRecord>& qrels, double top_fraction);

struct GraphBuildOptions {
    std::size_t max_query_fanout = kDefaultMaxQueryFanout;
    std::size_t partition_count = 16;
};

struct GraphBuildResult {
    std::vector<AffinityEdge> edges; ///< sorted by (entity_a, entity_b)
    std::vector<std::string> dropped_queries; ///< queries over the fanout cap, sorted
    std::size_t candidate_pairs = 0; ///< per-query pairs before max-dedup
};

/// Shared-query affinity graph: one edge per entity pair that shares at least
/// one query, weighted by the max over shared queries of the min of the two
/// qrel scores. Qrels should already be threshold filtered.
GraphBuildResult build_affinity_edges(const Engine& engine, const std::vector<QRelRecord>& qrels,
                                      const GraphBuildOptions& options = {});

/// Inputs visible to an edge source.
struct EdgeSourceInputs {
    const std::vector<QRelRecord>* qrels = nullptr;
    const std::vector<EntityRecord>* entities = nullptr;
};

/// A generator of affinity edges. Only the shared-query source ships; other
/// sources (hyperlinks, content similarity) plug in here.
class EdgeSource {
public:
    virtual ~EdgeSource() = default;
    virtual std::string name() const = 0;
    virtual std::vector<AffinityEdge> generate(const Engine& engine,
                                               const EdgeSourceInputs& inputs) const = 0;
};

class SharedQueryEdgeSource final : public EdgeSource {
public:
    explicit SharedQueryEdgeSource(GraphBuildOptions options = {}) : options_(options) {}

    std::string name() const override { return "shared-query"; }
    std::vector<AffinityEdge> generate(const Engine& engine,
                                       const EdgeSourceInputs& inputs) const override;

    /// Queries dropped by the fanout cap during the last generate() call.
    const std::vector<std::string>& dropped_queries() const noexcept { return dropped_; }

private:
    GraphBuildOptions options_;
    mutable std::vector<std::string> dropped_;
};

/// Unions the edges of several sources, keeping the max affinity per pair.
std::vector<AffinityEdge> union_edge_sources(
    const Engine& engine, const std::vector<std::unique_ptr<EdgeSource>>& sources,
    const EdgeSourceInputs& inputs);

/// Throws ValidationError unless edges are canonical (entity_a < entity_b),
/// unique per pair, and every affinity is finite and > tau.
void validate_edges(const std::vector<AffinityEdge>& edges, double tau = 0.0);

/// degree -> number of nodes with that degree, over nodes with >= 1 edge.
std::map<std::size_t, std::size_t> degree_distribution(const std::vector<AffinityEdge>& edges);

/// Degree of every node with >= 1 edge, keyed by node id.
std::map<std::string, std::size_t> node_degrees(const std::vector<AffinityEdge>& edges);

/// Edge file: "entity_a<TAB>entity_b<TAB>affinity" per line, sorted.
void write_edges(const std::vector<AffinityEdge>& edges, const std::filesystem::path& path);
std::vector<AffinityEdge> read_edges(const std::filesystem::path& path);

} // namespace windtunnel
