// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "windtunnel/corpus_io.hpp"
#include "windtunnel/engine.hpp"
#include "windtunnel/graph_sampler.hpp"

namespace windtunnel {

/// Builds a sample from a chosen entity set: the entities themselves, every
/// qrel on them, and every query with at least one surviving qrel. Records are
/// copied verbatim from the originals. Throws ValidationError if an id in
/// entity_ids is missing from the corpus.
CorpusSample close_sample(const Engine& engine, const std::vector<std::string>& entity_ids,
                          const std::vector<QueryRecord>& queries,
                          const std::vector<EntityRecord>& entities,
                          const std::vector<QRelRecord>& qrels);

/// Community sample: the members of every selected cluster, closed over
/// qrels and queries. Plan labels must exist among the clusters.
CorpusSample reconstruct(const Engine& engine, const SamplePlan& plan,
                         const std::vector<ClusterAssignment>& clusters,
                         const std::vector<QueryRecord>& queries,
                         const std::vector<EntityRecord>& entities,
                         const std::vector<QRelRecord>& qrels);

/// Baseline: k entities drawn uniformly without replacement from the corpus,
/// closed by the same rules as reconstruct. An entity's draw depends only on
/// (seed, entity_id), so the result is independent of input order.
CorpusSample uniform_sample(const Engine& engine, const std::vector<EntityRecord>& entities,
                            const std::vector<QueryRecord>& queries,
                            const std::vector<QRelRecord>& qrels, std::size_t k,
                            std::uint64_t seed);

/// Judged (>= 1 qrel) and unjudged entity counts of a sample.
struct SampleComposition {
    std::size_t judged_entities = 0;
    std::size_t unjudged_entities = 0;
};

SampleComposition sample_composition(const CorpusSample& sample);

} // namespace windtunnel
