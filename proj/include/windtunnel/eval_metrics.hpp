// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "windtunnel/corpus_io.hpp"

namespace windtunnel {

inline constexpr double kDefaultRelevanceThreshold = 1.0;

struct PrecisionReport {
    std::size_t k = 0;
    std::map<std::string, double> per_query;
    double mean = 0.0;
    std::size_t judged_queries = 0;
};

/// precision@k over every query that has at least one qrel. The top k run
/// rows of a query are taken by rank (not file order); an entity counts as
/// relevant when its qrel score is >= relevance_threshold. The divisor is
/// always k, and judged queries missing from the run score 0.
PrecisionReport precision_at_k(const std::vector<RunRecord>& run,
                               const std::vector<QRelRecord>& qrels, std::size_t k,
                               double relevance_threshold = kDefaultRelevanceThreshold);

struct DensityReport {
    std::size_t query_count = 0;
    std::size_t entity_count = 0;
    std::size_t qrel_count = 0;
    double rho_q = 0.0;
};

/// Query density: distinct queries / distinct entities in the sample.
DensityReport query_density(const CorpusSample& sample);

/// Sum of doubles by pairwise reduction; result depends only on the order of
/// the input, not on how callers partition work.
double pairwise_sum(const std::vector<double>& values);

} // namespace windtunnel
