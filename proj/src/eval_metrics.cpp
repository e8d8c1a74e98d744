// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#include "windtunnel/eval_metrics.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace windtunnel {

namespace {

double pairwise(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += v[i];
        }
        return s;
    }
    auto half = n / 2;
    return pairwise(v, half) + pairwise(v + half, n - half);
}

} // namespace

double pairwise_sum(const std::vector<double>& values) {
    return pairwise(values.data(), values.size());
}

PrecisionReport precision_at_k(const std::vector<RunRecord>& run,
                               const std::vector<QRelRecord>& qrels, std::size_t k,
                               double relevance_threshold) {
    if (k == 0) {
        throw ValidationError("precision_at_k: k must be >= 1");
    }
    std::map<std::string, std::unordered_map<std::string, double>> judgments;
    for (const auto& r : qrels) {
        auto& score = judgments[r.query_id].try_emplace(r.entity_id, r.score).first->second;
        score = std::max(score, r.score);
    }

    std::unordered_map<std::string, std::vector<const RunRecord*>> ranked;
    for (const auto& r : run) {
        ranked[r.query_id].push_back(&r);
    }

    PrecisionReport report;
    report.k = k;
    std::vector<double> values;
    values.reserve(judgments.size());
    for (const auto& [query, judged] : judgments) {
        std::size_t hits = 0;
        if (auto it = ranked.find(query); it != ranked.end()) {
            auto rows = it->second;
            std::sort(rows.begin(), rows.end(), [](const RunRecord* a, const RunRecord* b) {
                return std::tie(a->rank, a->entity_id) < std::tie(b->rank, b->entity_id);
            });
            for (std::size_t i = 0; i < rows.size() && i < k; ++i) {
                auto j = judged.find(rows[i]->entity_id);
                if (j != judged.end() && j->second >= relevance_threshold) {
                    ++hits;
                }
            }
        }
        auto p = static_cast<double>(hits) / static_cast<double>(k);
        report.per_query.emplace(query, p);
        values.push_back(p);
    }
    report.judged_queries = values.size();
    report.mean = values.empty() ? 0.0 : pairwise_sum(values) / static_cast<double>(values.size());
    return report;
}

DensityReport query_density(const CorpusSample& sample) {
    std::set<std::string_view> queries;
    std::set<std::string_view> entities;
    for (const auto& q : sample.queries) {
        queries.insert(q.query_id);
    }
    for (const auto& e : sample.entities) {
        entities.insert(e.entity_id);
    }
    if (entities.empty()) {
        throw ValidationError("query_density: sample has no entities");
    }
    DensityReport report;
    report.query_count = queries.size();
    report.entity_count = entities.size();
    report.qrel_count = sample.qrels.size();
    report.rho_q = static_cast<double>(report.query_count) / static_cast<double>(report.entity_count);
    return report;
}

} // namespace windtunnel
