// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

// Independent reference implementations used only by tests. None of these
// go through the engine or share code paths with the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "windtunnel/corpus_io.hpp"
#include "windtunnel/graph_builder.hpp"
#include "windtunnel/powerlaw.hpp"

namespace windtunnel::testing {

/// Every entity pair x every query: min along the two-hop path, max over queries.
inline std::vector<AffinityEdge> brute_force_affinity(const std::vector<QRelRecord>& qrels) {
    std::set<std::string> entity_set;
    std::set<std::string> query_set;
    std::map<std::pair<std::string, std::string>, double> score; // (query, entity)
    for (const auto& r : qrels) {
        entity_set.insert(r.entity_id);
        query_set.insert(r.query_id);
        auto key = std::make_pair(r.query_id, r.entity_id);
        auto it = score.find(key);
        if (it == score.end() || it->second < r.score) {
            score[key] = r.score;
        }
    }
    std::vector<std::string> entities(entity_set.begin(), entity_set.end());
    std::vector<AffinityEdge> edges;
    for (std::size_t i = 0; i < entities.size(); ++i) {
        for (std::size_t j = i + 1; j < entities.size(); ++j) {
            bool found = false;
            double best = 0.0;
            for (const auto& q : query_set) {
                auto a = score.find({q, entities[i]});
                auto b = score.find({q, entities[j]});
                if (a == score.end() || b == score.end()) {
                    continue;
                }
                auto w = std::min(a->second, b->second);
                if (!found || w > best) {
                    best = w;
                    found = true;
                }
            }
            if (found) {
                edges.push_back({entities[i], entities[j], best});
            }
        }
    }
    return edges;
}

/// Plain single-threaded synchronous label propagation, one map per round.
inline std::vector<std::map<std::string, std::string>> reference_propagation(
    const std::vector<AffinityEdge>& edges, std::uint32_t rounds) {
    std::map<std::string, std::vector<std::pair<std::string, double>>> adj;
    for (const auto& e : edges) {
        adj[e.entity_a].emplace_back(e.entity_b, e.affinity);
        adj[e.entity_b].emplace_back(e.entity_a, e.affinity);
    }
    std::map<std::string, std::string> labels;
    for (const auto& [node, nbrs] : adj) {
        labels[node] = node;
    }
    std::vector<std::map<std::string, std::string>> history;
    for (std::uint32_t r = 0; r < rounds; ++r) {
        std::map<std::string, std::string> next;
        for (const auto& [node, nbrs] : adj) {
            std::map<std::string, double> support;
            for (const auto& [nbr, w] : nbrs) {
                support[labels.at(nbr)] += w;
            }
            std::string best;
            double best_w = -1.0;
            for (const auto& [label, w] : support) {
                if (w > best_w) {
                    best = label;
                    best_w = w;
                }
            }
            next[node] = best;
        }
        labels = std::move(next);
        history.push_back(labels);
    }
    return history;
}

/// Union-find component representative per node.
inline std::map<std::string, std::string> components(const std::vector<AffinityEdge>& edges) {
    std::map<std::string, std::string> parent;
    std::function<std::string(const std::string&)> find = [&](const std::string& x) {
        auto p = parent.at(x);
        if (p == x) {
            return x;
        }
        auto root = find(p);
        parent[x] = root;
        return root;
    };
    for (const auto& e : edges) {
        parent.try_emplace(e.entity_a, e.entity_a);
        parent.try_emplace(e.entity_b, e.entity_b);
    }
    for (const auto& e : edges) {
        auto a = find(e.entity_a);
        auto b = find(e.entity_b);
        if (a != b) {
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
    std::map<std::string, std::string> out;
    for (const auto& [node, p] : parent) {
        out[node] = find(node);
    }
    return out;
}

/// Random graph with dyadic weights (exact sums) and plenty of ties.
inline std::vector<AffinityEdge> random_graph(std::mt19937_64& gen, std::size_t max_nodes) {
    std::uniform_int_distribution<std::size_t> node_count(2, max_nodes);
    auto n = node_count(gen);
    std::uniform_real_distribution<double> density(0.5, 6.0);
    auto avg_degree = density(gen);
    auto p = std::min(1.0, avg_degree / static_cast<double>(n));
    std::bernoulli_distribution keep(p);
    std::uniform_int_distribution<int> weight(1, 8);
    std::vector<AffinityEdge> edges;
    auto id = [](std::size_t i) { return "n" + std::to_string(i); };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (keep(gen)) {
                auto a = id(i);
                auto b = id(j);
                if (b < a) {
                    std::swap(a, b);
                }
                edges.push_back({a, b, weight(gen) / 8.0});
            }
        }
    }
    std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) {
        return std::tie(x.entity_a, x.entity_b) < std::tie(y.entity_a, y.entity_b);
    });
    return edges;
}

/// Random qrels over <= max_queries x <= max_entities with graded scores.
inline std::vector<QRelRecord> random_qrels(std::mt19937_64& gen, std::size_t max_queries,
                                            std::size_t max_entities) {
    std::uniform_int_distribution<std::size_t> nq(1, max_queries);
    std::uniform_int_distribution<std::size_t> ne(1, max_entities);
    auto queries = nq(gen);
    auto entities = ne(gen);
    std::uniform_real_distribution<double> density(0.02, 0.3);
    std::bernoulli_distribution judged(density(gen));
    std::uniform_int_distribution<int> grade(0, 20);
    std::uniform_real_distribution<double> real(-1.0, 3.0);
    std::bernoulli_distribution use_grades(0.5);
    bool graded = use_grades(gen);
    std::vector<QRelRecord> qrels;
    for (std::size_t q = 0; q < queries; ++q) {
        for (std::size_t e = 0; e < entities; ++e) {
            if (judged(gen)) {
                double s = graded ? grade(gen) / 4.0 : real(gen);
                qrels.push_back({"e" + std::to_string(e), "q" + std::to_string(q), s});
            }
        }
    }
    return qrels;
}

/// Grid search of the Yule-Simon log-likelihood over rho in (0, 20], step 1e-3.
inline double grid_search_rho(const DegreeSample& sample) {
    double best_rho = 0.0;
    double best_ll = -INFINITY;
    for (int i = 1; i <= 20000; ++i) {
        double rho = i * 1e-3;
        double ll = 0.0;
        for (const auto& [k, count] : sample.histogram()) {
            double kd = static_cast<double>(k);
            ll += static_cast<double>(count) *
                  (std::log(rho) + std::lgamma(kd) + std::lgamma(rho + 1) - std::lgamma(kd + rho + 1));
        }
        if (ll > best_ll) {
            best_ll = ll;
            best_rho = rho;
        }
    }
    return best_rho;
}

} // namespace windtunnel::testing
