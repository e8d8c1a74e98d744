// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#include "windtunnel/graph_builder.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>

#include "windtunnel/codec.hpp"

namespace windtunnel {
namespace fs = std::filesystem;

namespace {

constexpr char kPairTag = 'P';
constexpr char kDroppedTag = 'D';

bool edge_order(const AffinityEdge& x, const AffinityEdge& y) {
    return std::tie(x.entity_a, x.entity_b) < std::tie(y.entity_a, y.entity_b);
}

std::string encode_edge(std::string_view a, std::string_view b, double w) {
    Encoder enc;
    enc.put(a).put(b).put_double(w);
    return std::move(enc).bytes();
}

AffinityEdge decode_edge(std::string_view bytes) {
    Decoder dec(bytes);
    AffinityEdge e;
    e.entity_a = dec.get();
    e.entity_b = dec.get();
    e.affinity = dec.get_double();
    return e;
}

// Max-dedup of (a, b, w) records keyed by the pair.
std::vector<AffinityEdge> max_per_pair(const Engine& engine, std::span<const Record> records,
                                       std::size_t partition_count) {
    StageSpec spec{
        .name = "affinity-max",
        .map_fn =
            [](const Record& r, std::vector<KeyValue>& out) {
                Decoder dec(r);
                Encoder key;
                key.put(dec.get()).put(dec.get());
                Encoder val;
                val.put_double(dec.get_double());
                out.emplace_back(std::move(key).bytes(), std::move(val).bytes());
            },
        .reduce_fn =
            [](const std::string& key, std::span<const std::string> payloads,
               std::vector<Record>& out) {
                double best = -std::numeric_limits<double>::infinity();
                for (const auto& p : payloads) {
                    best = std::max(best, Decoder(p).get_double());
                }
                Decoder k(key);
                auto a = k.get();
                auto b = k.get();
                out.push_back(encode_edge(a, b, best));
            },
        .partition_count = partition_count,
    };
    auto merged = engine.run_stage(records, spec);
    std::vector<AffinityEdge> edges;
    edges.reserve(merged.size());
    for (const auto& r : merged) {
        edges.push_back(decode_edge(r));
    }
    std::sort(edges.begin(), edges.end(), edge_order);
    return edges;
}

} // namespace

std::vector<QRelRecord> filter_qrels(const std::vector<QRelRecord>& qrels, double tau) {
    std::vector<QRelRecord> out;
    std::copy_if(qrels.begin(), qrels.end(), std::back_inserter(out),
                 [tau](const QRelRecord& r) { return r.score > tau; });
    return out;
}

double percentile_cutoff(const std::vector<QRelRecord>& qrels, double top_fraction) {
    if (qrels.empty()) {
        throw ValidationError("percentile_cutoff: no qrels");
    }
    if (!(top_fraction > 0.0 && top_fraction <= 1.0)) {
        throw ValidationError("percentile_cutoff: top fraction must be in (0, 1]");
    }
    std::vector<double> scores;
    scores.reserve(qrels.size());
    for (const auto& r : qrels) {
        scores.push_back(r.score);
    }
    const auto n = scores.size();
    // Guard against products like 0.1 * 30 landing a hair above an integer.
    auto keep = static_cast<std::size_t>(
        std::ceil(top_fraction * static_cast<double>(n) * (1.0 - 1e-12)));
    keep = std::clamp<std::size_t>(keep, 1, n);
    std::nth_element(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(keep - 1),
                     scores.end(), std::greater<>());
    auto boundary = scores[keep - 1];
    return std::nextafter(boundary, -std::numeric_limits<double>::infinity());
}

GraphBuildResult build_affinity_edges(const Engine& engine, const std::vector<QRelRecord>& qrels,
                                      const GraphBuildOptions& options) {
    std::vector<Record> input;
    input.reserve(qrels.size());
    for (const auto& r : qrels) {
        Encoder enc;
        enc.put(r.query_id).put(r.entity_id).put_double(r.score);
        input.push_back(std::move(enc).bytes());
    }

    const auto fanout = options.max_query_fanout;
    StageSpec pairs_stage{
        .name = "affinity-pairs",
        .map_fn =
            [](const Record& r, std::vector<KeyValue>& out) {
                Decoder dec(r);
                auto query = dec.get();
                Encoder val;
                val.put(dec.get()).put_double(dec.get_double());
                out.emplace_back(std::string(query), std::move(val).bytes());
            },
        .reduce_fn =
            [fanout](const std::string& query, std::span<const std::string> payloads,
                     std::vector<Record>& out) {
                if (payloads.size() > fanout) {
                    out.push_back(kDroppedTag + query);
                    return;
                }
                std::vector<std::pair<std::string_view, double>> judged;
                judged.reserve(payloads.size());
                for (const auto& p : payloads) {
                    Decoder dec(p);
                    auto entity = dec.get();
                    judged.emplace_back(entity, dec.get_double());
                }
                for (std::size_t i = 0; i < judged.size(); ++i) {
                    for (std::size_t j = i + 1; j < judged.size(); ++j) {
                        auto [a, sa] = judged[i];
                        auto [b, sb] = judged[j];
                        if (a == b) {
                            continue;
                        }
                        if (b < a) {
                            std::swap(a, b);
                        }
                        out.push_back(kPairTag + encode_edge(a, b, std::min(sa, sb)));
                    }
                }
            },
        .partition_count = options.partition_count,
    };
    auto emitted = engine.run_stage(input, pairs_stage);

    GraphBuildResult result;
    std::vector<Record> pairs;
    for (auto& r : emitted) {
        if (r.front() == kDroppedTag) {
            result.dropped_queries.push_back(r.substr(1));
        } else {
            pairs.push_back(r.substr(1));
        }
    }
    emitted.clear();
    emitted.shrink_to_fit();
    std::sort(result.dropped_queries.begin(), result.dropped_queries.end());
    result.candidate_pairs = pairs.size();
    result.edges = max_per_pair(engine, pairs, options.partition_count);
    return result;
}

std::vector<AffinityEdge> SharedQueryEdgeSource::generate(const Engine& engine,
                                                          const EdgeSourceInputs& inputs) const {
    if (inputs.qrels == nullptr) {
        throw ValidationError("shared-query edge source needs qrels");
    }
    auto result = build_affinity_edges(engine, *inputs.qrels, options_);
    dropped_ = std::move(result.dropped_queries);
    return std::move(result.edges);
}

std::vector<AffinityEdge> union_edge_sources(
    const Engine& engine, const std::vector<std::unique_ptr<EdgeSource>>& sources,
    const EdgeSourceInputs& inputs) {
    std::vector<Record> records;
    for (const auto& source : sources) {
        for (auto& e : source->generate(engine, inputs)) {
            if (e.entity_a == e.entity_b) {
                continue;
            }
            if (e.entity_b < e.entity_a) {
                std::swap(e.entity_a, e.entity_b);
            }
            records.push_back(encode_edge(e.entity_a, e.entity_b, e.affinity));
        }
    }
    return max_per_pair(engine, records, 16);
}

void validate_edges(const std::vector<AffinityEdge>& edges, double tau) {
    std::set<std::pair<std::string_view, std::string_view>> seen;
    for (const auto& e : edges) {
        if (!(e.entity_a < e.entity_b)) {
            throw ValidationError("edge (" + e.entity_a + ", " + e.entity_b +
                                  ") is not canonically oriented");
        }
        if (!seen.emplace(e.entity_a, e.entity_b).second) {
            throw ValidationError("duplicate edge (" + e.entity_a + ", " + e.entity_b + ")");
        }
        if (!std::isfinite(e.affinity) || !(e.affinity > tau)) {
            throw ValidationError("edge (" + e.entity_a + ", " + e.entity_b + ") affinity " +
                                  format_double(e.affinity) + " is not above " +
                                  format_double(tau));
        }
    }
}

std::map<std::string, std::size_t> node_degrees(const std::vector<AffinityEdge>& edges) {
    std::map<std::string, std::size_t> degree;
    for (const auto& e : edges) {
        ++degree[e.entity_a];
        ++degree[e.entity_b];
    }
    return degree;
}

std::map<std::size_t, std::size_t> degree_distribution(const std::vector<AffinityEdge>& edges) {
    std::map<std::size_t, std::size_t> histogram;
    for (const auto& [node, d] : node_degrees(edges)) {
        ++histogram[d];
    }
    return histogram;
}

void write_edges(const std::vector<AffinityEdge>& edges, const fs::path& path) {
    auto sorted = edges;
    std::sort(sorted.begin(), sorted.end(), edge_order);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    for (const auto& e : sorted) {
        out << e.entity_a << '\t' << e.entity_b << '\t' << format_double(e.affinity) << '\n';
    }
}

std::vector<AffinityEdge> read_edges(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::vector<AffinityEdge> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        auto t1 = line.find('\t');
        auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
        if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
            throw ParseError(path.string(), lineno, "expected 'entity_a entity_b affinity'");
        }
        AffinityEdge e{line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), 0.0};
        auto text = std::string_view(line).substr(t2 + 1);
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), e.affinity);
        if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(e.affinity)) {
            throw ParseError(path.string(), lineno, "bad affinity '" + std::string(text) + "'");
        }
        edges.push_back(std::move(e));
    }
    std::sort(edges.begin(), edges.end(), edge_order);
    try {
        validate_edges(edges, kNoThreshold);
    } catch (const ValidationError& err) {
        throw ParseError(path.string(), lineno, err.what());
    }
    return edges;
}

} // namespace windtunnel
