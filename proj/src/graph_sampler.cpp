// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#include "windtunnel/graph_sampler.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>

#include "windtunnel/codec.hpp"
#include "windtunnel/hashing.hpp"

namespace windtunnel {
namespace fs = std::filesystem;

namespace {

// Directed adjacency record (node, neighbour, weight, label of node).
std::string encode_adjacency(std::string_view node, std::string_view neighbour, double w,
                             std::string_view label) {
    Encoder enc;
    enc.put(node).put(neighbour).put_double(w).put(label);
    return std::move(enc).bytes();
}

std::map<std::string, std::string> labels_of(const std::vector<Record>& adjacency) {
    std::map<std::string, std::string> labels;
    for (const auto& r : adjacency) {
        Decoder dec(r);
        auto node = dec.get();
        dec.get();
        dec.get_double();
        labels.emplace(node, dec.get());
    }
    return labels;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    for (auto pos = line.find('\t'); pos != std::string_view::npos;
         pos = line.find('\t', start)) {
        cols.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    cols.push_back(line.substr(start));
    return cols;
}

template <typename Fn>
void for_each_line(const fs::path& path, Fn fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty()) {
            fn(lineno, split_tabs(line));
        }
    }
}

} // namespace

PropagationResult propagate_labels(const Engine& engine, const std::vector<AffinityEdge>& edges,
                                   std::uint32_t rounds, std::size_t partition_count) {
    if (rounds == 0) {
        throw ValidationError("propagate_labels: rounds must be >= 1");
    }

    // Initialisation: each endpoint carries its own id as label.
    std::vector<Record> adjacency;
    adjacency.reserve(edges.size() * 2);
    for (const auto& e : edges) {
        adjacency.push_back(encode_adjacency(e.entity_a, e.entity_b, e.affinity, e.entity_a));
        adjacency.push_back(encode_adjacency(e.entity_b, e.entity_a, e.affinity, e.entity_b));
    }

    // Each record is routed to its neighbour, so the reducer for node X sees
    // (y, w_xy, label_y) for every neighbour y and re-emits X's side of each
    // edge with X's new label.
    StageSpec iterate{
        .name = "label-propagation",
        .map_fn =
            [](const Record& r, std::vector<KeyValue>& out) {
                Decoder dec(r);
                auto node = dec.get();
                auto neighbour = dec.get();
                auto w = dec.get_double();
                auto label = dec.get();
                Encoder val;
                val.put(node).put_double(w).put(label);
                out.emplace_back(std::string(neighbour), std::move(val).bytes());
            },
        .reduce_fn =
            [](const std::string& node, std::span<const std::string> payloads,
               std::vector<Record>& out) {
                std::map<std::string_view, double> support;
                std::vector<std::pair<std::string_view, double>> incident;
                incident.reserve(payloads.size());
                for (const auto& p : payloads) {
                    Decoder dec(p);
                    auto neighbour = dec.get();
                    auto w = dec.get_double();
                    support[dec.get()] += w;
                    incident.emplace_back(neighbour, w);
                }
                auto best = support.begin();
                for (auto it = support.begin(); it != support.end(); ++it) {
                    if (it->second > best->second) {
                        best = it;
                    }
                }
                for (const auto& [neighbour, w] : incident) {
                    out.push_back(encode_adjacency(node, neighbour, w, best->first));
                }
            },
        .partition_count = partition_count,
    };

    std::map<std::string, std::string> previous;
    for (std::uint32_t round = 1; round <= rounds; ++round) {
        if (round == rounds) {
            previous = labels_of(adjacency);
        }
        adjacency = engine.run_stage(adjacency, iterate);
    }

    PropagationResult result;
    auto final_labels = labels_of(adjacency);
    std::size_t changed = 0;
    result.labels.reserve(final_labels.size());
    for (auto& [node, label] : final_labels) {
        if (previous[node] != label) {
            ++changed;
        }
        result.labels.push_back({node, label, rounds});
    }
    if (!final_labels.empty()) {
        result.final_change_fraction =
            static_cast<double>(changed) / static_cast<double>(final_labels.size());
    }
    return result;
}

std::vector<ClusterAssignment> extract_clusters(const Engine& engine,
                                                const std::vector<LabelState>& labels,
                                                std::size_t partition_count) {
    std::vector<Record> input;
    input.reserve(labels.size());
    for (const auto& s : labels) {
        Encoder enc;
        enc.put(s.node_id).put(s.label);
        input.push_back(std::move(enc).bytes());
    }

    StageSpec by_node{
        .name = "distinct-node-labels",
        .map_fn =
            [](const Record& r, std::vector<KeyValue>& out) {
                Decoder dec(r);
                auto node = dec.get();
                out.emplace_back(std::string(node), std::string(dec.get()));
            },
        .reduce_fn =
            [](const std::string& node, std::span<const std::string> labels_of_node,
               std::vector<Record>& out) {
                if (labels_of_node.front() != labels_of_node.back()) {
                    throw Error("node '" + node + "' has conflicting labels '" +
                                labels_of_node.front() + "' and '" + labels_of_node.back() +
                                "'");
                }
                Encoder enc;
                enc.put(node).put(labels_of_node.front());
                out.push_back(std::move(enc).bytes());
            },
        .partition_count = partition_count,
    };
    StageSpec by_label{
        .name = "group-clusters",
        .map_fn =
            [](const Record& r, std::vector<KeyValue>& out) {
                Decoder dec(r);
                auto node = dec.get();
                out.emplace_back(std::string(dec.get()), std::string(node));
            },
        .reduce_fn =
            [](const std::string& label, std::span<const std::string> members,
               std::vector<Record>& out) {
                Encoder enc;
                enc.put(label).put_u64(members.size());
                for (const auto& m : members) {
                    enc.put(m);
                }
                out.push_back(std::move(enc).bytes());
            },
        .partition_count = partition_count,
    };

    std::vector<Record> distinct;
    try {
        distinct = engine.run_stage(input, by_node);
    } catch (const StageError& e) {
        throw ValidationError(std::string("extract_clusters: ") + e.what());
    }
    auto grouped = engine.run_stage(distinct, by_label);

    std::vector<ClusterAssignment> clusters;
    clusters.reserve(grouped.size());
    for (const auto& r : grouped) {
        Decoder dec(r);
        ClusterAssignment c;
        c.label = dec.get();
        auto n = dec.get_u64();
        for (std::uint64_t i = 0; i < n; ++i) {
            c.members.emplace_back(dec.get());
        }
        std::sort(c.members.begin(), c.members.end());
        clusters.push_back(std::move(c));
    }
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& x, const auto& y) { return x.label < y.label; });
    return clusters;
}

std::vector<std::string> SamplePlan::selected_labels() const {
    std::vector<std::string> out;
    for (const auto& d : decisions) {
        if (d.selected) {
            out.push_back(d.label);
        }
    }
    return out;
}

double inclusion_probability(std::size_t cluster_size, std::uint64_t total_entities,
                             double scale) noexcept {
    auto p = scale * static_cast<double>(cluster_size) / static_cast<double>(total_entities);
    return std::min(1.0, p);
}

double inclusion_draw(std::uint64_t seed, std::string_view label) noexcept {
    return unit_interval(keyed_hash(seed, label));
}

SamplePlan sample_clusters(const std::vector<ClusterAssignment>& clusters,
                           std::uint64_t total_entities, std::uint64_t seed, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ValidationError("sample_clusters: scale must be a positive finite number");
    }
    std::uint64_t covered = 0;
    for (const auto& c : clusters) {
        covered += c.size();
    }
    if (total_entities == 0 || total_entities < covered) {
        throw ValidationError("sample_clusters: total entity count " +
                              std::to_string(total_entities) + " is below the " +
                              std::to_string(covered) + " clustered entities");
    }

    SamplePlan plan;
    plan.seed = seed;
    plan.scale = scale;
    plan.decisions.reserve(clusters.size());
    for (const auto& c : clusters) {
        ClusterDecision d;
        d.label = c.label;
        d.size = c.size();
        d.probability = inclusion_probability(c.size(), total_entities, scale);
        d.selected = inclusion_draw(seed, c.label) < d.probability;
        plan.decisions.push_back(std::move(d));
    }
    std::sort(plan.decisions.begin(), plan.decisions.end(),
              [](const auto& x, const auto& y) { return x.label < y.label; });
    return plan;
}

double expected_sample_size(const std::vector<ClusterAssignment>& clusters,
                            std::uint64_t total_entities, double scale) {
    double sum = 0.0;
    for (const auto& c : clusters) {
        sum += static_cast<double>(c.size()) *
               inclusion_probability(c.size(), total_entities, scale);
    }
    return sum;
}

double calibrate_scale(const std::vector<ClusterAssignment>& clusters,
                       std::uint64_t total_entities, std::uint64_t target_entities) {
    if (clusters.empty() || total_entities == 0) {
        throw ValidationError("calibrate_scale: no clusters to sample");
    }
    std::uint64_t covered = 0;
    std::size_t smallest = clusters.front().size();
    for (const auto& c : clusters) {
        covered += c.size();
        smallest = std::min(smallest, c.size());
    }
    if (target_entities == 0) {
        throw ValidationError("calibrate_scale: target must be positive");
    }
    if (target_entities > covered) {
        throw ValidationError("calibrate_scale: target " + std::to_string(target_entities) +
                              " is unreachable; the maximum expected sample is " +
                              std::to_string(covered) + " entities");
    }

    const auto target = static_cast<double>(target_entities);
    // At hi every cluster is saturated, so the expectation equals `covered`.
    double lo = 0.0;
    double hi = static_cast<double>(total_entities) / static_cast<double>(smallest);
    while (hi - lo > 1e-13 * hi) {
        auto mid = lo + (hi - lo) / 2;
        if (mid <= lo || mid >= hi) {
            break;
        }
        if (expected_sample_size(clusters, total_entities, mid) >= target) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

void write_clusters(const std::vector<ClusterAssignment>& clusters, const fs::path& path) {
    std::vector<std::pair<std::string_view, std::string_view>> rows;
    for (const auto& c : clusters) {
        for (const auto& m : c.members) {
            rows.emplace_back(m, c.label);
        }
    }
    std::sort(rows.begin(), rows.end());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    for (const auto& [node, label] : rows) {
        out << node << '\t' << label << '\n';
    }
}

std::vector<ClusterAssignment> read_clusters(const fs::path& path) {
    std::map<std::string, std::string> node_label;
    for_each_line(path, [&](std::size_t lineno, const std::vector<std::string_view>& cols) {
        if (cols.size() != 2 || cols[0].empty() || cols[1].empty()) {
            throw ParseError(path.string(), lineno, "expected 'node_id label'");
        }
        auto [it, fresh] = node_label.emplace(cols[0], cols[1]);
        if (!fresh && it->second != cols[1]) {
            throw ParseError(path.string(), lineno,
                             "node '" + it->first + "' has conflicting labels");
        }
    });
    std::map<std::string, ClusterAssignment> by_label;
    for (const auto& [node, label] : node_label) {
        auto& c = by_label[label];
        c.label = label;
        c.members.push_back(node);
    }
    std::vector<ClusterAssignment> clusters;
    for (auto& [label, c] : by_label) {
        clusters.push_back(std::move(c));
    }
    return clusters;
}

void write_plan(const SamplePlan& plan, const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    for (const auto& d : plan.decisions) {
        out << d.label << '\t' << (d.selected ? 1 : 0) << '\t' << format_double(d.probability)
            << '\n';
    }
}

SamplePlan read_plan(const fs::path& path) {
    SamplePlan plan;
    for_each_line(path, [&](std::size_t lineno, const std::vector<std::string_view>& cols) {
        if (cols.size() != 3 || cols[0].empty() || (cols[1] != "0" && cols[1] != "1")) {
            throw ParseError(path.string(), lineno, "expected 'label selected(0|1) probability'");
        }
        ClusterDecision d;
        d.label = cols[0];
        d.selected = cols[1] == "1";
        auto [ptr, ec] =
            std::from_chars(cols[2].data(), cols[2].data() + cols[2].size(), d.probability);
        if (ec != std::errc{} || ptr != cols[2].data() + cols[2].size() ||
            !(d.probability >= 0.0 && d.probability <= 1.0)) {
            throw ParseError(path.string(), lineno,
                             "bad probability '" + std::string(cols[2]) + "'");
        }
        plan.decisions.push_back(std::move(d));
    });
    std::sort(plan.decisions.begin(), plan.decisions.end(),
              [](const auto& x, const auto& y) { return x.label < y.label; });
    return plan;
}

} // namespace windtunnel
