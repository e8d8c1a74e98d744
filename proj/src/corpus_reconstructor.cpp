// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#include "windtunnel/corpus_reconstructor.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "windtunnel/codec.hpp"
#include "windtunnel/hashing.hpp"

namespace windtunnel {

CorpusSample close_sample(const Engine& engine, const std::vector<std::string>& entity_ids,
                          const std::vector<QueryRecord>& queries,
                          const std::vector<EntityRecord>& entities,
                          const std::vector<QRelRecord>& qrels) {
    std::unordered_map<std::string_view, const EntityRecord*> corpus;
    corpus.reserve(entities.size());
    for (const auto& e : entities) {
        corpus.emplace(e.entity_id, &e);
    }

    CorpusSample sample;
    std::unordered_set<std::string_view> chosen;
    chosen.reserve(entity_ids.size());
    for (const auto& id : entity_ids) {
        auto it = corpus.find(id);
        if (it == corpus.end()) {
            throw ValidationError("sampled entity '" + id + "' is missing from the corpus");
        }
        if (chosen.insert(it->first).second) {
            sample.entities.push_back(*it->second);
        }
    }

    // Semi-join of qrels against the chosen entity set.
    std::vector<Record> input;
    input.reserve(qrels.size());
    for (const auto& r : qrels) {
        Encoder enc;
        enc.put(r.query_id).put(r.entity_id).put_double(r.score);
        input.push_back(std::move(enc).bytes());
    }
    StageSpec join{
        .name = "qrel-semijoin",
        .map_fn =
            [&chosen](const Record& r, std::vector<KeyValue>& out) {
                Decoder dec(r);
                dec.get();
                if (chosen.contains(dec.get())) {
                    out.emplace_back(r, std::string());
                }
            },
        .reduce_fn =
            [](const std::string& key, std::span<const std::string>, std::vector<Record>& out) {
                out.push_back(key);
            },
    };
    for (const auto& r : engine.run_stage(input, join)) {
        Decoder dec(r);
        QRelRecord q;
        q.query_id = dec.get();
        q.entity_id = dec.get();
        q.score = dec.get_double();
        sample.qrels.push_back(std::move(q));
    }

    std::unordered_set<std::string_view> judged;
    for (const auto& r : sample.qrels) {
        judged.insert(r.query_id);
    }
    std::unordered_set<std::string_view> found;
    for (const auto& q : queries) {
        if (judged.contains(q.query_id)) {
            sample.queries.push_back(q);
            found.insert(q.query_id);
        }
    }
    if (found.size() != judged.size()) {
        for (auto id : judged) {
            if (!found.contains(id)) {
                throw ValidationError("qrel references query '" + std::string(id) +
                                      "' that is missing from the queries table");
            }
        }
    }

    canonicalize(sample);
    return sample;
}

CorpusSample reconstruct(const Engine& engine, const SamplePlan& plan,
                         const std::vector<ClusterAssignment>& clusters,
                         const std::vector<QueryRecord>& queries,
                         const std::vector<EntityRecord>& entities,
                         const std::vector<QRelRecord>& qrels) {
    std::unordered_map<std::string_view, const ClusterAssignment*> by_label;
    for (const auto& c : clusters) {
        by_label.emplace(c.label, &c);
    }
    std::vector<std::string> members;
    for (const auto& d : plan.decisions) {
        auto it = by_label.find(d.label);
        if (it == by_label.end()) {
            throw ValidationError("plan label '" + d.label + "' is not a cluster label");
        }
        if (d.selected) {
            members.insert(members.end(), it->second->members.begin(),
                           it->second->members.end());
        }
    }
    return close_sample(engine, members, queries, entities, qrels);
}

CorpusSample uniform_sample(const Engine& engine, const std::vector<EntityRecord>& entities,
                            const std::vector<QueryRecord>& queries,
                            const std::vector<QRelRecord>& qrels, std::size_t k,
                            std::uint64_t seed) {
    if (k > entities.size()) {
        throw ValidationError("uniform_sample: k = " + std::to_string(k) + " exceeds the " +
                              std::to_string(entities.size()) + " corpus entities");
    }
    // Ranking by an i.i.d. per-id key and keeping the k smallest is a uniform
    // draw without replacement.
    std::vector<std::pair<std::uint64_t, std::string_view>> keyed;
    keyed.reserve(entities.size());
    for (const auto& e : entities) {
        keyed.emplace_back(keyed_hash(seed, e.entity_id), e.entity_id);
    }
    std::nth_element(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(k),
                     keyed.end());
    std::vector<std::string> chosen;
    chosen.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        chosen.emplace_back(keyed[i].second);
    }
    return close_sample(engine, chosen, queries, entities, qrels);
}

SampleComposition sample_composition(const CorpusSample& sample) {
    std::set<std::string_view> judged;
    for (const auto& r : sample.qrels) {
        judged.insert(r.entity_id);
    }
    SampleComposition c;
    for (const auto& e : sample.entities) {
        if (judged.contains(e.entity_id)) {
            ++c.judged_entities;
        } else {
            ++c.unjudged_entities;
        }
    }
    return c;
}

} // namespace windtunnel
