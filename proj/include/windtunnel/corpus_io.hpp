// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "windtunnel/error.hpp"

namespace windtunnel {

struct QueryRecord {
    std::string query_id;
    std::string query_content;

    friend auto operator<=>(const QueryRecord&, const QueryRecord&) = default;
};

struct EntityRecord {
    std::string entity_id;
    std::string entity_content;

    friend auto operator<=>(const EntityRecord&, const EntityRecord&) = default;
};

/// One relevance judgment S_qrel for a (query, entity) pair.
struct QRelRecord {
    std::string entity_id;
    std::string query_id;
    double score = 0.0;

    friend bool operator==(const QRelRecord&, const QRelRecord&) = default;
};

/// One row of a TREC run file: "query_id Q0 entity_id rank score tag".
struct RunRecord {
    std::string query_id;
    std::string entity_id;
    std::uint32_t rank = 0;
    double score = 0.0;
    std::string tag;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// A (queries, entities, qrels) triple with the same schema as the inputs.
/// Each table is kept sorted by id: queries and entities by their id, qrels by
/// (query_id, entity_id).
struct CorpusSample {
    std::vector<QueryRecord> queries;
    std::vector<EntityRecord> entities;
    std::vector<QRelRecord> qrels;

    bool empty() const noexcept { return queries.empty() && entities.empty() && qrels.empty(); }

    friend bool operator==(const CorpusSample&, const CorpusSample&) = default;
};

enum class QrelsFormat { TrecQrels, ScoredTsv };

/// Parses "trec-qrels" or "scored-tsv"; throws ValidationError otherwise.
QrelsFormat parse_qrels_format(std::string_view tag);
std::string_view to_string(QrelsFormat format) noexcept;

// Readers. Each returns records in file order (qrels and runs: sorted, see
// below) and throws ParseError naming the file and line on malformed input.
// Input must be valid UTF-8.
std::vector<QueryRecord> read_queries(const std::filesystem::path& path);
std::vector<EntityRecord> read_corpus(const std::filesystem::path& path);

/// Duplicate (query, entity) pairs collapse to the maximum score. Output is
/// sorted by (query_id, entity_id).
std::vector<QRelRecord> read_qrels(const std::filesystem::path& path, QrelsFormat format);

/// Output is grouped by query_id (sorted) and by rank within a query.
std::vector<RunRecord> read_run(const std::filesystem::path& path);

/// Max-collapse of duplicate (query, entity) pairs, sorted by (query_id, entity_id).
std::vector<QRelRecord> collapse_qrels(std::vector<QRelRecord> qrels);

/// Sorts every table of the sample into its canonical order.
void canonicalize(CorpusSample& sample);

/// Throws ValidationError if a qrel references a missing query or entity, if
/// a query has no qrel, or if ids are duplicated.
void validate_sample(const CorpusSample& sample);

/// Writes queries.tsv, corpus.tsv and qrels.tsv (scored-tsv) into dir. Refuses
/// to write a sample that fails validate_sample, and an empty sample unless
/// allow_empty is set.
void write_sample(const CorpusSample& sample, const std::filesystem::path& dir,
                  bool allow_empty = false);

/// Reads a directory written by write_sample.
CorpusSample read_sample(const std::filesystem::path& dir);

void write_queries(const std::vector<QueryRecord>& queries, const std::filesystem::path& path);
void write_corpus(const std::vector<EntityRecord>& entities, const std::filesystem::path& path);
void write_qrels(const std::vector<QRelRecord>& qrels, const std::filesystem::path& path);
void write_run(const std::vector<RunRecord>& run, const std::filesystem::path& path);

/// Shortest decimal representation that parses back to exactly the same double.
std::string format_double(double v);

} // namespace windtunnel
