// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#include "windtunnel/corpus_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

namespace windtunnel {
namespace fs = std::filesystem;

namespace {

bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        std::size_t n = 0;
        std::uint32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xe0) == 0xc0) {
            n = 1;
            cp = c & 0x1f;
        } else if ((c & 0xf0) == 0xe0) {
            n = 2;
            cp = c & 0x0f;
        } else if ((c & 0xf8) == 0xf0) {
            n = 3;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + n >= s.size()) {
            return false;
        }
        for (std::size_t k = 1; k <= n; ++k) {
            auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xc0) != 0x80) {
                return false;
            }
            cp = (cp << 6) | (cc & 0x3f);
        }
        // Overlong forms, surrogates and out-of-range code points.
        if ((n == 1 && cp < 0x80) || (n == 2 && cp < 0x800) || (n == 3 && cp < 0x10000) ||
            cp > 0x10ffff || (cp >= 0xd800 && cp <= 0xdfff)) {
            return false;
        }
        i += n + 1;
    }
    return true;
}

// Calls fn(line_number, line) for each non-empty line of the file.
void for_each_line(const fs::path& path,
                   const std::function<void(std::size_t, std::string_view)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("cannot open " + path.string());
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        if (!valid_utf8(line)) {
            throw ParseError(path.string(), lineno, "invalid UTF-8");
        }
        fn(lineno, line);
    }
}

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        auto pos = line.find('\t', start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string_view> split_whitespace(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) {
            ++i;
        }
        auto start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') {
            ++i;
        }
        if (i > start) {
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

double parse_score(const fs::path& path, std::size_t lineno, std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) {
        throw ParseError(path.string(), lineno,
                         "score '" + std::string(text) + "' is not a finite number");
    }
    return v;
}

template <typename Rec, typename Make>
std::vector<Rec> read_two_columns(const fs::path& path, const char* what, Make make) {
    std::vector<Rec> out;
    std::unordered_map<std::string, std::size_t> seen;
    for_each_line(path, [&](std::size_t lineno, std::string_view line) {
        auto cols = split_tabs(line);
        if (cols.size() != 2) {
            throw ParseError(path.string(), lineno,
                             "expected 2 tab-separated columns, got " +
                                 std::to_string(cols.size()));
        }
        if (cols[0].empty()) {
            throw ParseError(path.string(), lineno, std::string("empty ") + what + " id");
        }
        auto [it, fresh] = seen.emplace(std::string(cols[0]), lineno);
        if (!fresh) {
            throw ParseError(path.string(), lineno,
                             std::string("duplicate ") + what + " id '" + it->first +
                                 "' (first seen on line " + std::to_string(it->second) +
                                 ")");
        }
        out.push_back(make(cols[0], cols[1]));
    });
    return out;
}

void check_field(std::string_view value, const char* what) {
    if (value.find_first_of("\t\n\r") != std::string_view::npos) {
        throw ValidationError(std::string(what) + " '" + std::string(value) +
                              "' contains a tab or newline");
    }
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    return out;
}

bool qrel_order(const QRelRecord& a, const QRelRecord& b) {
    return std::tie(a.query_id, a.entity_id) < std::tie(b.query_id, b.entity_id);
}

} // namespace

QrelsFormat parse_qrels_format(std::string_view tag) {
    if (tag == "trec-qrels") {
        return QrelsFormat::TrecQrels;
    }
    if (tag == "scored-tsv") {
        return QrelsFormat::ScoredTsv;
    }
    throw ValidationError("unknown qrels format '" + std::string(tag) +
                          "' (expected trec-qrels or scored-tsv)");
}

std::string_view to_string(QrelsFormat format) noexcept {
    return format == QrelsFormat::TrecQrels ? "trec-qrels" : "scored-tsv";
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::vector<QueryRecord> read_queries(const fs::path& path) {
    return read_two_columns<QueryRecord>(path, "query", [](auto id, auto text) {
        return QueryRecord{std::string(id), std::string(text)};
    });
}

std::vector<EntityRecord> read_corpus(const fs::path& path) {
    return read_two_columns<EntityRecord>(path, "entity", [](auto id, auto text) {
        return EntityRecord{std::string(id), std::string(text)};
    });
}

std::vector<QRelRecord> read_qrels(const fs::path& path, QrelsFormat format) {
    std::vector<QRelRecord> out;
    for_each_line(path, [&](std::size_t lineno, std::string_view line) {
        if (format == QrelsFormat::TrecQrels) {
            auto cols = split_whitespace(line);
            if (cols.size() != 4) {
                throw ParseError(path.string(), lineno,
                                 "expected 4 columns 'query_id 0 entity_id score', got " +
                                     std::to_string(cols.size()));
            }
            out.push_back({std::string(cols[2]), std::string(cols[0]),
                           parse_score(path, lineno, cols[3])});
        } else {
            auto cols = split_tabs(line);
            if (cols.size() != 3) {
                throw ParseError(path.string(), lineno,
                                 "expected 3 tab-separated columns, got " +
                                     std::to_string(cols.size()));
            }
            if (cols[0].empty() || cols[1].empty()) {
                throw ParseError(path.string(), lineno, "empty id");
            }
            out.push_back({std::string(cols[1]), std::string(cols[0]),
                           parse_score(path, lineno, cols[2])});
        }
    });
    return collapse_qrels(std::move(out));
}

std::vector<QRelRecord> collapse_qrels(std::vector<QRelRecord> qrels) {
    std::sort(qrels.begin(), qrels.end(), [](const QRelRecord& a, const QRelRecord& b) {
        if (qrel_order(a, b) || qrel_order(b, a)) {
            return qrel_order(a, b);
        }
        return a.score > b.score;
    });
    auto last = std::unique(qrels.begin(), qrels.end(), [](const auto& a, const auto& b) {
        return a.query_id == b.query_id && a.entity_id == b.entity_id;
    });
    qrels.erase(last, qrels.end());
    return qrels;
}

std::vector<RunRecord> read_run(const fs::path& path) {
    std::vector<RunRecord> out;
    std::vector<std::size_t> lines;
    for_each_line(path, [&](std::size_t lineno, std::string_view line) {
        auto cols = split_whitespace(line);
        if (cols.size() != 6) {
            throw ParseError(path.string(), lineno,
                             "expected 6 columns 'query_id Q0 entity_id rank score tag', got " +
                                 std::to_string(cols.size()));
        }
        std::uint32_t rank = 0;
        auto [ptr, ec] = std::from_chars(cols[3].data(), cols[3].data() + cols[3].size(), rank);
        if (ec != std::errc{} || ptr != cols[3].data() + cols[3].size() || rank == 0) {
            throw ParseError(path.string(), lineno,
                             "rank '" + std::string(cols[3]) + "' is not a positive integer");
        }
        out.push_back({std::string(cols[0]), std::string(cols[2]), rank,
                       parse_score(path, lineno, cols[4]), std::string(cols[5])});
        lines.push_back(lineno);
    });

    std::vector<std::size_t> order(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(out[a].query_id, out[a].rank, lines[a]) <
               std::tie(out[b].query_id, out[b].rank, lines[b]);
    });
    std::vector<RunRecord> sorted;
    sorted.reserve(out.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& r = out[order[i]];
        if (i > 0) {
            const auto& prev = out[order[i - 1]];
            if (prev.query_id == r.query_id && prev.rank == r.rank) {
                throw ParseError(path.string(), lines[order[i]],
                                 "duplicate rank " + std::to_string(r.rank) + " for query '" +
                                     r.query_id + "' (also on line " +
                                     std::to_string(lines[order[i - 1]]) + ")");
            }
        }
        sorted.push_back(r);
    }
    return sorted;
}

void canonicalize(CorpusSample& sample) {
    std::sort(sample.queries.begin(), sample.queries.end());
    std::sort(sample.entities.begin(), sample.entities.end());
    std::sort(sample.qrels.begin(), sample.qrels.end(), qrel_order);
}

void validate_sample(const CorpusSample& sample) {
    std::set<std::string_view> queries;
    std::set<std::string_view> entities;
    for (const auto& q : sample.queries) {
        if (q.query_id.empty() || !queries.insert(q.query_id).second) {
            throw ValidationError("sample: empty or duplicate query id '" + q.query_id + "'");
        }
    }
    for (const auto& e : sample.entities) {
        if (e.entity_id.empty() || !entities.insert(e.entity_id).second) {
            throw ValidationError("sample: empty or duplicate entity id '" + e.entity_id + "'");
        }
    }
    std::set<std::string_view> judged;
    std::set<std::pair<std::string_view, std::string_view>> pairs;
    for (const auto& r : sample.qrels) {
        if (!queries.contains(r.query_id)) {
            throw ValidationError("sample: qrel references missing query '" + r.query_id + "'");
        }
        if (!entities.contains(r.entity_id)) {
            throw ValidationError("sample: qrel references missing entity '" + r.entity_id +
                                  "'");
        }
        if (!std::isfinite(r.score)) {
            throw ValidationError("sample: non-finite qrel score");
        }
        if (!pairs.emplace(r.query_id, r.entity_id).second) {
            throw ValidationError("sample: duplicate qrel (" + r.query_id + ", " + r.entity_id +
                                  ")");
        }
        judged.insert(r.query_id);
    }
    for (const auto& q : sample.queries) {
        if (!judged.contains(q.query_id)) {
            throw ValidationError("sample: query '" + q.query_id + "' has no qrel");
        }
    }
}

void write_queries(const std::vector<QueryRecord>& queries, const fs::path& path) {
    auto out = open_out(path);
    for (const auto& q : queries) {
        check_field(q.query_id, "query id");
        check_field(q.query_content, "query content");
        out << q.query_id << '\t' << q.query_content << '\n';
    }
}

void write_corpus(const std::vector<EntityRecord>& entities, const fs::path& path) {
    auto out = open_out(path);
    for (const auto& e : entities) {
        check_field(e.entity_id, "entity id");
        check_field(e.entity_content, "entity content");
        out << e.entity_id << '\t' << e.entity_content << '\n';
    }
}

void write_qrels(const std::vector<QRelRecord>& qrels, const fs::path& path) {
    auto out = open_out(path);
    for (const auto& r : qrels) {
        check_field(r.query_id, "query id");
        check_field(r.entity_id, "entity id");
        out << r.query_id << '\t' << r.entity_id << '\t' << format_double(r.score) << '\n';
    }
}

void write_run(const std::vector<RunRecord>& run, const fs::path& path) {
    auto out = open_out(path);
    for (const auto& r : run) {
        out << r.query_id << " Q0 " << r.entity_id << ' ' << r.rank << ' '
            << format_double(r.score) << ' ' << r.tag << '\n';
    }
}

void write_sample(const CorpusSample& sample, const fs::path& dir, bool allow_empty) {
    validate_sample(sample);
    if (sample.entities.empty() && !allow_empty) {
        throw ValidationError("refusing to write an empty sample (use --allow-empty)");
    }
    auto sorted = sample;
    canonicalize(sorted);
    fs::create_directories(dir);
    write_queries(sorted.queries, dir / "queries.tsv");
    write_corpus(sorted.entities, dir / "corpus.tsv");
    write_qrels(sorted.qrels, dir / "qrels.tsv");
}

CorpusSample read_sample(const fs::path& dir) {
    CorpusSample s;
    s.queries = read_queries(dir / "queries.tsv");
    s.entities = read_corpus(dir / "corpus.tsv");
    s.qrels = read_qrels(dir / "qrels.tsv", QrelsFormat::ScoredTsv);
    canonicalize(s);
    return s;
}

} // namespace windtunnel
