// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "windtunnel/codec.hpp"
#include "windtunnel/engine.hpp"
#include "windtunnel/hashing.hpp"

using namespace windtunnel;

namespace {

StageSpec identity_stage(std::size_t partitions) {
    return {
        .name = "identity",
        .map_fn = [](const Record& r, std::vector<KeyValue>& out) { out.emplace_back(r, r); },
        .reduce_fn =
            [](const std::string&, std::span<const std::string> payloads,
               std::vector<Record>& out) {
                out.insert(out.end(), payloads.begin(), payloads.end());
            },
        .partition_count = partitions,
    };
}

StageSpec word_count_stage(std::size_t partitions) {
    return {
        .name = "word-count",
        .map_fn =
            [](const Record& line, std::vector<KeyValue>& out) {
                std::size_t start = 0;
                while (start < line.size()) {
                    auto end = line.find(' ', start);
                    if (end == std::string::npos) {
                        end = line.size();
                    }
                    if (end > start) {
                        out.emplace_back(line.substr(start, end - start), "1");
                    }
                    start = end + 1;
                }
            },
        .reduce_fn =
            [](const std::string& word, std::span<const std::string> ones,
               std::vector<Record>& out) {
                out.push_back(word + "\t" + std::to_string(ones.size()));
            },
        .partition_count = partitions,
    };
}

std::vector<Record> random_lines(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> word(0, 199);
    std::uniform_int_distribution<int> len(1, 12);
    std::vector<Record> lines;
    for (std::size_t i = 0; i < n; ++i) {
        std::string line;
        for (int w = len(gen); w > 0; --w) {
            line += "w" + std::to_string(word(gen)) + " ";
        }
        lines.push_back(line);
    }
    return lines;
}

std::uint64_t digest(const std::vector<Record>& records) {
    std::uint64_t h = 0;
    for (const auto& r : records) {
        h = keyed_hash(h, r);
    }
    return h;
}

} // namespace

TEST(Engine, IdentityStageReturnsSortedMultiset) {
    Engine engine;
    std::vector<Record> input{"c", "a", "b", "a"};
    auto out = engine.run_stage(input, identity_stage(4));
    EXPECT_EQ(out, (std::vector<Record>{"a", "a", "b", "c"}));
}

TEST(Engine, EmptyInputGivesEmptyOutput) {
    Engine engine;
    std::vector<Record> input;
    EXPECT_TRUE(engine.run_stage(input, identity_stage(3)).empty());
    EXPECT_TRUE(engine.run_stage(input, word_count_stage(3)).empty());
}

TEST(Engine, WordCountIndependentOfPartitionCount) {
    auto lines = random_lines(1000, 11);
    Engine engine(EngineConfig{.workers = 4});
    auto reference = engine.run_stage(lines, word_count_stage(1));
    EXPECT_EQ(digest(engine.run_stage(lines, word_count_stage(8))), digest(reference));
    for (std::size_t p : {2, 7, 32}) {
        EXPECT_EQ(engine.run_stage(lines, word_count_stage(p)), reference) << p;
    }
}

TEST(Engine, WordCountIndependentOfWorkers) {
    auto lines = random_lines(500, 12);
    auto one = Engine(EngineConfig{.workers = 1}).run_stage(lines, word_count_stage(5));
    auto eight = Engine(EngineConfig{.workers = 8}).run_stage(lines, word_count_stage(5));
    EXPECT_EQ(one, eight);
}

TEST(Engine, WordCountMatchesDirectCount) {
    std::vector<Record> lines{"a b a", "b c", "a"};
    Engine engine;
    auto out = engine.run_stage(lines, word_count_stage(3));
    EXPECT_EQ(out, (std::vector<Record>{"a\t3", "b\t2", "c\t1"}));
}

TEST(Engine, ReduceSeesPayloadsInCanonicalOrder) {
    StageSpec spec{
        .name = "concat",
        .map_fn =
            [](const Record& r, std::vector<KeyValue>& out) { out.emplace_back("k", r); },
        .reduce_fn =
            [](const std::string&, std::span<const std::string> payloads,
               std::vector<Record>& out) {
                std::string all;
                for (const auto& p : payloads) {
                    all += p + ",";
                }
                out.push_back(all);
            },
        .partition_count = 3,
    };
    Engine engine(EngineConfig{.workers = 3});
    std::vector<Record> input{"z", "\xff", "m", "a"};
    auto out = engine.run_stage(input, spec);
    ASSERT_EQ(out.size(), 1u);
    // Bytewise order puts 0xff after every ASCII byte.
    EXPECT_EQ(out[0], "a,m,z,\xff,");
}

TEST(Engine, SpillsUnderTinyBudgetWithIdenticalOutput) {
    auto lines = random_lines(400, 13);
    auto reference = Engine().run_stage(lines, word_count_stage(4));
    StageStats stats;
    Engine tiny(EngineConfig{.workers = 2, .memory_budget = 256});
    auto spilled = tiny.run_stage(lines, word_count_stage(4), &stats);
    EXPECT_EQ(spilled, reference);
    EXPECT_GT(stats.spill_files, 0u);
    EXPECT_EQ(stats.output_records, reference.size());
}

TEST(Engine, RerunIsPure) {
    auto lines = random_lines(300, 14);
    Engine engine(EngineConfig{.workers = 3});
    EXPECT_EQ(engine.run_stage(lines, word_count_stage(6)),
              engine.run_stage(lines, word_count_stage(6)));
}

TEST(Engine, MapFailureNamesRecord) {
    auto spec = identity_stage(2);
    spec.name = "explode";
    spec.map_fn = [](const Record& r, std::vector<KeyValue>& out) {
        if (r == "bad-record") {
            throw std::runtime_error("boom");
        }
        out.emplace_back(r, r);
    };
    Engine engine;
    std::vector<Record> input{"ok", "bad-record", "fine"};
    try {
        engine.run_stage(input, spec);
        FAIL() << "expected StageError";
    } catch (const StageError& e) {
        std::string what = e.what();
        EXPECT_NE(what.find("explode"), std::string::npos);
        EXPECT_NE(what.find("#1"), std::string::npos);
        EXPECT_NE(what.find("bad-record"), std::string::npos);
        EXPECT_NE(what.find("boom"), std::string::npos);
    }
}

TEST(Engine, ReduceFailureNamesKey) {
    auto spec = identity_stage(2);
    spec.reduce_fn = [](const std::string& key, std::span<const std::string>,
                        std::vector<Record>&) {
        if (key == "poison") {
            throw std::runtime_error("bad group");
        }
    };
    Engine engine;
    std::vector<Record> input{"a", "poison"};
    EXPECT_THROW(
        {
            try {
                engine.run_stage(input, spec);
            } catch (const StageError& e) {
                EXPECT_NE(std::string(e.what()).find("poison"), std::string::npos);
                throw;
            }
        },
        StageError);
}

TEST(Engine, RejectsZeroPartitions) {
    Engine engine;
    std::vector<Record> input{"a"};
    EXPECT_THROW(engine.run_stage(input, identity_stage(0)), Error);
}

TEST(Codec, RoundTripsFields) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> real(-1e6, 1e6);
    for (int i = 0; i < 200; ++i) {
        std::string s(static_cast<std::size_t>(gen() % 300), '\0');
        for (auto& c : s) {
            c = static_cast<char>(gen());
        }
        auto d = real(gen);
        auto u = gen();
        Encoder enc;
        enc.put(s).put_double(d).put_u64(u);
        Decoder dec(enc.bytes());
        EXPECT_EQ(dec.get(), s);
        EXPECT_EQ(dec.get_double(), d);
        EXPECT_EQ(dec.get_u64(), u);
        EXPECT_TRUE(dec.done());
    }
}

TEST(Codec, TruncatedInputThrows) {
    Encoder enc;
    enc.put("hello");
    auto bytes = enc.bytes();
    bytes.pop_back();
    Decoder dec(bytes);
    EXPECT_THROW(dec.get(), Error);
}
