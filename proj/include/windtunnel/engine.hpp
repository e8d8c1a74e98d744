// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "windtunnel/error.hpp"

namespace windtunnel {

// A minimal local map / shuffle-by-key / reduce engine.
//
// Records, keys and payloads are opaque byte strings (see codec.hpp). Before
// a reduce runs, the payloads of each key group are sorted by bytes, and the
// stage output is sorted as a whole, so a stage's result does not depend on
// partition count, worker count or spill behaviour.

using Record = std::string;
using KeyValue = std::pair<std::string, std::string>;

using MapFn = std::function<void(const Record&, std::vector<KeyValue>&)>;
using ReduceFn =
    std::function<void(const std::string& key, std::span<const std::string> payloads,
                       std::vector<Record>& out)>;

struct StageSpec {
    std::string name;
    MapFn map_fn;
    ReduceFn reduce_fn;
    std::size_t partition_count = 16;
};

struct EngineConfig {
    /// 0 means std::thread::hardware_concurrency().
    std::size_t workers = 0;
    /// Shuffle bytes held in memory before partitions spill to disk.
    std::size_t memory_budget = std::size_t{512} << 20;
    /// Empty means std::filesystem::temp_directory_path().
    std::filesystem::path tmp_dir;
};

/// Raised when a user map or reduce function throws. The message names the
/// stage and the offending record (map) or key group (reduce).
class StageError : public Error {
public:
    using Error::Error;
};

struct StageStats {
    std::size_t input_records = 0;
    std::size_t shuffled_pairs = 0;
    std::size_t key_groups = 0;
    std::size_t output_records = 0;
    std::size_t spill_files = 0;
};

class Engine {
public:
    Engine() : Engine(EngineConfig{}) {}
    explicit Engine(EngineConfig config);

    const EngineConfig& config() const noexcept { return config_; }
    std::size_t workers() const noexcept { return workers_; }

    std::vector<Record> run_stage(std::span<const Record> input, const StageSpec& spec,
                                  StageStats* stats = nullptr) const;

    /// Runs fn(i) for i in [0, n) across the worker pool.
    void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) const;

private:
    EngineConfig config_;
    std::size_t workers_;
};

} // namespace windtunnel
