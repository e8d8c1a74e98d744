// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#include "windtunnel/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>
#include <unistd.h>

#include "windtunnel/codec.hpp"
#include "windtunnel/hashing.hpp"

namespace windtunnel {
namespace fs = std::filesystem;

namespace {

// Per-stage scratch directory, removed when the stage finishes.
class SpillDir {
public:
    explicit SpillDir(const fs::path& base) : base_(base) {}
    ~SpillDir() {
        if (!path_.empty()) {
            std::error_code ec;
            fs::remove_all(path_, ec);
        }
    }
    SpillDir(const SpillDir&) = delete;
    SpillDir& operator=(const SpillDir&) = delete;

    fs::path file(std::size_t task, std::size_t partition) {
        std::lock_guard lock(mu_);
        if (path_.empty()) {
            static std::atomic<std::uint64_t> counter{0};
            path_ = base_ / ("windtunnel-spill-" + std::to_string(::getpid()) + "-" +
                             std::to_string(counter++));
            fs::create_directories(path_);
        }
        return path_ / (std::to_string(task) + "-" + std::to_string(partition) + ".spill");
    }

private:
    fs::path base_;
    fs::path path_;
    std::mutex mu_;
};

struct MapTask {
    std::vector<std::vector<KeyValue>> buffers;
    std::vector<fs::path> spill_paths; // indexed by partition, empty if never spilled
    std::size_t buffered_bytes = 0;
    std::size_t emitted = 0;
    std::size_t spills = 0;
};

void write_pairs(const fs::path& path, const std::vector<KeyValue>& pairs) {
    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) {
        throw Error("engine: cannot open spill file " + path.string());
    }
    for (const auto& [key, payload] : pairs) {
        Encoder enc;
        enc.put(key).put(payload);
        const auto& bytes = enc.bytes();
        auto len = static_cast<std::uint64_t>(bytes.size());
        out.write(reinterpret_cast<const char*>(&len), sizeof(len));
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    }
    if (!out) {
        throw Error("engine: write failed on spill file " + path.string());
    }
}

void read_pairs(const fs::path& path, std::vector<KeyValue>& into) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error("engine: cannot open spill file " + path.string());
    }
    std::uint64_t len = 0;
    std::string buf;
    while (in.read(reinterpret_cast<char*>(&len), sizeof(len))) {
        buf.resize(len);
        if (!in.read(buf.data(), static_cast<std::streamsize>(len))) {
            throw Error("engine: truncated spill file " + path.string());
        }
        Decoder dec(buf);
        std::string key(dec.get());
        std::string payload(dec.get());
        into.emplace_back(std::move(key), std::move(payload));
    }
}

} // namespace

Engine::Engine(EngineConfig config) : config_(std::move(config)) {
    workers_ = config_.workers;
    if (workers_ == 0) {
        workers_ = std::max(1u, std::thread::hardware_concurrency());
    }
    if (config_.tmp_dir.empty()) {
        config_.tmp_dir = fs::temp_directory_path();
    }
}

void Engine::parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) const {
    if (n == 0) {
        return;
    }
    std::vector<std::exception_ptr> errors(n);
    auto threads = std::min(workers_, n);
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (auto i = next++; i < n; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    // Lowest index wins so the reported failure does not depend on scheduling.
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
}

std::vector<Record> Engine::run_stage(std::span<const Record> input, const StageSpec& spec,
                                      StageStats* stats) const {
    if (spec.partition_count == 0) {
        throw Error("engine: stage '" + spec.name + "' has partition_count 0");
    }
    const auto partitions = spec.partition_count;
    const auto task_count = std::max<std::size_t>(1, std::min(workers_, input.size()));
    const auto task_budget = std::max<std::size_t>(1, config_.memory_budget / task_count);
    const auto chunk = (input.size() + task_count - 1) / std::max<std::size_t>(1, task_count);

    SpillDir spill_dir(config_.tmp_dir);
    std::vector<MapTask> tasks(task_count);

    auto spill = [&](std::size_t t) {
        auto& task = tasks[t];
        for (std::size_t p = 0; p < partitions; ++p) {
            if (task.buffers[p].empty()) {
                continue;
            }
            auto& path = task.spill_paths[p];
            if (path.empty()) {
                path = spill_dir.file(t, p);
            }
            write_pairs(path, task.buffers[p]);
            task.buffers[p].clear();
            task.buffers[p].shrink_to_fit();
        }
        task.buffered_bytes = 0;
        ++task.spills;
    };

    parallel_for(task_count, [&](std::size_t t) {
        auto& task = tasks[t];
        task.buffers.resize(partitions);
        task.spill_paths.resize(partitions);
        std::vector<KeyValue> emitted;
        auto begin = std::min(input.size(), t * chunk);
        auto end = std::min(input.size(), begin + chunk);
        for (auto i = begin; i < end; ++i) {
            emitted.clear();
            try {
                spec.map_fn(input[i], emitted);
            } catch (const std::exception& e) {
                throw StageError("stage '" + spec.name + "': map failed on record #" +
                                 std::to_string(i) + " [" + describe_record(input[i]) +
                                 "]: " + e.what());
            }
            for (auto& kv : emitted) {
                auto p = fnv1a64(kv.first) % partitions;
                task.buffered_bytes += kv.first.size() + kv.second.size() + 2 * sizeof(void*);
                task.buffers[p].push_back(std::move(kv));
                ++task.emitted;
            }
            if (task.buffered_bytes > task_budget) {
                spill(t);
            }
        }
    });

    std::vector<std::vector<Record>> outputs(partitions);
    std::vector<std::size_t> groups(partitions, 0);
    parallel_for(partitions, [&](std::size_t p) {
        std::vector<KeyValue> pairs;
        for (std::size_t t = 0; t < task_count; ++t) {
            if (!tasks[t].spill_paths[p].empty()) {
                read_pairs(tasks[t].spill_paths[p], pairs);
            }
            auto& buf = tasks[t].buffers[p];
            std::move(buf.begin(), buf.end(), std::back_inserter(pairs));
            buf.clear();
        }
        std::sort(pairs.begin(), pairs.end());

        std::vector<std::string> payloads;
        auto& out = outputs[p];
        for (std::size_t i = 0; i < pairs.size();) {
            auto j = i;
            payloads.clear();
            while (j < pairs.size() && pairs[j].first == pairs[i].first) {
                payloads.push_back(std::move(pairs[j].second));
                ++j;
            }
            try {
                spec.reduce_fn(pairs[i].first, payloads, out);
            } catch (const std::exception& e) {
                throw StageError("stage '" + spec.name + "': reduce failed for key [" +
                                 describe_record(pairs[i].first) + "]: " + e.what());
            }
            ++groups[p];
            i = j;
        }
    });

    std::vector<Record> result;
    std::size_t total = 0;
    for (const auto& o : outputs) {
        total += o.size();
    }
    result.reserve(total);
    for (auto& o : outputs) {
        std::move(o.begin(), o.end(), std::back_inserter(result));
    }
    std::sort(result.begin(), result.end());

    if (stats != nullptr) {
        stats->input_records = input.size();
        stats->shuffled_pairs = 0;
        stats->spill_files = 0;
        for (const auto& t : tasks) {
            stats->shuffled_pairs += t.emitted;
            stats->spill_files += static_cast<std::size_t>(
                std::count_if(t.spill_paths.begin(), t.spill_paths.end(),
                              [](const fs::path& sp) { return !sp.empty(); }));
        }
        stats->key_groups = 0;
        for (auto g : groups) {
            stats->key_groups += g;
        }
        stats->output_records = result.size();
    }
    return result;
}

} // namespace windtunnel
