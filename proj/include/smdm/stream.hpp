#pragma once

#include <chrono>
#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "smdm/bytes.hpp"
#include "smdm/ingest.hpp"
#include "smdm/instance.hpp"

namespace smdm {

enum class Punctuation : std::uint8_t { data, end_of_stream };

struct StreamEvent {
    std::uint64_t seq_no = 0;
    std::int64_t timestamp_ms = 0; // synthetic, stream-start-relative
    std::optional<Instance> payload;
    Punctuation punctuation = Punctuation::data;
};

struct ReplayConfig {
    double rate = 0.0; // events per second, 0 = unthrottled
    std::optional<std::uint64_t> shuffle_seed;
    std::optional<std::uint64_t> limit;
};

// Single-consumer pull stream: data events, one end_of_stream, then
// nullopt forever.
class InstanceStream {
public:
    virtual ~InstanceStream() = default;
    virtual std::optional<StreamEvent> next() = 0;
};

// Seeded permutation of 0..n-1, bit-identical for a given seed.
inline std::vector<std::uint64_t> fisher_yates_order(std::uint64_t n, std::uint64_t seed) {
    std::vector<std::uint64_t> order(n);
    for (std::uint64_t i = 0; i < n; ++i) order[i] = i;
    SplitMix64 rng(seed);
    for (std::uint64_t i = n; i > 1; --i) {
        std::uint64_t j = rng.next_below(i);
        std::swap(order[i - 1], order[j]);
    }
    return order;
}

namespace detail {

// Emits a fixed vector of instances with replay pacing. Rate control is
// best-effort sleeping; timestamps are the scheduled offsets so that
// results never depend on wall-clock jitter.
class VectorReplayStream final : public InstanceStream {
public:
    VectorReplayStream(std::vector<Instance> instances, ReplayConfig config)
        : instances_(std::move(instances)), config_(config) {
        if (config_.shuffle_seed) {
            std::vector<std::uint64_t> order =
                fisher_yates_order(instances_.size(), *config_.shuffle_seed);
            std::vector<Instance> shuffled;
            shuffled.reserve(instances_.size());
            for (std::uint64_t idx : order) shuffled.push_back(std::move(instances_[idx]));
            instances_ = std::move(shuffled);
        }
        if (config_.limit && *config_.limit < instances_.size())
            instances_.resize(*config_.limit);
    }

    std::optional<StreamEvent> next() override {
        if (done_) return std::nullopt;
        if (next_index_ == 0) start_ = std::chrono::steady_clock::now();

        StreamEvent ev;
        ev.seq_no = next_index_;
        if (next_index_ == instances_.size()) {
            ev.punctuation = Punctuation::end_of_stream;
            ev.timestamp_ms = scheduled_ms(next_index_);
            done_ = true;
            return ev;
        }
        pace(next_index_);
        ev.timestamp_ms = scheduled_ms(next_index_);
        ev.payload = std::move(instances_[next_index_]);
        ++next_index_;
        return ev;
    }

private:
    std::int64_t scheduled_ms(std::uint64_t i) const {
        if (config_.rate <= 0.0) return 0;
        return static_cast<std::int64_t>(static_cast<double>(i) * 1000.0 / config_.rate);
    }

    void pace(std::uint64_t i) const {
        if (config_.rate <= 0.0 || i == 0) return;
        std::this_thread::sleep_until(start_ + std::chrono::milliseconds(scheduled_ms(i)));
    }

    std::vector<Instance> instances_;
    ReplayConfig config_;
    std::uint64_t next_index_ = 0;
    bool done_ = false;
    std::chrono::steady_clock::time_point start_{};
};

} // namespace detail

inline std::unique_ptr<InstanceStream> make_vector_stream(std::vector<Instance> instances,
                                                          ReplayConfig config = {}) {
    return std::make_unique<detail::VectorReplayStream>(std::move(instances), config);
}

// Parses a whole record file eagerly (shuffling needs the record count);
// parse failures carry the 1-based line number.
inline std::vector<Instance> load_records(const std::string& path, const DatasetSchema& schema,
                                          char delimiter = kDefaultDelimiter) {
    std::ifstream in(path);
    if (!in) fail(errc::io_failure, "cannot open '" + path + "'");
    std::vector<Instance> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        try {
            out.push_back(parse_record(line, schema, delimiter));
        } catch (const Error& e) {
            throw Error(e.code(),
                        std::string(e.what()) + " (line " + std::to_string(line_no) + ")",
                        e.detail_a(), static_cast<std::int64_t>(line_no));
        }
    }
    if (in.bad()) fail(errc::io_failure, "read error on '" + path + "'");
    return out;
}

inline std::unique_ptr<InstanceStream> replay_file(const std::string& path,
                                                   const DatasetSchema& schema,
                                                   ReplayConfig config = {},
                                                   char delimiter = kDefaultDelimiter) {
    return make_vector_stream(load_records(path, schema, delimiter), config);
}

// Drains a stream into a vector of data payloads (tests and batch paths).
inline std::vector<Instance> drain(InstanceStream& stream) {
    std::vector<Instance> out;
    while (std::optional<StreamEvent> ev = stream.next()) {
        if (ev->punctuation == Punctuation::end_of_stream) break;
        out.push_back(std::move(*ev->payload));
    }
    return out;
}

} // namespace smdm
