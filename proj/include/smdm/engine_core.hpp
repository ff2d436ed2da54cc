#pragma once

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "smdm/topology.hpp"
#include "smdm/wire.hpp"

namespace smdm {

// Per-edge delivery accounting: emitted counts by source partition,
// received counts and order-sensitive digests by target partition. Both
// engines fill it identically, so equal traces mean equal delivery.
struct DeliveryTrace {
    std::vector<std::vector<std::uint64_t>> emitted;
    std::vector<std::vector<std::uint64_t>> received;
    std::vector<std::vector<std::uint64_t>> digest;

    static DeliveryTrace for_topology(const Topology& t) {
        DeliveryTrace trace;
        trace.emitted.resize(t.edges.size());
        trace.received.resize(t.edges.size());
        trace.digest.resize(t.edges.size());
        for (std::size_t e = 0; e < t.edges.size(); ++e) {
            trace.emitted[e].assign(t.processors[t.edges[e].from].parallelism, 0);
            trace.received[e].assign(t.processors[t.edges[e].to].parallelism, 0);
            trace.digest[e].assign(t.processors[t.edges[e].to].parallelism, kFnvOffsetBasis);
        }
        return trace;
    }

    // Combines per-worker traces; every slot has exactly one writer.
    void merge(const DeliveryTrace& other) {
        if (other.emitted.size() != emitted.size())
            fail(errc::engine_failure, "trace shape mismatch");
        for (std::size_t e = 0; e < emitted.size(); ++e) {
            for (std::size_t p = 0; p < emitted[e].size(); ++p)
                emitted[e][p] += other.emitted[e][p];
            for (std::size_t p = 0; p < received[e].size(); ++p) {
                received[e][p] += other.received[e][p];
                if (other.digest[e][p] != kFnvOffsetBasis) digest[e][p] = other.digest[e][p];
            }
        }
    }

    std::uint64_t edge_emitted(std::size_t e) const {
        std::uint64_t t = 0;
        for (std::uint64_t c : emitted[e]) t += c;
        return t;
    }

    std::uint64_t edge_received(std::size_t e) const {
        std::uint64_t t = 0;
        for (std::uint64_t c : received[e]) t += c;
        return t;
    }

    void save(ByteWriter& w) const {
        w.put_u32(static_cast<std::uint32_t>(emitted.size()));
        for (std::size_t e = 0; e < emitted.size(); ++e) {
            w.put_u32(static_cast<std::uint32_t>(emitted[e].size()));
            for (std::uint64_t c : emitted[e]) w.put_u64(c);
            w.put_u32(static_cast<std::uint32_t>(received[e].size()));
            for (std::uint64_t c : received[e]) w.put_u64(c);
            for (std::uint64_t c : digest[e]) w.put_u64(c);
        }
    }

    static DeliveryTrace load(ByteReader& r) {
        DeliveryTrace trace;
        std::uint32_t edges = r.get_u32();
        trace.emitted.resize(edges);
        trace.received.resize(edges);
        trace.digest.resize(edges);
        for (std::uint32_t e = 0; e < edges; ++e) {
            std::uint32_t n_src = r.get_u32();
            trace.emitted[e].resize(n_src);
            for (auto& c : trace.emitted[e]) c = r.get_u64();
            std::uint32_t n_dst = r.get_u32();
            trace.received[e].resize(n_dst);
            trace.digest[e].resize(n_dst);
            for (auto& c : trace.received[e]) c = r.get_u64();
            for (auto& c : trace.digest[e]) c = r.get_u64();
        }
        return trace;
    }

    bool operator==(const DeliveryTrace&) const = default;
};

struct ChannelEvent {
    bool eos = false;
    std::uint64_t seq = 0;
    Instance inst; // data events only
};

// One FIFO per (edge, source partition) feeding one unit. Multi-producer
// (receiver threads), single consumer (the unit).
class InputChannel {
public:
    InputChannel(std::uint16_t edge, std::uint16_t source_partition)
        : edge_(edge), source_partition_(source_partition) {}

    std::uint16_t edge() const { return edge_; }
    std::uint16_t source_partition() const { return source_partition_; }

    void push(ChannelEvent ev) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            q_.push_back(std::move(ev));
        }
        cv_.notify_one();
    }

    // Aborts a reader blocked in pop — used when another thread fails.
    void poison() {
        {
            std::lock_guard<std::mutex> lock(mu_);
            poisoned_ = true;
        }
        cv_.notify_all();
    }

    // block=false: immediate nullopt when empty. block=true: waits for an
    // event until the deadline, then reports a stalled run.
    std::optional<ChannelEvent> pop(bool block, std::chrono::steady_clock::time_point deadline) {
        std::unique_lock<std::mutex> lock(mu_);
        if (!block) {
            if (poisoned_) fail(errc::engine_failure, "run aborted");
            if (q_.empty()) return std::nullopt;
        } else {
            if (!cv_.wait_until(lock, deadline, [&] { return poisoned_ || !q_.empty(); }))
                fail(errc::timeout, "no event within the run deadline on edge " +
                                        std::to_string(edge_));
            if (poisoned_) fail(errc::engine_failure, "run aborted");
        }
        ChannelEvent ev = std::move(q_.front());
        q_.pop_front();
        return ev;
    }

private:
    std::uint16_t edge_;
    std::uint16_t source_partition_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::deque<ChannelEvent> q_;
    bool poisoned_ = false;
};

// Delivery backend: the local engine pushes straight into channels, the
// networked engine forwards remote targets over TCP.
class Transport {
public:
    virtual ~Transport() = default;
    virtual void deliver(std::uint16_t edge, std::uint16_t target_partition, std::uint64_t seq,
                         const Instance& inst) = 0;
    virtual void deliver_eos(std::uint16_t edge, std::uint16_t target_partition,
                             std::uint64_t seq) = 0;
};

namespace detail {

struct OutEdgeRuntime {
    std::uint16_t edge_id = 0;
    std::uint16_t targets = 1;
    Grouping grouping = Grouping::shuffle;
    std::size_t key_attr = 0;
    const DatasetSchema* schema = nullptr;
    std::uint64_t rr_next = 0;
    std::uint64_t seq_next = 0;
};

} // namespace detail

// Engine-side half of a unit: applies the grouping rule, stamps sequence
// numbers, and records emissions.
class UnitEmitter : public Emitter {
public:
    UnitEmitter(const Topology& topo, UnitId id, Transport& transport, DeliveryTrace& trace)
        : id_(id), transport_(&transport), trace_(&trace) {
        for (std::uint16_t e : topo.processors[id.processor].out_edges) {
            detail::OutEdgeRuntime rt;
            rt.edge_id = e;
            rt.targets = topo.processors[topo.edges[e].to].parallelism;
            rt.grouping = topo.edges[e].grouping;
            rt.key_attr = topo.edges[e].key_attr;
            rt.schema = &topo.edges[e].schema;
            out_.push_back(rt);
        }
    }

    void emit(std::size_t out_index, const Instance& inst) override {
        if (out_index >= out_.size())
            fail(errc::engine_failure, "emit on undeclared out-edge " + std::to_string(out_index));
        detail::OutEdgeRuntime& e = out_[out_index];
        require_conforms(inst, *e.schema);
        switch (e.grouping) {
            case Grouping::shuffle: {
                std::uint16_t t = static_cast<std::uint16_t>(e.rr_next++ % e.targets);
                send(e, t, inst);
                break;
            }
            case Grouping::key_attribute: {
                std::uint16_t t =
                    key_partition(cell_key_bytes(inst, e.key_attr, *e.schema), e.targets);
                send(e, t, inst);
                break;
            }
            case Grouping::key_id: {
                std::uint64_t seq = pack_seq(id_.partition, e.seq_next);
                std::uint16_t t = key_partition(id_key_bytes(seq), e.targets);
                send(e, t, inst);
                break;
            }
            case Grouping::broadcast:
                for (std::uint16_t t = 0; t < e.targets; ++t) send(e, t, inst);
                break;
        }
    }

    // Closes every downstream channel this unit feeds.
    void close_out() {
        for (detail::OutEdgeRuntime& e : out_)
            for (std::uint16_t t = 0; t < e.targets; ++t)
                transport_->deliver_eos(e.edge_id, t, pack_seq(id_.partition, e.seq_next++));
    }

private:
    void send(detail::OutEdgeRuntime& e, std::uint16_t target, const Instance& inst) {
        std::uint64_t seq = pack_seq(id_.partition, e.seq_next++);
        trace_->emitted[e.edge_id][id_.partition] += 1;
        transport_->deliver(e.edge_id, target, seq, inst);
    }

    UnitId id_;
    Transport* transport_;
    DeliveryTrace* trace_;
    std::vector<detail::OutEdgeRuntime> out_;
};

// One (processor, partition): consumes its input channels in fixed
// round-robin order — a Kahn-network read discipline, so the event
// processing order is a pure function of channel contents, never of
// thread or network timing.
class Unit {
public:
    enum class Step { progressed, blocked, finished };

    Unit(const Topology& topo, UnitId id, Transport& transport, DeliveryTrace& trace)
        : topo_(&topo), id_(id), logic_(topo.instantiate(id.processor, id.partition)),
          emitter_(topo, id, transport, trace), trace_(&trace) {}

    UnitId id() const { return id_; }

    void attach_channel(InputChannel* ch, const DatasetSchema* schema) {
        channels_.push_back(ch);
        channel_schemas_.push_back(schema);
        closed_.push_back(false);
        last_seq_.push_back(0);
        has_seq_.push_back(false);
        ++open_;
    }

    bool finished() const { return finished_; }

    Step step(bool block, std::chrono::steady_clock::time_point deadline) {
        if (finished_) return Step::finished;
        if (!started_) {
            started_ = true;
            guard([&] { logic_->on_start(emitter_); });
            return Step::progressed;
        }
        if (open_ == 0) {
            guard([&] { logic_->on_finish(emitter_); });
            emitter_.close_out();
            finished_ = true;
            return Step::finished;
        }
        while (closed_[next_]) next_ = (next_ + 1) % channels_.size();
        std::optional<ChannelEvent> ev = channels_[next_]->pop(block, deadline);
        if (!ev) return Step::blocked;
        check_seq(next_, ev->seq);
        std::size_t current = next_;
        next_ = (next_ + 1) % channels_.size();
        if (ev->eos) {
            closed_[current] = true;
            --open_;
            return Step::progressed;
        }
        record_receipt(current, *ev);
        guard([&] { logic_->on_event(ev->inst, emitter_); });
        return Step::progressed;
    }

    ProcessorLogic& logic() { return *logic_; }

private:
    template <typename F>
    void guard(F&& f) {
        try {
            f();
        } catch (const Error& e) {
            throw Error(e.code(), std::string(e.what()) + context());
        } catch (const std::exception& e) {
            fail(errc::engine_failure, std::string(e.what()) + context());
        }
    }

    std::string context() const {
        return " (processor " + topo_->processors[id_.processor].name + ", partition " +
               std::to_string(id_.partition) + ", seq " + std::to_string(last_context_seq_) + ")";
    }

    void check_seq(std::size_t channel, std::uint64_t seq) {
        last_context_seq_ = seq;
        if (has_seq_[channel] && seq <= last_seq_[channel])
            fail(errc::engine_failure,
                 "sequence went backwards on edge " +
                     std::to_string(channels_[channel]->edge()) + context());
        has_seq_[channel] = true;
        last_seq_[channel] = seq;
    }

    void record_receipt(std::size_t channel, const ChannelEvent& ev) {
        std::uint16_t edge = channels_[channel]->edge();
        if (edge >= kFeedEdgeBase) return; // external feeds are not topology edges
        ByteWriter w;
        w.put_u16(channels_[channel]->source_partition());
        w.put_u64(ev.seq);
        w.put_bytes(encode_instance(ev.inst, *channel_schemas_[channel]));
        trace_->received[edge][id_.partition] += 1;
        trace_->digest[edge][id_.partition] = fnv1a64(w.bytes(), trace_->digest[edge][id_.partition]);
    }

    const Topology* topo_;
    UnitId id_;
    std::unique_ptr<ProcessorLogic> logic_;
    UnitEmitter emitter_;
    DeliveryTrace* trace_;
    std::vector<InputChannel*> channels_;
    std::vector<const DatasetSchema*> channel_schemas_;
    std::vector<bool> closed_;
    std::vector<std::uint64_t> last_seq_;
    std::vector<bool> has_seq_;
    std::size_t open_ = 0;
    std::size_t next_ = 0;
    bool started_ = false;
    bool finished_ = false;
    std::uint64_t last_context_seq_ = 0;
};

// Channel layout shared by both engines: the external feed first, then
// in-edges in declaration order, each fanned out by source partition.
struct ChannelKey {
    std::uint16_t edge = 0;
    std::uint16_t target_partition = 0;
    std::uint16_t source_partition = 0;

    auto operator<=>(const ChannelKey&) const = default;
};

inline std::vector<std::pair<ChannelKey, const DatasetSchema*>> unit_channel_layout(
    const Topology& topo, UnitId id) {
    std::vector<std::pair<ChannelKey, const DatasetSchema*>> out;
    if (topo.is_source(id.processor)) {
        const Topology::SourceInfo& s = topo.source_for(id.processor);
        out.push_back({{s.feed_edge, id.partition, 0}, &s.schema});
    }
    for (std::uint16_t e : topo.processors[id.processor].in_edges) {
        std::uint16_t upstream = topo.processors[topo.edges[e].from].parallelism;
        for (std::uint16_t s = 0; s < upstream; ++s)
            out.push_back({{e, id.partition, s}, &topo.edges[e].schema});
    }
    return out;
}

// Final states plus the delivery trace of one engine run.
struct RunResult {
    std::map<UnitId, std::string> states;
    DeliveryTrace trace;

    const std::string& state_of(const Topology& topo, const std::string& processor,
                                std::uint16_t partition = 0) const {
        auto it = states.find({topo.processor_id(processor), partition});
        if (it == states.end()) fail(errc::engine_failure, "no state for '" + processor + "'");
        return it->second;
    }
};

} // namespace smdm
