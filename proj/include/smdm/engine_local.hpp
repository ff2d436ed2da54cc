#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "smdm/engine_core.hpp"

namespace smdm {

namespace detail {

class LocalTransport : public Transport {
public:
    using ChannelMap = std::map<ChannelKey, std::unique_ptr<InputChannel>>;

    explicit LocalTransport(ChannelMap& channels) : channels_(&channels) {}

    void deliver(std::uint16_t edge, std::uint16_t target_partition, std::uint64_t seq,
                 const Instance& inst) override {
        channel(edge, target_partition, seq)->push({false, seq, inst});
    }

    void deliver_eos(std::uint16_t edge, std::uint16_t target_partition,
                     std::uint64_t seq) override {
        channel(edge, target_partition, seq)->push({true, seq, {}});
    }

private:
    InputChannel* channel(std::uint16_t edge, std::uint16_t target, std::uint64_t seq) {
        auto it = channels_->find({edge, target, seq_source_partition(seq)});
        if (it == channels_->end())
            fail(errc::engine_failure, "no channel for edge " + std::to_string(edge) +
                                           " partition " + std::to_string(target));
        return it->second.get();
    }

    ChannelMap* channels_;
};

} // namespace detail

// Single-process engine: all units advance cooperatively in a fixed order,
// one event per turn. With the Kahn read discipline this yields one
// canonical execution regardless of scheduling details.
inline RunResult run_local(const Topology& topo,
                           const std::map<std::string, std::vector<Instance>>& sources) {
    for (const Topology::SourceInfo& s : topo.sources)
        if (!sources.count(topo.processors[s.processor].name))
            fail(errc::engine_failure,
                 "source '" + topo.processors[s.processor].name + "' is not bound");
    for (const auto& [name, stream] : sources) {
        std::uint16_t p = topo.processor_id(name);
        if (!topo.is_source(p)) fail(errc::engine_failure, "'" + name + "' is not a source");
    }

    DeliveryTrace trace = DeliveryTrace::for_topology(topo);
    detail::LocalTransport::ChannelMap channels;
    detail::LocalTransport transport(channels);

    std::vector<std::unique_ptr<Unit>> units;
    for (UnitId id : topo.units()) {
        auto unit = std::make_unique<Unit>(topo, id, transport, trace);
        for (const auto& [key, schema] : unit_channel_layout(topo, id)) {
            auto ch = std::make_unique<InputChannel>(key.edge, key.source_partition);
            unit->attach_channel(ch.get(), schema);
            channels.emplace(key, std::move(ch));
        }
        units.push_back(std::move(unit));
    }

    // Feed the sources up front: instances round-robin over partitions, one
    // sequence counter per feed edge, end_of_stream to every partition last.
    for (const Topology::SourceInfo& s : topo.sources) {
        const std::vector<Instance>& stream = sources.at(topo.processors[s.processor].name);
        std::uint16_t parts = topo.processors[s.processor].parallelism;
        std::uint64_t counter = 0;
        for (std::size_t i = 0; i < stream.size(); ++i) {
            require_conforms(stream[i], s.schema);
            std::uint16_t target = static_cast<std::uint16_t>(i % parts);
            transport.deliver(s.feed_edge, target, pack_seq(0, counter++), stream[i]);
        }
        for (std::uint16_t target = 0; target < parts; ++target)
            transport.deliver_eos(s.feed_edge, target, pack_seq(0, counter++));
    }

    const auto deadline = std::chrono::steady_clock::time_point::max();
    while (true) {
        bool progress = false;
        bool all_done = true;
        for (auto& unit : units) {
            if (unit->finished()) continue;
            Unit::Step r = unit->step(/*block=*/false, deadline);
            if (r != Unit::Step::blocked) progress = true;
            if (!unit->finished()) all_done = false;
        }
        if (all_done) break;
        if (!progress) fail(errc::engine_failure, "engine stalled with unfinished units");
    }

    RunResult result;
    result.trace = std::move(trace);
    for (auto& unit : units) result.states[unit->id()] = unit->logic().state();
    return result;
}

} // namespace smdm
