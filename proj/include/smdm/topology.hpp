#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "smdm/bytes.hpp"
#include "smdm/instance.hpp"
#include "smdm/schema.hpp"

namespace smdm {

enum class Grouping : std::uint8_t { shuffle = 0, key_attribute = 1, key_id = 2, broadcast = 3 };

inline const char* grouping_name(Grouping g) {
    switch (g) {
        case Grouping::shuffle: return "shuffle";
        case Grouping::key_attribute: return "key";
        case Grouping::key_id: return "key-id";
        case Grouping::broadcast: return "broadcast";
    }
    return "unknown";
}

// External feed channels use edge ids from this base upward; real edges
// stay below it.
inline constexpr std::uint16_t kFeedEdgeBase = 0xFF00;

struct TopologySpec {
    struct ProcessorDef {
        std::string name;
        std::uint16_t parallelism = 1;
    };
    struct EdgeDef {
        std::string from;
        std::string to;
        Grouping grouping = Grouping::shuffle;
        std::string key_attribute; // key_attribute grouping only
        DatasetSchema schema;      // instances travelling on this edge
    };
    struct SourceDef {
        std::string name;          // processor fed by an external stream
        DatasetSchema schema;
    };

    std::vector<ProcessorDef> processors;
    std::vector<EdgeDef> edges;
    std::vector<SourceDef> sources;
};

class Emitter {
public:
    virtual ~Emitter() = default;
    // out_index selects among the emitting processor's out-edges in
    // declaration order.
    virtual void emit(std::size_t out_index, const Instance& inst) = 0;
};

// Partition-local processor logic; the engine owns threading and delivery.
class ProcessorLogic {
public:
    virtual ~ProcessorLogic() = default;
    virtual void on_start(Emitter&) {}
    virtual void on_event(const Instance& inst, Emitter& out) = 0;
    // Called once all inputs are exhausted, before downstream is closed.
    virtual void on_finish(Emitter&) {}
    // Final state bytes collected by the engine.
    virtual std::string state() const { return {}; }
};

using ProcessorFactory = std::function<std::unique_ptr<ProcessorLogic>(std::uint16_t partition)>;

struct UnitId {
    std::uint16_t processor = 0;
    std::uint16_t partition = 0;

    auto operator<=>(const UnitId&) const = default;
};

class Topology {
public:
    struct ProcessorInfo {
        std::string name;
        std::uint16_t parallelism = 1;
        std::vector<std::uint16_t> out_edges; // declaration order
        std::vector<std::uint16_t> in_edges;  // declaration order
    };
    struct EdgeInfo {
        std::uint16_t from = 0;
        std::uint16_t to = 0;
        Grouping grouping = Grouping::shuffle;
        std::string key_name;
        std::size_t key_attr = 0; // resolved in schema, key_attribute only
        DatasetSchema schema;
    };
    struct SourceInfo {
        std::uint16_t processor = 0;
        std::uint16_t feed_edge = 0;
        DatasetSchema schema;
    };

    std::vector<ProcessorInfo> processors;
    std::vector<EdgeInfo> edges;
    std::vector<SourceInfo> sources;

    std::uint16_t processor_id(const std::string& name) const {
        for (std::size_t i = 0; i < processors.size(); ++i)
            if (processors[i].name == name) return static_cast<std::uint16_t>(i);
        fail(errc::dangling_edge, "no processor named '" + name + "'");
    }

    bool is_source(std::uint16_t proc) const {
        for (const SourceInfo& s : sources)
            if (s.processor == proc) return true;
        return false;
    }

    const SourceInfo& source_for(std::uint16_t proc) const {
        for (const SourceInfo& s : sources)
            if (s.processor == proc) return s;
        fail(errc::engine_failure, "processor is not a source");
    }

    // All (processor, partition) execution units, processor-major.
    std::vector<UnitId> units() const {
        std::vector<UnitId> out;
        for (std::size_t p = 0; p < processors.size(); ++p)
            for (std::uint16_t k = 0; k < processors[p].parallelism; ++k)
                out.push_back({static_cast<std::uint16_t>(p), k});
        return out;
    }

    // Canonical content hash, validated at handshake so every participant
    // runs the same plan.
    std::uint64_t hash() const {
        ByteWriter w;
        w.put_u32(static_cast<std::uint32_t>(processors.size()));
        for (const ProcessorInfo& p : processors) {
            w.put_string(p.name);
            w.put_u16(p.parallelism);
        }
        w.put_u32(static_cast<std::uint32_t>(edges.size()));
        for (const EdgeInfo& e : edges) {
            w.put_u16(e.from);
            w.put_u16(e.to);
            w.put_u8(static_cast<std::uint8_t>(e.grouping));
            w.put_string(e.key_name);
            w.put_u64(schema_hash(e.schema));
        }
        w.put_u32(static_cast<std::uint32_t>(sources.size()));
        for (const SourceInfo& s : sources) {
            w.put_u16(s.processor);
            w.put_u64(schema_hash(s.schema));
        }
        return fnv1a64(w.bytes());
    }

    void bind(const std::string& processor_name, ProcessorFactory factory) {
        factories_[processor_id(processor_name)] = std::move(factory);
    }

    std::unique_ptr<ProcessorLogic> instantiate(std::uint16_t proc, std::uint16_t partition) const {
        auto it = factories_.find(proc);
        if (it == factories_.end())
            fail(errc::engine_failure,
                 "no logic bound for processor '" + processors[proc].name + "'");
        return it->second(partition);
    }

private:
    std::map<std::uint16_t, ProcessorFactory> factories_;
};

inline Topology build_topology(const TopologySpec& spec) {
    Topology t;
    for (const auto& p : spec.processors) {
        for (const auto& existing : t.processors)
            if (existing.name == p.name)
                fail(errc::duplicate_processor, "processor '" + p.name + "' declared twice");
        if (p.parallelism < 1)
            fail(errc::domain_error, "parallelism of '" + p.name + "' must be at least 1");
        t.processors.push_back({p.name, p.parallelism, {}, {}});
    }

    auto find_proc = [&](const std::string& name) -> std::uint16_t {
        for (std::size_t i = 0; i < t.processors.size(); ++i)
            if (t.processors[i].name == name) return static_cast<std::uint16_t>(i);
        fail(errc::dangling_edge, "edge endpoint '" + name + "' is not a declared processor");
    };

    if (spec.edges.size() >= kFeedEdgeBase)
        fail(errc::domain_error, "too many edges");
    for (const auto& e : spec.edges) {
        Topology::EdgeInfo info;
        info.from = find_proc(e.from);
        info.to = find_proc(e.to);
        info.grouping = e.grouping;
        info.key_name = e.key_attribute;
        info.schema = e.schema;
        validate_schema(info.schema);
        if (e.grouping == Grouping::key_attribute) {
            auto idx = info.schema.find_attribute(e.key_attribute);
            if (!idx)
                fail(errc::no_such_attribute,
                     "key attribute '" + e.key_attribute + "' not in edge schema");
            info.key_attr = *idx;
        }
        std::uint16_t id = static_cast<std::uint16_t>(t.edges.size());
        t.processors[info.from].out_edges.push_back(id);
        t.processors[info.to].in_edges.push_back(id);
        t.edges.push_back(std::move(info));
    }

    if (spec.sources.empty()) fail(errc::unreachable_processor, "topology declares no sources");
    if (spec.sources.size() > 0xFF) fail(errc::domain_error, "too many sources");
    for (const auto& s : spec.sources) {
        Topology::SourceInfo info;
        info.processor = find_proc(s.name);
        info.feed_edge = static_cast<std::uint16_t>(kFeedEdgeBase + t.sources.size());
        info.schema = s.schema;
        validate_schema(info.schema);
        for (const auto& existing : t.sources)
            if (existing.processor == info.processor)
                fail(errc::duplicate_processor, "source '" + s.name + "' bound twice");
        t.sources.push_back(std::move(info));
    }

    // cycle check: Kahn's algorithm over the edge graph
    std::vector<std::size_t> indegree(t.processors.size(), 0);
    for (const auto& e : t.edges) ++indegree[e.to];
    std::vector<std::uint16_t> ready;
    for (std::size_t p = 0; p < t.processors.size(); ++p)
        if (indegree[p] == 0) ready.push_back(static_cast<std::uint16_t>(p));
    std::size_t visited = 0;
    while (!ready.empty()) {
        std::uint16_t p = ready.back();
        ready.pop_back();
        ++visited;
        for (std::uint16_t e : t.processors[p].out_edges)
            if (--indegree[t.edges[e].to] == 0) ready.push_back(t.edges[e].to);
    }
    if (visited != t.processors.size())
        fail(errc::cycle_detected, "edge graph contains a cycle");

    // reachability from the sources
    std::vector<bool> reachable(t.processors.size(), false);
    std::vector<std::uint16_t> frontier;
    for (const auto& s : t.sources) {
        reachable[s.processor] = true;
        frontier.push_back(s.processor);
    }
    while (!frontier.empty()) {
        std::uint16_t p = frontier.back();
        frontier.pop_back();
        for (std::uint16_t e : t.processors[p].out_edges)
            if (!reachable[t.edges[e].to]) {
                reachable[t.edges[e].to] = true;
                frontier.push_back(t.edges[e].to);
            }
    }
    for (std::size_t p = 0; p < t.processors.size(); ++p)
        if (!reachable[p])
            fail(errc::unreachable_processor,
                 "processor '" + t.processors[p].name + "' is fed by no source");

    return t;
}

struct WorkerAssignment {
    std::vector<std::uint16_t> worker_ids;       // ascending
    std::map<UnitId, std::uint16_t> unit_worker; // complete over topology units

    std::vector<UnitId> units_of(std::uint16_t worker) const {
        std::vector<UnitId> out;
        for (const auto& [unit, w] : unit_worker)
            if (w == worker) out.push_back(unit);
        return out;
    }
};

// Deterministic placement: units in processor-major order, dealt round-robin
// over the workers in ascending id order. Every participant derives the
// same map, so only the topology hash needs agreement.
inline WorkerAssignment compute_assignment(const Topology& topology,
                                           std::vector<std::uint16_t> worker_ids) {
    if (worker_ids.empty()) fail(errc::engine_failure, "no workers to assign to");
    std::sort(worker_ids.begin(), worker_ids.end());
    if (std::adjacent_find(worker_ids.begin(), worker_ids.end()) != worker_ids.end())
        fail(errc::engine_failure, "duplicate worker id");
    WorkerAssignment a;
    a.worker_ids = worker_ids;
    std::vector<UnitId> units = topology.units();
    for (std::size_t j = 0; j < units.size(); ++j)
        a.unit_worker[units[j]] = worker_ids[j % worker_ids.size()];
    return a;
}

} // namespace smdm
