#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "smdm/engine_core.hpp"
#include "smdm/net.hpp"

namespace smdm {

inline constexpr std::uint16_t kCoordinatorId = 0xFFFF;
inline constexpr std::uint64_t kFlowWindow = 1024; // un-acked frames allowed in flight
inline constexpr std::uint64_t kAckEvery = 256;
inline constexpr std::uint16_t kTraceMarker = 0xFFFF; // state frame carrying a trace

struct PeerTable {
    // worker id -> host:port, workers only (the coordinator has no entry)
    std::map<std::uint16_t, std::pair<std::string, std::uint16_t>> workers;

    std::vector<std::uint16_t> ids() const {
        std::vector<std::uint16_t> out;
        for (const auto& [id, addr] : workers) out.push_back(id);
        return out;
    }
};

// `worker_id host:port` per line; '#' starts a comment.
inline PeerTable parse_peer_table(const std::string& text) {
    PeerTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream fields(line);
        std::string id_token, addr;
        if (!(fields >> id_token)) continue;
        if (!(fields >> addr))
            fail(errc::malformed_line, "peer table line " + std::to_string(line_no) +
                                           " lacks an address",
                 static_cast<std::int64_t>(line_no));
        std::size_t colon = addr.rfind(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 == addr.size())
            fail(errc::malformed_line,
                 "peer address '" + addr + "' is not host:port",
                 static_cast<std::int64_t>(line_no));
        unsigned long id = 0, port = 0;
        try {
            id = std::stoul(id_token);
            port = std::stoul(addr.substr(colon + 1));
        } catch (const std::exception&) {
            fail(errc::malformed_line, "bad number in peer table line " + std::to_string(line_no),
                 static_cast<std::int64_t>(line_no));
        }
        if (id >= kCoordinatorId || port == 0 || port > 0xFFFF)
            fail(errc::malformed_line, "peer id or port out of range at line " +
                                           std::to_string(line_no),
                 static_cast<std::int64_t>(line_no));
        if (table.workers.count(static_cast<std::uint16_t>(id)))
            fail(errc::malformed_line, "duplicate worker id at line " + std::to_string(line_no),
                 static_cast<std::int64_t>(line_no));
        table.workers[static_cast<std::uint16_t>(id)] = {addr.substr(0, colon),
                                                         static_cast<std::uint16_t>(port)};
    }
    if (table.workers.empty()) fail(errc::malformed_line, "peer table names no workers");
    return table;
}

struct NetOptions {
    std::chrono::milliseconds connect_timeout{10000};
    std::chrono::milliseconds run_timeout{60000};
    int listen_fd = -1; // worker only: adopt a pre-bound listening socket
};

namespace detail {

struct NetError {
    std::mutex mu;
    std::exception_ptr first;

    void set(std::exception_ptr e) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = e;
    }

    void rethrow_if_set() {
        std::lock_guard<std::mutex> lock(mu);
        if (first) std::rethrow_exception(first);
    }
};

// One bidirectional TCP link. Senders share the socket under a mutex;
// data-plane frames respect the ack window.
struct Link {
    net::Socket sock;
    std::uint16_t peer = 0;
    std::mutex send_mu;
    std::condition_variable send_cv;
    std::uint64_t sent = 0;
    std::uint64_t acked = 0;
    std::uint64_t received = 0;      // receiver thread only
    std::uint64_t acked_to_peer = 0; // receiver thread only

    void send_frame(std::string_view bytes, bool flow_controlled, net::Deadline deadline,
                    const std::atomic<bool>& stop) {
        std::unique_lock<std::mutex> lock(send_mu);
        if (flow_controlled) {
            if (!send_cv.wait_until(lock, deadline, [&] {
                    return stop.load() || sent - acked < kFlowWindow;
                }))
                fail(errc::timeout, "peer " + std::to_string(peer) + " stopped acknowledging");
            if (stop.load()) fail(errc::engine_failure, "run aborted");
            ++sent;
        }
        sock.write_all(bytes, deadline);
    }

    void on_ack(std::uint64_t count) {
        {
            std::lock_guard<std::mutex> lock(send_mu);
            if (count > acked) acked = count;
        }
        send_cv.notify_all();
    }

    void interrupt() { send_cv.notify_all(); }
};

// Reads one frame; nullopt on clean EOF before any byte.
inline std::optional<Frame> read_frame(const net::Socket& sock, net::Deadline deadline) {
    std::string buf(kFrameHeaderSize, '\0');
    if (!sock.read_exact(buf.data(), kFrameHeaderSize, deadline)) return std::nullopt;
    std::uint32_t len = 0;
    for (std::size_t i = 0; i < 4; ++i)
        len = (len << 8) | static_cast<unsigned char>(buf[kFrameHeaderSize - 4 + i]);
    buf.resize(kFrameHeaderSize + len);
    if (len > 0 && !sock.read_exact(buf.data() + kFrameHeaderSize, len, deadline))
        fail(errc::connection_lost, "peer closed mid-frame");
    auto [frame, consumed] = parse_frame(buf);
    return std::move(frame);
}

inline std::string handshake_frame(std::uint64_t topology_hash, std::uint64_t schema_hash,
                                   std::uint16_t sender) {
    ByteWriter w;
    w.put_u64(topology_hash);
    w.put_u64(schema_hash);
    w.put_u16(sender);
    return encode_frame(FrameKind::handshake, 0, 0, 0, w.bytes());
}

// Validates the peer's hashes against ours and returns the peer's id.
inline std::uint16_t check_handshake(const Frame& frame, std::uint64_t topology_hash,
                                     std::uint64_t schema_hash) {
    if (frame.kind != FrameKind::handshake)
        fail(errc::handshake_mismatch, "expected a handshake frame first");
    ByteReader r(frame.payload, errc::handshake_mismatch);
    std::uint64_t peer_topo = r.get_u64();
    std::uint64_t peer_schema = r.get_u64();
    std::uint16_t peer_id = r.get_u16();
    if (peer_topo != topology_hash)
        fail(errc::handshake_mismatch, "topology hash differs from peer " +
                                           std::to_string(peer_id));
    if (peer_schema != schema_hash)
        fail(errc::handshake_mismatch, "schema hash differs from peer " +
                                           std::to_string(peer_id));
    return peer_id;
}

// Maps a frame's edge to the processor its target partition belongs to.
inline std::uint16_t frame_target_processor(const Topology& topo, std::uint16_t edge) {
    if (edge >= kFeedEdgeBase) {
        std::size_t idx = edge - kFeedEdgeBase;
        if (idx >= topo.sources.size())
            fail(errc::malformed_payload, "unknown feed edge " + std::to_string(edge));
        return topo.sources[idx].processor;
    }
    if (edge >= topo.edges.size())
        fail(errc::malformed_payload, "unknown edge " + std::to_string(edge));
    return topo.edges[edge].to;
}

inline const DatasetSchema& edge_schema(const Topology& topo, std::uint16_t edge) {
    if (edge >= kFeedEdgeBase) return topo.sources[edge - kFeedEdgeBase].schema;
    return topo.edges[edge].schema;
}

} // namespace detail

namespace detail {

// Shared state of one networked participant (worker or coordinator).
class NetRuntime {
public:
    NetRuntime(const Topology& topo, std::uint64_t schema_hash, std::uint16_t self,
               NetOptions options)
        : topo_(&topo), schema_hash_(schema_hash), self_(self), options_(options),
          trace_(DeliveryTrace::for_topology(topo)) {}

    const Topology& topology() const { return *topo_; }
    std::uint16_t self() const { return self_; }
    net::Deadline connect_deadline() const { return start_ + options_.connect_timeout; }
    net::Deadline run_deadline() const { return start_ + options_.run_timeout; }

    Link* link_to(std::uint16_t peer) {
        auto it = links_.find(peer);
        if (it == links_.end())
            fail(errc::engine_failure, "no connection to peer " + std::to_string(peer));
        return it->second.get();
    }

    void add_link(std::unique_ptr<Link> link) {
        std::uint16_t peer = link->peer;
        if (!links_.emplace(peer, std::move(link)).second)
            fail(errc::handshake_mismatch, "peer " + std::to_string(peer) + " connected twice");
    }

    void fail_run(std::exception_ptr e) {
        error_.set(e);
        stop_.store(true);
        for (auto& [id, link] : links_) {
            link->sock.shutdown_fd();
            link->interrupt();
        }
        for (auto& [key, ch] : channels_) ch->poison();
    }

    void rethrow_if_failed() { error_.rethrow_if_set(); }
    const std::atomic<bool>& stop_flag() const { return stop_; }

    std::string my_handshake() const {
        return handshake_frame(topo_->hash(), schema_hash_, self_);
    }

    std::uint16_t expect_handshake(const Frame& f) const {
        return check_handshake(f, topo_->hash(), schema_hash_);
    }

    // data plane --------------------------------------------------------

    void create_channels(const std::vector<UnitId>& local_units) {
        for (UnitId id : local_units)
            for (const auto& [key, schema] : unit_channel_layout(*topo_, id))
                channels_.emplace(key, std::make_unique<InputChannel>(key.edge,
                                                                      key.source_partition));
    }

    InputChannel* channel(const ChannelKey& key) {
        auto it = channels_.find(key);
        if (it == channels_.end())
            fail(errc::engine_failure, "frame misrouted: no local channel for edge " +
                                           std::to_string(key.edge) + " partition " +
                                           std::to_string(key.target_partition));
        return it->second.get();
    }

    void route_incoming(const Frame& frame) {
        frame_target_processor(*topo_, frame.edge_id); // bounds-check the edge id
        std::uint16_t src = seq_source_partition(frame.seq);
        InputChannel* ch = channel({frame.edge_id, frame.target_partition, src});
        if (frame.kind == FrameKind::end_of_stream) {
            if (!frame.payload.empty())
                fail(errc::malformed_payload, "end_of_stream with payload");
            ch->push({true, frame.seq, {}});
        } else {
            Instance inst = decode_instance(frame.payload, edge_schema(*topo_, frame.edge_id));
            ch->push({false, frame.seq, std::move(inst)});
        }
    }

    // Receiver loop over one link; `on_frame` handles role-specific kinds
    // and returns true when it consumed the frame. EOF is clean only once
    // this participant has completed its part of the run.
    template <typename FrameHandler>
    void receive_loop(Link& link, FrameHandler&& on_frame) {
        while (true) {
            std::optional<Frame> frame = read_frame(link.sock, run_deadline());
            if (!frame) {
                if (completed_.load()) return;
                fail(errc::connection_lost,
                     "peer " + std::to_string(link.peer) + " closed before the run finished");
            }
            if (frame->kind == FrameKind::ack) {
                link.on_ack(frame->seq);
                continue;
            }
            link.received += 1;
            if (link.received - link.acked_to_peer >= kAckEvery) {
                link.acked_to_peer = link.received;
                link.send_frame(encode_frame(FrameKind::ack, 0, 0, link.received, {}),
                                /*flow_controlled=*/false, run_deadline(), stop_);
            }
            if (!on_frame(*frame)) {
                if (frame->kind == FrameKind::data || frame->kind == FrameKind::end_of_stream)
                    route_incoming(*frame);
                else
                    fail(errc::malformed_payload, "unexpected frame kind from peer " +
                                                      std::to_string(link.peer));
            }
        }
    }

    void mark_completed() { completed_.store(true); }
    bool completed() const { return completed_.load(); }

    DeliveryTrace& trace() { return trace_; }

    std::map<std::uint16_t, std::unique_ptr<Link>>& links() { return links_; }

private:
    const Topology* topo_;
    std::uint64_t schema_hash_;
    std::uint16_t self_;
    NetOptions options_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
    std::map<std::uint16_t, std::unique_ptr<Link>> links_;
    std::map<ChannelKey, std::unique_ptr<InputChannel>> channels_;
    DeliveryTrace trace_;
    NetError error_;
    std::atomic<bool> stop_{false};
    std::atomic<bool> completed_{false};
};

// Transport that keeps local targets in-process and frames remote ones.
class NetTransport : public Transport {
public:
    NetTransport(NetRuntime& rt, const WorkerAssignment& assignment)
        : rt_(&rt), assignment_(&assignment) {}

    void deliver(std::uint16_t edge, std::uint16_t target_partition, std::uint64_t seq,
                 const Instance& inst) override {
        std::uint16_t owner = owner_of(edge, target_partition);
        if (owner == rt_->self()) {
            rt_->channel({edge, target_partition, seq_source_partition(seq)})
                ->push({false, seq, inst});
            return;
        }
        std::string payload = encode_instance(inst, edge_schema(rt_->topology(), edge));
        rt_->link_to(owner)->send_frame(
            encode_frame(FrameKind::data, edge, target_partition, seq, payload),
            /*flow_controlled=*/true, rt_->run_deadline(), rt_->stop_flag());
    }

    void deliver_eos(std::uint16_t edge, std::uint16_t target_partition,
                     std::uint64_t seq) override {
        std::uint16_t owner = owner_of(edge, target_partition);
        if (owner == rt_->self()) {
            rt_->channel({edge, target_partition, seq_source_partition(seq)})
                ->push({true, seq, {}});
            return;
        }
        rt_->link_to(owner)->send_frame(
            encode_frame(FrameKind::end_of_stream, edge, target_partition, seq, {}),
            /*flow_controlled=*/true, rt_->run_deadline(), rt_->stop_flag());
    }

private:
    std::uint16_t owner_of(std::uint16_t edge, std::uint16_t partition) const {
        UnitId unit{frame_target_processor(rt_->topology(), edge), partition};
        auto it = assignment_->unit_worker.find(unit);
        if (it == assignment_->unit_worker.end())
            fail(errc::engine_failure, "event addressed to an unassigned unit");
        return it->second;
    }

    NetRuntime* rt_;
    const WorkerAssignment* assignment_;
};

} // namespace detail

// Joins a distributed run as one worker: connects the mesh, executes the
// units assigned to this id, then ships their final states to the
// coordinator and waits for it to close the control connection.
inline void run_worker(const Topology& topo, std::uint64_t dataset_schema_hash,
                       std::uint16_t worker_id, const PeerTable& peers,
                       NetOptions options = {}) {
    if (!peers.workers.count(worker_id))
        fail(errc::engine_failure, "worker " + std::to_string(worker_id) +
                                       " is not in the peer table");
    detail::NetRuntime rt(topo, dataset_schema_hash, worker_id, options);

    // listener: adopt the pre-bound socket when given one (tests bind ports
    // ahead of time to avoid races), else bind the peer-table port
    net::Socket listener;
    if (options.listen_fd >= 0) {
        listener = net::Socket(options.listen_fd);
    } else {
        listener = net::listen_on(peers.workers.at(worker_id).second).socket;
    }

    std::vector<std::uint16_t> ids = peers.ids(); // ascending (map order)
    std::size_t my_rank = 0;
    while (ids[my_rank] != worker_id) ++my_rank;

    // dial every lower-ranked worker; they are accepting already or will be
    for (std::size_t r = 0; r < my_rank; ++r) {
        const auto& [host, port] = peers.workers.at(ids[r]);
        auto link = std::make_unique<detail::Link>();
        link->sock = net::dial(host, port, rt.connect_deadline());
        net::enable_nodelay(link->sock);
        link->sock.write_all(rt.my_handshake(), rt.connect_deadline());
        std::optional<Frame> reply = detail::read_frame(link->sock, rt.connect_deadline());
        if (!reply) fail(errc::connection_lost, "peer closed during handshake");
        std::uint16_t peer = rt.expect_handshake(*reply);
        if (peer != ids[r])
            fail(errc::handshake_mismatch, "dialed worker " + std::to_string(ids[r]) +
                                               " but reached " + std::to_string(peer));
        link->peer = peer;
        rt.add_link(std::move(link));
    }

    // accept the higher-ranked workers plus the coordinator
    std::size_t expected_inbound = (ids.size() - 1 - my_rank) + 1;
    for (std::size_t i = 0; i < expected_inbound; ++i) {
        auto link = std::make_unique<detail::Link>();
        link->sock = net::accept_one(listener, rt.connect_deadline());
        net::enable_nodelay(link->sock);
        std::optional<Frame> hello = detail::read_frame(link->sock, rt.connect_deadline());
        if (!hello) fail(errc::connection_lost, "peer closed during handshake");
        link->peer = rt.expect_handshake(*hello);
        link->sock.write_all(rt.my_handshake(), rt.connect_deadline());
        rt.add_link(std::move(link));
    }
    detail::Link* coordinator = rt.link_to(kCoordinatorId);

    WorkerAssignment assignment = compute_assignment(topo, ids);
    std::vector<UnitId> my_units = assignment.units_of(worker_id);
    rt.create_channels(my_units);

    detail::NetTransport transport(rt, assignment);
    std::vector<std::unique_ptr<Unit>> units;
    for (UnitId id : my_units) {
        auto unit = std::make_unique<Unit>(topo, id, transport, rt.trace());
        for (const auto& [key, schema] : unit_channel_layout(topo, id))
            unit->attach_channel(rt.channel(key), schema);
        units.push_back(std::move(unit));
    }

    // one receiver per link; the coordinator's is joined first so worker
    // links stay open until the whole run has been collected
    std::thread coordinator_rx;
    std::vector<std::thread> worker_rx;
    for (auto& [id, link] : rt.links()) {
        detail::Link* l = link.get();
        std::thread t([&rt, l] {
            try {
                rt.receive_loop(*l, [](const Frame&) { return false; });
            } catch (...) {
                rt.fail_run(std::current_exception());
            }
        });
        if (id == kCoordinatorId)
            coordinator_rx = std::move(t);
        else
            worker_rx.push_back(std::move(t));
    }
    std::vector<std::thread> unit_threads;
    for (auto& unit : units) {
        Unit* u = unit.get();
        unit_threads.emplace_back([&rt, u] {
            try {
                while (!u->finished()) u->step(/*block=*/true, rt.run_deadline());
            } catch (...) {
                rt.fail_run(std::current_exception());
            }
        });
    }
    for (auto& t : unit_threads) t.join();

    // ship states and the delivery trace, then wait for the coordinator to
    // end the session by closing its connection
    try {
        rt.rethrow_if_failed();
        std::uint64_t seq = 0;
        for (auto& unit : units) {
            ByteWriter w;
            w.put_u16(unit->id().processor);
            w.put_u16(unit->id().partition);
            w.put_bytes(unit->logic().state());
            coordinator->send_frame(
                encode_frame(FrameKind::state_transfer, 0, 0, seq++, w.bytes()),
                /*flow_controlled=*/true, rt.run_deadline(), rt.stop_flag());
        }
        ByteWriter w;
        w.put_u16(kTraceMarker);
        w.put_u16(0);
        rt.trace().save(w);
        coordinator->send_frame(encode_frame(FrameKind::state_transfer, 0, 0, seq++, w.bytes()),
                                /*flow_controlled=*/true, rt.run_deadline(), rt.stop_flag());
        rt.mark_completed();
    } catch (...) {
        rt.fail_run(std::current_exception());
    }

    if (coordinator_rx.joinable()) coordinator_rx.join();
    // the coordinator has closed (or the run failed): worker links carry no
    // further traffic, so closing them lets every peer's receiver drain
    for (auto& [id, link] : rt.links())
        if (id != kCoordinatorId) link->sock.shutdown_fd();
    for (auto& t : worker_rx) t.join();
    rt.rethrow_if_failed();
}

// Drives a distributed run: dials every worker, validates handshakes,
// streams the external sources in, and collects final states and traces.
inline RunResult run_coordinator(const Topology& topo, std::uint64_t dataset_schema_hash,
                                 const std::map<std::string, std::vector<Instance>>& sources,
                                 const PeerTable& peers, NetOptions options = {}) {
    for (const Topology::SourceInfo& s : topo.sources)
        if (!sources.count(topo.processors[s.processor].name))
            fail(errc::engine_failure,
                 "source '" + topo.processors[s.processor].name + "' is not bound");

    detail::NetRuntime rt(topo, dataset_schema_hash, kCoordinatorId, options);
    std::vector<std::uint16_t> ids = peers.ids();
    WorkerAssignment assignment = compute_assignment(topo, ids);

    for (std::uint16_t id : ids) {
        const auto& [host, port] = peers.workers.at(id);
        auto link = std::make_unique<detail::Link>();
        link->sock = net::dial(host, port, rt.connect_deadline());
        net::enable_nodelay(link->sock);
        link->sock.write_all(rt.my_handshake(), rt.connect_deadline());
        std::optional<Frame> reply = detail::read_frame(link->sock, rt.connect_deadline());
        if (!reply) fail(errc::connection_lost, "worker closed during handshake");
        std::uint16_t peer = rt.expect_handshake(*reply);
        if (peer != id)
            fail(errc::handshake_mismatch, "dialed worker " + std::to_string(id) +
                                               " but reached " + std::to_string(peer));
        link->peer = peer;
        rt.add_link(std::move(link));
    }

    // collection state
    std::mutex collect_mu;
    std::condition_variable collect_cv;
    std::map<UnitId, std::string> states;
    std::size_t traces_seen = 0;
    DeliveryTrace merged = DeliveryTrace::for_topology(topo);
    const std::size_t expected_states = topo.units().size();
    const std::size_t expected_traces = ids.size();

    std::vector<std::thread> threads;
    for (auto& [id, link] : rt.links()) {
        detail::Link* l = link.get();
        threads.emplace_back([&, l] {
            try {
                rt.receive_loop(*l, [&](const Frame& frame) {
                    if (frame.kind != FrameKind::state_transfer) return false;
                    ByteReader r(frame.payload, errc::malformed_payload);
                    std::uint16_t proc = r.get_u16();
                    std::uint16_t part = r.get_u16();
                    std::lock_guard<std::mutex> lock(collect_mu);
                    if (proc == kTraceMarker) {
                        merged.merge(DeliveryTrace::load(r));
                        ++traces_seen;
                    } else {
                        states[{proc, part}] =
                            std::string(r.get_bytes(r.remaining()));
                    }
                    collect_cv.notify_all();
                    return true;
                });
            } catch (...) {
                rt.fail_run(std::current_exception());
                collect_cv.notify_all();
            }
        });
    }

    try {
        // stream the sources: round-robin over partitions, one sequence
        // counter per feed edge, end_of_stream last
        for (const Topology::SourceInfo& s : topo.sources) {
            const std::vector<Instance>& stream =
                sources.at(topo.processors[s.processor].name);
            std::uint16_t parts = topo.processors[s.processor].parallelism;
            std::uint64_t counter = 0;
            for (std::size_t i = 0; i < stream.size(); ++i) {
                std::uint16_t target = static_cast<std::uint16_t>(i % parts);
                std::uint16_t owner = assignment.unit_worker.at({s.processor, target});
                std::string payload = encode_instance(stream[i], s.schema);
                rt.link_to(owner)->send_frame(
                    encode_frame(FrameKind::data, s.feed_edge, target,
                                 pack_seq(0, counter++), payload),
                    /*flow_controlled=*/true, rt.run_deadline(), rt.stop_flag());
            }
            for (std::uint16_t target = 0; target < parts; ++target) {
                std::uint16_t owner = assignment.unit_worker.at({s.processor, target});
                rt.link_to(owner)->send_frame(
                    encode_frame(FrameKind::end_of_stream, s.feed_edge, target,
                                 pack_seq(0, counter++), {}),
                    /*flow_controlled=*/true, rt.run_deadline(), rt.stop_flag());
            }
        }

        // wait for every state and trace
        std::unique_lock<std::mutex> lock(collect_mu);
        bool done = collect_cv.wait_until(lock, rt.run_deadline(), [&] {
            if (rt.stop_flag().load()) return true;
            return states.size() == expected_states && traces_seen == expected_traces;
        });
        if (rt.stop_flag().load()) rt.rethrow_if_failed();
        if (!done) fail(errc::timeout, "workers did not deliver all states in time");
    } catch (...) {
        rt.fail_run(std::current_exception());
        for (auto& t : threads) t.join();
        rt.rethrow_if_failed();
        throw;
    }

    rt.mark_completed();
    for (auto& [id, link] : rt.links()) link->sock.shutdown_fd();
    for (auto& t : threads) t.join();
    rt.rethrow_if_failed();

    RunResult result;
    result.states = std::move(states);
    result.trace = std::move(merged);
    return result;
}

} // namespace smdm
