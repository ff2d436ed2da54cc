#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "smdm/bytes.hpp"
#include "smdm/instance.hpp"
#include "smdm/schema.hpp"

namespace smdm {

inline constexpr std::string_view kWireMagic = "SMDM";
inline constexpr std::uint8_t kWireVersion = 0x01;
inline constexpr std::size_t kFrameHeaderSize = 4 + 1 + 1 + 2 + 2 + 8 + 4;
inline constexpr std::uint16_t kUnlabeled = 0xFFFF;

enum class FrameKind : std::uint8_t {
    handshake = 0x00,
    data = 0x01,
    end_of_stream = 0x02,
    ack = 0x03,
    state_transfer = 0x04,
};

// The wire seq field carries the emitting partition in its top 16 bits so a
// receiver can tell apart senders sharing an edge; the low 48 bits are the
// per-(edge, source-partition) counter.
inline std::uint64_t pack_seq(std::uint16_t source_partition, std::uint64_t counter) {
    return (static_cast<std::uint64_t>(source_partition) << 48) |
           (counter & 0x0000FFFFFFFFFFFFULL);
}

inline std::uint16_t seq_source_partition(std::uint64_t seq) {
    return static_cast<std::uint16_t>(seq >> 48);
}

inline std::uint64_t seq_counter(std::uint64_t seq) { return seq & 0x0000FFFFFFFFFFFFULL; }

struct Frame {
    FrameKind kind = FrameKind::data;
    std::uint16_t edge_id = 0;
    std::uint16_t target_partition = 0;
    std::uint64_t seq = 0;
    std::string payload;

    bool operator==(const Frame&) const = default;
};

struct ContentEvent {
    std::uint16_t edge_id = 0;
    std::uint16_t target_partition = 0;
    std::uint64_t seq = 0;
    FrameKind kind = FrameKind::data; // data or end_of_stream
    std::optional<Instance> payload;

    bool operator==(const ContentEvent&) const = default;
};

// Instance payload: presence bitmap (LSB-first, bit set = present), present
// cells in schema order (numeric f64 BE, categorical u16 BE), label u16
// (0xFFFF = unlabeled), flags u8.
inline std::string encode_instance(const Instance& inst, const DatasetSchema& schema) {
    require_conforms(inst, schema);
    std::size_t attrs = schema.attribute_count();
    ByteWriter w;
    std::string bitmap((attrs + 7) / 8, '\0');
    for (std::size_t a = 0; a < attrs; ++a)
        if (!inst.cells[a].is_missing())
            bitmap[a / 8] = static_cast<char>(bitmap[a / 8] | (1 << (a % 8)));
    w.put_bytes(bitmap);
    for (std::size_t a = 0; a < attrs; ++a) {
        const Cell& c = inst.cells[a];
        if (c.is_missing()) continue;
        if (c.is_numeric())
            w.put_f64(c.num);
        else
            w.put_u16(c.cat);
    }
    w.put_u16(inst.label ? *inst.label : kUnlabeled);
    w.put_u8(inst.flags);
    return w.take();
}

inline Instance decode_instance(std::string_view bytes, const DatasetSchema& schema) {
    ByteReader r(bytes, errc::malformed_payload);
    std::size_t attrs = schema.attribute_count();
    std::string_view bitmap = r.get_bytes((attrs + 7) / 8);
    for (std::size_t bit = attrs; bit < bitmap.size() * 8; ++bit)
        if ((static_cast<unsigned char>(bitmap[bit / 8]) >> (bit % 8)) & 1)
            fail(errc::malformed_payload, "presence bit set past the last attribute");
    Instance inst;
    inst.cells.resize(attrs, Cell::missing());
    for (std::size_t a = 0; a < attrs; ++a) {
        bool present = (static_cast<unsigned char>(bitmap[a / 8]) >> (a % 8)) & 1;
        if (!present) continue;
        if (a == schema.class_index)
            fail(errc::malformed_payload, "class attribute marked present");
        const AttributeSpec& spec = schema.attributes[a];
        if (spec.kind == AttrKind::numeric) {
            inst.cells[a] = Cell::number(r.get_f64());
        } else {
            std::uint16_t idx = r.get_u16();
            if (idx >= spec.domain.size())
                fail(errc::malformed_payload, "category index " + std::to_string(idx) +
                                                  " outside domain of '" + spec.name + "'");
            inst.cells[a] = Cell::category(idx);
        }
    }
    std::uint16_t label = r.get_u16();
    if (label != kUnlabeled) {
        if (label >= schema.class_cardinality())
            fail(errc::malformed_payload, "label " + std::to_string(label) + " out of range");
        inst.label = label;
    }
    inst.flags = r.get_u8();
    if (!r.exhausted()) fail(errc::malformed_payload, "trailing bytes after instance");
    return inst;
}

inline std::string encode_frame(FrameKind kind, std::uint16_t edge_id,
                                std::uint16_t target_partition, std::uint64_t seq,
                                std::string_view payload) {
    ByteWriter w;
    w.put_bytes(kWireMagic);
    w.put_u8(kWireVersion);
    w.put_u8(static_cast<std::uint8_t>(kind));
    w.put_u16(edge_id);
    w.put_u16(target_partition);
    w.put_u64(seq);
    w.put_u32(static_cast<std::uint32_t>(payload.size()));
    w.put_bytes(payload);
    return w.take();
}

// Parses one frame; returns it plus the bytes consumed.
inline std::pair<Frame, std::size_t> parse_frame(std::string_view bytes) {
    ByteReader r(bytes, errc::truncated_frame);
    if (r.get_bytes(4) != kWireMagic) fail(errc::bad_magic, "bad frame magic");
    std::uint8_t version = r.get_u8();
    if (version != kWireVersion)
        fail(errc::unsupported_version, "frame version " + std::to_string(version));
    Frame f;
    std::uint8_t kind = r.get_u8();
    if (kind > static_cast<std::uint8_t>(FrameKind::state_transfer))
        fail(errc::malformed_payload, "unknown frame kind " + std::to_string(kind));
    f.kind = static_cast<FrameKind>(kind);
    f.edge_id = r.get_u16();
    f.target_partition = r.get_u16();
    f.seq = r.get_u64();
    std::uint32_t len = r.get_u32();
    f.payload = std::string(r.get_bytes(len));
    return {std::move(f), bytes.size() - r.remaining()};
}

inline std::string serialize_event(const ContentEvent& event, const DatasetSchema& schema) {
    if (event.kind == FrameKind::data) {
        if (!event.payload) fail(errc::domain_error, "data event without payload");
        return encode_frame(FrameKind::data, event.edge_id, event.target_partition, event.seq,
                            encode_instance(*event.payload, schema));
    }
    if (event.kind == FrameKind::end_of_stream) {
        if (event.payload) fail(errc::domain_error, "end_of_stream must carry no payload");
        return encode_frame(FrameKind::end_of_stream, event.edge_id, event.target_partition,
                            event.seq, {});
    }
    fail(errc::domain_error, "not a content event kind");
}

inline ContentEvent deserialize_event(std::string_view frame_bytes, const DatasetSchema& schema) {
    auto [frame, consumed] = parse_frame(frame_bytes);
    if (consumed != frame_bytes.size())
        fail(errc::malformed_payload, "trailing bytes after frame");
    ContentEvent e;
    e.edge_id = frame.edge_id;
    e.target_partition = frame.target_partition;
    e.seq = frame.seq;
    e.kind = frame.kind;
    if (frame.kind == FrameKind::data) {
        e.payload = decode_instance(frame.payload, schema);
    } else if (frame.kind == FrameKind::end_of_stream) {
        if (!frame.payload.empty())
            fail(errc::malformed_payload, "end_of_stream with payload");
    } else {
        fail(errc::malformed_payload, "not a content event kind");
    }
    return e;
}

// FNV-1a of the key bytes, modulo the partition count — the fixed routing
// rule for key groupings.
inline std::uint16_t key_partition(std::string_view key_bytes, std::uint16_t n) {
    if (n < 1) fail(errc::domain_error, "partition count must be at least 1");
    return static_cast<std::uint16_t>(fnv1a64(key_bytes) % n);
}

// Key bytes for key(attribute) grouping: categorical cells key on their
// token, numerics on their big-endian image, missing cells on empty bytes.
inline std::string cell_key_bytes(const Instance& inst, std::size_t attr,
                                  const DatasetSchema& schema) {
    const Cell& c = inst.cells.at(attr);
    if (c.is_missing()) return {};
    if (c.is_categorical()) return schema.attributes[attr].domain[c.cat];
    ByteWriter w;
    w.put_f64(c.num);
    return w.take();
}

inline std::string id_key_bytes(std::uint64_t seq) {
    ByteWriter w;
    w.put_u64(seq);
    return w.take();
}

} // namespace smdm
