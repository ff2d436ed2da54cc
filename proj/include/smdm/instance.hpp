#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "smdm/schema.hpp"

namespace smdm {

// Normalization markers carried alongside the cells.
inline constexpr std::uint8_t kFlagNeverContacted = 0x01;

// One attribute value: a real, an index into the attribute's domain, or
// nothing.
struct Cell {
    enum class Kind : std::uint8_t { missing, numeric, categorical };

    Kind kind = Kind::missing;
    double num = 0.0;
    std::uint16_t cat = 0;

    static Cell missing() { return {}; }
    static Cell number(double v) { return Cell{Kind::numeric, v, 0}; }
    static Cell category(std::uint16_t idx) { return Cell{Kind::categorical, 0.0, idx}; }

    bool is_missing() const { return kind == Kind::missing; }
    bool is_numeric() const { return kind == Kind::numeric; }
    bool is_categorical() const { return kind == Kind::categorical; }

    bool operator==(const Cell& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case Kind::missing: return true;
            case Kind::numeric: return num == o.num;
            case Kind::categorical: return cat == o.cat;
        }
        return false;
    }
};

// One record flowing through every stream. Cells are indexed by schema
// attribute position; the class slot stays missing — the label is split
// out so unlabeled scoring and labeled training share one shape.
struct Instance {
    std::vector<Cell> cells;
    std::optional<std::uint16_t> label; // class-domain index
    std::uint8_t flags = 0;

    bool labeled() const { return label.has_value(); }

    bool has_flag(std::uint8_t f) const { return (flags & f) != 0; }

    bool operator==(const Instance& o) const {
        return cells == o.cells && label == o.label && flags == o.flags;
    }
};

// Cheap conformance check: arity, per-cell kind, category bounds.
inline bool conforms(const Instance& inst, const DatasetSchema& schema) {
    if (inst.cells.size() != schema.attribute_count()) return false;
    for (std::size_t i = 0; i < inst.cells.size(); ++i) {
        const Cell& c = inst.cells[i];
        const AttributeSpec& a = schema.attributes[i];
        if (c.is_missing()) continue;
        if (i == schema.class_index) return false; // class travels in `label`
        if (a.kind == AttrKind::numeric && !c.is_numeric()) return false;
        if (a.kind == AttrKind::categorical &&
            (!c.is_categorical() || c.cat >= a.domain.size()))
            return false;
    }
    if (inst.label && *inst.label >= schema.class_cardinality()) return false;
    return true;
}

inline void require_conforms(const Instance& inst, const DatasetSchema& schema) {
    if (!conforms(inst, schema))
        fail(errc::schema_mismatch,
             "instance does not conform to schema '" + schema.name + "'");
}

} // namespace smdm
