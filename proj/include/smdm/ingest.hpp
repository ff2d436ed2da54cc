#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

#include "smdm/instance.hpp"
#include "smdm/schema.hpp"

namespace smdm {

inline constexpr char kDefaultDelimiter = ';';
inline constexpr double kPdaysNeverContacted = 999.0;

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

inline std::string_view strip_quotes(std::string_view token) {
    if (token.size() >= 2 && token.front() == '"' && token.back() == '"')
        return token.substr(1, token.size() - 2);
    return token;
}

inline bool parse_double(std::string_view token, double& out) {
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last;
}

inline std::string render_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

} // namespace detail

// One delimited record into a typed Instance. Surrounding double quotes
// are stripped; empty fields are missing; the literal token 'unknown'
// maps to the 'unknown' category where the domain has one and to missing
// everywhere else.
inline Instance parse_record(std::string_view line, const DatasetSchema& schema,
                             char delimiter = kDefaultDelimiter) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> fields = detail::split_fields(line, delimiter);
    if (fields.size() != schema.attribute_count())
        fail(errc::arity_mismatch,
             "expected " + std::to_string(schema.attribute_count()) + " fields, got " +
                 std::to_string(fields.size()),
             static_cast<std::int64_t>(schema.attribute_count()),
             static_cast<std::int64_t>(fields.size()));

    Instance inst;
    inst.cells.resize(schema.attribute_count());
    for (std::size_t i = 0; i < fields.size(); ++i) {
        const AttributeSpec& attr = schema.attributes[i];
        std::string_view token = detail::strip_quotes(fields[i]);
        Cell cell = Cell::missing();

        if (!token.empty()) {
            if (attr.kind == AttrKind::numeric) {
                double v = 0.0;
                if (token == "unknown") {
                    // stays missing
                } else if (detail::parse_double(token, v)) {
                    cell = Cell::number(v);
                } else {
                    fail(errc::unparseable_numeric,
                         "attribute '" + attr.name + "': token '" + std::string(token) + "'");
                }
            } else {
                bool found = false;
                for (std::size_t d = 0; d < attr.domain.size(); ++d) {
                    if (attr.domain[d] == token) {
                        cell = Cell::category(static_cast<std::uint16_t>(d));
                        found = true;
                        break;
                    }
                }
                if (!found) {
                    if (token == "unknown") {
                        // domain without 'unknown': treat as missing
                    } else {
                        fail(errc::unknown_category,
                             "attribute '" + attr.name + "': token '" + std::string(token) + "'");
                    }
                }
            }
        }

        if (i == schema.class_index) {
            if (cell.is_categorical()) inst.label = cell.cat;
        } else {
            inst.cells[i] = cell;
        }
    }
    return inst;
}

// Inverse of parse_record: missing renders empty, categorical renders its
// token, numerics render shortest-round-trip.
inline std::string render_record(const Instance& inst, const DatasetSchema& schema,
                                 char delimiter = kDefaultDelimiter) {
    std::string out;
    for (std::size_t i = 0; i < schema.attribute_count(); ++i) {
        if (i) out += delimiter;
        if (i == schema.class_index) {
            if (inst.label) out += schema.class_attribute().domain[*inst.label];
            continue;
        }
        const Cell& c = inst.cells[i];
        if (c.is_numeric())
            out += detail::render_double(c.num);
        else if (c.is_categorical())
            out += schema.attributes[i].domain[c.cat];
    }
    return out;
}

// pdays = 999 is a sentinel for "never contacted": the cell becomes
// missing and the marker flag is set. Idempotent.
inline Instance normalize_pdays(Instance inst, const DatasetSchema& schema) {
    std::optional<std::size_t> idx = schema.find_attribute("pdays");
    if (!idx || schema.attributes[*idx].kind != AttrKind::numeric)
        fail(errc::no_such_attribute, "schema has no numeric 'pdays' attribute");
    Cell& cell = inst.cells[*idx];
    if (cell.is_numeric() && cell.num == kPdaysNeverContacted) {
        cell = Cell::missing();
        inst.flags |= kFlagNeverContacted;
    }
    return inst;
}

} // namespace smdm
