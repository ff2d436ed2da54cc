#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smdm/bytes.hpp"
#include "smdm/error.hpp"

namespace smdm {

enum class AttrKind : std::uint8_t { numeric, categorical };

struct AttributeSpec {
    std::string name;
    AttrKind kind = AttrKind::numeric;
    std::vector<std::string> domain; // categorical only, ordered
    std::string unit_note;

    bool operator==(const AttributeSpec& other) const {
        return name == other.name && kind == other.kind && domain == other.domain;
    }
};

struct DatasetSchema {
    std::string name;
    std::vector<AttributeSpec> attributes;
    std::size_t class_index = 0;
    std::optional<std::int64_t> declared_instance_count;
    std::optional<std::int64_t> declared_attribute_count;

    std::size_t attribute_count() const { return attributes.size(); }

    const AttributeSpec& class_attribute() const { return attributes[class_index]; }

    std::size_t class_cardinality() const { return class_attribute().domain.size(); }

    std::optional<std::size_t> find_attribute(std::string_view attr_name) const {
        for (std::size_t i = 0; i < attributes.size(); ++i)
            if (attributes[i].name == attr_name) return i;
        return std::nullopt;
    }

    // Structural identity: names, kinds, domains and the class position.
    // Dataset name and declared counts are metadata and do not participate.
    bool same_structure(const DatasetSchema& other) const {
        return attributes == other.attributes && class_index == other.class_index;
    }
};

inline void validate_schema(const DatasetSchema& schema) {
    if (schema.attributes.empty())
        fail(errc::missing_class_declaration, "schema has no attributes");
    for (std::size_t i = 0; i < schema.attributes.size(); ++i) {
        const AttributeSpec& a = schema.attributes[i];
        if (a.name.empty()) fail(errc::malformed_line, "attribute with empty name");
        for (std::size_t j = i + 1; j < schema.attributes.size(); ++j)
            if (schema.attributes[j].name == a.name)
                fail(errc::duplicate_attribute, "attribute '" + a.name + "' declared twice");
        if (a.kind == AttrKind::categorical) {
            if (a.domain.empty())
                fail(errc::empty_domain, "categorical attribute '" + a.name + "' has no values");
            for (const std::string& v : a.domain) {
                if (v.empty())
                    fail(errc::empty_domain, "empty category in attribute '" + a.name + "'");
                if (std::count(a.domain.begin(), a.domain.end(), v) != 1)
                    fail(errc::empty_domain,
                         "category '" + v + "' repeated in attribute '" + a.name + "'");
            }
        } else if (!a.domain.empty()) {
            fail(errc::malformed_line, "numeric attribute '" + a.name + "' carries a domain");
        }
    }
    if (schema.class_index >= schema.attributes.size() ||
        schema.class_attribute().kind != AttrKind::categorical)
        fail(errc::missing_class_declaration, "class attribute missing or not categorical");
}

// The 21-attribute bank telemarketing schema shipped as the built-in
// dataset description. The declared counts (45111 instances, 11
// attributes) come from the published characterization table and are
// retained verbatim as metadata; they disagree with the attribute list
// below and are never used for validation.
inline DatasetSchema builtin_bank_marketing_schema() {
    auto num = [](std::string n, std::string note = "") {
        return AttributeSpec{std::move(n), AttrKind::numeric, {}, std::move(note)};
    };
    auto cat = [](std::string n, std::vector<std::string> dom) {
        return AttributeSpec{std::move(n), AttrKind::categorical, std::move(dom), ""};
    };

    DatasetSchema s;
    s.name = "bank-marketing";
    s.attributes = {
        num("age", "years"),
        cat("job", {"admin.", "blue-collar", "entrepreneur", "housemaid", "management",
                    "retired", "self-employed", "services", "student", "technician",
                    "unemployed", "unknown"}),
        cat("marital", {"divorced", "married", "single", "unknown"}),
        cat("education", {"basic.4y", "basic.6y", "basic.9y", "high.school", "illiterate",
                          "professional.course", "university.degree", "unknown"}),
        cat("default", {"no", "yes", "unknown"}),
        cat("housing", {"no", "yes", "unknown"}),
        cat("loan", {"no", "yes", "unknown"}),
        cat("contact", {"cellular", "telephone"}),
        cat("month", {"jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct",
                      "nov", "dec"}),
        cat("day_of_week", {"mon", "tue", "wed", "thu", "fri"}),
        num("duration", "seconds"),
        num("campaign", "contacts"),
        num("pdays", "days; 999 = never contacted"),
        num("previous", "contacts"),
        cat("poutcome", {"failure", "nonexistent", "success"}),
        num("emp.var.rate"),
        num("cons.price.idx"),
        num("cons.conf.idx"),
        num("euribor3m"),
        num("nr.employed"),
        cat("y", {"no", "yes"}),
    };
    s.class_index = 20;
    s.declared_instance_count = 45111;
    s.declared_attribute_count = 11;
    return s;
}

namespace detail {

inline std::string strip(std::string_view s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_list(std::string_view body) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= body.size()) {
        std::size_t comma = body.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(strip(body.substr(start)));
            break;
        }
        out.push_back(strip(body.substr(start, comma - start)));
        start = comma + 1;
    }
    return out;
}

} // namespace detail

// Line-oriented schema definition:
//   <name> numeric
//   <name> categorical {v1,v2,...}
//   <name> class {v1,v2,...}
// '#' lines are comments. Exactly one class declaration is required.
inline DatasetSchema parse_schema(std::string_view text, std::string schema_name = "") {
    DatasetSchema schema;
    schema.name = std::move(schema_name);
    bool have_class = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view raw =
            (eol == std::string_view::npos) ? text.substr(pos) : text.substr(pos, eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        std::string line = detail::strip(raw);
        if (line.empty() || line[0] == '#') continue;

        std::size_t sp = line.find_first_of(" \t");
        if (sp == std::string::npos)
            fail(errc::malformed_line, "expected '<name> <kind>' at line " + std::to_string(line_no),
                 static_cast<std::int64_t>(line_no));
        std::string name = line.substr(0, sp);
        std::string rest = detail::strip(line.substr(sp + 1));

        AttributeSpec attr;
        attr.name = name;
        bool is_class = false;
        if (rest == "numeric") {
            attr.kind = AttrKind::numeric;
        } else if (rest.rfind("categorical", 0) == 0 || rest.rfind("class", 0) == 0) {
            is_class = rest.rfind("class", 0) == 0;
            std::size_t open = rest.find('{');
            std::size_t close = rest.rfind('}');
            if (open == std::string::npos || close == std::string::npos || close < open)
                fail(errc::malformed_line, "expected '{v1,v2,...}' at line " + std::to_string(line_no),
                     static_cast<std::int64_t>(line_no));
            attr.kind = AttrKind::categorical;
            attr.domain = detail::split_list(
                std::string_view(rest).substr(open + 1, close - open - 1));
            for (const std::string& v : attr.domain)
                if (v.empty())
                    fail(errc::empty_domain,
                         "empty category in '" + name + "' at line " + std::to_string(line_no));
            for (std::size_t i = 0; i < attr.domain.size(); ++i)
                for (std::size_t j = i + 1; j < attr.domain.size(); ++j)
                    if (attr.domain[i] == attr.domain[j])
                        fail(errc::empty_domain, "category '" + attr.domain[i] +
                                                     "' repeated in '" + name + "'");
        } else {
            fail(errc::malformed_line, "unknown kind '" + rest + "' at line " + std::to_string(line_no),
                 static_cast<std::int64_t>(line_no));
        }

        for (const AttributeSpec& prev : schema.attributes)
            if (prev.name == attr.name)
                fail(errc::duplicate_attribute, "attribute '" + attr.name + "' declared twice");

        if (is_class) {
            if (have_class)
                fail(errc::malformed_line,
                     "second class declaration at line " + std::to_string(line_no),
                     static_cast<std::int64_t>(line_no));
            have_class = true;
            schema.class_index = schema.attributes.size();
        }
        schema.attributes.push_back(std::move(attr));
    }

    if (!have_class)
        fail(errc::missing_class_declaration, "no 'class' attribute declared");
    validate_schema(schema);
    return schema;
}

// Inverse of parse_schema for the same line format.
inline std::string render_schema(const DatasetSchema& schema) {
    std::string out;
    for (std::size_t i = 0; i < schema.attributes.size(); ++i) {
        const AttributeSpec& a = schema.attributes[i];
        out += a.name;
        if (a.kind == AttrKind::numeric) {
            out += " numeric";
        } else {
            out += (i == schema.class_index) ? " class {" : " categorical {";
            for (std::size_t j = 0; j < a.domain.size(); ++j) {
                if (j) out += ',';
                out += a.domain[j];
            }
            out += '}';
        }
        out += '\n';
    }
    return out;
}

// Canonical byte form used for hashing; independent of metadata fields.
inline std::string schema_canonical_text(const DatasetSchema& schema) {
    std::string out;
    for (const AttributeSpec& a : schema.attributes) {
        out += "A ";
        out += a.name;
        out += (a.kind == AttrKind::numeric) ? " N" : " C";
        for (const std::string& v : a.domain) {
            out += ' ';
            out += v;
        }
        out += '\n';
    }
    out += "class ";
    out += std::to_string(schema.class_index);
    out += '\n';
    return out;
}

inline std::uint64_t schema_hash(const DatasetSchema& schema) {
    return fnv1a64(schema_canonical_text(schema));
}

} // namespace smdm
