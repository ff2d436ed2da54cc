#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "smdm/ingest.hpp"
#include "smdm/schema.hpp"
#include "smdm/synth.hpp"

using namespace smdm;

namespace {

const char* kSampleLine =
    "56;\"housemaid\";\"married\";\"basic.4y\";\"no\";\"no\";\"no\";\"telephone\";\"may\";"
    "\"mon\";261;1;999;0;\"nonexistent\";1.1;93.994;-36.4;4.857;5191.0;\"no\"";

std::vector<std::string> dom(std::initializer_list<const char*> vals) {
    return std::vector<std::string>(vals.begin(), vals.end());
}

} // namespace

TEST_CASE("builtin bank schema matches the published attribute table") {
    DatasetSchema s = builtin_bank_marketing_schema();

    REQUIRE(s.attribute_count() == 21);
    CHECK(s.class_index == 20);
    CHECK(s.declared_instance_count == 45111);
    CHECK(s.declared_attribute_count == 11);

    const std::vector<std::string> names = {
        "age",          "job",      "marital",  "education",     "default",
        "housing",      "loan",     "contact",  "month",         "day_of_week",
        "duration",     "campaign", "pdays",    "previous",      "poutcome",
        "emp.var.rate", "cons.price.idx", "cons.conf.idx", "euribor3m", "nr.employed",
        "y"};
    for (std::size_t i = 0; i < names.size(); ++i) CHECK(s.attributes[i].name == names[i]);

    const std::vector<std::string> numerics = {"age",          "duration",       "campaign",
                                               "pdays",        "previous",       "emp.var.rate",
                                               "cons.price.idx", "cons.conf.idx", "euribor3m",
                                               "nr.employed"};
    std::size_t numeric_count = 0;
    for (const AttributeSpec& a : s.attributes)
        if (a.kind == AttrKind::numeric) ++numeric_count;
    CHECK(numeric_count == numerics.size());
    for (const std::string& n : numerics) {
        auto idx = s.find_attribute(n);
        REQUIRE(idx.has_value());
        CHECK(s.attributes[*idx].kind == AttrKind::numeric);
        CHECK(s.attributes[*idx].domain.empty());
    }

    CHECK(s.attributes[2].name == "marital");
    CHECK(s.attributes[2].domain == dom({"divorced", "married", "single", "unknown"}));
    CHECK(s.attributes[12].name == "pdays");
    CHECK(s.attributes[12].kind == AttrKind::numeric);

    CHECK(s.attributes[1].domain ==
          dom({"admin.", "blue-collar", "entrepreneur", "housemaid", "management", "retired",
               "self-employed", "services", "student", "technician", "unemployed", "unknown"}));
    CHECK(s.attributes[3].domain ==
          dom({"basic.4y", "basic.6y", "basic.9y", "high.school", "illiterate",
               "professional.course", "university.degree", "unknown"}));
    for (std::size_t i : {4u, 5u, 6u})
        CHECK(s.attributes[i].domain == dom({"no", "yes", "unknown"}));
    CHECK(s.attributes[7].domain == dom({"cellular", "telephone"}));
    CHECK(s.attributes[8].domain == dom({"jan", "feb", "mar", "apr", "may", "jun", "jul", "aug",
                                         "sep", "oct", "nov", "dec"}));
    CHECK(s.attributes[9].domain == dom({"mon", "tue", "wed", "thu", "fri"}));
    CHECK(s.attributes[14].domain == dom({"failure", "nonexistent", "success"}));
    CHECK(s.class_attribute().name == "y");
    CHECK(s.class_attribute().domain == dom({"no", "yes"}));
}

TEST_CASE("schema definitions parse and validate") {
    SECTION("smallest legal schema") {
        DatasetSchema s = parse_schema("x numeric\ny class {no,yes}", "tiny");
        REQUIRE(s.attribute_count() == 2);
        CHECK(s.class_index == 1);
        CHECK(s.attributes[0].kind == AttrKind::numeric);
        CHECK(s.class_attribute().domain == dom({"no", "yes"}));
    }

    SECTION("comments and blank lines are ignored") {
        DatasetSchema s = parse_schema("# header\n\nx numeric\n# note\ny class {a,b}");
        CHECK(s.attribute_count() == 2);
    }

    SECTION("duplicate attribute") {
        REQUIRE_THROWS_MATCHES(parse_schema("age numeric\nage numeric\ny class {a,b}"), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::duplicate_attribute;
                               }));
    }

    SECTION("no class declaration") {
        REQUIRE_THROWS_MATCHES(parse_schema("x numeric\ny numeric"), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::missing_class_declaration;
                               }));
    }

    SECTION("empty categorical domain") {
        REQUIRE_THROWS_MATCHES(parse_schema("c categorical {}\ny class {a,b}"), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::empty_domain;
                               }));
    }

    SECTION("malformed line") {
        REQUIRE_THROWS_MATCHES(parse_schema("x floating\ny class {a,b}"), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::malformed_line;
                               }));
    }

    SECTION("render then reparse preserves structure") {
        DatasetSchema bank = builtin_bank_marketing_schema();
        DatasetSchema reparsed = parse_schema(render_schema(bank), bank.name);
        REQUIRE(reparsed.attribute_count() == bank.attribute_count());
        CHECK(reparsed.same_structure(bank));
        CHECK(render_schema(reparsed) == render_schema(bank));
    }

    SECTION("hash is stable and content-sensitive") {
        DatasetSchema bank = builtin_bank_marketing_schema();
        CHECK(schema_hash(bank) == schema_hash(builtin_bank_marketing_schema()));
        DatasetSchema renamed = bank;
        renamed.attributes[0].name = "customer_age";
        CHECK(schema_hash(renamed) != schema_hash(bank));
    }
}

TEST_CASE("records parse cell by cell") {
    DatasetSchema bank = builtin_bank_marketing_schema();

    SECTION("a full record") {
        Instance inst = parse_record(kSampleLine, bank);
        REQUIRE(inst.cells.size() == 21);
        CHECK(inst.cells[0] == Cell::number(56.0));    // age
        CHECK(inst.cells[1] == Cell::category(3));     // housemaid
        CHECK(inst.cells[2] == Cell::category(1));     // married
        CHECK(inst.cells[3] == Cell::category(0));     // basic.4y
        CHECK(inst.cells[4] == Cell::category(0));     // default no
        CHECK(inst.cells[7] == Cell::category(1));     // telephone
        CHECK(inst.cells[8] == Cell::category(4));     // may
        CHECK(inst.cells[9] == Cell::category(0));     // mon
        CHECK(inst.cells[10] == Cell::number(261.0));  // duration
        CHECK(inst.cells[11] == Cell::number(1.0));    // campaign
        CHECK(inst.cells[12] == Cell::number(999.0));  // pdays sentinel, untouched here
        CHECK(inst.cells[13] == Cell::number(0.0));    // previous
        CHECK(inst.cells[14] == Cell::category(1));    // nonexistent
        CHECK(inst.cells[16] == Cell::number(93.994));
        CHECK(inst.cells[19] == Cell::number(5191.0));
        CHECK(inst.cells[20].is_missing()); // class travels in the label
        REQUIRE(inst.labeled());
        CHECK(*inst.label == 0); // no
        CHECK(inst.flags == 0);
    }

    SECTION("wrong field count") {
        std::string short_line(kSampleLine);
        short_line.resize(short_line.rfind(';')); // drop the class field
        try {
            parse_record(short_line, bank);
            FAIL("expected arity_mismatch");
        } catch (const Error& e) {
            CHECK(e.code() == errc::arity_mismatch);
            CHECK(e.detail_a() == 21);
            CHECK(e.detail_b() == 20);
        }
    }

    SECTION("token outside a categorical domain") {
        std::string bad(kSampleLine);
        std::size_t at = bad.find("\"may\"");
        bad.replace(at, 5, "\"mars\"");
        try {
            parse_record(bad, bank);
            FAIL("expected unknown_category");
        } catch (const Error& e) {
            CHECK(e.code() == errc::unknown_category);
            CHECK(std::string(e.what()).find("month") != std::string::npos);
            CHECK(std::string(e.what()).find("mars") != std::string::npos);
        }
    }

    SECTION("unparseable numeric") {
        std::string bad(kSampleLine);
        bad.replace(0, 2, "x!");
        try {
            parse_record(bad, bank);
            FAIL("expected unparseable_numeric");
        } catch (const Error& e) {
            CHECK(e.code() == errc::unparseable_numeric);
        }
    }

    SECTION("empty fields are missing") {
        std::string gappy(kSampleLine);
        gappy.replace(0, 2, ""); // blank out age
        Instance inst = parse_record(gappy, bank);
        CHECK(inst.cells[0].is_missing());
    }

    SECTION("'unknown' is a category only where the domain has one") {
        // marital's domain contains 'unknown'; month's does not.
        std::string line(kSampleLine);
        std::size_t at = line.find("\"married\"");
        line.replace(at, 9, "\"unknown\"");
        Instance inst = parse_record(line, bank);
        CHECK(inst.cells[2] == Cell::category(3));

        at = line.find("\"may\"");
        line.replace(at, 5, "\"unknown\"");
        inst = parse_record(line, bank);
        CHECK(inst.cells[8].is_missing());
    }
}

TEST_CASE("parse/render round-trips every generated record") {
    DatasetSchema bank = builtin_bank_marketing_schema();
    std::vector<Instance> instances = synth_campaign_stream(500, 11, 0.2);
    // mix in missing cells and an unlabeled record
    instances[3].cells[0] = Cell::missing();
    instances[4].cells[14] = Cell::missing();
    instances[5].label.reset();
    for (const Instance& inst : instances) {
        std::string line = render_record(inst, bank);
        Instance back = parse_record(line, bank);
        CHECK(back.cells == inst.cells);
        CHECK(back.label == inst.label);
        CHECK(render_record(back, bank) == line);
    }
}

TEST_CASE("pdays sentinel normalization") {
    DatasetSchema bank = builtin_bank_marketing_schema();
    Instance sample = parse_record(kSampleLine, bank);

    SECTION("999 becomes missing plus the marker flag") {
        Instance n = normalize_pdays(sample, bank);
        CHECK(n.cells[12].is_missing());
        CHECK(n.has_flag(kFlagNeverContacted));
    }

    SECTION("other values pass through") {
        Instance contacted = sample;
        contacted.cells[12] = Cell::number(3.0);
        Instance n = normalize_pdays(contacted, bank);
        CHECK(n.cells[12] == Cell::number(3.0));
        CHECK_FALSE(n.has_flag(kFlagNeverContacted));
        CHECK(n == contacted);
    }

    SECTION("already-missing pdays stays put, flag untouched") {
        Instance missing = sample;
        missing.cells[12] = Cell::missing();
        Instance n = normalize_pdays(missing, bank);
        CHECK(n.cells[12].is_missing());
        CHECK_FALSE(n.has_flag(kFlagNeverContacted));
    }

    SECTION("idempotent") {
        Instance once = normalize_pdays(sample, bank);
        Instance twice = normalize_pdays(once, bank);
        CHECK(twice == once);
    }

    SECTION("schema without numeric pdays is rejected") {
        DatasetSchema other = parse_schema("x numeric\ny class {a,b}");
        Instance inst;
        inst.cells.resize(2);
        REQUIRE_THROWS_MATCHES(normalize_pdays(inst, other), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::no_such_attribute;
                               }));
    }
}
