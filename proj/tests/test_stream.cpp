#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "smdm/schema.hpp"
#include "smdm/stream.hpp"
#include "smdm/synth.hpp"

using namespace smdm;

namespace {

std::vector<Instance> tiny_records(std::size_t n) {
    std::vector<Instance> out;
    for (std::size_t i = 0; i < n; ++i) {
        Instance inst;
        inst.cells = {Cell::number(static_cast<double>(i)), Cell::missing()};
        inst.label = static_cast<std::uint16_t>(i % 2);
        out.push_back(inst);
    }
    return out;
}

std::vector<StreamEvent> collect(InstanceStream& s) {
    std::vector<StreamEvent> out;
    while (auto ev = s.next()) out.push_back(std::move(*ev));
    return out;
}

struct TempFile {
    std::filesystem::path path;
    explicit TempFile(const std::string& name, const std::string& content) {
        path = std::filesystem::temp_directory_path() / name;
        std::ofstream out(path);
        out << content;
    }
    ~TempFile() { std::filesystem::remove(path); }
};

} // namespace

TEST_CASE("replay emits records in order, then end_of_stream") {
    auto stream = make_vector_stream(tiny_records(3));
    std::vector<StreamEvent> events = collect(*stream);

    REQUIRE(events.size() == 4);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(events[i].seq_no == i);
        CHECK(events[i].punctuation == Punctuation::data);
        REQUIRE(events[i].payload.has_value());
        CHECK(events[i].payload->cells[0] == Cell::number(static_cast<double>(i)));
    }
    CHECK(events[3].punctuation == Punctuation::end_of_stream);
    CHECK_FALSE(events[3].payload.has_value());
    CHECK(events[3].seq_no == 3);
    CHECK_FALSE(stream->next().has_value()); // exhausted for good
}

TEST_CASE("limit truncates the stream") {
    ReplayConfig config;
    config.limit = 1;
    auto stream = make_vector_stream(tiny_records(3), config);
    std::vector<StreamEvent> events = collect(*stream);
    REQUIRE(events.size() == 2);
    CHECK(events[0].punctuation == Punctuation::data);
    CHECK(events[1].punctuation == Punctuation::end_of_stream);
}

TEST_CASE("conservation: data events equal min(count, limit)") {
    for (std::uint64_t limit : {1ull, 5ull, 20ull}) {
        ReplayConfig config;
        config.limit = limit;
        auto stream = make_vector_stream(tiny_records(10), config);
        std::vector<Instance> drained = drain(*stream);
        CHECK(drained.size() == std::min<std::uint64_t>(10, limit));
    }
}

TEST_CASE("seeded shuffling is deterministic and a permutation") {
    ReplayConfig config;
    config.shuffle_seed = 42;

    auto first = make_vector_stream(tiny_records(20), config);
    auto second = make_vector_stream(tiny_records(20), config);
    std::vector<Instance> a = drain(*first);
    std::vector<Instance> b = drain(*second);
    REQUIRE(a.size() == 20);
    CHECK(a == b);

    std::vector<double> values;
    for (const Instance& inst : a) values.push_back(inst.cells[0].num);
    std::sort(values.begin(), values.end());
    for (std::size_t i = 0; i < values.size(); ++i)
        CHECK(values[i] == static_cast<double>(i)); // every record exactly once

    ReplayConfig other;
    other.shuffle_seed = 43;
    auto third = make_vector_stream(tiny_records(20), other);
    CHECK(drain(*third) != a); // a different seed reorders (20! makes collision absurd)
}

TEST_CASE("fisher_yates_order basics") {
    CHECK(fisher_yates_order(0, 7).empty());
    CHECK(fisher_yates_order(1, 7) == std::vector<std::uint64_t>{0});
    CHECK(fisher_yates_order(5, 123) == fisher_yates_order(5, 123));
    CHECK(fisher_yates_order(100, 1) != fisher_yates_order(100, 2));
}

TEST_CASE("fisher_yates_order is a bijection for every n up to 1000") {
    for (std::uint64_t n = 0; n <= 1000; n += (n < 50 ? 1 : 37)) {
        std::vector<std::uint64_t> order = fisher_yates_order(n, n * 2654435761u + 1);
        REQUIRE(order.size() == n);
        std::sort(order.begin(), order.end());
        bool identity = true;
        for (std::uint64_t i = 0; i < n; ++i)
            if (order[i] != i) identity = false;
        CHECK(identity);
    }
}

TEST_CASE("throttled replay takes at least its scheduled span") {
    ReplayConfig config;
    config.rate = 200.0; // 5 ms spacing
    auto stream = make_vector_stream(tiny_records(4), config);
    auto begin = std::chrono::steady_clock::now();
    std::vector<StreamEvent> events = collect(*stream);
    auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - begin);
    REQUIRE(events.size() == 5);
    CHECK(elapsed.count() >= 15); // (n-1)/rate lower bound only
    CHECK(events[1].timestamp_ms == 5);
    CHECK(events[3].timestamp_ms == 15);
}

TEST_CASE("file replay parses, tags errors with line numbers") {
    DatasetSchema schema = parse_schema("x numeric\ny class {no,yes}", "tiny");

    SECTION("well-formed file") {
        TempFile f("smdm_stream_ok.csv", "1;no\n\n2;yes\n3;no\n");
        auto stream = replay_file(f.path.string(), schema);
        std::vector<Instance> records = drain(*stream);
        REQUIRE(records.size() == 3); // blank line skipped
        CHECK(records[1].cells[0] == Cell::number(2.0));
        CHECK(*records[1].label == 1);
    }

    SECTION("parse failure carries the line number") {
        TempFile f("smdm_stream_bad.csv", "1;no\nbogus;yes\n");
        try {
            load_records(f.path.string(), schema);
            FAIL("expected unparseable_numeric");
        } catch (const Error& e) {
            CHECK(e.code() == errc::unparseable_numeric);
            CHECK(e.detail_b() == 2);
            CHECK(std::string(e.what()).find("line 2") != std::string::npos);
        }
    }

    SECTION("missing file") {
        REQUIRE_THROWS_MATCHES(load_records("/nonexistent/nope.csv", schema), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::io_failure;
                               }));
    }
}

TEST_CASE("synthetic campaign stream is deterministic and obeys its rule") {
    std::vector<Instance> a = synth_campaign_stream(1000, 9, 0.0);
    std::vector<Instance> b = synth_campaign_stream(1000, 9, 0.0);
    CHECK(a == b);

    // Noise-free labels follow the generating rule exactly.
    for (const Instance& inst : a) {
        bool expected = inst.cells[10].num > 320.0 && inst.cells[13].num >= 1.0;
        CHECK(*inst.label == (expected ? 1 : 0));
    }

    // At noise 0.25 the flip rate concentrates near 0.25.
    std::vector<Instance> clean = synth_campaign_stream(100000, 5, 0.0);
    std::vector<Instance> noisy = synth_campaign_stream(100000, 5, 0.25);
    std::size_t flipped = 0;
    for (std::size_t i = 0; i < clean.size(); ++i) {
        bool rule = clean[i].cells[10].num > 320.0 && clean[i].cells[13].num >= 1.0;
        if (*noisy[i].label != (rule ? 1 : 0)) ++flipped;
    }
    double rate = static_cast<double>(flipped) / 100000.0;
    CHECK(rate > 0.24);
    CHECK(rate < 0.26);

    DatasetSchema bank = builtin_bank_marketing_schema();
    for (std::size_t i = 0; i < 50; ++i) CHECK(conforms(a[i], bank));
}
