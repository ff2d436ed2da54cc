#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "smdm/bytes.hpp"
#include "smdm/ingest.hpp"
#include "smdm/rfm.hpp"
#include "smdm/schema.hpp"
#include "smdm/synth.hpp"

using namespace smdm;

namespace {

std::vector<Transaction> random_transactions(std::size_t n, std::size_t customers,
                                             std::uint64_t seed, std::int64_t horizon) {
    SplitMix64 rng(seed);
    std::vector<Transaction> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Transaction t;
        t.customer_id = "c" + std::to_string(rng.next_below(customers));
        t.at = static_cast<std::int64_t>(rng.next_below(static_cast<std::uint64_t>(horizon)));
        t.amount = rng.next_real(0.0, 500.0);
        out.push_back(std::move(t));
    }
    return out;
}

// Independent O(n·m) oracle: recompute each customer from the full list.
std::map<std::string, RFMVector> brute_force_rfm(const std::vector<Transaction>& txs,
                                                 std::int64_t as_of) {
    std::map<std::string, RFMVector> out;
    for (const Transaction& probe : txs) {
        if (out.count(probe.customer_id)) continue;
        RFMVector v;
        std::int64_t last = 0;
        double sum = 0.0;
        for (const Transaction& t : txs) {
            if (t.customer_id != probe.customer_id) continue;
            v.frequency += 1;
            sum += t.amount;
            last = std::max(last, t.at);
        }
        v.recency = as_of - last;
        v.monetary = sum;
        out[probe.customer_id] = v;
    }
    return out;
}

} // namespace

TEST_CASE("compute_rfm on hand-checked inputs") {
    SECTION("single customer, single transaction") {
        std::map<std::string, RFMVector> rfm =
            compute_rfm({{"alice", 10, 25.0}}, /*as_of=*/17);
        REQUIRE(rfm.size() == 1);
        CHECK(*rfm.at("alice").recency == 7);
        CHECK(rfm.at("alice").frequency == 1);
        CHECK(*rfm.at("alice").monetary == 25.0);
    }

    SECTION("empty input") { CHECK(compute_rfm({}, 100).empty()); }

    SECTION("recency tracks the latest transaction") {
        std::map<std::string, RFMVector> rfm =
            compute_rfm({{"bob", 2, 10.0}, {"bob", 9, 5.0}, {"bob", 4, 1.0}}, 12);
        CHECK(*rfm.at("bob").recency == 3);
        CHECK(rfm.at("bob").frequency == 3);
        CHECK(*rfm.at("bob").monetary == 16.0);
    }

    SECTION("future transaction is rejected") {
        REQUIRE_THROWS_MATCHES(compute_rfm({{"eve", 20, 1.0}}, 17), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::future_transaction;
                               }));
    }
}

TEST_CASE("compute_rfm equals the brute-force oracle") {
    const std::int64_t as_of = 400;
    std::vector<Transaction> txs = random_transactions(1000, 50, 31, as_of);
    std::map<std::string, RFMVector> fast = compute_rfm(txs, as_of);
    std::map<std::string, RFMVector> slow = brute_force_rfm(txs, as_of);

    REQUIRE(fast.size() == slow.size());
    for (const auto& [id, expect] : slow) {
        const RFMVector& got = fast.at(id);
        CHECK(got.recency == expect.recency);
        CHECK(got.frequency == expect.frequency);
        CHECK(std::abs(*got.monetary - *expect.monetary) <= 1e-9);
    }
}

TEST_CASE("adding a transaction moves R, F, M the right way") {
    const std::int64_t as_of = 400;
    std::vector<Transaction> txs = random_transactions(300, 20, 77, as_of);
    std::map<std::string, RFMVector> before = compute_rfm(txs, as_of);

    SplitMix64 rng(99);
    for (int round = 0; round < 50; ++round) {
        Transaction extra{"c" + std::to_string(rng.next_below(20)),
                          static_cast<std::int64_t>(rng.next_below(400)),
                          rng.next_real(0.0, 100.0)};
        std::vector<Transaction> grown = txs;
        grown.push_back(extra);
        std::map<std::string, RFMVector> after = compute_rfm(grown, as_of);
        const RFMVector& a = after.at(extra.customer_id);
        auto it = before.find(extra.customer_id);
        if (it == before.end()) continue;
        CHECK(a.frequency == it->second.frequency + 1);
        CHECK(*a.recency <= *it->second.recency);
        CHECK(*a.monetary >= *it->second.monetary - 1e-12);
    }
}

TEST_CASE("score_rfm buckets each dimension independently") {
    auto vec = [](std::int64_t rec, std::int64_t freq, double mon) {
        RFMVector v;
        v.recency = rec;
        v.frequency = freq;
        v.monetary = mon;
        return v;
    };

    SECTION("two-point frequency split") {
        std::map<std::string, RFMVector> in{{"lo", vec(5, 1, 10.0)}, {"hi", vec(5, 9, 10.0)}};
        std::map<std::string, RFMScore> s = score_rfm(in, 2);
        CHECK(s.at("lo").f_score == 1);
        CHECK(s.at("hi").f_score == 2);
    }

    SECTION("recency is inverted") {
        std::map<std::string, RFMVector> in{{"fresh", vec(3, 1, 1.0)}, {"stale", vec(30, 1, 1.0)}};
        std::map<std::string, RFMScore> s = score_rfm(in, 2);
        CHECK(s.at("fresh").r_score == 2);
        CHECK(s.at("stale").r_score == 1);
    }

    SECTION("ties share the lower bucket") {
        std::map<std::string, RFMVector> in{
            {"a", vec(1, 4, 1.0)}, {"b", vec(1, 4, 1.0)}, {"c", vec(1, 9, 1.0)}};
        std::map<std::string, RFMScore> s = score_rfm(in, 3);
        CHECK(s.at("a").f_score == 1);
        CHECK(s.at("b").f_score == 1);
        CHECK(s.at("c").f_score == 3);
    }

    SECTION("absent monetary pins m_score to 1") {
        RFMVector no_money;
        no_money.recency = 4;
        no_money.frequency = 2;
        std::map<std::string, RFMVector> in{{"card", vec(4, 2, 50.0)}, {"cash", no_money}};
        std::map<std::string, RFMScore> s = score_rfm(in, 2);
        CHECK(s.at("cash").m_score == 1);
        CHECK(s.at("card").m_score >= 1);
    }

    SECTION("more buckets than customers") {
        std::map<std::string, RFMVector> in{{"only", vec(1, 1, 1.0)}, {"pair", vec(2, 2, 2.0)}};
        REQUIRE_THROWS_MATCHES(score_rfm(in, 3), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::degenerate_quantiles;
                               }));
    }

    SECTION("empty input") {
        REQUIRE_THROWS_MATCHES(score_rfm({}, 2), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::empty_input;
                               }));
    }

    SECTION("quintiles over 100 distinct customers are near-even") {
        std::map<std::string, RFMVector> in;
        for (int i = 0; i < 100; ++i) {
            char id[8];
            std::snprintf(id, sizeof id, "c%03d", i);
            in[id] = vec(i + 1, i * 2 + 1, 10.0 * i + 0.5);
        }
        std::map<std::string, RFMScore> s = score_rfm(in, 5);
        std::map<int, int> r_pop, f_pop, m_pop;
        for (const auto& [id, sc] : s) {
            r_pop[sc.r_score]++;
            f_pop[sc.f_score]++;
            m_pop[sc.m_score]++;
        }
        for (auto* pop : {&r_pop, &f_pop, &m_pop}) {
            REQUIRE(pop->size() == 5);
            for (const auto& [bucket, count] : *pop) CHECK(count == 20); // all values distinct
        }
        // oracle: sorted index i lands in bucket i*q/n + 1
        CHECK(s.at("c000").f_score == 1);
        CHECK(s.at("c099").f_score == 5);
        CHECK(s.at("c000").r_score == 5); // smallest recency scores highest
        CHECK(s.at("c099").r_score == 1);
    }

    SECTION("m_score is scale-invariant") {
        SplitMix64 rng(13);
        std::map<std::string, RFMVector> base;
        for (int i = 0; i < 40; ++i)
            base["c" + std::to_string(i)] = vec(1 + i, 1, rng.next_real(0.5, 900.0));
        std::map<std::string, RFMVector> scaled = base;
        for (auto& [id, v] : scaled) v.monetary = *v.monetary * 7.25;
        std::map<std::string, RFMScore> a = score_rfm(base, 4);
        std::map<std::string, RFMScore> b = score_rfm(scaled, 4);
        for (const auto& [id, sc] : a) CHECK(b.at(id).m_score == sc.m_score);
    }
}

TEST_CASE("bank records map onto RFM measures") {
    DatasetSchema bank = builtin_bank_marketing_schema();
    Instance inst = synth_campaign_stream(1, 3, 0.0)[0];

    SECTION("contacted customer") {
        inst.cells[12] = Cell::number(6.0); // pdays
        inst.cells[13] = Cell::number(2.0); // previous
        inst.cells[11] = Cell::number(1.0); // campaign
        inst.flags = 0;
        RFMVector v = bank_rfm_proxy(inst, bank);
        CHECK(*v.recency == 6);
        CHECK(v.frequency == 3);
        CHECK_FALSE(v.monetary.has_value());
    }

    SECTION("never-contacted sentinel path") {
        inst.cells[12] = Cell::number(999.0);
        inst.cells[13] = Cell::number(0.0);
        inst.cells[11] = Cell::number(1.0);
        Instance normalized = normalize_pdays(inst, bank);
        RFMVector v = bank_rfm_proxy(normalized, bank);
        CHECK_FALSE(v.recency.has_value());
        CHECK(v.frequency == 1);
    }

    SECTION("non-bank schema is rejected") {
        DatasetSchema other = parse_schema("x numeric\ny class {no,yes}", "other");
        Instance small;
        small.cells.resize(2);
        REQUIRE_THROWS_MATCHES(bank_rfm_proxy(small, other), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::schema_mismatch;
                               }));
    }
}

TEST_CASE("transaction files load and validate") {
    namespace fs = std::filesystem;
    fs::path path = fs::temp_directory_path() / "smdm_tx_test.csv";

    SECTION("well-formed file") {
        std::ofstream(path) << "alice;10;25.5\n\nbob;4;0\n";
        std::vector<Transaction> txs = load_transactions(path.string());
        REQUIRE(txs.size() == 2);
        CHECK(txs[0].customer_id == "alice");
        CHECK(txs[0].at == 10);
        CHECK(txs[0].amount == 25.5);
        CHECK(txs[1].amount == 0.0);
    }

    SECTION("wrong column count") {
        std::ofstream(path) << "alice;10\n";
        try {
            load_transactions(path.string());
            FAIL("expected malformed_line");
        } catch (const Error& e) {
            CHECK(e.code() == errc::malformed_line);
            CHECK(e.detail_a() == 1);
        }
    }

    SECTION("negative amount") {
        std::ofstream(path) << "alice;10;-3\n";
        REQUIRE_THROWS_MATCHES(load_transactions(path.string()), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::malformed_line;
                               }));
    }

    SECTION("bad number") {
        std::ofstream(path) << "alice;soon;3\n";
        REQUIRE_THROWS_MATCHES(load_transactions(path.string()), Error,
                               Catch::Matchers::Predicate<Error>([](const Error& e) {
                                   return e.code() == errc::unparseable_numeric;
                               }));
    }

    fs::remove(path);
}
