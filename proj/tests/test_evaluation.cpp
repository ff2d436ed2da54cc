#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "smdm/bytes.hpp"
#include "smdm/evaluation.hpp"
#include "smdm/learners/majority.hpp"
#include "smdm/learners/naive_bayes.hpp"
#include "smdm/schema.hpp"
#include "smdm/synth.hpp"
#include "smdm/targeting.hpp"

using namespace smdm;
using Catch::Matchers::Predicate;

namespace {

DatasetSchema cat_schema() { return parse_schema("f categorical {a,b}\ny class {no,yes}", "cat"); }

Instance cat_instance(std::uint16_t value, std::optional<std::uint16_t> label = {}) {
    Instance inst;
    inst.cells = {Cell::category(value), Cell::missing()};
    inst.label = label;
    return inst;
}

bool code_is(const Error& e, errc c) { return e.code() == c; }

// Reads the answer off feature 0; never needs training.
class OracleClassifier final : public Classifier {
public:
    const char* name() const override { return "oracle"; }
    void train(const Instance&) override { ++trained_; }
    std::vector<double> predict(const Instance& inst) const override {
        std::vector<double> dist(2, 0.0);
        dist.at(inst.cells.at(0).cat) = 1.0;
        return dist;
    }
    std::uint64_t trained_count() const override { return trained_; }
    void save(ByteWriter&) const override {}
    void load(ByteReader&) override {}

private:
    std::uint64_t trained_ = 0;
};

// Asserts the predict/train calls strictly alternate, prediction first.
class ProbeClassifier final : public Classifier {
public:
    const char* name() const override { return "probe"; }
    void train(const Instance&) override {
        REQUIRE(trained_ + 1 == predicted_); // label only arrives after scoring
        ++trained_;
    }
    std::vector<double> predict(const Instance&) const override {
        REQUIRE(predicted_ == trained_);
        ++predicted_;
        return {0.5, 0.5};
    }
    std::uint64_t trained_count() const override { return trained_; }
    void save(ByteWriter&) const override {}
    void load(ByteReader&) override {}

private:
    std::uint64_t trained_ = 0;
    mutable std::uint64_t predicted_ = 0;
};

} // namespace

TEST_CASE("confusion matrix") {
    ConfusionMatrix m(2);
    m.record(0, 0);
    m.record(0, 0);
    m.record(0, 1);
    m.record(1, 1);
    m.record(1, 1);
    m.record(1, 1);

    SECTION("counts and marginals") {
        CHECK(m.at(0, 0) == 2);
        CHECK(m.at(0, 1) == 1);
        CHECK(m.at(1, 0) == 0);
        CHECK(m.at(1, 1) == 3);
        CHECK(m.total() == 6);
        CHECK(m.correct() == 5);
        CHECK(m.row_total(0) == 3);
        CHECK(m.col_total(1) == 4);
        CHECK(m.accuracy() == Catch::Approx(5.0 / 6.0));
    }

    SECTION("hand-computed kappa") {
        // p_o = 5/6, p_e = (3/6)(2/6) + (3/6)(4/6) = 1/2, kappa = 2/3
        CHECK(kappa(m) == Catch::Approx(2.0 / 3.0).epsilon(1e-12));
    }

    SECTION("byte round trip preserves every cell") {
        ByteWriter w;
        m.save(w);
        std::string bytes = w.take();
        ByteReader r(bytes);
        ConfusionMatrix back = ConfusionMatrix::load(r);
        CHECK(back == m);
        CHECK(back.total() == m.total());
    }

    SECTION("rendering matches the documented layout") {
        std::string expected = "actual\\predicted;no;yes\n"
                               "no;2;1\n"
                               "yes;0;3\n"
                               "total;6\n"
                               "accuracy;0.8333333333333334\n"
                               "kappa;0.6666666666666667\n";
        CHECK(render_confusion_matrix(m, {"no", "yes"}, ';') == expected);
    }

    SECTION("rendering rejects a name-count mismatch") {
        try {
            render_confusion_matrix(m, {"only"}, ';');
            FAIL("expected count_mismatch");
        } catch (const Error& e) {
            CHECK(e.code() == errc::count_mismatch);
            CHECK(e.detail_a() == 1);
            CHECK(e.detail_b() == 2);
        }
    }

    SECTION("empty matrix refuses summary statistics") {
        ConfusionMatrix empty(2);
        CHECK_THROWS_MATCHES(empty.accuracy(), Error, Predicate<Error>([](const Error& e) {
                                 return code_is(e, errc::empty_matrix);
                             }));
        CHECK_THROWS_MATCHES(kappa(empty), Error, Predicate<Error>([](const Error& e) {
                                 return code_is(e, errc::empty_matrix);
                             }));
        // an empty matrix still renders, with zeroed summary lines
        std::string text = render_confusion_matrix(empty, {"no", "yes"}, ';');
        CHECK(text.find("accuracy;0\n") != std::string::npos);
        CHECK(text.find("kappa;0\n") != std::string::npos);
    }
}

TEST_CASE("kappa statistic") {
    SECTION("perfect agreement scores one") {
        ConfusionMatrix m(2);
        for (int i = 0; i < 50; ++i) {
            m.record(0, 0);
            m.record(1, 1);
        }
        CHECK(kappa(m) == Catch::Approx(1.0));
    }

    SECTION("degenerate single-class agreement is defined as zero") {
        ConfusionMatrix m(2);
        for (int i = 0; i < 50; ++i) m.record(0, 0);
        CHECK(kappa(m) == 0.0);
    }

    SECTION("independent predictions score near zero") {
        SplitMix64 rng(97);
        ConfusionMatrix m(2);
        for (int i = 0; i < 100000; ++i) {
            auto actual = static_cast<std::uint16_t>(rng.next_below(10) < 3 ? 1 : 0);
            auto predicted = static_cast<std::uint16_t>(rng.next_below(10) < 6 ? 1 : 0);
            m.record(actual, predicted);
        }
        CHECK(std::abs(kappa(m)) < 0.02);
    }
}

TEST_CASE("prequential evaluation") {
    SECTION("every instance is scored before it trains") {
        PrequentialState state(2);
        ProbeClassifier probe;
        for (int i = 0; i < 25; ++i)
            prequential_step(state, probe, cat_instance(0, static_cast<std::uint16_t>(i % 2)));
        CHECK(probe.trained_count() == 25);
    }

    SECTION("an untrained model's first prediction lands at class zero") {
        PrequentialState state(2);
        MajorityClassifier m(cat_schema());
        std::uint16_t predicted = prequential_step(state, m, cat_instance(0, 1));
        CHECK(predicted == 0); // uniform distribution, ties break low
        CHECK(state.matrix().at(1, 0) == 1);
        CHECK(state.instances_seen() == 1);
    }

    SECTION("flipping a later label never changes earlier predictions") {
        std::vector<Instance> stream;
        SplitMix64 rng(5);
        for (int i = 0; i < 1000; ++i)
            stream.push_back(cat_instance(static_cast<std::uint16_t>(rng.next_below(2)),
                                          static_cast<std::uint16_t>(rng.next_below(2))));
        auto run = [](const std::vector<Instance>& s) {
            PrequentialState state(2);
            NaiveBayesClassifier nb(cat_schema());
            std::vector<std::uint16_t> preds;
            for (const Instance& inst : s) preds.push_back(prequential_step(state, nb, inst));
            return preds;
        };
        std::vector<std::uint16_t> base = run(stream);
        stream[500].label = static_cast<std::uint16_t>(1 - *stream[500].label);
        std::vector<std::uint16_t> flipped = run(stream);
        for (int i = 0; i <= 500; ++i) CHECK(base[i] == flipped[i]);
    }

    SECTION("an oracle model is scored perfectly") {
        PrequentialState state(2);
        OracleClassifier oracle;
        for (int i = 0; i < 100; ++i)
            prequential_step(state, oracle,
                             cat_instance(static_cast<std::uint16_t>(i % 2),
                                          static_cast<std::uint16_t>(i % 2)));
        CHECK(state.cumulative_accuracy() == 1.0);
        CHECK(state.cumulative_kappa() == Catch::Approx(1.0));
    }

    SECTION("majority over a 70/30 stream converges near 0.7") {
        PrequentialState state(2);
        MajorityClassifier m(cat_schema());
        SplitMix64 rng(11);
        for (int i = 0; i < 10000; ++i) {
            auto label = static_cast<std::uint16_t>(rng.next_below(10) < 7 ? 1 : 0);
            prequential_step(state, m, cat_instance(0, label));
        }
        CHECK(state.cumulative_accuracy() == Catch::Approx(0.7).margin(0.05));
    }

    SECTION("sliding window tracks only the recent outcomes") {
        PrequentialState state(2, 3);
        state.record(0, 0); // correct — will age out
        state.record(0, 1);
        state.record(0, 0);
        state.record(1, 1);
        CHECK(state.window_accuracy() == Catch::Approx(2.0 / 3.0));
        CHECK(state.cumulative_accuracy() == Catch::Approx(3.0 / 4.0));
    }

    SECTION("window accuracy needs at least one outcome") {
        PrequentialState state(2);
        CHECK_THROWS_MATCHES(state.window_accuracy(), Error,
                             Predicate<Error>([](const Error& e) {
                                 return code_is(e, errc::empty_matrix);
                             }));
    }

    SECTION("unlabeled instances are rejected") {
        PrequentialState state(2);
        MajorityClassifier m(cat_schema());
        CHECK_THROWS_MATCHES(prequential_step(state, m, cat_instance(0)), Error,
                             Predicate<Error>([](const Error& e) {
                                 return code_is(e, errc::unlabeled_instance);
                             }));
    }

    SECTION("metrics rows render as delimited text") {
        PrequentialState state(2);
        state.record(0, 0);
        state.record(1, 0);
        CHECK(render_metrics_header(';') == "seq;acc_cum;acc_window;kappa");
        CHECK(render_metrics_row(state, ';') == "2;0.5;0.5;0");
    }
}

TEST_CASE("ranking and selection") {
    SECTION("fraction one selects everything") {
        std::vector<ScoredRecord> scored = {{1, 0.2, {}}, {2, 0.8, {}}, {3, 0.5, {}}};
        TargetingReport report = rank_and_select(scored, 1.0);
        REQUIRE(report.ranking.size() == 3);
        CHECK(report.selected_count == 3);
        CHECK(report.ranking[0].id == 2);
        CHECK(report.ranking[1].id == 3);
        CHECK(report.ranking[2].id == 1);
        for (const RankedRecord& r : report.ranking) CHECK(r.selected);
    }

    SECTION("a tenth of one hundred selects exactly the top ten") {
        std::vector<ScoredRecord> scored;
        for (int i = 0; i < 100; ++i)
            scored.push_back({static_cast<std::uint64_t>(i), i / 99.0, {}});
        TargetingReport report = rank_and_select(scored, 0.1);
        CHECK(report.selected_count == 10);
        std::size_t selected = 0;
        for (const RankedRecord& r : report.ranking) {
            if (r.selected) {
                ++selected;
                CHECK(r.id >= 90); // the ten highest raw scores
            }
        }
        CHECK(selected == 10);
    }

    SECTION("selection count rounds up") {
        std::vector<ScoredRecord> scored(6, ScoredRecord{1, 0.5, {}});
        CHECK(rank_and_select(scored, 0.25).selected_count == 2); // ceil(1.5)
    }

    SECTION("ties keep their input order") {
        std::vector<ScoredRecord> scored = {{1, 0.5, {}}, {2, 0.9, {}}, {3, 0.5, {}}};
        TargetingReport report = rank_and_select(scored, 1.0);
        CHECK(report.ranking[0].id == 2);
        CHECK(report.ranking[1].id == 1);
        CHECK(report.ranking[2].id == 3);
    }

    SECTION("input validation") {
        std::vector<ScoredRecord> ok = {{1, 0.5, {}}};
        CHECK_THROWS_MATCHES(rank_and_select({}, 0.5), Error,
                             Predicate<Error>([](const Error& e) {
                                 return code_is(e, errc::empty_input);
                             }));
        for (double f : {0.0, -0.1, 1.5})
            CHECK_THROWS_MATCHES(rank_and_select(ok, f), Error,
                                 Predicate<Error>([](const Error& e) {
                                     return code_is(e, errc::bad_fraction);
                                 }));
        std::vector<ScoredRecord> high = {{1, 1.5, {}}};
        CHECK_THROWS_MATCHES(rank_and_select(high, 0.5), Error,
                             Predicate<Error>([](const Error& e) {
                                 return code_is(e, errc::domain_error);
                             }));
        std::vector<ScoredRecord> nan = {{1, std::nan(""), {}}};
        CHECK_THROWS_MATCHES(rank_and_select(nan, 0.5), Error,
                             Predicate<Error>([](const Error& e) {
                                 return code_is(e, errc::domain_error);
                             }));
    }

    SECTION("targeting rows render with one-based ranks") {
        std::vector<ScoredRecord> scored = {{3, 0.25, {}}, {7, 1.0, {}}};
        TargetingReport report = rank_and_select(scored, 0.5);
        CHECK(render_targeting_rows(report, ';') == "rank;id;score;selected\n"
                                                    "1;7;1;1\n"
                                                    "2;3;0.25;0\n");
    }
}

TEST_CASE("lift analysis") {
    SECTION("a perfect scorer concentrates all response in the top decile") {
        std::vector<ScoredRecord> scored;
        for (int i = 0; i < 100; ++i) {
            bool positive = i < 10;
            scored.push_back({static_cast<std::uint64_t>(i), positive ? 0.9 : 0.1, positive});
        }
        LiftTable table = lift_table(scored, 10);
        REQUIRE(table.rows.size() == 10);
        CHECK(std::abs(table.rows[0].lift - 10.0) <= 1e-9);
        for (std::size_t d = 1; d < 10; ++d) CHECK(table.rows[d].lift == 0.0);
        CHECK(table.global_rate == Catch::Approx(0.1));
    }

    SECTION("bucket counts and positives conserve the input") {
        SplitMix64 rng(3);
        std::vector<ScoredRecord> scored;
        for (int i = 0; i < 997; ++i) // deliberately not divisible by 10
            scored.push_back({static_cast<std::uint64_t>(i), rng.next_double(),
                              rng.next_below(4) == 0});
        LiftTable table = lift_table(scored, 10);
        std::uint64_t count = 0, positives = 0;
        double weighted = 0.0;
        for (const LiftRow& row : table.rows) {
            count += row.count;
            positives += row.positives;
            weighted += row.lift * static_cast<double>(row.count);
        }
        CHECK(count == scored.size());
        CHECK(positives == table.total_positives);
        // lifts weighted by bucket size average to exactly one
        CHECK(weighted / static_cast<double>(count) == Catch::Approx(1.0).margin(1e-9));
    }

    SECTION("earlier buckets absorb the remainder") {
        std::vector<ScoredRecord> scored;
        for (int i = 0; i < 13; ++i)
            scored.push_back({static_cast<std::uint64_t>(i), 0.5, i % 2 == 0});
        LiftTable table = lift_table(scored, 5);
        std::vector<std::uint64_t> counts;
        for (const LiftRow& row : table.rows) counts.push_back(row.count);
        CHECK(counts == std::vector<std::uint64_t>{3, 3, 3, 2, 2});
    }

    SECTION("random scores produce flat lift") {
        SplitMix64 rng(19);
        std::vector<ScoredRecord> scored;
        for (int i = 0; i < 100000; ++i)
            scored.push_back({static_cast<std::uint64_t>(i), rng.next_double(),
                              rng.next_below(10) < 3});
        LiftTable table = lift_table(scored, 10);
        for (const LiftRow& row : table.rows) CHECK(row.lift == Catch::Approx(1.0).margin(0.3));
    }

    SECTION("uniformly positive outcomes give every bucket lift one") {
        std::vector<ScoredRecord> scored;
        for (int i = 0; i < 50; ++i)
            scored.push_back({static_cast<std::uint64_t>(i), i / 49.0, true});
        LiftTable table = lift_table(scored, 10);
        for (const LiftRow& row : table.rows) CHECK(row.lift == 1.0);
    }

    SECTION("input validation") {
        std::vector<ScoredRecord> labeled;
        for (int i = 0; i < 20; ++i)
            labeled.push_back({static_cast<std::uint64_t>(i), 0.5, false});
        CHECK_THROWS_MATCHES(lift_table(labeled, 10), Error,
                             Predicate<Error>([](const Error& e) {
                                 return code_is(e, errc::no_positives);
                             }));
        std::vector<ScoredRecord> few = {{1, 0.5, true}, {2, 0.5, false}};
        CHECK_THROWS_MATCHES(lift_table(few, 10), Error,
                             Predicate<Error>([](const Error& e) {
                                 return code_is(e, errc::too_few_records);
                             }));
        std::vector<ScoredRecord> unlabeled;
        for (int i = 0; i < 20; ++i)
            unlabeled.push_back({static_cast<std::uint64_t>(i), 0.5, {}});
        CHECK_THROWS_MATCHES(lift_table(unlabeled, 10), Error,
                             Predicate<Error>([](const Error& e) {
                                 return code_is(e, errc::domain_error);
                             }));
        CHECK_THROWS_MATCHES(lift_table(labeled, 1), Error,
                             Predicate<Error>([](const Error& e) {
                                 return code_is(e, errc::domain_error);
                             }));
    }

    SECTION("reports only include lift when the input is labeled and large enough") {
        std::vector<ScoredRecord> labeled;
        for (int i = 0; i < 20; ++i)
            labeled.push_back({static_cast<std::uint64_t>(i), i / 19.0, i % 4 == 0});
        CHECK(make_targeting_report(labeled, 0.5, 10).lift.has_value());

        std::vector<ScoredRecord> unlabeled = {{1, 0.5, {}}, {2, 0.6, {}}};
        CHECK_FALSE(make_targeting_report(unlabeled, 0.5, 10).lift.has_value());
    }

    SECTION("lift table rendering carries the global summary") {
        std::vector<ScoredRecord> scored;
        for (int i = 0; i < 100; ++i) {
            bool positive = i < 10;
            scored.push_back({static_cast<std::uint64_t>(i), positive ? 0.9 : 0.1, positive});
        }
        std::string text = render_lift_table(lift_table(scored, 10));
        CHECK(text.find("bucket") == 0);
        CHECK(text.find("10.0000") != std::string::npos);
        CHECK(text.find("global rate 0.1 over 100 records, 10 positives") != std::string::npos);
    }
}
