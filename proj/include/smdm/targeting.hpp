#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "smdm/error.hpp"
#include "smdm/ingest.hpp"

namespace smdm {

struct ScoredRecord {
    std::uint64_t id = 0;
    double score = 0.0;              // predicted positive-class probability
    std::optional<bool> positive;    // actual outcome, when known
};

struct RankedRecord {
    std::uint64_t id = 0;
    double score = 0.0;
    bool selected = false;
    std::optional<bool> positive;
};

struct LiftRow {
    std::uint64_t count = 0;
    std::uint64_t positives = 0;
    double response_rate = 0.0;
    double lift = 0.0;
};

struct LiftTable {
    std::vector<LiftRow> rows;
    double global_rate = 0.0;
    std::uint64_t total = 0;
    std::uint64_t total_positives = 0;
};

struct TargetingReport {
    std::vector<RankedRecord> ranking; // non-increasing score; ties keep input order
    std::size_t selected_count = 0;
    double fraction = 0.0;
    std::optional<LiftTable> lift;
};

namespace detail {

inline std::vector<RankedRecord> rank_descending(const std::vector<ScoredRecord>& scored) {
    for (const ScoredRecord& s : scored)
        if (!(s.score >= 0.0 && s.score <= 1.0))
            fail(errc::domain_error, "score outside [0,1]");
    std::vector<RankedRecord> out;
    out.reserve(scored.size());
    for (const ScoredRecord& s : scored) out.push_back({s.id, s.score, false, s.positive});
    std::stable_sort(out.begin(), out.end(),
                     [](const RankedRecord& a, const RankedRecord& b) { return a.score > b.score; });
    return out;
}

} // namespace detail

// Rank by descending score and keep the top ceil(fraction·n).
inline TargetingReport rank_and_select(const std::vector<ScoredRecord>& scored, double fraction) {
    if (scored.empty()) fail(errc::empty_input, "nothing to rank");
    if (!(fraction > 0.0) || fraction > 1.0)
        fail(errc::bad_fraction, "fraction must be in (0,1]");
    TargetingReport report;
    report.fraction = fraction;
    report.ranking = detail::rank_descending(scored);
    report.selected_count = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(scored.size())));
    for (std::size_t i = 0; i < report.selected_count; ++i) report.ranking[i].selected = true;
    return report;
}

// Rank, cut into `deciles` near-equal buckets (earlier buckets take the
// remainder), and compare each bucket's response rate with the global rate.
inline LiftTable lift_table(const std::vector<ScoredRecord>& scored, std::size_t deciles) {
    if (deciles < 2) fail(errc::domain_error, "need at least 2 buckets");
    if (scored.size() < deciles)
        fail(errc::too_few_records,
             std::to_string(scored.size()) + " records cannot fill " + std::to_string(deciles) +
                 " buckets");
    for (const ScoredRecord& s : scored)
        if (!s.positive.has_value()) fail(errc::domain_error, "lift analysis needs labels");

    std::vector<RankedRecord> ranked = detail::rank_descending(scored);
    LiftTable table;
    table.total = ranked.size();
    for (const RankedRecord& r : ranked) table.total_positives += *r.positive ? 1 : 0;
    if (table.total_positives == 0) fail(errc::no_positives, "no positive outcomes in input");
    table.global_rate =
        static_cast<double>(table.total_positives) / static_cast<double>(table.total);

    std::size_t base = ranked.size() / deciles;
    std::size_t remainder = ranked.size() % deciles;
    std::size_t pos = 0;
    for (std::size_t d = 0; d < deciles; ++d) {
        std::size_t count = base + (d < remainder ? 1 : 0);
        LiftRow row;
        row.count = count;
        for (std::size_t i = 0; i < count; ++i)
            row.positives += *ranked[pos + i].positive ? 1 : 0;
        row.response_rate =
            count > 0 ? static_cast<double>(row.positives) / static_cast<double>(count) : 0.0;
        row.lift = row.response_rate / table.global_rate;
        table.rows.push_back(row);
        pos += count;
    }
    return table;
}

inline TargetingReport make_targeting_report(const std::vector<ScoredRecord>& scored,
                                             double fraction, std::size_t deciles) {
    TargetingReport report = rank_and_select(scored, fraction);
    bool labeled = !scored.empty() && scored.front().positive.has_value();
    if (labeled && scored.size() >= deciles) report.lift = lift_table(scored, deciles);
    return report;
}

// `rank<delim>id<delim>score<delim>selected` rows, header first.
inline std::string render_targeting_rows(const TargetingReport& report, char delim) {
    std::string out = "rank";
    out += delim;
    out += "id";
    out += delim;
    out += "score";
    out += delim;
    out += "selected";
    out += '\n';
    std::size_t rank = 1;
    for (const RankedRecord& r : report.ranking) {
        out += std::to_string(rank++);
        out += delim;
        out += std::to_string(r.id);
        out += delim;
        out += detail::render_double(r.score);
        out += delim;
        out += r.selected ? '1' : '0';
        out += '\n';
    }
    return out;
}

inline std::string render_lift_table(const LiftTable& table) {
    auto fixed3 = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", v);
        return std::string(buf);
    };
    std::string out = "bucket      count  positives       rate       lift\n";
    for (std::size_t d = 0; d < table.rows.size(); ++d) {
        const LiftRow& row = table.rows[d];
        char line[128];
        std::snprintf(line, sizeof line, "%6zu %10llu %10llu %10s %10s\n", d + 1,
                      static_cast<unsigned long long>(row.count),
                      static_cast<unsigned long long>(row.positives),
                      fixed3(row.response_rate).c_str(), fixed3(row.lift).c_str());
        out += line;
    }
    out += "global rate " + detail::render_double(table.global_rate) + " over " +
           std::to_string(table.total) + " records, " + std::to_string(table.total_positives) +
           " positives\n";
    return out;
}

} // namespace smdm
