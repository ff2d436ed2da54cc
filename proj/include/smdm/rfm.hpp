#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smdm/ingest.hpp"
#include "smdm/instance.hpp"
#include "smdm/schema.hpp"
#include "smdm/stream.hpp"

namespace smdm {

struct Transaction {
    std::string customer_id;
    std::int64_t at = 0; // days since epoch
    double amount = 0.0; // >= 0
};

struct RFMVector {
    std::optional<std::int64_t> recency; // days since last transaction
    std::int64_t frequency = 0;
    std::optional<double> monetary;

    bool operator==(const RFMVector&) const = default;
};

// Scores are 1..q, larger is better; recency is inverted so that recent
// customers score high.
struct RFMScore {
    int r_score = 1;
    int f_score = 1;
    int m_score = 1;

    bool operator==(const RFMScore&) const = default;
};

inline std::map<std::string, RFMVector> compute_rfm(const std::vector<Transaction>& transactions,
                                                    std::int64_t as_of) {
    std::map<std::string, RFMVector> out;
    std::map<std::string, std::int64_t> last_at;
    for (const Transaction& t : transactions) {
        if (t.at > as_of)
            fail(errc::future_transaction,
                 "customer '" + t.customer_id + "' has a transaction after the as-of date");
        RFMVector& v = out[t.customer_id];
        v.frequency += 1;
        v.monetary = v.monetary.value_or(0.0) + t.amount;
        auto [it, fresh] = last_at.try_emplace(t.customer_id, t.at);
        if (!fresh) it->second = std::max(it->second, t.at);
    }
    for (auto& [id, v] : out) v.recency = as_of - last_at.at(id);
    return out;
}

namespace detail {

// Rank-scores one dimension into q buckets: sort by goodness ascending,
// bucket by index*q/n, ties share the lowest bucket of their value group.
// Entries without a value are pinned to score 1 and excluded from the
// ranking pool.
template <typename GetValue>
inline void score_dimension(const std::vector<std::string>& ids,
                            std::map<std::string, RFMScore>& scores, int q, GetValue get,
                            bool invert, int RFMScore::*field) {
    struct Entry {
        const std::string* id;
        double value;
    };
    std::vector<Entry> pool;
    pool.reserve(ids.size());
    for (const std::string& id : ids) {
        std::optional<double> v = get(id);
        if (v)
            pool.push_back({&id, invert ? -*v : *v});
        else
            scores[id].*field = 1;
    }
    if (pool.empty()) return;
    std::stable_sort(pool.begin(), pool.end(),
                     [](const Entry& a, const Entry& b) { return a.value < b.value; });
    std::size_t n = pool.size();
    std::size_t group_start = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (pool[i].value != pool[group_start].value) group_start = i;
        int bucket = static_cast<int>(group_start * static_cast<std::size_t>(q) / n) + 1;
        scores[*pool[i].id].*field = bucket;
    }
}

} // namespace detail

inline std::map<std::string, RFMScore> score_rfm(const std::map<std::string, RFMVector>& vectors,
                                                 int q) {
    if (q < 2) fail(errc::domain_error, "quantile count must be at least 2");
    if (vectors.empty()) fail(errc::empty_input, "no customers to score");
    if (static_cast<std::size_t>(q) > vectors.size())
        fail(errc::degenerate_quantiles,
             "q = " + std::to_string(q) + " exceeds " + std::to_string(vectors.size()) +
                 " customers");

    std::vector<std::string> ids;
    ids.reserve(vectors.size());
    for (const auto& [id, v] : vectors) ids.push_back(id);

    std::map<std::string, RFMScore> scores;
    for (const std::string& id : ids) scores[id] = RFMScore{};

    detail::score_dimension(
        ids, scores, q,
        [&](const std::string& id) -> std::optional<double> {
            const RFMVector& v = vectors.at(id);
            if (!v.recency) return std::nullopt;
            return static_cast<double>(*v.recency);
        },
        /*invert=*/true, &RFMScore::r_score);
    detail::score_dimension(
        ids, scores, q,
        [&](const std::string& id) -> std::optional<double> {
            return static_cast<double>(vectors.at(id).frequency);
        },
        /*invert=*/false, &RFMScore::f_score);
    detail::score_dimension(
        ids, scores, q,
        [&](const std::string& id) -> std::optional<double> { return vectors.at(id).monetary; },
        /*invert=*/false, &RFMScore::m_score);
    return scores;
}

// Maps a bank-marketing record onto the three purchase-history measures.
// The dataset has no spend field, so monetary stays absent; contact
// counts stand in for purchase frequency.
inline RFMVector bank_rfm_proxy(const Instance& inst, const DatasetSchema& schema) {
    static const DatasetSchema bank = builtin_bank_marketing_schema();
    if (!schema.same_structure(bank))
        fail(errc::schema_mismatch, "bank_rfm_proxy requires the built-in bank schema");
    require_conforms(inst, schema);

    std::size_t pdays_idx = *schema.find_attribute("pdays");
    std::size_t previous_idx = *schema.find_attribute("previous");
    std::size_t campaign_idx = *schema.find_attribute("campaign");

    RFMVector v;
    const Cell& pdays = inst.cells[pdays_idx];
    if (pdays.is_numeric() && !inst.has_flag(kFlagNeverContacted))
        v.recency = static_cast<std::int64_t>(pdays.num);
    double contacts = 0.0;
    if (inst.cells[previous_idx].is_numeric()) contacts += inst.cells[previous_idx].num;
    if (inst.cells[campaign_idx].is_numeric()) contacts += inst.cells[campaign_idx].num;
    v.frequency = static_cast<std::int64_t>(contacts);
    return v;
}

// Transaction file: customer_id<delim>days<delim>amount, one per line.
inline std::vector<Transaction> load_transactions(const std::string& path,
                                                  char delimiter = kDefaultDelimiter) {
    std::ifstream in(path);
    if (!in) fail(errc::io_failure, "cannot open '" + path + "'");
    std::vector<Transaction> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string_view> fields = detail::split_fields(line, delimiter);
        if (fields.size() != 3)
            fail(errc::malformed_line, "expected 3 fields at line " + std::to_string(line_no),
                 static_cast<std::int64_t>(line_no));
        Transaction t;
        t.customer_id = std::string(detail::strip_quotes(fields[0]));
        double days = 0.0;
        double amount = 0.0;
        if (!detail::parse_double(fields[1], days) || !detail::parse_double(fields[2], amount))
            fail(errc::unparseable_numeric,
                 "bad numeric field at line " + std::to_string(line_no),
                 static_cast<std::int64_t>(line_no));
        if (amount < 0.0)
            fail(errc::malformed_line,
                 "negative amount at line " + std::to_string(line_no),
                 static_cast<std::int64_t>(line_no));
        t.at = static_cast<std::int64_t>(days);
        t.amount = amount;
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace smdm
