#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "smdm/learners/classifier.hpp"
#include "smdm/learners/stats.hpp"

namespace smdm {

// Streaming Gaussian/multinomial Naive Bayes. Numeric likelihoods come from
// Welford-maintained Gaussians, categorical ones from add-one-smoothed
// counts; everything updates one instance at a time.
class NaiveBayesClassifier : public Classifier {
public:
    explicit NaiveBayesClassifier(const DatasetSchema& schema) : schema_(schema) {
        std::size_t k = schema.class_cardinality();
        class_counts_.assign(k, 0.0);
        numeric_.resize(schema.attribute_count());
        categorical_.resize(schema.attribute_count());
        for (std::size_t a = 0; a < schema.attribute_count(); ++a) {
            if (a == schema.class_index) continue;
            const AttributeSpec& spec = schema.attributes[a];
            if (spec.kind == AttrKind::numeric)
                numeric_[a].assign(k, GaussianStats{});
            else
                categorical_[a].assign(k, CategoricalCounts(spec.domain.size()));
        }
    }

    const char* name() const override { return "naive-bayes"; }

    void train(const Instance& inst) override {
        require_trainable(inst, schema_);
        std::uint16_t c = *inst.label;
        class_counts_[c] += 1.0;
        for (std::size_t a = 0; a < schema_.attribute_count(); ++a) {
            if (a == schema_.class_index) continue;
            const Cell& cell = inst.cells[a];
            if (cell.is_missing()) continue;
            if (cell.is_numeric())
                numeric_[a][c].add(cell.num);
            else
                categorical_[a][c].add(cell.cat);
        }
        ++trained_;
    }

    std::vector<double> predict(const Instance& inst) const override {
        require_conforms(inst, schema_);
        std::size_t k = class_counts_.size();
        std::vector<double> log_post(k, 0.0);
        double denom = static_cast<double>(trained_) + static_cast<double>(k);
        for (std::size_t c = 0; c < k; ++c)
            log_post[c] = std::log((class_counts_[c] + 1.0) / denom);

        for (std::size_t a = 0; a < schema_.attribute_count(); ++a) {
            if (a == schema_.class_index) continue;
            const Cell& cell = inst.cells[a];
            if (cell.is_missing()) continue;
            if (cell.is_numeric()) {
                for (std::size_t c = 0; c < k; ++c) {
                    const GaussianStats& s = numeric_[a][c];
                    if (s.count > 0.0) log_post[c] += s.log_density(cell.num);
                }
            } else {
                double dom = static_cast<double>(schema_.attributes[a].domain.size());
                for (std::size_t c = 0; c < k; ++c) {
                    const CategoricalCounts& cc = categorical_[a][c];
                    log_post[c] += std::log((cc.counts[cell.cat] + 1.0) / (cc.total() + dom));
                }
            }
        }

        double z = logsumexp(log_post);
        std::vector<double> dist(k, 0.0);
        for (std::size_t c = 0; c < k; ++c) dist[c] = std::exp(log_post[c] - z);
        return dist;
    }

    std::uint64_t trained_count() const override { return trained_; }

    const GaussianStats& numeric_stats(std::size_t attr, std::uint16_t cls) const {
        return numeric_.at(attr).at(cls);
    }
    const CategoricalCounts& categorical_stats(std::size_t attr, std::uint16_t cls) const {
        return categorical_.at(attr).at(cls);
    }
    const std::vector<double>& class_counts() const { return class_counts_; }

    void save(ByteWriter& w) const override {
        w.put_u64(trained_);
        w.put_u32(static_cast<std::uint32_t>(class_counts_.size()));
        for (double c : class_counts_) w.put_f64(c);
        for (std::size_t a = 0; a < schema_.attribute_count(); ++a) {
            if (a == schema_.class_index) continue;
            if (schema_.attributes[a].kind == AttrKind::numeric)
                for (const GaussianStats& s : numeric_[a]) s.save(w);
            else
                for (const CategoricalCounts& c : categorical_[a]) c.save(w);
        }
    }

    void load(ByteReader& r) override {
        trained_ = r.get_u64();
        std::uint32_t k = r.get_u32();
        if (k != class_counts_.size()) fail(errc::snapshot_error, "class count changed");
        for (std::uint32_t i = 0; i < k; ++i) class_counts_[i] = r.get_f64();
        for (std::size_t a = 0; a < schema_.attribute_count(); ++a) {
            if (a == schema_.class_index) continue;
            if (schema_.attributes[a].kind == AttrKind::numeric)
                for (GaussianStats& s : numeric_[a]) s = GaussianStats::load(r);
            else
                for (CategoricalCounts& c : categorical_[a]) {
                    CategoricalCounts loaded = CategoricalCounts::load(r);
                    if (loaded.counts.size() != c.counts.size())
                        fail(errc::snapshot_error, "domain size changed");
                    c = std::move(loaded);
                }
        }
    }

private:
    DatasetSchema schema_;
    std::vector<double> class_counts_;
    std::vector<std::vector<GaussianStats>> numeric_;      // [attr][class]
    std::vector<std::vector<CategoricalCounts>> categorical_; // [attr][class]
    std::uint64_t trained_ = 0;
};

} // namespace smdm
