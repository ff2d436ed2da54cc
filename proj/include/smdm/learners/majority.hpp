#pragma once

#include <cstdint>
#include <vector>

#include "smdm/learners/classifier.hpp"

namespace smdm {

// Baseline: predicts the observed class frequencies, uniform before any
// training. No smoothing — two yes and one no give exactly [2/3, 1/3].
class MajorityClassifier : public Classifier {
public:
    explicit MajorityClassifier(const DatasetSchema& schema)
        : schema_(schema), counts_(schema.class_cardinality(), 0.0) {}

    const char* name() const override { return "majority"; }

    void train(const Instance& inst) override {
        require_trainable(inst, schema_);
        counts_[*inst.label] += 1.0;
        ++trained_;
    }

    std::vector<double> predict(const Instance& inst) const override {
        require_conforms(inst, schema_);
        std::vector<double> dist(counts_.size(), 0.0);
        if (trained_ == 0) {
            double u = 1.0 / static_cast<double>(dist.size());
            for (double& p : dist) p = u;
            return dist;
        }
        for (std::size_t i = 0; i < dist.size(); ++i)
            dist[i] = counts_[i] / static_cast<double>(trained_);
        return dist;
    }

    std::uint64_t trained_count() const override { return trained_; }

    void save(ByteWriter& w) const override {
        w.put_u64(trained_);
        w.put_u32(static_cast<std::uint32_t>(counts_.size()));
        for (double c : counts_) w.put_f64(c);
    }

    void load(ByteReader& r) override {
        trained_ = r.get_u64();
        std::uint32_t n = r.get_u32();
        if (n != counts_.size()) fail(errc::snapshot_error, "class count changed");
        for (std::uint32_t i = 0; i < n; ++i) counts_[i] = r.get_f64();
    }

private:
    DatasetSchema schema_;
    std::vector<double> counts_;
    std::uint64_t trained_ = 0;
};

} // namespace smdm
