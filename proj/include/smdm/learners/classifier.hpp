#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "smdm/bytes.hpp"
#include "smdm/error.hpp"
#include "smdm/instance.hpp"
#include "smdm/schema.hpp"

namespace smdm {

// Index of the largest probability; ties break toward the lower index.
inline std::uint16_t argmax_class(const std::vector<double>& dist) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < dist.size(); ++i)
        if (dist[i] > dist[best]) best = i;
    return static_cast<std::uint16_t>(best);
}

// Online classifier contract: train one labeled instance at a time, predict a
// probability distribution over the class domain at any point.
class Classifier {
public:
    virtual ~Classifier() = default;

    virtual const char* name() const = 0;

    // Requires a labeled, conforming instance.
    virtual void train(const Instance& inst) = 0;

    // Distribution over class values, sums to 1; never requires prior training.
    virtual std::vector<double> predict(const Instance& inst) const = 0;

    virtual std::uint64_t trained_count() const = 0;

    virtual void save(ByteWriter& w) const = 0;
    virtual void load(ByteReader& r) = 0;

    // Highest-probability class; ties break toward the lower index.
    std::uint16_t predict_class(const Instance& inst) const {
        return argmax_class(predict(inst));
    }

protected:
    static void require_trainable(const Instance& inst, const DatasetSchema& schema) {
        require_conforms(inst, schema);
        if (!inst.labeled()) fail(errc::unlabeled_instance, "training requires a labeled instance");
    }
};

} // namespace smdm
