#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "smdm/evaluation.hpp"
#include "smdm/learners/snapshot.hpp"
#include "smdm/topology.hpp"

namespace smdm {

// Schema of the outcome stream a learner emits downstream: the predicted
// class, the positive-class score, and the actual class (also the label).
inline DatasetSchema outcome_schema(const DatasetSchema& data) {
    const std::vector<std::string>& classes = data.class_attribute().domain;
    DatasetSchema out;
    out.name = "outcomes";
    out.attributes = {{"predicted", AttrKind::categorical, classes, ""},
                      {"score", AttrKind::numeric, {}, ""},
                      {"actual", AttrKind::categorical, classes, ""}};
    out.class_index = 2;
    return out;
}

// Class whose probability serves as the targeting score: "yes" when the
// domain has one, otherwise the second class.
inline std::uint16_t positive_class_index(const DatasetSchema& schema) {
    const std::vector<std::string>& domain = schema.class_attribute().domain;
    for (std::size_t i = 0; i < domain.size(); ++i)
        if (domain[i] == "yes") return static_cast<std::uint16_t>(i);
    return domain.size() > 1 ? 1 : 0;
}

// Entry processor: forwards externally fed instances unchanged.
class SourceProcessor : public ProcessorLogic {
public:
    void on_event(const Instance& inst, Emitter& out) override { out.emit(0, inst); }
};

// Test-then-train unit: scores each instance with the current model, then
// trains on it, and emits the outcome downstream. Final state is the model
// snapshot.
class LearnerProcessor : public ProcessorLogic {
public:
    LearnerProcessor(DatasetSchema schema, LearnerKind kind, HoeffdingParams params = {})
        : schema_(std::move(schema)), kind_(kind),
          model_(make_classifier(kind, schema_, params)),
          positive_(positive_class_index(schema_)) {}

    void on_event(const Instance& inst, Emitter& out) override {
        std::vector<double> dist = model_->predict(inst);
        std::uint16_t predicted = argmax_class(dist);
        model_->train(inst); // rejects unlabeled or non-conforming input
        Instance outcome;
        outcome.cells = {Cell::category(predicted), Cell::number(dist[positive_]),
                         Cell::missing()};
        outcome.label = inst.label; // the actual class rides in the label slot
        out.emit(0, outcome);
    }

    std::string state() const override { return snapshot_model(*model_, kind_, schema_); }

    const Classifier& model() const { return *model_; }

private:
    DatasetSchema schema_;
    LearnerKind kind_;
    std::unique_ptr<Classifier> model_;
    std::uint16_t positive_;
};

// Terminal state of an evaluator partition: the confusion matrix plus the
// rendered metrics series.
struct EvaluatorReport {
    ConfusionMatrix matrix;
    std::string metrics;

    std::string serialize() const {
        ByteWriter w;
        matrix.save(w);
        w.put_string(metrics);
        return w.take();
    }

    static EvaluatorReport parse(std::string_view bytes) {
        ByteReader r(bytes, errc::snapshot_error);
        EvaluatorReport report{ConfusionMatrix::load(r), r.get_string()};
        if (!r.exhausted()) fail(errc::snapshot_error, "trailing bytes after evaluator state");
        return report;
    }
};

// Accumulates prequential outcomes and renders a metrics row every
// `metrics_every` instances plus one final row.
class EvaluatorProcessor : public ProcessorLogic {
public:
    EvaluatorProcessor(std::size_t classes, std::size_t window, std::uint64_t metrics_every,
                       char delim)
        : state_(classes, window), metrics_every_(metrics_every), delim_(delim) {
        metrics_ = render_metrics_header(delim_);
        metrics_ += '\n';
    }

    void on_event(const Instance& inst, Emitter&) override {
        if (!inst.labeled()) fail(errc::unlabeled_instance, "outcome without a label");
        if (inst.cells.empty() || !inst.cells[0].is_categorical())
            fail(errc::schema_mismatch, "outcome lacks a predicted class");
        state_.record(*inst.label, inst.cells[0].cat);
        if (metrics_every_ > 0 && state_.instances_seen() % metrics_every_ == 0) {
            metrics_ += render_metrics_row(state_, delim_);
            metrics_ += '\n';
        }
    }

    void on_finish(Emitter&) override {
        if (state_.instances_seen() == 0) return;
        if (metrics_every_ > 0 && state_.instances_seen() % metrics_every_ == 0)
            return; // the periodic row already covers the last instance
        metrics_ += render_metrics_row(state_, delim_);
        metrics_ += '\n';
    }

    std::string state() const override {
        return EvaluatorReport{state_.matrix(), metrics_}.serialize();
    }

    const PrequentialState& prequential() const { return state_; }

private:
    PrequentialState state_;
    std::uint64_t metrics_every_;
    char delim_;
    std::string metrics_;
};

struct PipelineOptions {
    LearnerKind learner = LearnerKind::naive_bayes;
    HoeffdingParams hoeffding;
    std::uint16_t learner_parallelism = 1;
    Grouping grouping = Grouping::shuffle; // source → learner routing
    std::string key_attribute;             // key_attribute grouping only
    std::size_t window = kDefaultWindow;
    std::uint64_t metrics_every = 1000;
    char delimiter = kDefaultDelimiter;
};

// Processor names fold the logic configuration in, so the distributed
// handshake's topology hash rejects workers started with different
// learner or evaluator settings, not just a different graph shape.
inline std::string learner_processor_name(const PipelineOptions& options) {
    std::string name = "learner:";
    name += learner_kind_name(options.learner);
    if (options.learner == LearnerKind::hoeffding_tree) {
        name += ":g=" + std::to_string(options.hoeffding.grace_period);
        name += ",d=" + detail::render_double(options.hoeffding.delta);
        name += ",t=" + detail::render_double(options.hoeffding.tie_threshold);
    }
    return name;
}

inline std::string evaluator_processor_name(const PipelineOptions& options) {
    std::string name = "evaluator:w=" + std::to_string(options.window);
    name += ",m=" + std::to_string(options.metrics_every);
    name += ",d=";
    name += options.delimiter;
    return name;
}

// source → learner → evaluator, the pipeline behind train-eval: the learner
// fans out per the configured grouping, outcomes funnel into one evaluator.
inline Topology build_standard_topology(const DatasetSchema& schema,
                                        const PipelineOptions& options = {}) {
    std::string learner = learner_processor_name(options);
    std::string evaluator = evaluator_processor_name(options);
    TopologySpec spec;
    spec.processors = {{"source", 1}, {learner, options.learner_parallelism}, {evaluator, 1}};
    spec.edges = {{"source", learner, options.grouping, options.key_attribute, schema},
                  {learner, evaluator, Grouping::shuffle, "", outcome_schema(schema)}};
    spec.sources = {{"source", schema}};
    Topology topo = build_topology(spec);

    topo.bind("source", [](std::uint16_t) { return std::make_unique<SourceProcessor>(); });
    DatasetSchema data_schema = schema;
    LearnerKind kind = options.learner;
    HoeffdingParams params = options.hoeffding;
    topo.bind(learner, [data_schema, kind, params](std::uint16_t) {
        return std::make_unique<LearnerProcessor>(data_schema, kind, params);
    });
    std::size_t classes = schema.class_cardinality();
    std::size_t window = options.window;
    std::uint64_t metrics_every = options.metrics_every;
    char delim = options.delimiter;
    topo.bind(evaluator, [classes, window, metrics_every, delim](std::uint16_t) {
        return std::make_unique<EvaluatorProcessor>(classes, window, metrics_every, delim);
    });
    return topo;
}

} // namespace smdm
