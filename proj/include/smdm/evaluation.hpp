#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "smdm/ingest.hpp"
#include "smdm/learners/classifier.hpp"

namespace smdm {

// k×k counts indexed (actual, predicted).
class ConfusionMatrix {
public:
    explicit ConfusionMatrix(std::size_t k = 0) : k_(k), cells_(k * k, 0) {}

    void record(std::uint16_t actual, std::uint16_t predicted) {
        cells_.at(actual * k_ + predicted) += 1;
        ++total_;
    }

    std::uint64_t at(std::size_t actual, std::size_t predicted) const {
        return cells_.at(actual * k_ + predicted);
    }

    std::size_t classes() const { return k_; }
    std::uint64_t total() const { return total_; }

    std::uint64_t correct() const {
        std::uint64_t c = 0;
        for (std::size_t i = 0; i < k_; ++i) c += at(i, i);
        return c;
    }

    double accuracy() const {
        if (total_ == 0) fail(errc::empty_matrix, "no outcomes recorded");
        return static_cast<double>(correct()) / static_cast<double>(total_);
    }

    std::uint64_t row_total(std::size_t actual) const {
        std::uint64_t t = 0;
        for (std::size_t p = 0; p < k_; ++p) t += at(actual, p);
        return t;
    }

    std::uint64_t col_total(std::size_t predicted) const {
        std::uint64_t t = 0;
        for (std::size_t a = 0; a < k_; ++a) t += at(a, predicted);
        return t;
    }

    bool operator==(const ConfusionMatrix&) const = default;

    void save(ByteWriter& w) const {
        w.put_u32(static_cast<std::uint32_t>(k_));
        for (std::uint64_t c : cells_) w.put_u64(c);
    }

    static ConfusionMatrix load(ByteReader& r) {
        ConfusionMatrix m(r.get_u32());
        for (std::uint64_t& c : m.cells_) {
            c = r.get_u64();
            m.total_ += c;
        }
        return m;
    }

private:
    std::size_t k_;
    std::vector<std::uint64_t> cells_;
    std::uint64_t total_ = 0;
};

// Chance-corrected agreement; the degenerate all-one-class case (p_e = 1)
// is defined as 0.
inline double kappa(const ConfusionMatrix& m) {
    if (m.total() == 0) fail(errc::empty_matrix, "kappa needs at least one outcome");
    double n = static_cast<double>(m.total());
    double p_o = static_cast<double>(m.correct()) / n;
    double p_e = 0.0;
    for (std::size_t c = 0; c < m.classes(); ++c)
        p_e += (static_cast<double>(m.row_total(c)) / n) *
               (static_cast<double>(m.col_total(c)) / n);
    if (p_e >= 1.0) return 0.0;
    return (p_o - p_e) / (1.0 - p_e);
}

inline constexpr std::size_t kDefaultWindow = 1000;

// Running test-then-train bookkeeping: cumulative matrix plus a sliding
// window over the last w outcomes.
class PrequentialState {
public:
    explicit PrequentialState(std::size_t classes, std::size_t window = kDefaultWindow)
        : matrix_(classes), window_size_(window) {}

    void record(std::uint16_t actual, std::uint16_t predicted) {
        matrix_.record(actual, predicted);
        window_.push_back(actual == predicted);
        if (window_correct_ += window_.back() ? 1 : 0; window_.size() > window_size_) {
            window_correct_ -= window_.front() ? 1 : 0;
            window_.pop_front();
        }
    }

    const ConfusionMatrix& matrix() const { return matrix_; }
    std::uint64_t instances_seen() const { return matrix_.total(); }

    double cumulative_accuracy() const { return matrix_.accuracy(); }

    double window_accuracy() const {
        if (window_.empty()) fail(errc::empty_matrix, "no outcomes recorded");
        return static_cast<double>(window_correct_) / static_cast<double>(window_.size());
    }

    double cumulative_kappa() const { return kappa(matrix_); }

private:
    ConfusionMatrix matrix_;
    std::size_t window_size_;
    std::deque<bool> window_;
    std::uint64_t window_correct_ = 0;
};

// Predict, record, then train — strictly in that order, so the model never
// sees a label before being scored on it.
inline std::uint16_t prequential_step(PrequentialState& state, Classifier& model,
                                      const Instance& inst) {
    if (!inst.labeled()) fail(errc::unlabeled_instance, "prequential evaluation needs labels");
    std::uint16_t predicted = model.predict_class(inst);
    state.record(*inst.label, predicted);
    model.train(inst);
    return predicted;
}

// One `seq<delim>acc_cum<delim>acc_window<delim>kappa` row.
inline std::string render_metrics_row(const PrequentialState& state, char delim) {
    std::string row = std::to_string(state.instances_seen());
    row += delim;
    row += detail::render_double(state.cumulative_accuracy());
    row += delim;
    row += detail::render_double(state.window_accuracy());
    row += delim;
    row += detail::render_double(state.cumulative_kappa());
    return row;
}

inline std::string render_metrics_header(char delim) {
    std::string h = "seq";
    h += delim;
    h += "acc_cum";
    h += delim;
    h += "acc_window";
    h += delim;
    h += "kappa";
    return h;
}

// Delimited text: header row of predicted-class names, one row per actual
// class, then total/accuracy/kappa summary lines.
inline std::string render_confusion_matrix(const ConfusionMatrix& m,
                                           const std::vector<std::string>& class_names,
                                           char delim) {
    if (class_names.size() != m.classes())
        fail(errc::count_mismatch, "class name count does not match the matrix",
             static_cast<std::int64_t>(class_names.size()),
             static_cast<std::int64_t>(m.classes()));
    std::string out = "actual\\predicted";
    for (const std::string& name : class_names) {
        out += delim;
        out += name;
    }
    out += '\n';
    for (std::size_t a = 0; a < m.classes(); ++a) {
        out += class_names[a];
        for (std::size_t p = 0; p < m.classes(); ++p) {
            out += delim;
            out += std::to_string(m.at(a, p));
        }
        out += '\n';
    }
    out += "total";
    out += delim;
    out += std::to_string(m.total());
    out += '\n';
    out += "accuracy";
    out += delim;
    out += detail::render_double(m.total() == 0 ? 0.0 : m.accuracy());
    out += '\n';
    out += "kappa";
    out += delim;
    out += detail::render_double(m.total() == 0 ? 0.0 : kappa(m));
    out += '\n';
    return out;
}

} // namespace smdm
