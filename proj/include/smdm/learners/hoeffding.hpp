#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "smdm/learners/classifier.hpp"
#include "smdm/learners/stats.hpp"

namespace smdm {

// ε = sqrt(R²·ln(1/δ) / 2n): with probability 1−δ the true mean of a range-R
// variable lies within ε of the n-sample average.
inline double hoeffding_bound(double range, double delta, double n) {
    if (!(range > 0.0)) fail(errc::domain_error, "range must be positive");
    if (!(delta > 0.0) || !(delta < 1.0)) fail(errc::domain_error, "delta must be in (0,1)");
    if (!(n >= 1.0)) fail(errc::domain_error, "need at least one observation");
    return std::sqrt(range * range * std::log(1.0 / delta) / (2.0 * n));
}

namespace detail {

inline double entropy(const std::vector<double>& counts) {
    double total = 0.0;
    for (double c : counts) total += c;
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (double c : counts) {
        if (c <= 0.0) continue;
        double p = c / total;
        h -= p * std::log2(p);
    }
    return h;
}

} // namespace detail

// H(parent) − Σ (n_i/n)·H(branch_i), base-2 entropy.
inline double info_gain(const std::vector<double>& parent,
                        const std::vector<std::vector<double>>& partition) {
    double parent_total = 0.0;
    for (double c : parent) parent_total += c;
    std::vector<double> recombined(parent.size(), 0.0);
    for (const std::vector<double>& branch : partition) {
        if (branch.size() != parent.size())
            fail(errc::count_mismatch, "branch class arity differs from parent");
        for (std::size_t c = 0; c < branch.size(); ++c) recombined[c] += branch[c];
    }
    double tol = 1e-6 * std::max(1.0, parent_total);
    for (std::size_t c = 0; c < parent.size(); ++c)
        if (std::abs(recombined[c] - parent[c]) > tol)
            fail(errc::count_mismatch, "partition does not sum to parent");
    if (parent_total <= 0.0) return 0.0;
    double h = detail::entropy(parent);
    for (const std::vector<double>& branch : partition) {
        double branch_total = 0.0;
        for (double c : branch) branch_total += c;
        h -= (branch_total / parent_total) * detail::entropy(branch);
    }
    return h;
}

struct HoeffdingParams {
    std::uint32_t grace_period = 200;
    double delta = 1e-7;
    double tie_threshold = 0.05;
};

// VFDT: leaves accumulate sufficient statistics; every grace_period
// instances a leaf compares its two best candidate splits and installs the
// winner once the Hoeffding bound separates them (or declares a tie).
class HoeffdingTreeClassifier : public Classifier {
public:
    static constexpr std::size_t kNumericThresholds = 10;

    struct Node {
        // leaf state
        std::vector<double> class_counts;
        double weight_at_last_eval = 0.0;
        std::vector<std::vector<GaussianStats>> num_stats;      // [attr][class]
        std::vector<double> num_min, num_max;                   // per attr
        std::vector<std::vector<CategoricalCounts>> cat_stats;  // [attr][class]
        // split state
        bool is_split = false;
        std::size_t split_attr = 0;
        double threshold = 0.0; // numeric splits: child 0 takes x <= threshold
        std::vector<std::unique_ptr<Node>> children;
        std::vector<double> child_traffic;

        double weight() const {
            double t = 0.0;
            for (double c : class_counts) t += c;
            return t;
        }
    };

    explicit HoeffdingTreeClassifier(const DatasetSchema& schema, HoeffdingParams params = {})
        : schema_(schema), params_(params) {
        if (params_.grace_period == 0) fail(errc::domain_error, "grace_period must be positive");
        if (!(params_.delta > 0.0) || !(params_.delta < 1.0))
            fail(errc::domain_error, "delta must be in (0,1)");
        if (!(params_.tie_threshold > 0.0))
            fail(errc::domain_error, "tie_threshold must be positive");
        root_ = make_leaf();
    }

    const char* name() const override { return "hoeffding-tree"; }

    void train(const Instance& inst) override {
        require_trainable(inst, schema_);
        Node* leaf = route(root_.get(), inst, /*count_traffic=*/true);
        std::uint16_t c = *inst.label;
        leaf->class_counts[c] += 1.0;
        for (std::size_t a = 0; a < schema_.attribute_count(); ++a) {
            if (a == schema_.class_index) continue;
            const Cell& cell = inst.cells[a];
            if (cell.is_missing()) continue;
            if (cell.is_numeric()) {
                leaf->num_stats[a][c].add(cell.num);
                leaf->num_min[a] = std::min(leaf->num_min[a], cell.num);
                leaf->num_max[a] = std::max(leaf->num_max[a], cell.num);
            } else {
                leaf->cat_stats[a][c].add(cell.cat);
            }
        }
        ++trained_;
        if (leaf->weight() - leaf->weight_at_last_eval >= params_.grace_period)
            maybe_split(*leaf);
    }

    std::vector<double> predict(const Instance& inst) const override {
        require_conforms(inst, schema_);
        const Node* leaf = route(const_cast<Node*>(root_.get()), inst, /*count_traffic=*/false);
        std::size_t k = schema_.class_cardinality();
        double total = leaf->weight();
        std::vector<double> dist(k, 0.0);
        for (std::size_t c = 0; c < k; ++c)
            dist[c] = (leaf->class_counts[c] + 1.0) / (total + static_cast<double>(k));
        return dist;
    }

    std::uint64_t trained_count() const override { return trained_; }

    const Node& root() const { return *root_; }

    std::size_t leaf_count() const { return count_nodes(*root_, /*leaves_only=*/true); }
    std::size_t node_count() const { return count_nodes(*root_, /*leaves_only=*/false); }

    double total_leaf_weight() const { return sum_leaf_weight(*root_); }

    void save(ByteWriter& w) const override {
        w.put_u64(trained_);
        w.put_u32(params_.grace_period);
        w.put_f64(params_.delta);
        w.put_f64(params_.tie_threshold);
        save_node(*root_, w);
    }

    void load(ByteReader& r) override {
        trained_ = r.get_u64();
        params_.grace_period = r.get_u32();
        params_.delta = r.get_f64();
        params_.tie_threshold = r.get_f64();
        root_ = load_node(r);
    }

private:
    std::unique_ptr<Node> make_leaf() const {
        auto n = std::make_unique<Node>();
        std::size_t attrs = schema_.attribute_count();
        std::size_t k = schema_.class_cardinality();
        n->class_counts.assign(k, 0.0);
        n->num_stats.resize(attrs);
        n->num_min.assign(attrs, std::numeric_limits<double>::infinity());
        n->num_max.assign(attrs, -std::numeric_limits<double>::infinity());
        n->cat_stats.resize(attrs);
        for (std::size_t a = 0; a < attrs; ++a) {
            if (a == schema_.class_index) continue;
            if (schema_.attributes[a].kind == AttrKind::numeric)
                n->num_stats[a].assign(k, GaussianStats{});
            else
                n->cat_stats[a].assign(k, CategoricalCounts(schema_.attributes[a].domain.size()));
        }
        return n;
    }

    // Walks to the leaf an instance belongs to; missing split values follow
    // the branch that has carried the most traffic so far.
    Node* route(Node* node, const Instance& inst, bool count_traffic) const {
        while (node->is_split) {
            const Cell& cell = inst.cells[node->split_attr];
            std::size_t child;
            if (cell.is_missing()) {
                child = 0;
                for (std::size_t i = 1; i < node->child_traffic.size(); ++i)
                    if (node->child_traffic[i] > node->child_traffic[child]) child = i;
            } else if (cell.is_numeric()) {
                child = cell.num <= node->threshold ? 0 : 1;
            } else {
                child = cell.cat;
            }
            if (count_traffic) node->child_traffic[child] += 1.0;
            node = node->children[child].get();
        }
        return node;
    }

    struct Candidate {
        double gain = -1.0;
        std::size_t attr = 0;
        bool numeric = false;
        double threshold = 0.0;
        // Per-branch per-class seed counts for the children of this split.
        std::vector<std::vector<double>> seeds;
    };

    // Best split for one categorical attribute: branch per category.
    bool categorical_candidate(const Node& leaf, std::size_t a, Candidate& out) const {
        std::size_t k = schema_.class_cardinality();
        std::size_t dom = schema_.attributes[a].domain.size();
        std::vector<double> parent(k, 0.0);
        std::vector<std::vector<double>> parts(dom, std::vector<double>(k, 0.0));
        double seen = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            const CategoricalCounts& cc = leaf.cat_stats[a][c];
            for (std::size_t v = 0; v < dom; ++v) {
                parts[v][c] = cc.counts[v];
                parent[c] += cc.counts[v];
            }
            seen += parent[c];
        }
        if (seen <= 0.0) return false;
        out.gain = info_gain(parent, parts);
        out.attr = a;
        out.numeric = false;
        out.seeds = std::move(parts);
        return true;
    }

    // Best split for one numeric attribute over 10 equal-width thresholds;
    // branch counts are estimated from the per-class Gaussians.
    bool numeric_candidate(const Node& leaf, std::size_t a, Candidate& out) const {
        std::size_t k = schema_.class_cardinality();
        double lo = leaf.num_min[a];
        double hi = leaf.num_max[a];
        if (!(hi > lo)) return false;
        std::vector<double> parent(k, 0.0);
        for (std::size_t c = 0; c < k; ++c) parent[c] = leaf.num_stats[a][c].count;
        bool found = false;
        for (std::size_t j = 1; j <= kNumericThresholds; ++j) {
            double t = lo + (hi - lo) * static_cast<double>(j) /
                                static_cast<double>(kNumericThresholds + 1);
            std::vector<std::vector<double>> parts(2, std::vector<double>(k, 0.0));
            for (std::size_t c = 0; c < k; ++c) {
                const GaussianStats& s = leaf.num_stats[a][c];
                double below = s.count > 0.0 ? s.count * s.cdf(t) : 0.0;
                parts[0][c] = below;
                parts[1][c] = s.count - below;
            }
            double g = info_gain(parent, parts);
            if (!found || g > out.gain) {
                found = true;
                out.gain = g;
                out.attr = a;
                out.numeric = true;
                out.threshold = t;
                out.seeds = std::move(parts);
            }
        }
        return found;
    }

    void maybe_split(Node& leaf) {
        leaf.weight_at_last_eval = leaf.weight();
        std::size_t k = schema_.class_cardinality();
        if (k < 2) return;

        Candidate best, second;
        bool have_best = false, have_second = false;
        for (std::size_t a = 0; a < schema_.attribute_count(); ++a) {
            if (a == schema_.class_index) continue;
            Candidate cand;
            bool ok = schema_.attributes[a].kind == AttrKind::numeric
                          ? numeric_candidate(leaf, a, cand)
                          : categorical_candidate(leaf, a, cand);
            if (!ok) continue;
            if (!have_best || cand.gain > best.gain) {
                second = std::move(best);
                have_second = have_best;
                best = std::move(cand);
                have_best = true;
            } else if (!have_second || cand.gain > second.gain) {
                second = std::move(cand);
                have_second = true;
            }
        }
        if (!have_best || !(best.gain > 0.0)) return;
        double g2 = have_second ? second.gain : 0.0;
        double eps = hoeffding_bound(std::log2(static_cast<double>(k)), params_.delta,
                                     leaf.weight());
        if (!(best.gain - g2 > eps) && !(eps < params_.tie_threshold)) return;
        install_split(leaf, best);
    }

    // Converts the leaf into a split node; children are seeded with the
    // branch estimates, and instances the estimates cannot account for
    // (missing cells) land on the busiest child so no mass is lost.
    void install_split(Node& leaf, const Candidate& cand) {
        std::size_t k = schema_.class_cardinality();
        std::vector<double> parent_counts = leaf.class_counts;

        std::vector<double> branch_totals(cand.seeds.size(), 0.0);
        std::vector<double> accounted(k, 0.0);
        for (std::size_t b = 0; b < cand.seeds.size(); ++b)
            for (std::size_t c = 0; c < k; ++c) {
                branch_totals[b] += cand.seeds[b][c];
                accounted[c] += cand.seeds[b][c];
            }
        std::size_t busiest = 0;
        for (std::size_t b = 1; b < branch_totals.size(); ++b)
            if (branch_totals[b] > branch_totals[busiest]) busiest = b;

        leaf.is_split = true;
        leaf.split_attr = cand.attr;
        leaf.threshold = cand.threshold;
        leaf.children.clear();
        leaf.child_traffic.assign(cand.seeds.size(), 0.0);
        for (std::size_t b = 0; b < cand.seeds.size(); ++b) {
            std::unique_ptr<Node> child = make_leaf();
            child->class_counts = cand.seeds[b];
            if (b == busiest)
                for (std::size_t c = 0; c < k; ++c)
                    child->class_counts[c] += parent_counts[c] - accounted[c];
            child->weight_at_last_eval = child->weight();
            leaf.child_traffic[b] = child->weight();
            leaf.children.push_back(std::move(child));
        }
        // split nodes carry no leaf statistics
        leaf.class_counts.clear();
        leaf.num_stats.clear();
        leaf.num_min.clear();
        leaf.num_max.clear();
        leaf.cat_stats.clear();
    }

    static std::size_t count_nodes(const Node& n, bool leaves_only) {
        if (!n.is_split) return 1;
        std::size_t total = leaves_only ? 0 : 1;
        for (const auto& c : n.children) total += count_nodes(*c, leaves_only);
        return total;
    }

    static double sum_leaf_weight(const Node& n) {
        if (!n.is_split) return n.weight();
        double t = 0.0;
        for (const auto& c : n.children) t += sum_leaf_weight(*c);
        return t;
    }

    void save_node(const Node& n, ByteWriter& w) const {
        w.put_u8(n.is_split ? 1 : 0);
        if (n.is_split) {
            w.put_u16(static_cast<std::uint16_t>(n.split_attr));
            w.put_f64(n.threshold);
            w.put_u32(static_cast<std::uint32_t>(n.children.size()));
            for (double t : n.child_traffic) w.put_f64(t);
            for (const auto& c : n.children) save_node(*c, w);
            return;
        }
        for (double c : n.class_counts) w.put_f64(c);
        w.put_f64(n.weight_at_last_eval);
        for (std::size_t a = 0; a < schema_.attribute_count(); ++a) {
            if (a == schema_.class_index) continue;
            if (schema_.attributes[a].kind == AttrKind::numeric) {
                for (const GaussianStats& s : n.num_stats[a]) s.save(w);
                w.put_f64(n.num_min[a]);
                w.put_f64(n.num_max[a]);
            } else {
                for (const CategoricalCounts& c : n.cat_stats[a]) c.save(w);
            }
        }
    }

    std::unique_ptr<Node> load_node(ByteReader& r) const {
        std::uint8_t kind = r.get_u8();
        if (kind == 1) {
            auto n = std::make_unique<Node>();
            n->is_split = true;
            n->split_attr = r.get_u16();
            n->threshold = r.get_f64();
            std::uint32_t children = r.get_u32();
            n->child_traffic.resize(children);
            for (std::uint32_t i = 0; i < children; ++i) n->child_traffic[i] = r.get_f64();
            for (std::uint32_t i = 0; i < children; ++i) n->children.push_back(load_node(r));
            return n;
        }
        std::unique_ptr<Node> n = make_leaf();
        for (double& c : n->class_counts) c = r.get_f64();
        n->weight_at_last_eval = r.get_f64();
        for (std::size_t a = 0; a < schema_.attribute_count(); ++a) {
            if (a == schema_.class_index) continue;
            if (schema_.attributes[a].kind == AttrKind::numeric) {
                for (GaussianStats& s : n->num_stats[a]) s = GaussianStats::load(r);
                n->num_min[a] = r.get_f64();
                n->num_max[a] = r.get_f64();
            } else {
                for (CategoricalCounts& c : n->cat_stats[a]) {
                    CategoricalCounts loaded = CategoricalCounts::load(r);
                    if (loaded.counts.size() != c.counts.size())
                        fail(errc::snapshot_error, "domain size changed");
                    c = std::move(loaded);
                }
            }
        }
        return n;
    }

    DatasetSchema schema_;
    HoeffdingParams params_;
    std::unique_ptr<Node> root_;
    std::uint64_t trained_ = 0;
};

} // namespace smdm
