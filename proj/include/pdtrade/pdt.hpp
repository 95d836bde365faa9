#pragma once

// Permutation Decision Tree: a binary decision tree whose split criterion is
// the drop in Effort-To-Compress of the time-ordered label sequence.
//
// The core is templated on the feature scalar and operates on row-major Eigen
// matrices. Row order is significant: it is the temporal order of the labels.

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdtrade/etc.hpp"

namespace pdtrade {

using Label = std::uint8_t;

template <typename Scalar>
using FeatureMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

class EmptyNodeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class UntrainedModelError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Best threshold for one feature. `gain` is -inf exactly when no threshold
/// exists (the feature takes a single value at this node).
template <typename Scalar>
struct SplitResult {
    double gain = -std::numeric_limits<double>::infinity();
    std::optional<Scalar> threshold;

    bool valid() const { return threshold.has_value(); }
};

template <typename Scalar>
struct FeatureSplit {
    std::optional<Eigen::Index> feature;
    std::optional<Scalar> threshold;
    double gain = -std::numeric_limits<double>::infinity();
};

struct TrainStats {
    std::size_t nodes = 0;
    std::size_t leaves = 0;
    std::size_t max_depth_reached = 0;
    bool time_limit_hit = false;
};

struct TrainConfig {
    std::size_t max_depth = 10;
    std::size_t min_node_size = 5;
    /// Features searched concurrently per node. The winner is still reduced
    /// in ascending feature order.
    std::size_t workers = 1;
    /// Once exceeded, every node still to be expanded becomes a majority leaf.
    std::optional<std::chrono::duration<double>> time_limit;
    /// Invoked after every finished node.
    std::function<void(const TrainStats&)> progress;

    void validate() const {
        if (max_depth < 1) throw std::invalid_argument("max_depth must be >= 1");
        if (min_node_size < 1) throw std::invalid_argument("min_node_size must be >= 1");
        if (workers < 1) throw std::invalid_argument("workers must be >= 1");
    }
};

/// Immutable tree stored as a flat node array; node 0 is the root and
/// children are laid out in pre-order.
template <typename Scalar>
class Tree {
public:
    struct Node {
        Label label = 0;
        Eigen::Index feature = -1;
        Scalar threshold{};
        std::int32_t left = -1;
        std::int32_t right = -1;

        bool is_leaf() const { return left < 0; }
    };

    static Tree leaf(Label label) {
        Tree t;
        t.nodes_.push_back(Node{label, -1, Scalar{}, -1, -1});
        return t;
    }

    static Tree internal(Eigen::Index feature, Scalar threshold, const Tree& left, const Tree& right) {
        Tree t;
        t.nodes_.reserve(1 + left.size() + right.size());
        t.nodes_.push_back(Node{0, feature, threshold, -1, -1});
        t.nodes_[0].left = t.append(left);
        t.nodes_[0].right = t.append(right);
        return t;
    }

    std::size_t size() const { return nodes_.size(); }
    const Node& node(std::size_t i) const { return nodes_.at(i); }
    const Node& root() const { return nodes_.front(); }
    std::span<const Node> nodes() const { return nodes_; }

    std::size_t leaf_count() const {
        return static_cast<std::size_t>(
            std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.is_leaf(); }));
    }

    /// Edges on the longest root-to-leaf path.
    std::size_t depth() const { return depth_from(0); }

    Tree subtree(std::size_t i) const {
        const Node& n = nodes_.at(i);
        if (n.is_leaf()) return leaf(n.label);
        return internal(n.feature, n.threshold, subtree(static_cast<std::size_t>(n.left)),
                        subtree(static_cast<std::size_t>(n.right)));
    }

    template <typename Derived>
    Label predict(const Eigen::MatrixBase<Derived>& x) const {
        std::size_t i = 0;
        while (!nodes_[i].is_leaf()) {
            const Node& n = nodes_[i];
            if (n.feature >= x.size()) throw std::out_of_range("feature vector narrower than the tree requires");
            i = static_cast<std::size_t>(x(n.feature) <= n.threshold ? n.left : n.right);
        }
        return nodes_[i].label;
    }

    Label predict(std::span<const Scalar> x) const {
        return predict(Eigen::Map<const Vector<Scalar>>(x.data(), static_cast<Eigen::Index>(x.size())));
    }

    friend bool operator==(const Tree& a, const Tree& b) { return equal_at(a, 0, b, 0); }

private:
    std::int32_t append(const Tree& other) {
        const auto offset = static_cast<std::int32_t>(nodes_.size());
        for (Node n : other.nodes_) {
            if (!n.is_leaf()) {
                n.left += offset;
                n.right += offset;
            }
            nodes_.push_back(n);
        }
        return offset;
    }

    std::size_t depth_from(std::size_t i) const {
        const Node& n = nodes_[i];
        if (n.is_leaf()) return 0;
        return 1 + std::max(depth_from(static_cast<std::size_t>(n.left)),
                            depth_from(static_cast<std::size_t>(n.right)));
    }

    static bool equal_at(const Tree& a, std::size_t i, const Tree& b, std::size_t j) {
        const Node& x = a.nodes_[i];
        const Node& y = b.nodes_[j];
        if (x.is_leaf() != y.is_leaf()) return false;
        if (x.is_leaf()) return x.label == y.label;
        return x.feature == y.feature && x.threshold == y.threshold &&
               equal_at(a, static_cast<std::size_t>(x.left), b, static_cast<std::size_t>(y.left)) &&
               equal_at(a, static_cast<std::size_t>(x.right), b, static_cast<std::size_t>(y.right));
    }

    std::vector<Node> nodes_;
};

namespace detail {

using RowIndex = std::vector<Eigen::Index>;

inline SymbolSequence to_symbols(std::span<const Label> labels, const RowIndex& rows) {
    SymbolSequence seq;
    seq.reserve(rows.size());
    for (Eigen::Index r : rows) seq.push_back(labels[static_cast<std::size_t>(r)]);
    return seq;
}

/// Majority label; an even split goes to 0.
inline Label majority(const SymbolSequence& seq) {
    const auto ones = static_cast<std::size_t>(std::count(seq.begin(), seq.end(), Symbol{1}));
    return ones * 2 > seq.size() ? Label{1} : Label{0};
}

template <typename Scalar>
SplitResult<Scalar> best_threshold(const FeatureMatrix<Scalar>& data, const SymbolSequence& node_labels,
                                   const RowIndex& rows, Eigen::Index feature) {
    const std::size_t n = rows.size();
    std::vector<Scalar> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = data(rows[i], feature);

    std::vector<Scalar> unique = values;
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());

    SplitResult<Scalar> best;
    if (unique.size() < 2) return best;

    const double total = static_cast<double>(calculate_etc(node_labels));
    const double size = static_cast<double>(n);
    SymbolSequence left, right;
    left.reserve(n);
    right.reserve(n);
    for (std::size_t k = 0; k + 1 < unique.size(); ++k) {
        const Scalar threshold = (unique[k] + unique[k + 1]) / Scalar(2);
        left.clear();
        right.clear();
        for (std::size_t i = 0; i < n; ++i) (values[i] <= threshold ? left : right).push_back(node_labels[i]);

        const double etc_left = left.empty() ? 0.0 : static_cast<double>(calculate_etc(left));
        const double etc_right = right.empty() ? 0.0 : static_cast<double>(calculate_etc(right));
        const double w_left = static_cast<double>(left.size()) / size;
        const double w_right = static_cast<double>(right.size()) / size;
        const double gain = total - (w_left * etc_left + w_right * etc_right);
        // Ascending thresholds with strict '>' keep the smallest maximizer.
        if (gain > best.gain) {
            best.gain = gain;
            best.threshold = threshold;
        }
    }
    return best;
}

template <typename Scalar>
FeatureSplit<Scalar> best_feature(const FeatureMatrix<Scalar>& data, const SymbolSequence& node_labels,
                                  const RowIndex& rows, std::size_t workers) {
    const Eigen::Index width = data.cols();
    std::vector<SplitResult<Scalar>> per_feature(static_cast<std::size_t>(width));
    if (workers > 1 && width > 1) {
        std::vector<std::future<void>> pending;
        const auto stride = static_cast<Eigen::Index>(workers);
        for (Eigen::Index w = 0; w < stride && w < width; ++w) {
            pending.push_back(std::async(std::launch::async, [&, w] {
                for (Eigen::Index f = w; f < width; f += stride) {
                    per_feature[static_cast<std::size_t>(f)] = best_threshold(data, node_labels, rows, f);
                }
            }));
        }
        for (auto& p : pending) p.get();
    } else {
        for (Eigen::Index f = 0; f < width; ++f) {
            per_feature[static_cast<std::size_t>(f)] = best_threshold(data, node_labels, rows, f);
        }
    }

    FeatureSplit<Scalar> best;
    for (Eigen::Index f = 0; f < width; ++f) {
        const auto& split = per_feature[static_cast<std::size_t>(f)];
        if (split.gain > best.gain) {
            best.gain = split.gain;
            best.feature = f;
            best.threshold = split.threshold;
        }
    }
    return best;
}

template <typename Scalar>
class Builder {
public:
    Builder(const FeatureMatrix<Scalar>& data, std::span<const Label> labels, const TrainConfig& cfg)
        : data_(data), labels_(labels), cfg_(cfg), start_(std::chrono::steady_clock::now()) {}

    Tree<Scalar> grow(const RowIndex& rows, std::size_t depth) {
        const SymbolSequence node_labels = to_symbols(labels_, rows);
        stats_.max_depth_reached = std::max(stats_.max_depth_reached, depth);

        if (is_homogeneous(node_labels)) return finish_leaf(static_cast<Label>(node_labels.front()));
        if (depth >= cfg_.max_depth || rows.size() < cfg_.min_node_size || out_of_time()) {
            return finish_leaf(majority(node_labels));
        }

        const FeatureSplit<Scalar> split = best_feature(data_, node_labels, rows, cfg_.workers);
        if (!split.threshold) return finish_leaf(majority(node_labels));

        RowIndex left, right;
        for (Eigen::Index r : rows) (data_(r, *split.feature) <= *split.threshold ? left : right).push_back(r);
        // Only reachable when a midpoint rounds onto one of its endpoints.
        if (left.empty() || right.empty()) return finish_leaf(majority(node_labels));

        Tree<Scalar> lhs = grow(left, depth + 1);
        Tree<Scalar> rhs = grow(right, depth + 1);
        ++stats_.nodes;
        report();
        return Tree<Scalar>::internal(*split.feature, *split.threshold, lhs, rhs);
    }

    const TrainStats& stats() const { return stats_; }

private:
    Tree<Scalar> finish_leaf(Label label) {
        ++stats_.nodes;
        ++stats_.leaves;
        report();
        return Tree<Scalar>::leaf(label);
    }

    bool out_of_time() {
        if (!cfg_.time_limit) return false;
        if (std::chrono::steady_clock::now() - start_ > *cfg_.time_limit) stats_.time_limit_hit = true;
        return stats_.time_limit_hit;
    }

    void report() const {
        if (cfg_.progress) cfg_.progress(stats_);
    }

    const FeatureMatrix<Scalar>& data_;
    std::span<const Label> labels_;
    const TrainConfig& cfg_;
    std::chrono::steady_clock::time_point start_;
    TrainStats stats_;
};

template <typename Scalar>
void check_shape(const FeatureMatrix<Scalar>& data, std::span<const Label> labels) {
    if (static_cast<std::size_t>(data.rows()) != labels.size()) {
        throw std::invalid_argument("feature matrix has " + std::to_string(data.rows()) + " rows but " +
                                    std::to_string(labels.size()) + " labels were given");
    }
    if (std::any_of(labels.begin(), labels.end(), [](Label l) { return l > 1; })) {
        throw std::invalid_argument("labels must be 0 or 1");
    }
}

inline RowIndex all_rows(Eigen::Index n) {
    RowIndex rows(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
    return rows;
}

}  // namespace detail

/// Builds a row-major matrix from nested rows; ragged input is rejected.
template <typename Scalar>
FeatureMatrix<Scalar> to_matrix(const std::vector<std::vector<Scalar>>& rows) {
    const std::size_t width = rows.empty() ? 0 : rows.front().size();
    FeatureMatrix<Scalar> m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != width) {
            throw std::invalid_argument("ragged feature matrix: row " + std::to_string(r) + " has " +
                                        std::to_string(rows[r].size()) + " columns, expected " +
                                        std::to_string(width));
        }
        for (std::size_t c = 0; c < width; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

/// Best ETC-gain threshold for one feature column.
template <typename Scalar>
SplitResult<Scalar> etc_gain(const FeatureMatrix<Scalar>& data, std::span<const Label> labels,
                             Eigen::Index feature_index) {
    detail::check_shape(data, labels);
    if (data.rows() == 0) throw EmptyNodeError("etc_gain: empty node");
    if (feature_index < 0 || feature_index >= data.cols()) throw std::out_of_range("etc_gain: bad feature index");
    const auto rows = detail::all_rows(data.rows());
    return detail::best_threshold(data, detail::to_symbols(labels, rows), rows, feature_index);
}

/// Feature and threshold with the strictly greatest ETC gain; earlier
/// features win ties.
template <typename Scalar>
FeatureSplit<Scalar> find_best_feature(const FeatureMatrix<Scalar>& data, std::span<const Label> labels,
                                       std::size_t workers = 1) {
    detail::check_shape(data, labels);
    if (data.rows() == 0) throw EmptyNodeError("find_best_feature: empty node");
    const auto rows = detail::all_rows(data.rows());
    return detail::best_feature(data, detail::to_symbols(labels, rows), rows, workers);
}

/// Grows a tree from `depth`. Returns nothing for an empty matrix.
template <typename Scalar>
std::optional<Tree<Scalar>> build_pdt(const FeatureMatrix<Scalar>& data, std::span<const Label> labels,
                                      std::size_t depth, const TrainConfig& cfg, TrainStats* stats = nullptr) {
    cfg.validate();
    detail::check_shape(data, labels);
    if (data.rows() == 0) return std::nullopt;
    detail::Builder<Scalar> builder(data, labels, cfg);
    Tree<Scalar> tree = builder.grow(detail::all_rows(data.rows()), depth);
    if (stats) *stats = builder.stats();
    return tree;
}

template <typename Scalar, typename Derived>
Label predict(const std::optional<Tree<Scalar>>& tree, const Eigen::MatrixBase<Derived>& x) {
    if (!tree) throw UntrainedModelError("predict: model has not been trained");
    return tree->predict(x);
}

template <typename Scalar>
std::vector<Label> predict_rows(const Tree<Scalar>& tree, const FeatureMatrix<Scalar>& data) {
    std::vector<Label> out(static_cast<std::size_t>(data.rows()));
    for (Eigen::Index r = 0; r < data.rows(); ++r) out[static_cast<std::size_t>(r)] = tree.predict(data.row(r));
    return out;
}

}  // namespace pdtrade
