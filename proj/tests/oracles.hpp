#pragma once

// Slow, obviously-correct reference implementations used only by the tests.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "pdtrade/pdt.hpp"

namespace oracle {

using Seq = std::vector<std::int64_t>;

inline bool homogeneous(const Seq& s) {
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] != s[0]) return false;
    }
    return true;
}

// One substitution round: most frequent adjacent pair (earliest first
// occurrence on ties) replaced left to right, non-overlapping.
inline Seq substitute(const Seq& s) {
    std::map<std::pair<std::int64_t, std::int64_t>, std::pair<int, std::size_t>> counts;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
        auto key = std::make_pair(s[i], s[i + 1]);
        auto it = counts.find(key);
        if (it == counts.end()) {
            counts[key] = {1, i};
        } else {
            ++it->second.first;
        }
    }
    std::pair<std::int64_t, std::int64_t> best{};
    int best_count = 0;
    std::size_t best_first = 0;
    for (const auto& [pair, stat] : counts) {
        if (stat.first > best_count || (stat.first == best_count && stat.second < best_first)) {
            best = pair;
            best_count = stat.first;
            best_first = stat.second;
        }
    }
    const std::int64_t fresh = *std::max_element(s.begin(), s.end()) + 1;
    Seq out;
    for (std::size_t i = 0; i < s.size();) {
        if (i + 1 < s.size() && s[i] == best.first && s[i + 1] == best.second) {
            out.push_back(fresh);
            i += 2;
        } else {
            out.push_back(s[i]);
            ++i;
        }
    }
    return out;
}

inline std::vector<Seq> trace(Seq s) {
    std::vector<Seq> steps;
    while (!s.empty() && !homogeneous(s)) {
        s = substitute(s);
        steps.push_back(s);
    }
    return steps;
}

inline std::size_t etc(const Seq& s) { return trace(s).size(); }

// Brute-force tree over nested vectors.
struct Node {
    bool leaf = true;
    std::uint8_t label = 0;
    long feature = -1;
    double threshold = 0;
    std::unique_ptr<Node> left, right;
};

inline std::uint8_t majority(const Seq& labels) {
    long ones = std::count(labels.begin(), labels.end(), 1);
    return 2 * ones > static_cast<long>(labels.size()) ? 1 : 0;
}

inline std::unique_ptr<Node> build(const std::vector<std::vector<double>>& x, const Seq& y, std::size_t depth,
                                   std::size_t max_depth, std::size_t min_size) {
    auto node = std::make_unique<Node>();
    if (homogeneous(y)) {
        node->label = static_cast<std::uint8_t>(y.front());
        return node;
    }
    node->label = majority(y);
    if (depth >= max_depth || y.size() < min_size) return node;

    const double total = static_cast<double>(etc(y));
    const std::size_t width = x.front().size();
    double best_gain = -1e300;
    long best_feature = -1;
    double best_threshold = 0;
    for (std::size_t f = 0; f < width; ++f) {
        std::vector<double> values;
        for (const auto& row : x) values.push_back(row[f]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t k = 0; k + 1 < values.size(); ++k) {
            const double t = (values[k] + values[k + 1]) / 2;
            Seq l, r;
            for (std::size_t i = 0; i < x.size(); ++i) (x[i][f] <= t ? l : r).push_back(y[i]);
            const double n = static_cast<double>(y.size());
            const double gain = total - (static_cast<double>(l.size()) / n * static_cast<double>(etc(l)) +
                                         static_cast<double>(r.size()) / n * static_cast<double>(etc(r)));
            if (gain > best_gain) {
                best_gain = gain;
                best_feature = static_cast<long>(f);
                best_threshold = t;
            }
        }
    }
    if (best_feature < 0) return node;

    std::vector<std::vector<double>> xl, xr;
    Seq yl, yr;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i][static_cast<std::size_t>(best_feature)] <= best_threshold) {
            xl.push_back(x[i]);
            yl.push_back(y[i]);
        } else {
            xr.push_back(x[i]);
            yr.push_back(y[i]);
        }
    }
    node->leaf = false;
    node->feature = best_feature;
    node->threshold = best_threshold;
    node->left = build(xl, yl, depth + 1, max_depth, min_size);
    node->right = build(xr, yr, depth + 1, max_depth, min_size);
    return node;
}

// Node-for-node comparison against the library's flat tree.
inline bool same(const Node& a, const pdtrade::Tree<double>& t, std::size_t i) {
    const auto& n = t.node(i);
    if (a.leaf != n.is_leaf()) return false;
    if (a.leaf) return a.label == n.label;
    return a.feature == n.feature && a.threshold == n.threshold &&
           same(*a.left, t, static_cast<std::size_t>(n.left)) && same(*a.right, t, static_cast<std::size_t>(n.right));
}

}  // namespace oracle
