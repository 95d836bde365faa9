#include "pdtrade/tree_io.hpp"

#include <json.hpp>

namespace pdtrade {

namespace {

using nlohmann::ordered_json;

ordered_json node_to_json(const Tree<double>& tree, std::size_t i) {
    const auto& n = tree.node(i);
    ordered_json j;
    if (n.is_leaf()) {
        j["label"] = n.label;
        return j;
    }
    j["feature_index"] = n.feature;
    j["threshold"] = n.threshold;
    j["left"] = node_to_json(tree, static_cast<std::size_t>(n.left));
    j["right"] = node_to_json(tree, static_cast<std::size_t>(n.right));
    return j;
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw TreeFormatError("tree document at " + (path.empty() ? std::string("/") : path) + ": " + what);
}

Tree<double> node_from_json(const ordered_json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "node must be an object");
    if (j.contains("label")) {
        if (j.size() != 1) fail(path, "leaf must only carry 'label'");
        const auto& label = j["label"];
        if (!label.is_number_unsigned() || label.get<unsigned>() > 1) fail(path + "/label", "label must be 0 or 1");
        return Tree<double>::leaf(static_cast<Label>(label.get<unsigned>()));
    }
    for (const char* key : {"feature_index", "threshold", "left", "right"}) {
        if (!j.contains(key)) fail(path, std::string("missing '") + key + "'");
    }
    if (j.size() != 4) fail(path, "unexpected keys in internal node");
    const auto& feature = j["feature_index"];
    if (!feature.is_number_unsigned()) fail(path + "/feature_index", "must be a non-negative integer");
    const auto& threshold = j["threshold"];
    if (!threshold.is_number()) fail(path + "/threshold", "must be a number");
    return Tree<double>::internal(static_cast<Eigen::Index>(feature.get<std::uint64_t>()), threshold.get<double>(),
                                  node_from_json(j["left"], path + "/left"), node_from_json(j["right"], path + "/right"));
}

}  // namespace

std::string serialize_tree(const Tree<double>& tree) {
    return node_to_json(tree, 0).dump(2) + "\n";
}

Tree<double> deserialize_tree(std::string_view text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        throw TreeFormatError("tree document malformed at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return node_from_json(j, "");
}

}  // namespace pdtrade
