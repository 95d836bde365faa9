#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "pdtrade/pdt.hpp"

namespace pdtrade {

class TreeFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Nested JSON: internal nodes carry `feature_index`, `threshold`, `left`,
/// `right`; leaves carry `label`. Thresholds round-trip exactly.
std::string serialize_tree(const Tree<double>& tree);

/// Errors name the byte offset (syntax) or JSON pointer (structure).
Tree<double> deserialize_tree(std::string_view text);

}  // namespace pdtrade
