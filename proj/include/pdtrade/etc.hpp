#pragma once

// Effort-To-Compress of symbol sequences via non-sequential recursive pair
// substitution (NSRPS).

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pdtrade {

using Symbol = std::int64_t;
using SymbolSequence = std::vector<Symbol>;
using SymbolPair = std::pair<Symbol, Symbol>;

struct PairStat {
    std::size_t count = 0;
    std::size_t first = 0;  ///< smallest i with (seq[i], seq[i+1]) == pair

    friend bool operator==(const PairStat&, const PairStat&) = default;
};

using PairCounts = std::map<SymbolPair, PairStat>;

/// Raised when a sequence has fewer than two elements.
class NoPairsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised by nsrps_step on empty or homogeneous input.
class NothingToSubstituteError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Counts every adjacent pair and records where it first occurs.
PairCounts pair_counts(std::span<const Symbol> seq);

/// The pair NSRPS would substitute next: highest count, earliest first
/// occurrence on ties.
SymbolPair most_frequent_pair(std::span<const Symbol> seq);

/// One substitution: replaces the most frequent pair left-to-right,
/// non-overlapping, by `next_symbol`.
SymbolSequence nsrps_step(std::span<const Symbol> seq, Symbol next_symbol);

/// Number of NSRPS iterations until at most one distinct symbol remains.
std::size_t calculate_etc(std::span<const Symbol> seq);

/// Every intermediate sequence produced while computing the ETC, in order.
/// The trace size equals calculate_etc(seq).
std::vector<SymbolSequence> etc_trace(std::span<const Symbol> seq);

bool is_homogeneous(std::span<const Symbol> seq);

}  // namespace pdtrade
