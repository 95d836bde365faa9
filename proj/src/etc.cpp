#include "pdtrade/etc.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace pdtrade {

namespace {

// Open-addressing pair counter reused across NSRPS iterations. Slots are
// invalidated by bumping a generation stamp instead of clearing memory.
class PairCounter {
public:
    struct Best {
        std::uint64_t key = 0;
        std::uint32_t count = 0;
        std::uint32_t first = 0;
    };

    explicit PairCounter(std::size_t max_pairs)
        : slots_(std::bit_ceil(std::max<std::size_t>(16, 2 * max_pairs))), mask_(slots_.size() - 1) {}

    Best count(std::span<const Symbol> seq) {
        ++generation_;
        Best best;
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            const std::uint64_t key = (static_cast<std::uint64_t>(seq[i]) << 32) |
                                      static_cast<std::uint64_t>(seq[i + 1]);
            Slot& slot = find(key);
            if (slot.generation != generation_) {
                slot = Slot{key, generation_, 0, static_cast<std::uint32_t>(i)};
            }
            ++slot.count;
            if (slot.count > best.count || (slot.count == best.count && slot.first < best.first)) {
                best = Best{key, slot.count, slot.first};
            }
        }
        return best;
    }

private:
    struct Slot {
        std::uint64_t key = 0;
        std::uint64_t generation = 0;
        std::uint32_t count = 0;
        std::uint32_t first = 0;
    };

    Slot& find(std::uint64_t key) {
        std::size_t h = static_cast<std::size_t>((key * 0x9E3779B97F4A7C15ULL) >> 17) & mask_;
        while (slots_[h].generation == generation_ && slots_[h].key != key) h = (h + 1) & mask_;
        return slots_[h];
    }

    std::vector<Slot> slots_;
    std::size_t mask_;
    std::uint64_t generation_ = 0;
};

void substitute(std::span<const Symbol> seq, SymbolPair pair, Symbol replacement, SymbolSequence& out) {
    out.clear();
    std::size_t i = 0;
    while (i < seq.size()) {
        if (i + 1 < seq.size() && seq[i] == pair.first && seq[i + 1] == pair.second) {
            out.push_back(replacement);
            i += 2;
        } else {
            out.push_back(seq[i]);
            i += 1;
        }
    }
}

void require_non_negative(std::span<const Symbol> seq) {
    if (std::any_of(seq.begin(), seq.end(), [](Symbol s) { return s < 0; })) {
        throw std::invalid_argument("symbol sequences must be non-negative");
    }
}

}  // namespace

bool is_homogeneous(std::span<const Symbol> seq) {
    return std::adjacent_find(seq.begin(), seq.end(), std::not_equal_to<>{}) == seq.end();
}

PairCounts pair_counts(std::span<const Symbol> seq) {
    if (seq.size() < 2) throw NoPairsError("pair_counts: sequence has fewer than two symbols");
    PairCounts counts;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        auto [it, inserted] = counts.try_emplace(SymbolPair{seq[i], seq[i + 1]}, PairStat{0, i});
        ++it->second.count;
    }
    return counts;
}

SymbolPair most_frequent_pair(std::span<const Symbol> seq) {
    const PairCounts counts = pair_counts(seq);
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
        if (it->second.count > best->second.count ||
            (it->second.count == best->second.count && it->second.first < best->second.first)) {
            best = it;
        }
    }
    return best->first;
}

SymbolSequence nsrps_step(std::span<const Symbol> seq, Symbol next_symbol) {
    if (is_homogeneous(seq)) throw NothingToSubstituteError("nsrps_step: sequence is empty or homogeneous");
    require_non_negative(seq);
    if (next_symbol <= *std::max_element(seq.begin(), seq.end())) {
        throw std::invalid_argument("nsrps_step: next_symbol must exceed every symbol in the sequence");
    }
    SymbolSequence out;
    out.reserve(seq.size());
    substitute(seq, most_frequent_pair(seq), next_symbol, out);
    return out;
}

std::vector<SymbolSequence> etc_trace(std::span<const Symbol> seq) {
    std::vector<SymbolSequence> trace;
    if (is_homogeneous(seq)) return trace;
    require_non_negative(seq);
    Symbol max_symbol = *std::max_element(seq.begin(), seq.end());
    SymbolSequence current(seq.begin(), seq.end());
    while (!is_homogeneous(current)) {
        current = nsrps_step(current, ++max_symbol);
        trace.push_back(current);
    }
    return trace;
}

std::size_t calculate_etc(std::span<const Symbol> seq) {
    if (is_homogeneous(seq)) return 0;
    require_non_negative(seq);

    Symbol max_symbol = *std::max_element(seq.begin(), seq.end());
    // Every iteration mints one symbol, so this bounds all symbols we will see.
    const auto symbol_bound = static_cast<std::uint64_t>(max_symbol) + seq.size();
    if (symbol_bound >= std::numeric_limits<std::uint32_t>::max() ||
        seq.size() >= std::numeric_limits<std::uint32_t>::max()) {
        return etc_trace(seq).size();
    }

    PairCounter counter(seq.size());
    SymbolSequence current(seq.begin(), seq.end());
    SymbolSequence next;
    next.reserve(current.size());
    std::size_t iterations = 0;
    while (!is_homogeneous(current)) {
        const auto best = counter.count(current);
        if (best.count == 1) {
            // All adjacent pairs are distinct, so each remaining step replaces
            // the leading pair with a fresh symbol; the fresh symbol keeps the
            // sequence non-homogeneous until a single symbol is left.
            return iterations + current.size() - 1;
        }
        const SymbolPair pair{static_cast<Symbol>(best.key >> 32), static_cast<Symbol>(best.key & 0xFFFFFFFFULL)};
        substitute(current, pair, ++max_symbol, next);
        current.swap(next);
        ++iterations;
    }
    return iterations;
}

}  // namespace pdtrade
