#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "pdtrade/etc.hpp"

using namespace pdtrade;

TEST(PairCounts, WorkedSequence) {
    const SymbolSequence s = {0, 0, 1, 0, 1, 1, 0, 1};
    const PairCounts c = pair_counts(s);
    ASSERT_EQ(c.size(), 4u);
    // first occurrence is the smallest index i where the pair starts
    EXPECT_EQ(c.at({0, 1}), (PairStat{3, 1}));
    EXPECT_EQ(c.at({1, 0}), (PairStat{2, 2}));
    EXPECT_EQ(c.at({0, 0}), (PairStat{1, 0}));
    EXPECT_EQ(c.at({1, 1}), (PairStat{1, 4}));
}

TEST(PairCounts, OverlappingOccurrencesAllCount) {
    const SymbolSequence s = {1, 1, 1};
    EXPECT_EQ(pair_counts(s).at({1, 1}).count, 2u);
}

TEST(PairCounts, TooShortThrows) {
    EXPECT_THROW(pair_counts(SymbolSequence{7}), NoPairsError);
    EXPECT_THROW(pair_counts(SymbolSequence{}), NoPairsError);
}

TEST(MostFrequentPair, TieGoesToEarliest) {
    EXPECT_EQ(most_frequent_pair(SymbolSequence{0, 1, 1, 0}), (SymbolPair{0, 1}));
    EXPECT_EQ(most_frequent_pair(SymbolSequence{0, 0, 1, 0, 1, 1, 0, 1}), (SymbolPair{0, 1}));
}

TEST(NsrpsStep, FirstIteration) {
    EXPECT_EQ(nsrps_step(SymbolSequence{0, 0, 1, 0, 1, 1, 0, 1}, 2), (SymbolSequence{0, 2, 2, 1, 2}));
}

TEST(NsrpsStep, NonOverlappingLeftToRight) {
    // the match at 0 consumes positions 0-1, so position 2 survives
    EXPECT_EQ(nsrps_step(SymbolSequence{1, 1, 1, 0}, 2), (SymbolSequence{2, 1, 0}));
    EXPECT_EQ(nsrps_step(SymbolSequence{3, 2, 1, 2}, 4), (SymbolSequence{4, 1, 2}));
}

TEST(NsrpsStep, Errors) {
    EXPECT_THROW(nsrps_step(SymbolSequence{}, 1), NothingToSubstituteError);
    EXPECT_THROW(nsrps_step(SymbolSequence{3, 3}, 4), NothingToSubstituteError);
    EXPECT_THROW(nsrps_step(SymbolSequence{0, 1}, 1), std::invalid_argument);
}

TEST(Etc, WorkedExampleTrace) {
    const SymbolSequence s = {0, 0, 1, 0, 1, 1, 0, 1};
    EXPECT_EQ(calculate_etc(s), 5u);
    const std::vector<SymbolSequence> expected = {{0, 2, 2, 1, 2}, {3, 2, 1, 2}, {4, 1, 2}, {5, 2}, {6}};
    EXPECT_EQ(etc_trace(s), expected);
}

TEST(Etc, SmallCases) {
    EXPECT_EQ(calculate_etc(SymbolSequence{}), 0u);
    EXPECT_EQ(calculate_etc(SymbolSequence{1}), 0u);
    EXPECT_EQ(calculate_etc(SymbolSequence{1, 1, 1, 1}), 0u);
    EXPECT_EQ(calculate_etc(SymbolSequence{0, 1}), 1u);
    EXPECT_EQ(calculate_etc(SymbolSequence{0, 1, 0, 1, 0, 1}), 1u);
    EXPECT_EQ(calculate_etc(SymbolSequence{0, 0, 1, 1}), 3u);
}

TEST(Etc, OrderSensitive) {
    EXPECT_NE(calculate_etc(SymbolSequence{0, 0, 1, 1}), calculate_etc(SymbolSequence{0, 1, 0, 1}));
}

TEST(EtcProperty, MatchesOracleOnRandomSequences) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 600; ++trial) {
        const std::size_t len = std::uniform_int_distribution<std::size_t>(0, trial < 500 ? 40 : 400)(rng);
        const int alphabet = std::uniform_int_distribution<int>(1, 4)(rng);
        SymbolSequence s(len);
        for (auto& v : s) v = std::uniform_int_distribution<int>(0, alphabet - 1)(rng);
        const auto expected = oracle::trace(s);
        ASSERT_EQ(calculate_etc(s), expected.size()) << "trial " << trial;
        ASSERT_EQ(etc_trace(s), expected) << "trial " << trial;
    }
}

TEST(EtcProperty, TerminatesWithinLengthMinusOne) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t len = std::uniform_int_distribution<std::size_t>(1, 300)(rng);
        SymbolSequence s(len);
        for (auto& v : s) v = std::uniform_int_distribution<int>(0, 1)(rng);
        EXPECT_LE(calculate_etc(s), len - 1);
    }
}

TEST(EtcProperty, EachStepShortensTheSequence) {
    std::mt19937_64 rng(9);
    SymbolSequence s(200);
    for (auto& v : s) v = std::uniform_int_distribution<int>(0, 1)(rng);
    std::size_t prev = s.size();
    for (const auto& step : etc_trace(s)) {
        EXPECT_LT(step.size(), prev);
        prev = step.size();
    }
}
