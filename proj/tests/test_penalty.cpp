#include <gtest/gtest.h>

#include <set>

#include "gridsel/subset.hpp"

using namespace gridsel;

TEST(Patterns, SevenInListedOrder) {
    const auto p = subset_combinations();
    ASSERT_EQ(p.size(), 7u);
    const std::vector<std::array<bool, 3>> expected = {{true, false, false}, {false, true, false}, {false, false, true},
                                                       {true, true, false},  {false, true, true},  {true, false, true},
                                                       {true, true, true}};
    std::set<std::array<bool, 3>> seen;
    for (std::size_t i = 0; i < 7; ++i) {
        EXPECT_EQ(p[i].off, expected[i]);
        EXPECT_FALSE(p[i].all_on());
        seen.insert(p[i].off);
    }
    EXPECT_EQ(seen.size(), 7u);
    EXPECT_EQ(p[0].label(), "off=1");
    EXPECT_EQ(p[5].label(), "off=1+3");
}

TEST(Patterns, DecisionCandidatesAppendAllOn) {
    const auto c = decision_candidates();
    ASSERT_EQ(c.size(), 8u);
    EXPECT_TRUE(c.back().all_on());
    EXPECT_EQ(c.back().label(), "all-on");
}

TEST(Penalty, L1Examples) {
    const PenaltyConfig cfg;
    EXPECT_EQ(compute_l1({40.0, 12.5}, {40.0, 12.5}, cfg), 0.0);
    EXPECT_EQ(compute_l1({60.0}, {45.0}, cfg), 15.0);
    EXPECT_EQ(compute_l1({45.0}, {60.0}, cfg), 15.0);
    EXPECT_EQ(compute_l1(std::vector<double>{}, std::vector<double>{}, cfg), 0.0);
    EXPECT_THROW(compute_l1({1.0}, {1.0, 2.0}, cfg), std::invalid_argument);
    PenaltyConfig scaled;
    scaled.l1_scale = 2.0;
    EXPECT_EQ(compute_l1({60.0}, {45.0}, scaled), 30.0);
}

TEST(Penalty, L1MaskedByChoice) {
    const PenaltyConfig cfg;
    const std::array<double, 3> pred = {10, 20, 30};
    const std::array<double, 3> act = {15, 18, 40};
    EXPECT_EQ(compute_l1(SubsetChoice{}, pred, act, cfg), 5 + 2 + 10);
    EXPECT_EQ(compute_l1(SubsetChoice{{true, false, true}}, pred, act, cfg), 2);
    EXPECT_EQ(compute_l1(SubsetChoice{{true, true, true}}, pred, act, cfg), 0);
}

TEST(Penalty, L2IsBinary) {
    const PenaltyConfig cfg;
    CongestionReport r;
    EXPECT_EQ(compute_l2(r, cfg), 0.0);
    r.congested = true;
    EXPECT_EQ(compute_l2(r, cfg), 50.0);
}

TEST(Penalty, TieBreakFewestOffThenIndex) {
    const auto c = decision_candidates();
    SubsetEvaluation a{c[3], 3};
    SubsetEvaluation b{c[0], 0};
    SubsetEvaluation on{c[7], 7};
    EXPECT_TRUE(tie_break_less(b, a));
    EXPECT_TRUE(tie_break_less(on, b));
    SubsetEvaluation b2{c[1], 1};
    EXPECT_TRUE(tie_break_less(b, b2));
    EXPECT_FALSE(tie_break_less(b2, b));
}
