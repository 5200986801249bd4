#include "uncross/uniform.hpp"

#include <gtest/gtest.h>

#include <stdexcept>

#include "uncross/properties.hpp"
#include "testutil.hpp"

namespace uncross {
namespace {

using testutil::ask;
using testutil::ask_book;
using testutil::bid;
using testutil::bid_book;
using testutil::tx;
using testutil::VolumeGapInstance;

TEST(UniformMatch, StopsWhenHeadsNoLongerCross) {
    const VolumeGapInstance inst;
    const Matching out = uniform_match(inst.bids, inst.asks);
    const Matching expected = {tx(1, 3, 1, 70)};
    EXPECT_EQ(out, expected);
    EXPECT_EQ(volume(out), 1);
}

TEST(UniformMatch, LastCrossingStepSetsTheClearingPrice) {
    // One bid for 3 against asks of 2 @ 100 and 5 @ 105: both asks
    // trade, and every unit clears at the price of the later step.
    const OrderBookSide bids = bid_book({bid(1, 1, 3, 110)});
    const OrderBookSide asks = ask_book({ask(2, 1, 2, 100), ask(3, 2, 5, 105)});
    const Matching out = uniform_match(bids, asks);
    const Matching expected = {tx(1, 2, 2, 105), tx(1, 3, 1, 105)};
    EXPECT_EQ(out, expected);
    EXPECT_EQ(volume(out), 3);
}

TEST(UniformMatch, EmptyWhenNoCross) {
    EXPECT_TRUE(uniform_match(bid_book({}), ask_book({})).empty());
    EXPECT_TRUE(
        uniform_match(bid_book({bid(1, 1, 1, 10)}), ask_book({})).empty());
    EXPECT_TRUE(
        uniform_match(bid_book({}), ask_book({ask(2, 1, 1, 10)})).empty());
    EXPECT_TRUE(uniform_match(bid_book({bid(1, 1, 1, 10)}),
                              ask_book({ask(2, 1, 1, 11)}))
                    .empty());
}

TEST(UniformMatch, EqualLimitsDoCross) {
    const Matching out = uniform_match(bid_book({bid(1, 1, 2, 10)}),
                                       ask_book({ask(2, 1, 2, 10)}));
    const Matching expected = {tx(1, 2, 2, 10)};
    EXPECT_EQ(out, expected);
}

TEST(UniformMatch, SatisfiesAllFourGuidelineProperties) {
    const OrderBookSide bids =
        bid_book({bid(1, 1, 3, 100), bid(2, 2, 2, 96), bid(3, 3, 4, 90)});
    const OrderBookSide asks =
        ask_book({ask(4, 1, 2, 80), ask(5, 2, 4, 95), ask(6, 3, 4, 99)});
    const Matching out = uniform_match(bids, asks);
    EXPECT_TRUE(is_matching(out, bids, asks));
    EXPECT_TRUE(is_ir(out, bids, asks));
    EXPECT_TRUE(is_uniform(out));
    EXPECT_TRUE(is_fair(out, bids, asks));
}

TEST(UniformTrace, RecordsProvisionalPricesAndClearingPrice) {
    const OrderBookSide bids = bid_book({bid(1, 1, 3, 110)});
    const OrderBookSide asks = ask_book({ask(2, 1, 2, 100), ask(3, 2, 5, 105)});
    const UniformTrace trace = uniform_trace(bids, asks);
    const Matching expected_provisional = {tx(1, 2, 2, 100), tx(1, 3, 1, 105)};
    EXPECT_EQ(trace.provisional, expected_provisional);
    ASSERT_TRUE(trace.clearing_price.has_value());
    EXPECT_EQ(*trace.clearing_price, 105);
}

TEST(UniformTrace, NoCrossMeansNoClearingPrice) {
    const UniformTrace trace = uniform_trace(
        bid_book({bid(1, 1, 1, 10)}), ask_book({ask(2, 1, 1, 20)}));
    EXPECT_TRUE(trace.provisional.empty());
    EXPECT_FALSE(trace.clearing_price.has_value());
}

TEST(UniformCross, ResumesFromInteriorState) {
    const std::vector<Order> bids_sorted = {bid(1, 1, 3, 100)};
    const std::vector<Order> asks_sorted = {ask(2, 1, 3, 50)};
    // One bid unit and two ask units already filled: effective 2 vs 1.
    const Matching out = uniform_cross(bids_sorted, asks_sorted, 1, 2);
    const Matching expected = {tx(1, 2, 1, 50)};
    EXPECT_EQ(out, expected);
}

TEST(UniformCross, EqualEffectiveQuantitiesAdvanceBothSides) {
    const std::vector<Order> bids_sorted = {bid(1, 1, 4, 100), bid(2, 2, 1, 90)};
    const std::vector<Order> asks_sorted = {ask(3, 1, 2, 60), ask(4, 2, 9, 95)};
    // Head effective quantities: 4-2=2 vs 2: both advance, then bid 2
    // (90) fails to cross ask 4 (95).
    const Matching out = uniform_cross(bids_sorted, asks_sorted, 2, 0);
    const Matching expected = {tx(1, 3, 2, 60)};
    EXPECT_EQ(out, expected);
}

TEST(UniformCross, RejectsConsumedOutsideHeadQuantity) {
    const std::vector<Order> bids_sorted = {bid(1, 1, 3, 100)};
    const std::vector<Order> asks_sorted = {ask(2, 1, 3, 50)};
    EXPECT_THROW(uniform_cross(bids_sorted, asks_sorted, 3, 0),
                 std::invalid_argument);
    EXPECT_THROW(uniform_cross(bids_sorted, asks_sorted, 0, -1),
                 std::invalid_argument);
}

TEST(UniformMatch, PrefersEarlierTimestampOnEqualPrices) {
    const OrderBookSide bids =
        bid_book({bid(1, 9, 1, 100), bid(2, 3, 1, 100)});
    const OrderBookSide asks = ask_book({ask(3, 1, 1, 80)});
    const Matching out = uniform_match(bids, asks);
    const Matching expected = {tx(2, 3, 1, 80)};
    EXPECT_EQ(out, expected);
}

TEST(UniformMatch, PrefersLowerIdOnExactTies) {
    const OrderBookSide bids =
        bid_book({bid(5, 3, 1, 100), bid(2, 3, 1, 100)});
    const OrderBookSide asks = ask_book({ask(3, 1, 1, 80)});
    const Matching out = uniform_match(bids, asks);
    const Matching expected = {tx(2, 3, 1, 80)};
    EXPECT_EQ(out, expected);
}

}  // namespace
}  // namespace uncross
