#pragma once

// Maximum-volume mechanism: pairs the most competitive bids against the
// least competitive still-matchable asks, which provably attains the
// largest trade volume any matching can reach, then reassigns the ask
// side most-competitive-first so the result is also fair. Prices are
// the matched asks' limits, so individual rationality is kept; the
// price need not be uniform.

#include "uncross/core.hpp"

namespace uncross {

// The raw crossing loop over pre-sorted sides: bids most-competitive-
// first, asks most-competitive-LAST. An unmatchable head ask is
// discarded and crossing continues with the next one. Consumed amounts
// must lie in [0, head quantity); throws std::invalid_argument
// otherwise.
Matching maximum_cross(const std::vector<Order>& bids_sorted,
                       const std::vector<Order>& asks_sorted_reversed,
                       Quantity bid_consumed, Quantity ask_consumed);

// The full mechanism: cross, then hand the ask volume back to the most
// competitive asks. Books must be duplicate-free.
Matching maximum_match(const OrderBookSide& bids, const OrderBookSide& asks);

}  // namespace uncross
