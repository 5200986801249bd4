#pragma once

// Uniform-price mechanism: crosses the most competitive bids and asks
// against each other until the heads no longer cross, then clears every
// trade at a single price — the provisional price of the last crossing
// step. The result is the largest matching that is simultaneously
// individual-rational and single-priced, and it is fair on both sides.

#include "uncross/core.hpp"

namespace uncross {

struct UniformTrace {
    // Crossing steps in emission order; each carries the provisional
    // price (the matched ask's limit).
    Matching provisional;
    // Price of the last provisional transaction; empty when no cross.
    std::optional<Price> clearing_price;
};

// The raw crossing loop over pre-sorted sides (both most-competitive-
// first), starting with `bid_consumed` / `ask_consumed` units of the
// respective head already filled. Stops at the first head pair whose
// bid limit is below the ask limit. Consumed amounts must lie in
// [0, head quantity); throws std::invalid_argument otherwise.
Matching uniform_cross(const std::vector<Order>& bids_sorted,
                       const std::vector<Order>& asks_sorted,
                       Quantity bid_consumed, Quantity ask_consumed);

// Sorts, crosses from scratch, and records the clearing price.
UniformTrace uniform_trace(const OrderBookSide& bids,
                           const OrderBookSide& asks);

// The full mechanism: the trace with every price replaced by the
// clearing price. An empty trace yields an empty matching (no price is
// invented). Books must be duplicate-free.
Matching uniform_match(const OrderBookSide& bids, const OrderBookSide& asks);

}  // namespace uncross
