#pragma once

// Fairness transformation: rewrites a matching so that traded volume is
// handed to the most competitive orders of a side first, preserving total
// volume, the set of prices, and the per-order volumes of the other side.
// fob reassigns bid volume, foa reassigns ask volume, and fair composes
// the two (asks first, then bids).

#include "uncross/core.hpp"

namespace uncross {

// Reassign the bid side of `m` onto `bids` most-competitive-first.
// `m` must be a matching over books whose bid side is `bids`; the
// result pairs each reassigned unit with the ask of the transaction it
// came from, at the same price. Inputs are sorted internally.
Matching fob(const Matching& m, const OrderBookSide& bids);

// Mirror image of fob for the ask side.
Matching foa(const Matching& m, const OrderBookSide& asks);

// fob applied to a matching already sorted with the most competitive bids
// first, starting with `consumed` units of the head bid already granted.
// `bids_sorted` must be sorted most-competitive-first and `consumed` must
// lie in [0, head quantity). If the orders run out of capacity before the
// transactions are exhausted (possible only when consumed > 0 or the
// input is not a matching over the full book), the surplus transactions
// are dropped. Exposed so the reassignment can be exercised from
// intermediate states.
Matching fob_from(Matching m, std::vector<Order> bids_sorted,
                  Quantity consumed);
Matching foa_from(Matching m, std::vector<Order> asks_sorted,
                  Quantity consumed);

// foa, then fob: the result is fair on both sides with the same volume
// and prices as `m`. Throws std::invalid_argument (with the violation
// appended to the message) when `m` is not a matching of (bids, asks).
Matching fair(const Matching& m, const OrderBookSide& bids,
              const OrderBookSide& asks);

}  // namespace uncross
