#pragma once

// Executable predicates over matchings: validity against a book pair,
// individual rationality, uniformity, fairness, and the demand+supply
// volume bound. Every predicate returns a structured report so callers
// (the audit tool, the shrinking harness) can surface a concrete
// counterexample instead of a bare boolean.

#include <vector>

#include "uncross/core.hpp"

namespace uncross {

struct PropertyReport {
    std::string property;
    bool holds = true;
    std::optional<std::string> witness;  // present iff !holds

    static PropertyReport pass(std::string name);
    static PropertyReport fail(std::string name, std::string witness);
    explicit operator bool() const { return holds; }
};

// Definition of a matching against duplicate-free books (B, A):
// every pair matchable (ask limit <= bid limit), referenced bids/asks
// drawn from the books, and per-order traded volume within each
// order's limit quantity. Transactions with quantity < 1 are rejected.
// A transaction referencing an unknown id yields a witness, not an
// exception.
PropertyReport is_matching(const Matching& m, const OrderBookSide& bids,
                           const OrderBookSide& asks);

// Every trade price lies in [ask limit, bid limit].
PropertyReport is_ir(const Matching& m, const OrderBookSide& bids,
                     const OrderBookSide& asks);

// All trade prices equal (vacuously true when empty).
PropertyReport is_uniform(const Matching& m);

// No less competitive order trades while a more competitive order on the
// same side is left short of its full quantity.
PropertyReport is_fair_on_bids(const Matching& m, const OrderBookSide& bids);
PropertyReport is_fair_on_asks(const Matching& m, const OrderBookSide& asks);
PropertyReport is_fair(const Matching& m, const OrderBookSide& bids,
                       const OrderBookSide& asks);

// volume(m) <= demand_at(bids, p) + supply_at(asks, p).
PropertyReport check_volume_bound(const Matching& m, const OrderBookSide& bids,
                                  const OrderBookSide& asks, Price p);

// Price grid for bound sweeps: every distinct limit price in B u A plus 0
// and max_price, ascending. The bound is piecewise constant in between.
std::vector<Price> candidate_prices(const OrderBookSide& bids,
                                    const OrderBookSide& asks,
                                    Price max_price = kMaxPrice);

}  // namespace uncross
