#pragma once

// Brute-force references for small instances. These are deliberately
// independent of the mechanism implementations: an exhaustive walk over
// every quantity assignment on matchable (bid, ask) pairs, a max-flow
// formulation of maximum volume, and the demand/supply crossing formula
// for the best single-price volume. The test suite certifies the
// mechanisms against these, never against themselves.

#include <cstdint>
#include <functional>
#include <stdexcept>

#include "uncross/core.hpp"

namespace uncross {

struct InstanceBudget {
    // Hard limits on instances the exhaustive oracles accept.
    std::size_t max_orders_per_side = 4;
    Quantity max_quantity = 3;
    // Price universe [0, max_price_level] used when generating random
    // instances; enumeration itself does not restrict prices.
    Price max_price_level = 5;
};

// Thrown when an instance (or the budget itself) would make exhaustive
// enumeration too large to certify anything in bounded time.
class BudgetError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Absolute ceiling on the number of assignments any enumeration may
// visit, whatever the budget says. The default budget's worst case
// (4 orders per side, quantity 3, all pairs matchable) has 344,279.
inline constexpr std::uint64_t kAssignmentHardCap = 4'000'000;

// Number of quantity assignments on matchable pairs of (bids, asks),
// counted without materializing them; stops at `cap` + 1.
std::uint64_t count_assignments(const OrderBookSide& bids,
                                const OrderBookSide& asks, std::uint64_t cap);

// Invokes `fn` once per quantity assignment on matchable (bid, ask)
// pairs, including the empty one, materialized as a Matching with each
// pair traded at the ask's limit price (so every yielded matching is
// valid and individual-rational by construction). Returns the number of
// matchings visited. Throws BudgetError when the instance is over
// budget or the assignment count exceeds the hard cap.
std::uint64_t enumerate_matchings(const OrderBookSide& bids,
                                  const OrderBookSide& asks,
                                  const InstanceBudget& budget,
                                  const std::function<void(const Matching&)>& fn);

// True iff some single price makes every trade individual-rational,
// i.e. max matched ask limit <= min matched bid limit. Such a price
// always exists for the empty matching.
bool uniform_ir_realizable(const Matching& m, const OrderBookSide& bids,
                           const OrderBookSide& asks);

// Maximum total volume over all matchings, by exhaustion.
Quantity max_volume_oracle(const OrderBookSide& bids, const OrderBookSide& asks,
                           const InstanceBudget& budget = {});

// Maximum total volume as the value of an integer max flow
// (source -> bids -> matchable edges -> asks -> sink). Works on
// instances far beyond enumeration budgets.
Quantity max_volume_flow(const OrderBookSide& bids, const OrderBookSide& asks);

// Best volume any individual-rational single-price matching can reach:
// max over candidate prices p of min(demand_at(p), supply_at(p)). At any
// p, every bid with limit >= p is matchable with every ask with limit
// <= p and p is rational for both, so the min is always achievable.
Quantity optimal_uniform_volume(const OrderBookSide& bids,
                                const OrderBookSide& asks);

// The same quantity by exhaustion: max volume over enumerated matchings
// that are realizable at a single rational price.
Quantity optimal_uniform_volume_enumerated(const OrderBookSide& bids,
                                           const OrderBookSide& asks,
                                           const InstanceBudget& budget = {});

// Invokes `fn` for every enumerated matching that is fair on both sides,
// realizable at a single rational price, and of best such volume —
// materialized at the least such price (the largest matched ask limit).
// Returns the number of matchings yielded.
std::uint64_t enumerate_fair_optimal(const OrderBookSide& bids,
                                     const OrderBookSide& asks,
                                     const InstanceBudget& budget,
                                     const std::function<void(const Matching&)>& fn);

}  // namespace uncross
