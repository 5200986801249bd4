#pragma once

// Domain types and quantity aggregates for double-sided call auctions:
// orders, books, transactions, competitiveness orderings, and the
// demand/supply sums every mechanism and checker is built on.
//
// All values are plain integers (prices in the smallest monetary
// denomination, timestamps in microseconds). Everything here is a pure
// function of its inputs; nothing holds shared state.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace uncross {

using OrderId = std::int64_t;
using Timestamp = std::int64_t;
using Quantity = std::int64_t;
using Price = std::int64_t;

// Stand-in limit for market bids (market asks use price 0). Kept well below
// INT64_MAX so demand/supply sums of real books cannot silently wrap.
inline constexpr Price kMaxPrice = Price{1} << 62;

enum class Side : std::uint8_t { Bid, Ask };

const char* to_string(Side side);

struct Order {
    OrderId id = 0;
    Timestamp timestamp = 0;
    Quantity quantity = 0;  // maximum units; >= 1 for a valid order
    Price price = 0;        // limit price; max for a bid, min for an ask
    Side side = Side::Bid;

    friend bool operator==(const Order&, const Order&) = default;
};

// One side of a book: duplicate-free by order id, all orders on `side`.
struct OrderBookSide {
    Side side = Side::Bid;
    std::vector<Order> orders;
};

// Returns an error description if the book breaks an invariant
// (side mismatch, quantity < 1, negative price, duplicate id).
std::optional<std::string> validate_book(const OrderBookSide& book);

struct Transaction {
    OrderId bid_id = 0;
    OrderId ask_id = 0;
    Quantity quantity = 0;  // >= 1
    Price price = 0;

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

// Ordered list of trades. Whether it is a valid matching against a book
// pair is a separate check (properties::is_matching), not baked in here.
using Matching = std::vector<Transaction>;

// ---------------------------------------------------------------------------
// Competitiveness
// ---------------------------------------------------------------------------

// Bids: higher limit price wins, then earlier timestamp, then lower id.
// Asks mirror with the price order reversed. The id tie-break makes the
// order total; the audit layer flags instances where it is exercised.

enum class Rank { MoreCompetitive, LessCompetitive, EqualId };

Rank compare_bids(const Order& lhs, const Order& rhs);
Rank compare_asks(const Order& lhs, const Order& rhs);

// Strict orders usable as sort comparators (most competitive first).
bool bid_precedes(const Order& lhs, const Order& rhs);
bool ask_precedes(const Order& lhs, const Order& rhs);

enum class SortDirection { MostCompetitiveFirst, MostCompetitiveLast };

OrderBookSide sort_by_competitiveness(OrderBookSide book, SortDirection direction);
std::vector<Order> sort_orders(std::vector<Order> orders, Side side,
                               SortDirection direction);

// ---------------------------------------------------------------------------
// Quantity aggregates
// ---------------------------------------------------------------------------

// Overflow on any aggregate is a checked error (std::overflow_error),
// never silent wraparound.
Quantity checked_add(Quantity a, Quantity b);

// Total traded quantity of a matching.
Quantity volume(const Matching& m);

// Total traded quantity of order `id` on `side` of the matching.
Quantity order_volume(const Matching& m, OrderId id, Side side);

// Total traded quantity between one bid and one ask.
Quantity pair_volume(const Matching& m, OrderId bid_id, OrderId ask_id);

// Sum of the limit quantities of a whole book side.
Quantity book_quantity(const OrderBookSide& book);

// Total demand: quantity of bids with limit >= p.
Quantity demand_at(const OrderBookSide& bids, Price p);
// Total supply: quantity of asks with limit <= p.
Quantity supply_at(const OrderBookSide& asks, Price p);

// Per-order traded quantity for every order appearing on `side` of `m`.
std::unordered_map<OrderId, Quantity> side_volumes(const Matching& m, Side side);

}  // namespace uncross
