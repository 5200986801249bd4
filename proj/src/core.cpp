#include "uncross/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace uncross {

const char* to_string(Side side) {
    return side == Side::Bid ? "bid" : "ask";
}

std::optional<std::string> validate_book(const OrderBookSide& book) {
    std::unordered_set<OrderId> seen;
    seen.reserve(book.orders.size());
    for (const Order& o : book.orders) {
        if (o.side != book.side)
            return "order " + std::to_string(o.id) + " is on the wrong side";
        if (o.quantity < 1)
            return "order " + std::to_string(o.id) + " has quantity < 1";
        if (o.price < 0)
            return "order " + std::to_string(o.id) + " has negative price";
        if (!seen.insert(o.id).second)
            return "duplicate order id " + std::to_string(o.id);
    }
    return std::nullopt;
}

namespace {

// Shared price-time-id comparison; `lhs_price_wins` encodes the side
// (greater price for bids, smaller price for asks).
Rank compare_orders(const Order& lhs, const Order& rhs, bool higher_price_wins) {
    if (lhs.price != rhs.price) {
        const bool lhs_wins = higher_price_wins ? lhs.price > rhs.price
                                                : lhs.price < rhs.price;
        return lhs_wins ? Rank::MoreCompetitive : Rank::LessCompetitive;
    }
    if (lhs.timestamp != rhs.timestamp)
        return lhs.timestamp < rhs.timestamp ? Rank::MoreCompetitive
                                             : Rank::LessCompetitive;
    if (lhs.id != rhs.id)
        return lhs.id < rhs.id ? Rank::MoreCompetitive : Rank::LessCompetitive;
    return Rank::EqualId;
}

}  // namespace

Rank compare_bids(const Order& lhs, const Order& rhs) {
    return compare_orders(lhs, rhs, /*higher_price_wins=*/true);
}

Rank compare_asks(const Order& lhs, const Order& rhs) {
    return compare_orders(lhs, rhs, /*higher_price_wins=*/false);
}

bool bid_precedes(const Order& lhs, const Order& rhs) {
    return compare_bids(lhs, rhs) == Rank::MoreCompetitive;
}

bool ask_precedes(const Order& lhs, const Order& rhs) {
    return compare_asks(lhs, rhs) == Rank::MoreCompetitive;
}

std::vector<Order> sort_orders(std::vector<Order> orders, Side side,
                               SortDirection direction) {
    const bool reversed = direction == SortDirection::MostCompetitiveLast;
    auto precedes = [side, reversed](const Order& lhs, const Order& rhs) {
        const Order& first = reversed ? rhs : lhs;
        const Order& second = reversed ? lhs : rhs;
        return side == Side::Bid ? bid_precedes(first, second)
                                 : ask_precedes(first, second);
    };
    std::stable_sort(orders.begin(), orders.end(), precedes);
    return orders;
}

OrderBookSide sort_by_competitiveness(OrderBookSide book, SortDirection direction) {
    book.orders = sort_orders(std::move(book.orders), book.side, direction);
    return book;
}

Quantity checked_add(Quantity a, Quantity b) {
    Quantity out = 0;
    if (__builtin_add_overflow(a, b, &out))
        throw std::overflow_error("quantity aggregate overflows 64 bits");
    return out;
}

Quantity volume(const Matching& m) {
    Quantity total = 0;
    for (const Transaction& t : m) total = checked_add(total, t.quantity);
    return total;
}

Quantity order_volume(const Matching& m, OrderId id, Side side) {
    Quantity total = 0;
    for (const Transaction& t : m) {
        const OrderId ref = side == Side::Bid ? t.bid_id : t.ask_id;
        if (ref == id) total = checked_add(total, t.quantity);
    }
    return total;
}

Quantity pair_volume(const Matching& m, OrderId bid_id, OrderId ask_id) {
    Quantity total = 0;
    for (const Transaction& t : m)
        if (t.bid_id == bid_id && t.ask_id == ask_id)
            total = checked_add(total, t.quantity);
    return total;
}

Quantity book_quantity(const OrderBookSide& book) {
    Quantity total = 0;
    for (const Order& o : book.orders) total = checked_add(total, o.quantity);
    return total;
}

Quantity demand_at(const OrderBookSide& bids, Price p) {
    Quantity total = 0;
    for (const Order& o : bids.orders)
        if (o.price >= p) total = checked_add(total, o.quantity);
    return total;
}

Quantity supply_at(const OrderBookSide& asks, Price p) {
    Quantity total = 0;
    for (const Order& o : asks.orders)
        if (o.price <= p) total = checked_add(total, o.quantity);
    return total;
}

std::unordered_map<OrderId, Quantity> side_volumes(const Matching& m, Side side) {
    std::unordered_map<OrderId, Quantity> volumes;
    volumes.reserve(m.size());
    for (const Transaction& t : m) {
        const OrderId id = side == Side::Bid ? t.bid_id : t.ask_id;
        Quantity& slot = volumes[id];
        slot = checked_add(slot, t.quantity);
    }
    return volumes;
}

}  // namespace uncross
