#include "uncross/fairness.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "uncross/properties.hpp"

namespace uncross {

namespace {

void check_sorted(const std::vector<Order>& orders, Side side) {
#ifndef NDEBUG
    auto precedes = [side](const Order& lhs, const Order& rhs) {
        return side == Side::Bid ? bid_precedes(lhs, rhs)
                                 : ask_precedes(lhs, rhs);
    };
    assert(std::is_sorted(orders.begin(), orders.end(),
                          [&](const Order& l, const Order& r) {
                              return precedes(l, r);
                          }) &&
           "orders must be sorted most-competitive-first");
#else
    (void)orders;
    (void)side;
#endif
}

[[noreturn]] void throw_invalid(const std::string& fn, const std::string& what) {
    throw std::invalid_argument(fn + ": " + what);
}

// Core reassignment loop, parameterised over the side being rewritten.
// Walks the transaction list and the sorted order list in lockstep,
// granting each unit of traded volume to the most competitive order with
// remaining capacity. `consumed` units of the head order are treated as
// already granted.
Matching reassign(Matching m, std::vector<Order> orders_sorted, Side side,
                  Quantity consumed, const char* fn) {
    check_sorted(orders_sorted, side);
    if (orders_sorted.empty()) {
        if (consumed != 0) throw_invalid(fn, "consumed head volume without a head order");
    } else if (consumed < 0 || consumed >= orders_sorted.front().quantity) {
        throw_invalid(fn, "consumed head volume outside [0, head quantity)");
    }

    Matching result;
    result.reserve(m.size());
    std::size_t ti = 0;        // current transaction
    std::size_t oi = 0;        // current order receiving volume
    Quantity head_qty = 0;     // remaining quantity of m[ti]
    Quantity t = consumed;     // units of orders_sorted[oi] already granted

    auto emit = [&](OrderId order_id, const Transaction& source, Quantity qty) {
        if (side == Side::Bid) {
            result.push_back({order_id, source.ask_id, qty, source.price});
        } else {
            result.push_back({source.bid_id, order_id, qty, source.price});
        }
    };

    while (ti < m.size()) {
        if (head_qty == 0) {
            head_qty = m[ti].quantity;
            if (head_qty < 1) throw_invalid(fn, "transaction quantity below 1");
        }
        // Out of receiving orders: the remaining transactions are
        // dropped, mirroring the recursion's nil base case. Unreachable
        // when m is a matching over the full book and consumed is 0.
        if (oi >= orders_sorted.size()) break;
        const Order& receiver = orders_sorted[oi];
        const Quantity room = receiver.quantity - t;
        if (room < 1) throw_invalid(fn, "order quantity below 1 in the book");
        if (head_qty == room) {
            emit(receiver.id, m[ti], head_qty);
            ++ti;
            head_qty = 0;
            ++oi;
            t = 0;
        } else if (head_qty < room) {
            emit(receiver.id, m[ti], head_qty);
            t += head_qty;
            ++ti;
            head_qty = 0;
        } else {  // head_qty > room
            emit(receiver.id, m[ti], room);
            head_qty -= room;
            ++oi;
            t = 0;
        }
    }
    return result;
}

// Stable-sorts transactions by the competitiveness of the order they
// reference on `side`, most competitive first.
Matching sort_by_referenced_order(Matching m, const OrderBookSide& side,
                                  const char* fn) {
    std::unordered_map<OrderId, const Order*> index;
    index.reserve(side.orders.size());
    for (const Order& order : side.orders) index.emplace(order.id, &order);

    auto lookup = [&](OrderId id) -> const Order& {
        const auto it = index.find(id);
        if (it == index.end()) {
            std::ostringstream out;
            out << (side.side == Side::Bid ? "bid" : "ask") << " id " << id
                << " not present in the book";
            throw_invalid(fn, out.str());
        }
        return *it->second;
    };
    auto precedes = [&](const Transaction& lhs, const Transaction& rhs) {
        if (side.side == Side::Bid) {
            return bid_precedes(lookup(lhs.bid_id), lookup(rhs.bid_id));
        }
        return ask_precedes(lookup(lhs.ask_id), lookup(rhs.ask_id));
    };
    std::stable_sort(m.begin(), m.end(), precedes);
    return m;
}

}  // namespace

Matching fob_from(Matching m, std::vector<Order> bids_sorted,
                  Quantity consumed) {
    return reassign(std::move(m), std::move(bids_sorted), Side::Bid, consumed,
                    "fob");
}

Matching foa_from(Matching m, std::vector<Order> asks_sorted,
                  Quantity consumed) {
    return reassign(std::move(m), std::move(asks_sorted), Side::Ask, consumed,
                    "foa");
}

Matching fob(const Matching& m, const OrderBookSide& bids) {
    Matching sorted = sort_by_referenced_order(m, bids, "fob");
    return fob_from(
        std::move(sorted),
        sort_orders(bids.orders, Side::Bid, SortDirection::MostCompetitiveFirst),
        0);
}

Matching foa(const Matching& m, const OrderBookSide& asks) {
    Matching sorted = sort_by_referenced_order(m, asks, "foa");
    return foa_from(
        std::move(sorted),
        sort_orders(asks.orders, Side::Ask, SortDirection::MostCompetitiveFirst),
        0);
}

Matching fair(const Matching& m, const OrderBookSide& bids,
              const OrderBookSide& asks) {
    const PropertyReport validity = is_matching(m, bids, asks);
    if (!validity.holds) {
        throw_invalid("fair",
                      "input is not a matching of the given books (" +
                          *validity.witness + ")");
    }
    return fob(foa(m, asks), bids);
}

}  // namespace uncross
