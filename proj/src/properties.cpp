#include "uncross/properties.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

namespace uncross {

PropertyReport PropertyReport::pass(std::string name) {
    PropertyReport report;
    report.property = std::move(name);
    report.holds = true;
    return report;
}

PropertyReport PropertyReport::fail(std::string name, std::string witness) {
    PropertyReport report;
    report.property = std::move(name);
    report.holds = false;
    report.witness = std::move(witness);
    return report;
}

namespace {

std::unordered_map<OrderId, const Order*> index_side(const OrderBookSide& side) {
    std::unordered_map<OrderId, const Order*> index;
    index.reserve(side.orders.size());
    for (const Order& order : side.orders) index.emplace(order.id, &order);
    return index;
}

std::string describe_transaction(const Transaction& t) {
    std::ostringstream out;
    out << "transaction(bid=" << t.bid_id << ", ask=" << t.ask_id
        << ", qty=" << t.quantity << ", price=" << t.price << ")";
    return out.str();
}

}  // namespace

PropertyReport is_matching(const Matching& m, const OrderBookSide& bids,
                           const OrderBookSide& asks) {
    static const char* const kName = "is_matching";
    const auto bid_index = index_side(bids);
    const auto ask_index = index_side(asks);

    std::unordered_map<OrderId, Quantity> bid_filled;
    std::unordered_map<OrderId, Quantity> ask_filled;
    for (const Transaction& t : m) {
        if (t.quantity < 1) {
            return PropertyReport::fail(
                kName, describe_transaction(t) + ": quantity below 1");
        }
        const auto bid_it = bid_index.find(t.bid_id);
        if (bid_it == bid_index.end()) {
            return PropertyReport::fail(
                kName,
                describe_transaction(t) + ": bid id not present in the book");
        }
        const auto ask_it = ask_index.find(t.ask_id);
        if (ask_it == ask_index.end()) {
            return PropertyReport::fail(
                kName,
                describe_transaction(t) + ": ask id not present in the book");
        }
        const Order& bid = *bid_it->second;
        const Order& ask = *ask_it->second;
        if (bid.price < ask.price) {
            std::ostringstream out;
            out << describe_transaction(t) << ": bid limit " << bid.price
                << " below ask limit " << ask.price;
            return PropertyReport::fail(kName, out.str());
        }
        bid_filled[t.bid_id] = checked_add(bid_filled[t.bid_id], t.quantity);
        ask_filled[t.ask_id] = checked_add(ask_filled[t.ask_id], t.quantity);
    }
    for (const auto& [id, filled] : bid_filled) {
        const Quantity limit = bid_index.at(id)->quantity;
        if (filled > limit) {
            std::ostringstream out;
            out << "bid " << id << " trades " << filled
                << " units against a quantity of " << limit;
            return PropertyReport::fail(kName, out.str());
        }
    }
    for (const auto& [id, filled] : ask_filled) {
        const Quantity limit = ask_index.at(id)->quantity;
        if (filled > limit) {
            std::ostringstream out;
            out << "ask " << id << " trades " << filled
                << " units against a quantity of " << limit;
            return PropertyReport::fail(kName, out.str());
        }
    }
    return PropertyReport::pass(kName);
}

PropertyReport is_ir(const Matching& m, const OrderBookSide& bids,
                     const OrderBookSide& asks) {
    static const char* const kName = "is_ir";
    const auto bid_index = index_side(bids);
    const auto ask_index = index_side(asks);
    for (const Transaction& t : m) {
        const auto bid_it = bid_index.find(t.bid_id);
        const auto ask_it = ask_index.find(t.ask_id);
        if (bid_it == bid_index.end()) {
            return PropertyReport::fail(
                kName,
                describe_transaction(t) + ": bid id not present in the book");
        }
        if (ask_it == ask_index.end()) {
            return PropertyReport::fail(
                kName,
                describe_transaction(t) + ": ask id not present in the book");
        }
        if (t.price > bid_it->second->price) {
            std::ostringstream out;
            out << describe_transaction(t) << ": price above bid limit "
                << bid_it->second->price;
            return PropertyReport::fail(kName, out.str());
        }
        if (t.price < ask_it->second->price) {
            std::ostringstream out;
            out << describe_transaction(t) << ": price below ask limit "
                << ask_it->second->price;
            return PropertyReport::fail(kName, out.str());
        }
    }
    return PropertyReport::pass(kName);
}

PropertyReport is_uniform(const Matching& m) {
    static const char* const kName = "is_uniform";
    for (const Transaction& t : m) {
        if (t.price != m.front().price) {
            std::ostringstream out;
            out << describe_transaction(t) << ": price differs from "
                << m.front().price;
            return PropertyReport::fail(kName, out.str());
        }
    }
    return PropertyReport::pass(kName);
}

namespace {

// Fairness on one side: sort by competitiveness; every order strictly more
// competitive than some traded order must itself be fully filled.
// Equivalently, walking most-competitive-first, once an order is seen that
// is not fully filled, no strictly less competitive order may trade.
PropertyReport check_fair_side(const Matching& m, const OrderBookSide& side,
                               const char* name) {
    const auto sorted =
        sort_orders(side.orders, side.side, SortDirection::MostCompetitiveFirst);
    const auto filled = side_volumes(m, side.side);
    auto filled_of = [&filled](OrderId id) {
        const auto it = filled.find(id);
        return it == filled.end() ? Quantity{0} : it->second;
    };
    auto equally_competitive = [&side](const Order& lhs, const Order& rhs) {
        const Rank rank = side.side == Side::Bid ? compare_bids(lhs, rhs)
                                                 : compare_asks(lhs, rhs);
        return rank == Rank::EqualId;
    };

    // first_short points at the most competitive order that is not fully
    // filled; any strictly less competitive order that trades is a witness.
    const Order* first_short = nullptr;
    for (const Order& order : sorted) {
        const Quantity traded = filled_of(order.id);
        if (first_short != nullptr && traded > 0 &&
            !equally_competitive(*first_short, order)) {
            std::ostringstream out;
            const char* label = side.side == Side::Bid ? "bid" : "ask";
            out << label << " " << order.id << " trades " << traded
                << " units while more competitive " << label << " "
                << first_short->id << " has "
                << (first_short->quantity - filled_of(first_short->id))
                << " units unfilled";
            return PropertyReport::fail(name, out.str());
        }
        if (first_short == nullptr && traded < order.quantity) {
            first_short = &order;
        }
    }
    return PropertyReport::pass(name);
}

}  // namespace

PropertyReport is_fair_on_bids(const Matching& m, const OrderBookSide& bids) {
    return check_fair_side(m, bids, "is_fair_on_bids");
}

PropertyReport is_fair_on_asks(const Matching& m, const OrderBookSide& asks) {
    return check_fair_side(m, asks, "is_fair_on_asks");
}

PropertyReport is_fair(const Matching& m, const OrderBookSide& bids,
                       const OrderBookSide& asks) {
    static const char* const kName = "is_fair";
    const PropertyReport on_bids = is_fair_on_bids(m, bids);
    if (!on_bids.holds) return PropertyReport::fail(kName, *on_bids.witness);
    const PropertyReport on_asks = is_fair_on_asks(m, asks);
    if (!on_asks.holds) return PropertyReport::fail(kName, *on_asks.witness);
    return PropertyReport::pass(kName);
}

PropertyReport check_volume_bound(const Matching& m, const OrderBookSide& bids,
                                  const OrderBookSide& asks, Price p) {
    static const char* const kName = "check_volume_bound";
    const Quantity traded = volume(m);
    const Quantity bound = checked_add(demand_at(bids, p), supply_at(asks, p));
    if (traded > bound) {
        std::ostringstream out;
        out << "volume " << traded << " exceeds demand(" << p << ") + supply("
            << p << ") = " << bound;
        return PropertyReport::fail(kName, out.str());
    }
    return PropertyReport::pass(kName);
}

std::vector<Price> candidate_prices(const OrderBookSide& bids,
                                    const OrderBookSide& asks,
                                    Price max_price) {
    std::set<Price> prices{Price{0}, max_price};
    for (const Order& order : bids.orders) prices.insert(order.price);
    for (const Order& order : asks.orders) prices.insert(order.price);
    return {prices.begin(), prices.end()};
}

}  // namespace uncross
