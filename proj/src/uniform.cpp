#include "uncross/uniform.hpp"

#include <algorithm>
#include <stdexcept>

namespace uncross {

namespace {

void check_consumed(const std::vector<Order>& orders, Quantity consumed,
                    const char* label) {
    if (orders.empty()) {
        if (consumed != 0) {
            throw std::invalid_argument(
                std::string("uniform_cross: ") + label +
                " consumed volume without a head order");
        }
        return;
    }
    if (consumed < 0 || consumed >= orders.front().quantity) {
        throw std::invalid_argument(
            std::string("uniform_cross: ") + label +
            " consumed volume outside [0, head quantity)");
    }
}

}  // namespace

Matching uniform_cross(const std::vector<Order>& bids_sorted,
                       const std::vector<Order>& asks_sorted,
                       Quantity bid_consumed, Quantity ask_consumed) {
    check_consumed(bids_sorted, bid_consumed, "bid");
    check_consumed(asks_sorted, ask_consumed, "ask");

    Matching trace;
    std::size_t bi = 0;
    std::size_t ai = 0;
    Quantity t_b = bid_consumed;
    Quantity t_a = ask_consumed;
    while (bi < bids_sorted.size() && ai < asks_sorted.size()) {
        const Order& bid = bids_sorted[bi];
        const Order& ask = asks_sorted[ai];
        if (bid.price < ask.price) break;
        const Quantity eff_b = bid.quantity - t_b;
        const Quantity eff_a = ask.quantity - t_a;
        const Quantity qty = std::min(eff_b, eff_a);
        trace.push_back({bid.id, ask.id, qty, ask.price});
        if (eff_b == eff_a) {
            ++bi;
            ++ai;
            t_b = 0;
            t_a = 0;
        } else if (eff_a > eff_b) {
            ++bi;
            t_b = 0;
            t_a += eff_b;
        } else {
            ++ai;
            t_a = 0;
            t_b += eff_a;
        }
    }
    return trace;
}

UniformTrace uniform_trace(const OrderBookSide& bids,
                           const OrderBookSide& asks) {
    UniformTrace result;
    result.provisional = uniform_cross(
        sort_orders(bids.orders, Side::Bid, SortDirection::MostCompetitiveFirst),
        sort_orders(asks.orders, Side::Ask, SortDirection::MostCompetitiveFirst),
        0, 0);
    if (!result.provisional.empty()) {
        result.clearing_price = result.provisional.back().price;
    }
    return result;
}

Matching uniform_match(const OrderBookSide& bids, const OrderBookSide& asks) {
    UniformTrace trace = uniform_trace(bids, asks);
    if (trace.clearing_price.has_value()) {
        for (Transaction& t : trace.provisional) t.price = *trace.clearing_price;
    }
    return std::move(trace.provisional);
}

}  // namespace uncross
