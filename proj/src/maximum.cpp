#include "uncross/maximum.hpp"

#include <algorithm>
#include <stdexcept>

#include "uncross/fairness.hpp"

namespace uncross {

namespace {

void check_consumed(const std::vector<Order>& orders, Quantity consumed,
                    const char* label) {
    if (orders.empty()) {
        if (consumed != 0) {
            throw std::invalid_argument(
                std::string("maximum_cross: ") + label +
                " consumed volume without a head order");
        }
        return;
    }
    if (consumed < 0 || consumed >= orders.front().quantity) {
        throw std::invalid_argument(
            std::string("maximum_cross: ") + label +
            " consumed volume outside [0, head quantity)");
    }
}

}  // namespace

Matching maximum_cross(const std::vector<Order>& bids_sorted,
                       const std::vector<Order>& asks_sorted_reversed,
                       Quantity bid_consumed, Quantity ask_consumed) {
    check_consumed(bids_sorted, bid_consumed, "bid");
    check_consumed(asks_sorted_reversed, ask_consumed, "ask");

    Matching crossed;
    std::size_t bi = 0;
    std::size_t ai = 0;
    Quantity t_b = bid_consumed;
    Quantity t_a = ask_consumed;
    while (bi < bids_sorted.size() && ai < asks_sorted_reversed.size()) {
        const Order& bid = bids_sorted[bi];
        const Order& ask = asks_sorted_reversed[ai];
        if (bid.price < ask.price) {
            // The head bid cannot trade at this ask's limit; no later
            // bid can either (they are less competitive), so the ask
            // is out of the running entirely.
            ++ai;
            t_a = 0;
            continue;
        }
        const Quantity eff_b = bid.quantity - t_b;
        const Quantity eff_a = ask.quantity - t_a;
        const Quantity qty = std::min(eff_b, eff_a);
        crossed.push_back({bid.id, ask.id, qty, ask.price});
        if (eff_b == eff_a) {
            ++bi;
            ++ai;
            t_b = 0;
            t_a = 0;
        } else if (eff_a < eff_b) {
            ++ai;
            t_a = 0;
            t_b += eff_a;
        } else {
            ++bi;
            t_b = 0;
            t_a += eff_b;
        }
    }
    return crossed;
}

Matching maximum_match(const OrderBookSide& bids, const OrderBookSide& asks) {
    const Matching crossed = maximum_cross(
        sort_orders(bids.orders, Side::Bid, SortDirection::MostCompetitiveFirst),
        sort_orders(asks.orders, Side::Ask, SortDirection::MostCompetitiveLast),
        0, 0);
    return foa(crossed, asks);
}

}  // namespace uncross
