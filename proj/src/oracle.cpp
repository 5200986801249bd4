#include "uncross/oracle.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>
#include <unordered_map>

#include "uncross/properties.hpp"

namespace uncross {

namespace {

void require_valid_book(const OrderBookSide& side, const char* label) {
    if (const auto problem = validate_book(side)) {
        throw std::invalid_argument(std::string("oracle: invalid ") + label +
                                    " book: " + *problem);
    }
}

void require_within_budget(const OrderBookSide& bids, const OrderBookSide& asks,
                           const InstanceBudget& budget) {
    const auto check_side = [&budget](const OrderBookSide& side,
                                      const char* label) {
        if (side.orders.size() > budget.max_orders_per_side) {
            std::ostringstream out;
            out << "oracle: " << side.orders.size() << " " << label
                << " exceed the budget of " << budget.max_orders_per_side
                << " orders per side";
            throw BudgetError(out.str());
        }
        for (const Order& order : side.orders) {
            if (order.quantity > budget.max_quantity) {
                std::ostringstream out;
                out << "oracle: " << label << " " << order.id << " quantity "
                    << order.quantity << " exceeds the budget of "
                    << budget.max_quantity;
                throw BudgetError(out.str());
            }
        }
    };
    check_side(bids, "bids");
    check_side(asks, "asks");
}

// Depth-first walk over every quantity assignment on matchable pairs.
// remaining_* track unused capacity so infeasible branches are never
// entered; `leaf` returns false to cut the walk short.
class AssignmentWalker {
  public:
    AssignmentWalker(const OrderBookSide& bids, const OrderBookSide& asks)
        : bids_(bids), asks_(asks) {
        for (std::size_t i = 0; i < bids.orders.size(); ++i) {
            for (std::size_t j = 0; j < asks.orders.size(); ++j) {
                if (bids.orders[i].price >= asks.orders[j].price) {
                    pairs_.emplace_back(i, j);
                }
            }
        }
        for (const Order& order : bids.orders)
            remaining_bid_.push_back(order.quantity);
        for (const Order& order : asks.orders)
            remaining_ask_.push_back(order.quantity);
        assigned_.assign(pairs_.size(), 0);
    }

    template <typename Leaf>
    bool walk(Leaf&& leaf) {
        return descend(0, leaf);
    }

    std::uint64_t visited() const { return visited_; }

    // The current assignment as a matching, each pair traded at the
    // ask's limit price. Valid only inside a leaf call.
    const Matching& materialize() {
        scratch_.clear();
        for (std::size_t k = 0; k < pairs_.size(); ++k) {
            if (assigned_[k] == 0) continue;
            const auto [i, j] = pairs_[k];
            scratch_.push_back({bids_.orders[i].id, asks_.orders[j].id,
                                assigned_[k], asks_.orders[j].price});
        }
        return scratch_;
    }

  private:
    template <typename Leaf>
    bool descend(std::size_t k, Leaf& leaf) {
        if (k == pairs_.size()) {
            ++visited_;
            return leaf();
        }
        const auto [i, j] = pairs_[k];
        const Quantity cap = std::min(remaining_bid_[i], remaining_ask_[j]);
        for (Quantity q = 0; q <= cap; ++q) {
            assigned_[k] = q;
            remaining_bid_[i] -= q;
            remaining_ask_[j] -= q;
            const bool keep_going = descend(k + 1, leaf);
            remaining_bid_[i] += q;
            remaining_ask_[j] += q;
            if (!keep_going) return false;
        }
        assigned_[k] = 0;
        return true;
    }

    const OrderBookSide& bids_;
    const OrderBookSide& asks_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    std::vector<Quantity> remaining_bid_;
    std::vector<Quantity> remaining_ask_;
    std::vector<Quantity> assigned_;
    Matching scratch_;
    std::uint64_t visited_ = 0;
};

std::unordered_map<OrderId, Price> limit_index(const OrderBookSide& side) {
    std::unordered_map<OrderId, Price> index;
    index.reserve(side.orders.size());
    for (const Order& order : side.orders) index.emplace(order.id, order.price);
    return index;
}

}  // namespace

std::uint64_t count_assignments(const OrderBookSide& bids,
                                const OrderBookSide& asks, std::uint64_t cap) {
    AssignmentWalker walker(bids, asks);
    walker.walk([&walker, cap] { return walker.visited() <= cap; });
    return walker.visited();
}

std::uint64_t enumerate_matchings(
    const OrderBookSide& bids, const OrderBookSide& asks,
    const InstanceBudget& budget,
    const std::function<void(const Matching&)>& fn) {
    require_valid_book(bids, "bid");
    require_valid_book(asks, "ask");
    require_within_budget(bids, asks, budget);
    if (count_assignments(bids, asks, kAssignmentHardCap) > kAssignmentHardCap) {
        std::ostringstream out;
        out << "oracle: instance admits more than " << kAssignmentHardCap
            << " assignments; refusing to enumerate";
        throw BudgetError(out.str());
    }

    AssignmentWalker walker(bids, asks);
    walker.walk([&walker, &fn] {
        fn(walker.materialize());
        return true;
    });
    return walker.visited();
}

bool uniform_ir_realizable(const Matching& m, const OrderBookSide& bids,
                           const OrderBookSide& asks) {
    const auto bid_limits = limit_index(bids);
    const auto ask_limits = limit_index(asks);
    Price min_bid_limit = std::numeric_limits<Price>::max();
    Price max_ask_limit = std::numeric_limits<Price>::min();
    for (const Transaction& t : m) {
        const auto bid_it = bid_limits.find(t.bid_id);
        const auto ask_it = ask_limits.find(t.ask_id);
        if (bid_it == bid_limits.end() || ask_it == ask_limits.end()) {
            throw std::invalid_argument(
                "uniform_ir_realizable: transaction references an order "
                "absent from the books");
        }
        min_bid_limit = std::min(min_bid_limit, bid_it->second);
        max_ask_limit = std::max(max_ask_limit, ask_it->second);
    }
    return m.empty() || max_ask_limit <= min_bid_limit;
}

Quantity max_volume_oracle(const OrderBookSide& bids, const OrderBookSide& asks,
                           const InstanceBudget& budget) {
    Quantity best = 0;
    enumerate_matchings(bids, asks, budget, [&best](const Matching& m) {
        best = std::max(best, volume(m));
    });
    return best;
}

namespace {

// Shortest-augmenting-path max flow on a tiny dense network.
class FlowNetwork {
  public:
    explicit FlowNetwork(std::size_t vertex_count) : adjacency_(vertex_count) {}

    void add_edge(std::size_t from, std::size_t to, Quantity capacity) {
        adjacency_[from].push_back({to, capacity, adjacency_[to].size()});
        adjacency_[to].push_back({from, 0, adjacency_[from].size() - 1});
    }

    Quantity max_flow(std::size_t source, std::size_t sink) {
        Quantity total = 0;
        while (true) {
            const Quantity pushed = augment(source, sink);
            if (pushed == 0) break;
            total = checked_add(total, pushed);
        }
        return total;
    }

  private:
    struct Edge {
        std::size_t to;
        Quantity residual;
        std::size_t reverse_index;
    };

    // One breadth-first search plus augmentation along the path found.
    Quantity augment(std::size_t source, std::size_t sink) {
        std::vector<std::pair<std::size_t, std::size_t>> parent(
            adjacency_.size(), {SIZE_MAX, SIZE_MAX});  // (vertex, edge index)
        std::queue<std::size_t> frontier;
        frontier.push(source);
        parent[source] = {source, SIZE_MAX};
        while (!frontier.empty() && parent[sink].first == SIZE_MAX) {
            const std::size_t u = frontier.front();
            frontier.pop();
            for (std::size_t e = 0; e < adjacency_[u].size(); ++e) {
                const Edge& edge = adjacency_[u][e];
                if (edge.residual <= 0 || parent[edge.to].first != SIZE_MAX) {
                    continue;
                }
                parent[edge.to] = {u, e};
                frontier.push(edge.to);
            }
        }
        if (parent[sink].first == SIZE_MAX) return 0;

        Quantity bottleneck = std::numeric_limits<Quantity>::max();
        for (std::size_t v = sink; v != source;) {
            const auto [u, e] = parent[v];
            bottleneck = std::min(bottleneck, adjacency_[u][e].residual);
            v = u;
        }
        for (std::size_t v = sink; v != source;) {
            const auto [u, e] = parent[v];
            Edge& forward = adjacency_[u][e];
            forward.residual -= bottleneck;
            adjacency_[forward.to][forward.reverse_index].residual += bottleneck;
            v = u;
        }
        return bottleneck;
    }

    std::vector<std::vector<Edge>> adjacency_;
};

}  // namespace

Quantity max_volume_flow(const OrderBookSide& bids, const OrderBookSide& asks) {
    const std::size_t nb = bids.orders.size();
    const std::size_t na = asks.orders.size();
    const std::size_t source = nb + na;
    const std::size_t sink = nb + na + 1;
    FlowNetwork network(nb + na + 2);
    for (std::size_t i = 0; i < nb; ++i) {
        network.add_edge(source, i, bids.orders[i].quantity);
    }
    for (std::size_t j = 0; j < na; ++j) {
        network.add_edge(nb + j, sink, asks.orders[j].quantity);
    }
    for (std::size_t i = 0; i < nb; ++i) {
        for (std::size_t j = 0; j < na; ++j) {
            if (bids.orders[i].price >= asks.orders[j].price) {
                network.add_edge(i, nb + j,
                                 std::min(bids.orders[i].quantity,
                                          asks.orders[j].quantity));
            }
        }
    }
    return network.max_flow(source, sink);
}

Quantity optimal_uniform_volume(const OrderBookSide& bids,
                                const OrderBookSide& asks) {
    Quantity best = 0;
    for (const Price p : candidate_prices(bids, asks)) {
        best = std::max(best, std::min(demand_at(bids, p), supply_at(asks, p)));
    }
    return best;
}

namespace {

// Same predicate as uniform_ir_realizable, but over pre-built limit
// indexes so enumeration loops avoid rebuilding them per assignment.
bool realizable_with(const Matching& m,
                     const std::unordered_map<OrderId, Price>& bid_limits,
                     const std::unordered_map<OrderId, Price>& ask_limits) {
    Price min_bid_limit = std::numeric_limits<Price>::max();
    Price max_ask_limit = std::numeric_limits<Price>::min();
    for (const Transaction& t : m) {
        min_bid_limit = std::min(min_bid_limit, bid_limits.at(t.bid_id));
        max_ask_limit = std::max(max_ask_limit, ask_limits.at(t.ask_id));
    }
    return m.empty() || max_ask_limit <= min_bid_limit;
}

}  // namespace

Quantity optimal_uniform_volume_enumerated(const OrderBookSide& bids,
                                           const OrderBookSide& asks,
                                           const InstanceBudget& budget) {
    const auto bid_limits = limit_index(bids);
    const auto ask_limits = limit_index(asks);
    Quantity best = 0;
    enumerate_matchings(bids, asks, budget, [&](const Matching& m) {
        if (realizable_with(m, bid_limits, ask_limits)) {
            best = std::max(best, volume(m));
        }
    });
    return best;
}

std::uint64_t enumerate_fair_optimal(
    const OrderBookSide& bids, const OrderBookSide& asks,
    const InstanceBudget& budget,
    const std::function<void(const Matching&)>& fn) {
    const Quantity target = optimal_uniform_volume(bids, asks);
    const auto bid_limits = limit_index(bids);
    const auto ask_limits = limit_index(asks);
    std::uint64_t yielded = 0;
    enumerate_matchings(bids, asks, budget, [&](const Matching& m) {
        if (volume(m) != target) return;
        if (!realizable_with(m, bid_limits, ask_limits)) return;
        if (!is_fair(m, bids, asks).holds) return;
        Price clearing = std::numeric_limits<Price>::min();
        for (const Transaction& t : m) {
            clearing = std::max(clearing, ask_limits.at(t.ask_id));
        }
        Matching priced = m;
        for (Transaction& t : priced) t.price = clearing;
        ++yielded;
        fn(priced);
    });
    return yielded;
}

}  // namespace uncross
