#include "uncross/selfcheck.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "uncross/audit.hpp"
#include "uncross/fairness.hpp"
#include "uncross/maximum.hpp"
#include "uncross/properties.hpp"
#include "uncross/uniform.hpp"

namespace uncross {

void print_instance(std::ostream& out, const Instance& instance) {
    const auto print_side = [&out](const OrderBookSide& side, const char* name) {
        out << name << ':';
        if (side.orders.empty()) out << " none";
        for (const Order& order : side.orders) {
            out << " (id " << order.id << ", t " << order.timestamp << ", q "
                << order.quantity << ", p " << order.price << ")";
        }
        out << '\n';
    };
    print_side(instance.bids, "bids");
    print_side(instance.asks, "asks");
}

std::int64_t bounded(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(rng());  // full 64-bit range
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - max % span;
    while (true) {
        const std::uint64_t draw = rng();
        if (draw < limit) return lo + static_cast<std::int64_t>(draw % span);
    }
}

Instance random_instance(const InstanceBudget& budget, std::mt19937_64& rng) {
    Instance instance;
    const auto max_orders = static_cast<std::int64_t>(budget.max_orders_per_side);
    const std::int64_t bid_count = bounded(rng, 0, max_orders);
    const std::int64_t ask_count = bounded(rng, 0, max_orders);
    OrderId next_id = 1;
    const auto draw_order = [&rng, &budget, &next_id](Side side) {
        Order order;
        order.id = next_id++;
        order.timestamp = bounded(rng, 0, 3);
        order.quantity = bounded(rng, 1, budget.max_quantity);
        order.price = bounded(rng, 0, budget.max_price_level);
        order.side = side;
        return order;
    };
    for (std::int64_t i = 0; i < bid_count; ++i) {
        instance.bids.orders.push_back(draw_order(Side::Bid));
    }
    for (std::int64_t i = 0; i < ask_count; ++i) {
        instance.asks.orders.push_back(draw_order(Side::Ask));
    }
    return instance;
}

namespace {

using Failure = std::optional<std::string>;

Quantity lookup(const std::unordered_map<OrderId, Quantity>& volumes,
                OrderId id) {
    const auto it = volumes.find(id);
    return it == volumes.end() ? Quantity{0} : it->second;
}

std::string property_failure(const char* context, const PropertyReport& report) {
    return std::string(context) + ": " + report.property + " fails: " +
           report.witness.value_or("(no witness)");
}

// Traded quantity per price, to verify reassignment keeps the price
// multiset intact.
std::map<Price, Quantity> price_volumes(const Matching& m) {
    std::map<Price, Quantity> volumes;
    for (const Transaction& t : m) {
        volumes[t.price] = checked_add(volumes[t.price], t.quantity);
    }
    return volumes;
}

// Per-order volumes aligned to book order (bids, then asks).
std::vector<Quantity> volume_vector(const Matching& m, const Instance& inst) {
    const auto bid_volumes = side_volumes(m, Side::Bid);
    const auto ask_volumes = side_volumes(m, Side::Ask);
    std::vector<Quantity> vec;
    vec.reserve(inst.bids.orders.size() + inst.asks.orders.size());
    for (const Order& order : inst.bids.orders) {
        vec.push_back(lookup(bid_volumes, order.id));
    }
    for (const Order& order : inst.asks.orders) {
        vec.push_back(lookup(ask_volumes, order.id));
    }
    return vec;
}

Matching sort_matching_by_side(Matching m, const OrderBookSide& side) {
    std::unordered_map<OrderId, const Order*> index;
    for (const Order& order : side.orders) index.emplace(order.id, &order);
    std::stable_sort(m.begin(), m.end(),
                     [&index, &side](const Transaction& lhs,
                                     const Transaction& rhs) {
                         if (side.side == Side::Bid) {
                             return bid_precedes(*index.at(lhs.bid_id),
                                                 *index.at(rhs.bid_id));
                         }
                         return ask_precedes(*index.at(lhs.ask_id),
                                             *index.at(rhs.ask_id));
                     });
    return m;
}

Failure check_uniform_mechanism(const Instance& inst,
                                const CheckOptions& options) {
    const Matching m = uniform_match(inst.bids, inst.asks);
    for (const PropertyReport& report :
         {is_matching(m, inst.bids, inst.asks), is_ir(m, inst.bids, inst.asks),
          is_uniform(m), is_fair(m, inst.bids, inst.asks)}) {
        if (!report.holds) return property_failure("uniform mechanism", report);
    }

    const UniformTrace trace = uniform_trace(inst.bids, inst.asks);
    if (trace.provisional.size() != m.size()) {
        return "uniform mechanism: price replacement changed the number of "
               "transactions";
    }
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (trace.provisional[i].bid_id != m[i].bid_id ||
            trace.provisional[i].ask_id != m[i].ask_id ||
            trace.provisional[i].quantity != m[i].quantity) {
            return "uniform mechanism: price replacement altered a pairing";
        }
    }

    const Quantity formula = optimal_uniform_volume(inst.bids, inst.asks);
    if (volume(m) != formula) {
        std::ostringstream out;
        out << "uniform mechanism: volume " << volume(m)
            << " differs from the demand/supply optimum " << formula;
        return out.str();
    }
    if (options.exhaustive) {
        const Quantity enumerated =
            optimal_uniform_volume_enumerated(inst.bids, inst.asks,
                                              options.budget);
        if (enumerated != formula) {
            std::ostringstream out;
            out << "oracle disagreement: enumerated single-price optimum "
                << enumerated << " differs from the formula value " << formula;
            return out.str();
        }
    }
    return std::nullopt;
}

Failure check_maximum_mechanism(const Instance& inst,
                                const CheckOptions& options) {
    const Matching m = maximum_match(inst.bids, inst.asks);
    for (const PropertyReport& report :
         {is_matching(m, inst.bids, inst.asks), is_ir(m, inst.bids, inst.asks),
          is_fair(m, inst.bids, inst.asks)}) {
        if (!report.holds) return property_failure("maximum mechanism", report);
    }

    const Quantity flow = max_volume_flow(inst.bids, inst.asks);
    if (volume(m) != flow) {
        std::ostringstream out;
        out << "maximum mechanism: volume " << volume(m)
            << " differs from the max-flow value " << flow;
        return out.str();
    }
    if (options.exhaustive) {
        const Quantity enumerated =
            max_volume_oracle(inst.bids, inst.asks, options.budget);
        if (enumerated != flow) {
            std::ostringstream out;
            out << "oracle disagreement: enumerated maximum volume "
                << enumerated << " differs from the max-flow value " << flow;
            return out.str();
        }
    }
    if (volume(m) < volume(uniform_match(inst.bids, inst.asks))) {
        return "maximum mechanism: volume below the single-price mechanism's";
    }
    return std::nullopt;
}

Failure check_volume_bounds(const Instance& inst, const CheckOptions& options) {
    Quantity bound_min = std::numeric_limits<Quantity>::max();
    const std::vector<Price> grid = candidate_prices(inst.bids, inst.asks);
    for (const Price p : grid) {
        bound_min = std::min(
            bound_min,
            checked_add(demand_at(inst.bids, p), supply_at(inst.asks, p)));
    }

    const Matching m = maximum_match(inst.bids, inst.asks);
    for (const Price p : grid) {
        const PropertyReport report =
            check_volume_bound(m, inst.bids, inst.asks, p);
        if (!report.holds) return property_failure("volume bound", report);
    }
    if (options.exhaustive) {
        // max over all matchings <= min over all prices covers every
        // (matching, price) combination at once.
        const Quantity max_anywhere =
            max_volume_oracle(inst.bids, inst.asks, options.budget);
        if (max_anywhere > bound_min) {
            std::ostringstream out;
            out << "volume bound: some matching trades " << max_anywhere
                << " units, above the demand+supply minimum " << bound_min;
            return out.str();
        }
    }
    return std::nullopt;
}

// The reassignment laws on one sampled matching at interior consumed
// states: receiver/source containment, capacity, conditional volume
// preservation of the untouched side, competitive-prefix facts.
Failure check_partial_reassignment(const Instance& inst, const Matching& m,
                                   Side side, Quantity t) {
    const OrderBookSide& receivers = side == Side::Bid ? inst.bids : inst.asks;
    const OrderBookSide& other = side == Side::Bid ? inst.asks : inst.bids;
    const char* context = side == Side::Bid ? "partial bid reassignment"
                                            : "partial ask reassignment";
    const auto sorted_orders = sort_orders(receivers.orders, side,
                                           SortDirection::MostCompetitiveFirst);
    const Matching sorted_m = sort_matching_by_side(m, receivers);
    const Matching out = side == Side::Bid ? fob_from(sorted_m, sorted_orders, t)
                                           : foa_from(sorted_m, sorted_orders, t);

    std::unordered_set<OrderId> receiver_ids;
    for (const Order& order : receivers.orders) receiver_ids.insert(order.id);
    std::unordered_set<OrderId> source_other_ids;
    for (const Transaction& tr : m) {
        source_other_ids.insert(side == Side::Bid ? tr.ask_id : tr.bid_id);
    }
    for (const Transaction& tr : out) {
        const OrderId receiver = side == Side::Bid ? tr.bid_id : tr.ask_id;
        const OrderId counterparty = side == Side::Bid ? tr.ask_id : tr.bid_id;
        if (!receiver_ids.contains(receiver)) {
            return std::string(context) +
                   ": output references an order outside the book";
        }
        if (!source_other_ids.contains(counterparty)) {
            return std::string(context) +
                   ": output references a counterparty absent from the input";
        }
    }

    const auto out_receiver_volumes = side_volumes(out, side);
    for (const Order& order : receivers.orders) {
        if (lookup(out_receiver_volumes, order.id) > order.quantity) {
            return std::string(context) + ": an order is filled above its quantity";
        }
    }
    const Side other_side = side == Side::Bid ? Side::Ask : Side::Bid;
    const auto out_other_volumes = side_volumes(out, other_side);
    for (const Order& order : other.orders) {
        if (lookup(out_other_volumes, order.id) > order.quantity) {
            return std::string(context) +
                   ": a counterparty is filled above its quantity";
        }
    }

    // When the receiving book has spare capacity for the whole input
    // plus the pre-consumed units, the untouched side's volumes are
    // preserved exactly.
    if (book_quantity(receivers) >= checked_add(volume(m), t)) {
        if (out_other_volumes != side_volumes(m, other_side)) {
            return std::string(context) +
                   ": counterparty volumes changed despite sufficient capacity";
        }
    }

    // Two traded receivers imply the input held more volume than the
    // more competitive one's unfilled effective quantity.
    std::vector<const Order*> traded;
    for (const Order& order : receivers.orders) {
        if (lookup(out_receiver_volumes, order.id) > 0) traded.push_back(&order);
    }
    for (const Order* more : traded) {
        for (const Order* less : traded) {
            const bool strictly_more_competitive =
                side == Side::Bid ? bid_precedes(*more, *less)
                                  : ask_precedes(*more, *less);
            if (!strictly_more_competitive) continue;
            if (!(volume(m) > more->quantity - t)) {
                return std::string(context) +
                       ": two orders traded although the input volume cannot "
                       "fill the more competitive one";
            }
        }
    }

    // Enough input volume fills the head order to exactly its effective
    // quantity.
    if (!sorted_orders.empty() &&
        volume(m) >= sorted_orders.front().quantity - t) {
        if (lookup(out_receiver_volumes, sorted_orders.front().id) !=
            sorted_orders.front().quantity - t) {
            return std::string(context) +
                   ": head order not filled to its effective quantity";
        }
    }
    return std::nullopt;
}

Failure check_reassignment_battery(const Instance& inst,
                                   const CheckOptions& options) {
    if (!options.exhaustive) return std::nullopt;

    const std::uint64_t total =
        count_assignments(inst.bids, inst.asks, kAssignmentHardCap);
    const std::uint64_t stride =
        std::max<std::uint64_t>(1, total / std::max<std::size_t>(
                                              1, options.matching_samples));
    std::vector<Matching> samples;
    std::uint64_t index = 0;
    enumerate_matchings(inst.bids, inst.asks, options.budget,
                        [&](const Matching& m) {
                            if (index++ % stride == 0 &&
                                samples.size() < options.matching_samples) {
                                samples.push_back(m);
                            }
                        });

    for (const Matching& m : samples) {
        const Matching rebalanced = fair(m, inst.bids, inst.asks);
        for (const PropertyReport& report :
             {is_matching(rebalanced, inst.bids, inst.asks),
              is_fair(rebalanced, inst.bids, inst.asks)}) {
            if (!report.holds) {
                return property_failure("fair reassignment", report);
            }
        }
        if (volume(rebalanced) != volume(m)) {
            return "fair reassignment: total volume changed";
        }
        if (price_volumes(rebalanced) != price_volumes(m)) {
            return "fair reassignment: traded quantity per price changed";
        }

        const Matching on_bids = fob(m, inst.bids);
        if (side_volumes(on_bids, Side::Ask) != side_volumes(m, Side::Ask)) {
            return "bid reassignment: ask volumes changed";
        }
        for (const PropertyReport& report :
             {is_matching(on_bids, inst.bids, inst.asks),
              is_fair_on_bids(on_bids, inst.bids)}) {
            if (!report.holds) {
                return property_failure("bid reassignment", report);
            }
        }

        const Matching on_asks = foa(m, inst.asks);
        if (side_volumes(on_asks, Side::Bid) != side_volumes(m, Side::Bid)) {
            return "ask reassignment: bid volumes changed";
        }
        for (const PropertyReport& report :
             {is_matching(on_asks, inst.bids, inst.asks),
              is_fair_on_asks(on_asks, inst.asks)}) {
            if (!report.holds) {
                return property_failure("ask reassignment", report);
            }
        }

        for (const Side side : {Side::Bid, Side::Ask}) {
            const OrderBookSide& receivers =
                side == Side::Bid ? inst.bids : inst.asks;
            const auto sorted = sort_orders(receivers.orders, side,
                                            SortDirection::MostCompetitiveFirst);
            if (sorted.empty()) continue;
            std::vector<Quantity> consumed_values{1, sorted.front().quantity - 1};
            for (const Quantity t : consumed_values) {
                if (t < 1 || t >= sorted.front().quantity) continue;
                if (auto failure = check_partial_reassignment(inst, m, side, t)) {
                    return failure;
                }
            }
        }
    }
    return std::nullopt;
}

Failure check_volume_uniqueness(const Instance& inst,
                                const CheckOptions& options) {
    if (!options.exhaustive) return std::nullopt;
    Failure failure;
    // Volume -> (first fair matching seen, its per-order volumes).
    std::map<Quantity, std::pair<Matching, std::vector<Quantity>>> witnesses;
    enumerate_matchings(
        inst.bids, inst.asks, options.budget, [&](const Matching& m) {
            if (failure.has_value()) return;
            if (!is_fair(m, inst.bids, inst.asks).holds) return;
            const Quantity vol = volume(m);
            const auto it = witnesses.find(vol);
            if (it == witnesses.end()) {
                witnesses.emplace(vol,
                                  std::make_pair(m, volume_vector(m, inst)));
                return;
            }
            if (volume_vector(m, inst) != it->second.second) {
                const PropertyReport report = uniqueness_check(
                    it->second.first, m, inst.bids, inst.asks);
                failure = property_failure(
                    "volume uniqueness: two fair matchings of equal volume "
                    "differ",
                    report);
            }
        });
    return failure;
}

Failure check_fair_optimal_set(const Instance& inst,
                               const CheckOptions& options) {
    if (!options.exhaustive) return std::nullopt;
    Failure failure;
    std::optional<std::vector<Quantity>> expected;
    const std::uint64_t yielded = enumerate_fair_optimal(
        inst.bids, inst.asks, options.budget, [&](const Matching& m) {
            if (failure.has_value()) return;
            const auto vec = volume_vector(m, inst);
            if (!expected.has_value()) {
                expected = vec;
            } else if (vec != *expected) {
                failure =
                    "fair optimal set: two members have different per-order "
                    "volumes";
                return;
            }
            const AuditReport report = audit(inst.bids, inst.asks, m);
            if (report.verdict != Verdict::NoViolation) {
                failure =
                    "fair optimal set: audit flags a fair optimal matching "
                    "as a violation";
            }
        });
    if (failure.has_value()) return failure;
    if (yielded == 0) {
        return "fair optimal set: empty (a fair optimal matching always "
               "exists)";
    }
    return std::nullopt;
}

Failure check_audit_roundtrip(const Instance& inst,
                              const CheckOptions& options) {
    const Matching reference = uniform_match(inst.bids, inst.asks);
    const AuditReport self = audit(inst.bids, inst.asks, reference);
    if (self.verdict != Verdict::NoViolation) {
        return "self-audit: the reference output is flagged as a violation";
    }
    if (self.verdict_message != kNoViolationMessage) {
        return "self-audit: unexpected verdict message";
    }

    if (!options.perturbations) return std::nullopt;
    for (const Side side : {Side::Bid, Side::Ask}) {
        const OrderBookSide& book = side == Side::Bid ? inst.bids : inst.asks;
        for (std::size_t i = 0; i < reference.size(); ++i) {
            for (const Order& receiver : book.orders) {
                const OrderId giver = side == Side::Bid ? reference[i].bid_id
                                                        : reference[i].ask_id;
                if (receiver.id == giver) continue;
                Matching perturbed = reference;
                Transaction moved = perturbed[i];
                moved.quantity = 1;
                if (side == Side::Bid) {
                    moved.bid_id = receiver.id;
                } else {
                    moved.ask_id = receiver.id;
                }
                if (perturbed[i].quantity == 1) {
                    perturbed.erase(perturbed.begin() +
                                    static_cast<std::ptrdiff_t>(i));
                } else {
                    perturbed[i].quantity -= 1;
                }
                perturbed.push_back(moved);
                const AuditReport report =
                    audit(inst.bids, inst.asks, perturbed);
                if (report.verdict != Verdict::Violation) {
                    std::ostringstream out;
                    out << "perturbation: moving one unit to "
                        << (side == Side::Bid ? "bid" : "ask") << " "
                        << receiver.id << " was not flagged as a violation";
                    return out.str();
                }
                if (report.verdict_message != kViolationMessage) {
                    return "perturbation: unexpected verdict message";
                }
            }
        }
    }
    return std::nullopt;
}

Failure check_books(const Instance& instance) {
    if (const auto problem = validate_book(instance.bids)) {
        return "invalid bid book: " + *problem;
    }
    if (const auto problem = validate_book(instance.asks)) {
        return "invalid ask book: " + *problem;
    }
    return std::nullopt;
}

}  // namespace

std::optional<std::string> check_mechanisms(const Instance& instance,
                                            const CheckOptions& options) {
    if (auto failure = check_books(instance)) return failure;
    if (auto failure = check_uniform_mechanism(instance, options)) return failure;
    if (auto failure = check_maximum_mechanism(instance, options)) return failure;
    return check_volume_bounds(instance, options);
}

std::optional<std::string> check_fairness_battery(const Instance& instance,
                                                  const CheckOptions& options) {
    if (auto failure = check_books(instance)) return failure;
    return check_reassignment_battery(instance, options);
}

std::optional<std::string> check_uniqueness_battery(const Instance& instance,
                                                    const CheckOptions& options) {
    if (auto failure = check_books(instance)) return failure;
    if (auto failure = check_volume_uniqueness(instance, options)) return failure;
    return check_fair_optimal_set(instance, options);
}

std::optional<std::string> check_audit_battery(const Instance& instance,
                                               const CheckOptions& options) {
    if (auto failure = check_books(instance)) return failure;
    return check_audit_roundtrip(instance, options);
}

std::optional<std::string> check_instance(const Instance& instance,
                                          const CheckOptions& options) {
    if (auto failure = check_mechanisms(instance, options)) return failure;
    if (auto failure = check_fairness_battery(instance, options)) {
        return failure;
    }
    if (auto failure = check_uniqueness_battery(instance, options)) {
        return failure;
    }
    return check_audit_battery(instance, options);
}

std::vector<Instance> shrink_candidates(const Instance& instance) {
    std::vector<Instance> candidates;
    const auto with_side_mutation = [&candidates, &instance](bool bids) {
        const std::vector<Order>& orders =
            bids ? instance.bids.orders : instance.asks.orders;
        for (std::size_t i = 0; i < orders.size(); ++i) {
            Instance dropped = instance;
            auto& target = bids ? dropped.bids.orders : dropped.asks.orders;
            target.erase(target.begin() + static_cast<std::ptrdiff_t>(i));
            candidates.push_back(std::move(dropped));
        }
        for (std::size_t i = 0; i < orders.size(); ++i) {
            if (orders[i].quantity > 1) {
                Instance reduced = instance;
                auto& target = bids ? reduced.bids.orders : reduced.asks.orders;
                target[i].quantity -= 1;
                candidates.push_back(std::move(reduced));
            }
            if (orders[i].price > 0) {
                Instance reduced = instance;
                auto& target = bids ? reduced.bids.orders : reduced.asks.orders;
                target[i].price -= 1;
                candidates.push_back(std::move(reduced));
            }
            if (orders[i].timestamp > 0) {
                Instance reduced = instance;
                auto& target = bids ? reduced.bids.orders : reduced.asks.orders;
                target[i].timestamp -= 1;
                candidates.push_back(std::move(reduced));
            }
        }
    };
    with_side_mutation(true);
    with_side_mutation(false);
    return candidates;
}

Instance shrink(Instance failing, const CheckOptions& options) {
    constexpr std::size_t kMaxRounds = 4096;
    for (std::size_t round = 0; round < kMaxRounds; ++round) {
        bool reduced = false;
        for (Instance& candidate : shrink_candidates(failing)) {
            if (check_instance(candidate, options).has_value()) {
                failing = std::move(candidate);
                reduced = true;
                break;
            }
        }
        if (!reduced) break;
    }
    return failing;
}

SuiteResult run_suite(std::uint64_t seed, std::uint64_t count,
                      const CheckOptions& options, std::ostream* progress) {
    SuiteResult result;
    std::mt19937_64 rng(seed);
    for (std::uint64_t i = 0; i < count; ++i) {
        const Instance instance = random_instance(options.budget, rng);
        if (auto failure = check_instance(instance, options)) {
            result.passed = false;
            result.instances_checked = i + 1;
            result.counterexample = shrink(instance, options);
            result.failure =
                check_instance(result.counterexample, options).value_or(*failure);
            return result;
        }
        if (progress != nullptr && (i + 1) % 200 == 0) {
            *progress << "checked " << (i + 1) << " of " << count
                      << " instances\n";
        }
    }
    result.instances_checked = count;
    return result;
}

}  // namespace uncross
