#include "uncross/audit.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "uncross/uniform.hpp"

namespace uncross {

namespace {

struct PriceTimeKey {
    Price price;
    Timestamp timestamp;
    friend bool operator==(const PriceTimeKey&, const PriceTimeKey&) = default;
};

struct PriceTimeKeyHash {
    std::size_t operator()(const PriceTimeKey& key) const {
        const std::size_t h1 = std::hash<Price>{}(key.price);
        const std::size_t h2 = std::hash<Timestamp>{}(key.timestamp);
        return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
    }
};

// Orders sharing (price, timestamp) on one side, whose relative
// priority is decided only by the id tie-break.
struct TieGroups {
    // order id -> group index; only members of groups of size >= 2.
    std::unordered_map<OrderId, std::size_t> member_to_group;
    std::size_t group_count = 0;
};

TieGroups collect_tie_groups(const OrderBookSide& side, TieGroups groups) {
    std::unordered_map<PriceTimeKey, std::vector<OrderId>, PriceTimeKeyHash>
        buckets;
    for (const Order& order : side.orders) {
        buckets[{order.price, order.timestamp}].push_back(order.id);
    }
    for (const auto& [key, ids] : buckets) {
        if (ids.size() < 2) continue;
        for (const OrderId id : ids) {
            groups.member_to_group.emplace(id, groups.group_count);
        }
        ++groups.group_count;
    }
    return groups;
}

std::vector<AuditRow> build_rows(const OrderBookSide& side,
                                 const std::unordered_map<OrderId, Quantity>& exchange,
                                 const std::unordered_map<OrderId, Quantity>& reference) {
    const auto volume_of = [](const std::unordered_map<OrderId, Quantity>& map,
                              OrderId id) {
        const auto it = map.find(id);
        return it == map.end() ? Quantity{0} : it->second;
    };
    std::vector<AuditRow> rows;
    rows.reserve(side.orders.size());
    for (const Order& order : side.orders) {
        AuditRow row;
        row.order_id = order.id;
        row.side = side.side;
        row.exchange_qty = volume_of(exchange, order.id);
        row.reference_qty = volume_of(reference, order.id);
        row.equal = row.exchange_qty == row.reference_qty;
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(),
              [](const AuditRow& lhs, const AuditRow& rhs) {
                  return lhs.order_id < rhs.order_id;
              });
    return rows;
}

}  // namespace

AuditReport audit(const OrderBookSide& bids, const OrderBookSide& asks,
                  const std::vector<TradeRecord>& exchange_trades) {
    AuditReport report;

    const Matching reference = uniform_match(bids, asks);
    const auto exchange_bid_volumes = side_volumes(exchange_trades, Side::Bid);
    const auto exchange_ask_volumes = side_volumes(exchange_trades, Side::Ask);
    const auto reference_bid_volumes = side_volumes(reference, Side::Bid);
    const auto reference_ask_volumes = side_volumes(reference, Side::Ask);

    report.rows = build_rows(bids, exchange_bid_volumes, reference_bid_volumes);
    const auto ask_rows =
        build_rows(asks, exchange_ask_volumes, reference_ask_volumes);
    report.rows.insert(report.rows.end(), ask_rows.begin(), ask_rows.end());

    report.matching_verdict = is_matching(exchange_trades, bids, asks);
    report.ir_verdict = is_ir(exchange_trades, bids, asks);
    report.uniform_verdict = is_uniform(exchange_trades);

    const TieGroups tie_groups =
        collect_tie_groups(asks, collect_tie_groups(bids, TieGroups{}));
    report.tie_break_exercised = tie_groups.group_count > 0;

    bool all_equal = true;
    bool divergence_seen = false;
    bool all_divergence_tied = true;
    // Group index -> (exchange total, reference total) over its members.
    std::unordered_map<std::size_t, std::pair<Quantity, Quantity>> group_totals;
    for (const AuditRow& row : report.rows) {
        const auto group_it = tie_groups.member_to_group.find(row.order_id);
        if (group_it != tie_groups.member_to_group.end()) {
            auto& [exchange_total, reference_total] =
                group_totals[group_it->second];
            exchange_total = checked_add(exchange_total, row.exchange_qty);
            reference_total = checked_add(reference_total, row.reference_qty);
        }
        if (row.equal) continue;
        all_equal = false;
        divergence_seen = true;
        if (group_it == tie_groups.member_to_group.end()) {
            all_divergence_tied = false;
        }
    }
    bool group_totals_agree = true;
    for (const auto& [group, totals] : group_totals) {
        if (totals.first != totals.second) group_totals_agree = false;
    }
    report.divergence_within_tie_groups =
        divergence_seen && all_divergence_tied && group_totals_agree;

    const bool no_violation = all_equal && report.matching_verdict.holds &&
                              report.ir_verdict.holds &&
                              report.uniform_verdict.holds;
    report.verdict = no_violation ? Verdict::NoViolation : Verdict::Violation;
    report.verdict_message =
        no_violation ? kNoViolationMessage : kViolationMessage;

    if (report.tie_break_exercised) {
        report.notes.push_back(
            "some orders are tied on (price, timestamp); their relative "
            "priority is an id tie-break convention of this tool");
    }
    if (report.divergence_within_tie_groups) {
        report.notes.push_back(
            "warning: every volume divergence lies within a group of orders "
            "tied on (price, timestamp) and group totals agree; the exchange "
            "may use a different tie-break rule, so this violation may not "
            "indicate an unfair allocation");
    }
    return report;
}

PropertyReport uniqueness_check(const Matching& m1, const Matching& m2,
                                const OrderBookSide& bids,
                                const OrderBookSide& asks) {
    static const char* const kName = "uniqueness_check";
    const auto report_side = [&](const OrderBookSide& side)
        -> std::optional<PropertyReport> {
        const auto volumes1 = side_volumes(m1, side.side);
        const auto volumes2 = side_volumes(m2, side.side);
        const auto volume_of =
            [](const std::unordered_map<OrderId, Quantity>& map, OrderId id) {
                const auto it = map.find(id);
                return it == map.end() ? Quantity{0} : it->second;
            };
        for (const Order& order : side.orders) {
            const Quantity v1 = volume_of(volumes1, order.id);
            const Quantity v2 = volume_of(volumes2, order.id);
            if (v1 != v2) {
                std::ostringstream out;
                out << (side.side == Side::Bid ? "bid" : "ask") << " "
                    << order.id << " trades " << v1
                    << " units in the first matching but " << v2
                    << " in the second";
                return PropertyReport::fail(kName, out.str());
            }
        }
        return std::nullopt;
    };
    if (auto failed = report_side(bids)) return *failed;
    if (auto failed = report_side(asks)) return *failed;
    return PropertyReport::pass(kName);
}

namespace {

void print_property(std::ostream& out, const PropertyReport& report,
                    const char* label) {
    out << "  " << label << ": " << (report.holds ? "ok" : "FAIL");
    if (!report.holds && report.witness.has_value()) {
        out << " (" << *report.witness << ")";
    }
    out << '\n';
}

}  // namespace

void print_report(std::ostream& out, const AuditReport& report) {
    std::size_t diverging = 0;
    for (const AuditRow& row : report.rows) {
        if (!row.equal) ++diverging;
    }
    out << "orders compared: " << report.rows.size()
        << ", volumes diverging: " << diverging << '\n';
    if (diverging > 0) {
        out << "  order_id side exchange_qty reference_qty\n";
        for (const AuditRow& row : report.rows) {
            if (row.equal) continue;
            out << "  " << row.order_id << " "
                << (row.side == Side::Bid ? 'B' : 'A') << " "
                << row.exchange_qty << " " << row.reference_qty << '\n';
        }
    }
    out << "trade-book properties:\n";
    print_property(out, report.matching_verdict, "valid matching of the books");
    print_property(out, report.ir_verdict, "prices within limits");
    print_property(out, report.uniform_verdict, "single trade price");
    out << "tie-break exercised: "
        << (report.tie_break_exercised ? "yes" : "no") << '\n';
    for (const std::string& note : report.notes) {
        out << "note: " << note << '\n';
    }
    out << report.verdict_message << '\n';
}

void write_report_csv(std::ostream& out, const AuditReport& report) {
    out << "order_id,side,exchange_qty,reference_qty,equal\n";
    for (const AuditRow& row : report.rows) {
        out << row.order_id << ',' << (row.side == Side::Bid ? 'B' : 'A') << ','
            << row.exchange_qty << ',' << row.reference_qty << ','
            << (row.equal ? 1 : 0) << '\n';
    }
}

}  // namespace uncross
