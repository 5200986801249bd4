// Command-line front end: deterministic call-auction matching (single
// uniform price or maximum volume), exchange trade-book auditing, and
// the randomized oracle-backed self-check suite.
//
// Exit codes: 0 success (audit: no violation); 1 audit violation or
// self-check counterexample; 2 input/parse/budget error; 3 internal
// invariant failure.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "uncross/audit.hpp"
#include "uncross/fairness.hpp"
#include "uncross/ingest.hpp"
#include "uncross/maximum.hpp"
#include "uncross/oracle.hpp"
#include "uncross/properties.hpp"
#include "uncross/selfcheck.hpp"
#include "uncross/uniform.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInternalError = 3;

using uncross::OrderBookSide;

// Books from order files, with market prices substituted; throws
// ParseError on malformed input and std::invalid_argument on invalid
// books (both mapped to exit 2 by the caller).
std::pair<OrderBookSide, OrderBookSide> load_books(
    const std::string& bids_path, const std::string& asks_path,
    bool keep_market_asks) {
    auto bid_rows = uncross::parse_orders_file(bids_path);
    auto ask_rows = uncross::parse_orders_file(asks_path);
    if (!keep_market_asks) {
        ask_rows = uncross::strip_market_asks(std::move(ask_rows));
    }
    auto books = uncross::substitute_market_prices(bid_rows, ask_rows);
    if (const auto problem = uncross::validate_book(books.first)) {
        throw std::invalid_argument(bids_path + ": " + *problem);
    }
    if (const auto problem = uncross::validate_book(books.second)) {
        throw std::invalid_argument(asks_path + ": " + *problem);
    }
    return books;
}

void write_matching(const std::string& out_path, const uncross::Matching& m) {
    if (out_path == "-") {
        uncross::write_trades(std::cout, m);
        return;
    }
    uncross::write_trades_file(out_path, m);
}

int run_match(bool maximum, const std::string& bids_path,
              const std::string& asks_path, const std::string& out_path) {
    const auto [bids, asks] = load_books(bids_path, asks_path,
                                         /*keep_market_asks=*/true);
    const uncross::Matching m = maximum ? uncross::maximum_match(bids, asks)
                                        : uncross::uniform_match(bids, asks);

    // Never publish an output that fails its own guarantees.
    std::vector<uncross::PropertyReport> reports{
        uncross::is_matching(m, bids, asks), uncross::is_ir(m, bids, asks),
        uncross::is_fair(m, bids, asks)};
    if (!maximum) reports.push_back(uncross::is_uniform(m));
    for (const uncross::PropertyReport& report : reports) {
        if (!report.holds) {
            std::cerr << "internal invariant failure: " << report.property
                      << ": " << report.witness.value_or("(no witness)")
                      << '\n';
            return kExitInternalError;
        }
    }
    write_matching(out_path, m);
    return kExitOk;
}

struct AuditArgs {
    std::string bids_path;
    std::string asks_path;
    std::string trades_path;
    std::string raw_events_path;
    std::string report_csv_path;
    bool update_requeues_time = false;
    bool keep_market_asks = false;
};

int run_audit(const AuditArgs& args) {
    std::vector<uncross::OrderRow> bid_rows;
    std::vector<uncross::OrderRow> ask_rows;
    std::string policy_note;
    if (!args.raw_events_path.empty()) {
        const auto events = uncross::parse_raw_events_file(args.raw_events_path);
        uncross::ResolveOptions options;
        options.update_requeues_time = args.update_requeues_time;
        auto resolved = uncross::resolve_book(events, options);
        for (const std::string& warning : resolved.warnings) {
            std::cerr << "warning: " << warning << '\n';
        }
        bid_rows = std::move(resolved.bids);
        ask_rows = std::move(resolved.asks);
        policy_note = args.update_requeues_time
                          ? "book resolution: updates re-queue time priority"
                          : "book resolution: updates keep the original "
                            "timestamp";
    } else {
        bid_rows = uncross::parse_orders_file(args.bids_path);
        ask_rows = uncross::parse_orders_file(args.asks_path);
    }
    if (!args.keep_market_asks) {
        ask_rows = uncross::strip_market_asks(std::move(ask_rows));
    }
    auto books = uncross::substitute_market_prices(bid_rows, ask_rows);
    if (const auto problem = uncross::validate_book(books.first)) {
        throw std::invalid_argument("bid book: " + *problem);
    }
    if (const auto problem = uncross::validate_book(books.second)) {
        throw std::invalid_argument("ask book: " + *problem);
    }
    const auto trades = uncross::parse_trades_file(args.trades_path);

    uncross::AuditReport report = audit(books.first, books.second, trades);
    std::vector<std::string> notes;
    notes.push_back(args.keep_market_asks
                        ? "preprocessing: market asks kept (price 0)"
                        : "preprocessing: market asks removed");
    if (!policy_note.empty()) notes.push_back(policy_note);
    notes.insert(notes.end(), report.notes.begin(), report.notes.end());
    report.notes = std::move(notes);

    uncross::print_report(std::cout, report);
    if (!args.report_csv_path.empty()) {
        std::ofstream csv(args.report_csv_path, std::ios::binary);
        if (!csv) {
            throw std::runtime_error("cannot open file for writing: " +
                                     args.report_csv_path);
        }
        uncross::write_report_csv(csv, report);
    }
    return report.verdict == uncross::Verdict::NoViolation ? kExitOk
                                                           : kExitViolation;
}

struct OracleArgs {
    std::uint64_t instances = 1000;
    std::uint64_t seed = 1;
    std::size_t max_orders = 4;
    std::int64_t max_quantity = 3;
    std::int64_t max_price = 5;
    std::size_t samples = 64;
    bool quiet = false;
};

// The largest instance the budget admits: every pair matchable, every
// quantity maximal. If even its assignment count is over the hard cap,
// the suite cannot certify anything in bounded time.
bool budget_within_hard_cap(const uncross::InstanceBudget& budget) {
    uncross::Instance worst;
    uncross::OrderId next_id = 1;
    for (std::size_t i = 0; i < budget.max_orders_per_side; ++i) {
        worst.bids.orders.push_back({next_id++, 0, budget.max_quantity,
                                     budget.max_price_level, uncross::Side::Bid});
    }
    for (std::size_t i = 0; i < budget.max_orders_per_side; ++i) {
        worst.asks.orders.push_back(
            {next_id++, 0, budget.max_quantity, 0, uncross::Side::Ask});
    }
    return uncross::count_assignments(worst.bids, worst.asks,
                                      uncross::kAssignmentHardCap) <=
           uncross::kAssignmentHardCap;
}

int run_oracle_check(const OracleArgs& args) {
    uncross::CheckOptions options;
    options.budget.max_orders_per_side = args.max_orders;
    options.budget.max_quantity = args.max_quantity;
    options.budget.max_price_level = args.max_price;
    options.matching_samples = args.samples;
    if (args.max_quantity < 1 || args.max_price < 0) {
        std::cerr << "error: budget bounds must be positive\n";
        return kExitInputError;
    }
    if (!budget_within_hard_cap(options.budget)) {
        std::cerr << "error: budget admits more than "
                  << uncross::kAssignmentHardCap
                  << " assignments per instance; refusing to run\n";
        return kExitInputError;
    }

    const uncross::SuiteResult result = uncross::run_suite(
        args.seed, args.instances, options, args.quiet ? nullptr : &std::cout);
    if (result.passed) {
        std::cout << "all invariants hold on " << result.instances_checked
                  << " seeded instances\n";
        return kExitOk;
    }
    std::cout << "counterexample found after " << result.instances_checked
              << " instances\n"
              << result.failure << "\nminimized instance:\n";
    uncross::print_instance(std::cout, result.counterexample);
    return kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Deterministic call-auction matching and trade-book audit tools"};
    app.require_subcommand(1);

    std::string match_bids;
    std::string match_asks;
    std::string match_out = "-";
    auto add_match_options = [&](CLI::App* cmd) {
        cmd->add_option("--bids", match_bids, "bid order CSV")->required();
        cmd->add_option("--asks", match_asks, "ask order CSV")->required();
        cmd->add_option("--out", match_out,
                        "output trades CSV path ('-' = standard output)");
    };
    CLI::App* um = app.add_subcommand(
        "um", "match at one clearing price (largest single-price volume)");
    add_match_options(um);
    CLI::App* mm = app.add_subcommand(
        "mm", "match for maximum total volume (prices vary per trade)");
    add_match_options(mm);

    AuditArgs audit_args;
    CLI::App* audit_cmd = app.add_subcommand(
        "audit", "compare an exchange trade book against the reference");
    audit_cmd->add_option("--bids", audit_args.bids_path, "bid order CSV");
    audit_cmd->add_option("--asks", audit_args.asks_path, "ask order CSV");
    audit_cmd->add_option("--trades", audit_args.trades_path,
                          "exchange trades CSV")
        ->required();
    audit_cmd->add_option(
        "--raw-events", audit_args.raw_events_path,
        "order event log CSV; replaces --bids/--asks via book resolution");
    audit_cmd->add_option("--report-csv", audit_args.report_csv_path,
                          "write the per-order comparison table here");
    audit_cmd->add_flag("--update-requeues-time",
                        audit_args.update_requeues_time,
                        "an Update event loses time priority");
    audit_cmd->add_flag("--keep-market-asks", audit_args.keep_market_asks,
                        "keep market asks (price 0) instead of removing them");

    OracleArgs oracle_args;
    CLI::App* oracle_cmd = app.add_subcommand(
        "oracle-check", "run the randomized oracle-backed self-check suite");
    oracle_cmd->add_option("--instances", oracle_args.instances,
                           "number of seeded instances");
    oracle_cmd->add_option("--seed", oracle_args.seed, "generator seed");
    oracle_cmd->add_option("--max-orders", oracle_args.max_orders,
                           "budget: orders per side");
    oracle_cmd->add_option("--max-quantity", oracle_args.max_quantity,
                           "budget: quantity per order");
    oracle_cmd->add_option("--max-price", oracle_args.max_price,
                           "budget: price levels 0..N");
    oracle_cmd->add_option("--samples", oracle_args.samples,
                           "matchings sampled per instance");
    oracle_cmd->add_flag("--quiet", oracle_args.quiet, "suppress progress");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Keep the exit-code contract: bad usage is an input error (2),
        // while --help and --version stay successful.
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (um->parsed()) {
            return run_match(false, match_bids, match_asks, match_out);
        }
        if (mm->parsed()) {
            return run_match(true, match_bids, match_asks, match_out);
        }
        if (audit_cmd->parsed()) {
            if (audit_args.raw_events_path.empty() &&
                (audit_args.bids_path.empty() || audit_args.asks_path.empty())) {
                std::cerr << "error: provide --raw-events or both --bids and "
                             "--asks\n";
                return kExitInputError;
            }
            return run_audit(audit_args);
        }
        if (oracle_cmd->parsed()) {
            return run_oracle_check(oracle_args);
        }
    } catch (const uncross::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const uncross::BudgetError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kExitInternalError;
    }
    return kExitOk;
}
