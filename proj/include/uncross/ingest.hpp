#pragma once

// CSV ingestion of order books, trade books, and raw order-event logs,
// plus the preprocessing steps that turn them into matchable books:
// last-event-wins book resolution and market-order price substitution.
//
// All formats are comma-separated UTF-8 with a mandatory header, LF
// line endings, no quoting. Trailing whitespace on a line is tolerated;
// anything else malformed is rejected with line/column coordinates.
//   orders      id,timestamp,quantity,price      (price `M` = market)
//   trades      bid_id,ask_id,quantity,price
//   raw events  id,timestamp,side,action,quantity,price
//               side `B`/`A`; action `N`ew, `U`pdate, `D`elete;
//               Delete rows leave quantity and price empty.

#include <filesystem>
#include <iosfwd>

#include "uncross/core.hpp"

namespace uncross {

// An order as written in a file; the limit price is absent for market
// orders, which trade at any price.
struct OrderRow {
    OrderId id = 0;
    Timestamp timestamp = 0;
    Quantity quantity = 0;
    std::optional<Price> limit;  // nullopt = market order

    friend bool operator==(const OrderRow&, const OrderRow&) = default;
};

using TradeRecord = Transaction;

enum class EventAction { New, Update, Delete };

struct RawOrderEvent {
    OrderId id = 0;
    Timestamp timestamp = 0;
    Side side = Side::Bid;
    EventAction action = EventAction::New;
    Quantity quantity = 0;       // meaningless for Delete
    std::optional<Price> limit;  // nullopt = market; meaningless for Delete

    friend bool operator==(const RawOrderEvent&, const RawOrderEvent&) = default;
};

class ParseError : public std::runtime_error {
  public:
    ParseError(std::size_t line, std::size_t column, const std::string& message);
    // The same error with `context` (e.g. a file name) prepended to the
    // message, keeping the original coordinates.
    static ParseError with_context(const std::string& context,
                                   const ParseError& inner);
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

  private:
    ParseError(const std::string& formatted, std::size_t line,
               std::size_t column);
    std::size_t line_;
    std::size_t column_;
};

std::vector<OrderRow> parse_orders(std::istream& in);
std::vector<OrderRow> parse_orders_file(const std::filesystem::path& path);
std::vector<TradeRecord> parse_trades(std::istream& in);
std::vector<TradeRecord> parse_trades_file(const std::filesystem::path& path);
std::vector<RawOrderEvent> parse_raw_events(std::istream& in);
std::vector<RawOrderEvent> parse_raw_events_file(const std::filesystem::path& path);

// Canonical serialization: header, LF endings, `M` for market prices.
// Parsing then writing a well-formed file reproduces it byte for byte
// up to trailing-whitespace normalization.
void write_orders(std::ostream& out, const std::vector<OrderRow>& rows);
void write_orders_file(const std::filesystem::path& path,
                       const std::vector<OrderRow>& rows);
void write_trades(std::ostream& out, const std::vector<TradeRecord>& trades);
void write_trades_file(const std::filesystem::path& path,
                       const std::vector<TradeRecord>& trades);

struct ResolveOptions {
    // When true, an Update adopts the event's timestamp (losing time
    // priority); by default the original submission time is kept.
    bool update_requeues_time = false;
};

struct ResolvedBooks {
    std::vector<OrderRow> bids;
    std::vector<OrderRow> asks;
    // Human-readable notes about skipped events (e.g. Update/Delete for
    // an id that is not in the book).
    std::vector<std::string> warnings;
};

// Folds an event log into the final books: per id, the last event by
// (timestamp, then file order) wins; Delete removes the order; Update
// rewrites quantity and price subject to `options`. Output rows are
// sorted by id. Unknown-id Updates/Deletes are skipped with a warning.
ResolvedBooks resolve_book(const std::vector<RawOrderEvent>& events,
                           const ResolveOptions& options = {});

// Removes market-price rows from an ask list (the preprocessing switch
// exercised by the audit tool's --keep-market-asks flag).
std::vector<OrderRow> strip_market_asks(std::vector<OrderRow> asks);

// Turns rows into matchable books: market bids get `max_price`, market
// asks get price 0, everything else is copied unchanged.
std::pair<OrderBookSide, OrderBookSide> substitute_market_prices(
    const std::vector<OrderRow>& bids, const std::vector<OrderRow>& asks,
    Price max_price = kMaxPrice);

}  // namespace uncross
