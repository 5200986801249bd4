#include "uncross/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

namespace uncross {

namespace {

std::string format_parse_error(std::size_t line, std::size_t column,
                               const std::string& message) {
    if (line == 0) return message;
    std::ostringstream out;
    out << "line " << line << ", column " << column << ": " << message;
    return out.str();
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column,
                       const std::string& message)
    : std::runtime_error(format_parse_error(line, column, message)),
      line_(line),
      column_(column) {}

ParseError::ParseError(const std::string& formatted, std::size_t line,
                       std::size_t column)
    : std::runtime_error(formatted), line_(line), column_(column) {}

ParseError ParseError::with_context(const std::string& context,
                                    const ParseError& inner) {
    return ParseError(context + ": " + inner.what(), inner.line(),
                      inner.column());
}

namespace {

constexpr std::string_view kOrderHeader = "id,timestamp,quantity,price";
constexpr std::string_view kTradeHeader = "bid_id,ask_id,quantity,price";
constexpr std::string_view kEventHeader = "id,timestamp,side,action,quantity,price";

std::string_view strip_trailing_whitespace(std::string_view s) {
    while (!s.empty() &&
           (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

struct Field {
    std::string_view text;
    std::size_t column;  // 1-based position of the field's first character
};

std::vector<Field> split_fields(std::string_view line) {
    std::vector<Field> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back({line.substr(start, i - start), start + 1});
            start = i + 1;
        }
    }
    return fields;
}

std::int64_t parse_integer(const Field& field, std::size_t line,
                           const char* what) {
    if (field.text.empty()) {
        throw ParseError(line, field.column,
                         std::string("empty ") + what + " field");
    }
    std::int64_t value = 0;
    const char* first = field.text.data();
    const char* last = first + field.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ParseError(line, field.column,
                         std::string(what) + " is not an integer: '" +
                             std::string(field.text) + "'");
    }
    return value;
}

Quantity parse_quantity(const Field& field, std::size_t line) {
    const std::int64_t value = parse_integer(field, line, "quantity");
    if (value < 1) {
        throw ParseError(line, field.column, "quantity must be at least 1");
    }
    return value;
}

Price parse_limit_price(const Field& field, std::size_t line) {
    const std::int64_t value = parse_integer(field, line, "price");
    if (value < 0) {
        throw ParseError(line, field.column, "price must be non-negative");
    }
    return value;
}

std::optional<Price> parse_price_or_market(const Field& field,
                                           std::size_t line) {
    if (field.text == "M") return std::nullopt;
    return parse_limit_price(field, line);
}

void require_columns(const std::vector<Field>& fields, std::size_t expected,
                     std::size_t line) {
    if (fields.size() != expected) {
        std::ostringstream out;
        out << "expected " << expected << " columns, found " << fields.size();
        throw ParseError(line, 1, out.str());
    }
}

// Reads a headed CSV: the first line must equal `header` exactly (up to
// trailing whitespace); a repeated header line is rejected; every other
// line is passed to `row` with its 1-based line number.
template <typename RowFn>
void read_csv(std::istream& in, std::string_view header, RowFn&& row) {
    std::string raw;
    std::size_t line_number = 0;
    bool saw_header = false;
    while (std::getline(in, raw)) {
        ++line_number;
        const std::string_view line = strip_trailing_whitespace(raw);
        if (!saw_header) {
            if (line != header) {
                throw ParseError(line_number, 1,
                                 "expected header '" + std::string(header) +
                                     "'");
            }
            saw_header = true;
            continue;
        }
        if (line == header) {
            throw ParseError(line_number, 1, "duplicate header");
        }
        row(line_number, split_fields(line));
    }
    if (in.bad()) throw ParseError(0, 0, "read failure");
    if (!saw_header) {
        throw ParseError(0, 0,
                         "empty input: missing header '" + std::string(header) +
                             "'");
    }
}

template <typename Parser>
auto parse_file(const std::filesystem::path& path, Parser&& parser) {
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw ParseError(0, 0, "cannot open file: " + path.string());
    }
    try {
        return parser(file);
    } catch (const ParseError& e) {
        throw ParseError::with_context(path.string(), e);
    }
}

std::ofstream open_for_writing(const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw std::runtime_error("cannot open file for writing: " +
                                 path.string());
    }
    return file;
}

}  // namespace

std::vector<OrderRow> parse_orders(std::istream& in) {
    std::vector<OrderRow> rows;
    read_csv(in, kOrderHeader,
             [&rows](std::size_t line, const std::vector<Field>& fields) {
                 require_columns(fields, 4, line);
                 OrderRow row;
                 row.id = parse_integer(fields[0], line, "id");
                 row.timestamp = parse_integer(fields[1], line, "timestamp");
                 row.quantity = parse_quantity(fields[2], line);
                 row.limit = parse_price_or_market(fields[3], line);
                 rows.push_back(row);
             });
    return rows;
}

std::vector<OrderRow> parse_orders_file(const std::filesystem::path& path) {
    return parse_file(path, [](std::istream& in) { return parse_orders(in); });
}

std::vector<TradeRecord> parse_trades(std::istream& in) {
    std::vector<TradeRecord> trades;
    read_csv(in, kTradeHeader,
             [&trades](std::size_t line, const std::vector<Field>& fields) {
                 require_columns(fields, 4, line);
                 TradeRecord trade;
                 trade.bid_id = parse_integer(fields[0], line, "bid_id");
                 trade.ask_id = parse_integer(fields[1], line, "ask_id");
                 trade.quantity = parse_quantity(fields[2], line);
                 trade.price = parse_limit_price(fields[3], line);
                 trades.push_back(trade);
             });
    return trades;
}

std::vector<TradeRecord> parse_trades_file(const std::filesystem::path& path) {
    return parse_file(path, [](std::istream& in) { return parse_trades(in); });
}

std::vector<RawOrderEvent> parse_raw_events(std::istream& in) {
    std::vector<RawOrderEvent> events;
    read_csv(in, kEventHeader, [&events](std::size_t line,
                                         const std::vector<Field>& fields) {
        require_columns(fields, 6, line);
        RawOrderEvent event;
        event.id = parse_integer(fields[0], line, "id");
        event.timestamp = parse_integer(fields[1], line, "timestamp");
        if (fields[2].text == "B") {
            event.side = Side::Bid;
        } else if (fields[2].text == "A") {
            event.side = Side::Ask;
        } else {
            throw ParseError(line, fields[2].column,
                             "side must be 'B' or 'A', found '" +
                                 std::string(fields[2].text) + "'");
        }
        if (fields[3].text == "N") {
            event.action = EventAction::New;
        } else if (fields[3].text == "U") {
            event.action = EventAction::Update;
        } else if (fields[3].text == "D") {
            event.action = EventAction::Delete;
        } else {
            throw ParseError(line, fields[3].column,
                             "action must be 'N', 'U' or 'D', found '" +
                                 std::string(fields[3].text) + "'");
        }
        if (event.action == EventAction::Delete) {
            if (!fields[4].text.empty()) {
                throw ParseError(line, fields[4].column,
                                 "a Delete row must leave quantity empty");
            }
            if (!fields[5].text.empty()) {
                throw ParseError(line, fields[5].column,
                                 "a Delete row must leave price empty");
            }
        } else {
            event.quantity = parse_quantity(fields[4], line);
            event.limit = parse_price_or_market(fields[5], line);
        }
        events.push_back(event);
    });
    return events;
}

std::vector<RawOrderEvent> parse_raw_events_file(
    const std::filesystem::path& path) {
    return parse_file(path,
                      [](std::istream& in) { return parse_raw_events(in); });
}

void write_orders(std::ostream& out, const std::vector<OrderRow>& rows) {
    out << kOrderHeader << '\n';
    for (const OrderRow& row : rows) {
        out << row.id << ',' << row.timestamp << ',' << row.quantity << ',';
        if (row.limit.has_value()) {
            out << *row.limit;
        } else {
            out << 'M';
        }
        out << '\n';
    }
}

void write_orders_file(const std::filesystem::path& path,
                       const std::vector<OrderRow>& rows) {
    auto file = open_for_writing(path);
    write_orders(file, rows);
}

void write_trades(std::ostream& out, const std::vector<TradeRecord>& trades) {
    out << kTradeHeader << '\n';
    for (const TradeRecord& trade : trades) {
        out << trade.bid_id << ',' << trade.ask_id << ',' << trade.quantity
            << ',' << trade.price << '\n';
    }
}

void write_trades_file(const std::filesystem::path& path,
                       const std::vector<TradeRecord>& trades) {
    auto file = open_for_writing(path);
    write_trades(file, trades);
}

ResolvedBooks resolve_book(const std::vector<RawOrderEvent>& events,
                           const ResolveOptions& options) {
    // Replay events by (timestamp, then file order); a stable sort on
    // timestamp alone preserves file order within equal timestamps.
    std::vector<std::size_t> replay(events.size());
    std::iota(replay.begin(), replay.end(), std::size_t{0});
    std::stable_sort(replay.begin(), replay.end(),
                     [&events](std::size_t lhs, std::size_t rhs) {
                         return events[lhs].timestamp < events[rhs].timestamp;
                     });

    struct LiveOrder {
        Side side;
        OrderRow row;
    };
    std::map<OrderId, LiveOrder> book;  // ordered so output is id-sorted
    ResolvedBooks result;

    auto warn = [&result](const RawOrderEvent& event, const char* what) {
        std::ostringstream out;
        const char* action = event.action == EventAction::New      ? "New"
                             : event.action == EventAction::Update ? "Update"
                                                                   : "Delete";
        out << action << " event for id " << event.id << " at timestamp "
            << event.timestamp << ": " << what;
        result.warnings.push_back(out.str());
    };

    for (const std::size_t index : replay) {
        const RawOrderEvent& event = events[index];
        switch (event.action) {
            case EventAction::New: {
                LiveOrder incoming{
                    event.side,
                    {event.id, event.timestamp, event.quantity, event.limit}};
                auto [it, inserted] = book.try_emplace(event.id, incoming);
                if (!inserted) {
                    warn(event, "id already in the book; replacing it");
                    it->second = incoming;
                }
                break;
            }
            case EventAction::Update: {
                const auto it = book.find(event.id);
                if (it == book.end()) {
                    warn(event, "no such order in the book; skipped");
                    break;
                }
                if (it->second.side != event.side) {
                    warn(event, "order is on the other side; skipped");
                    break;
                }
                it->second.row.quantity = event.quantity;
                it->second.row.limit = event.limit;
                if (options.update_requeues_time) {
                    it->second.row.timestamp = event.timestamp;
                }
                break;
            }
            case EventAction::Delete: {
                const auto it = book.find(event.id);
                if (it == book.end()) {
                    warn(event, "no such order in the book; skipped");
                    break;
                }
                if (it->second.side != event.side) {
                    warn(event, "order is on the other side; skipped");
                    break;
                }
                book.erase(it);
                break;
            }
        }
    }

    for (const auto& [id, live] : book) {
        (live.side == Side::Bid ? result.bids : result.asks).push_back(live.row);
    }
    return result;
}

std::vector<OrderRow> strip_market_asks(std::vector<OrderRow> asks) {
    std::erase_if(asks,
                  [](const OrderRow& row) { return !row.limit.has_value(); });
    return asks;
}

std::pair<OrderBookSide, OrderBookSide> substitute_market_prices(
    const std::vector<OrderRow>& bids, const std::vector<OrderRow>& asks,
    Price max_price) {
    OrderBookSide bid_book{Side::Bid, {}};
    bid_book.orders.reserve(bids.size());
    for (const OrderRow& row : bids) {
        bid_book.orders.push_back({row.id, row.timestamp, row.quantity,
                                   row.limit.value_or(max_price), Side::Bid});
    }
    OrderBookSide ask_book{Side::Ask, {}};
    ask_book.orders.reserve(asks.size());
    for (const OrderRow& row : asks) {
        ask_book.orders.push_back({row.id, row.timestamp, row.quantity,
                                   row.limit.value_or(Price{0}), Side::Ask});
    }
    return {std::move(bid_book), std::move(ask_book)};
}

}  // namespace uncross
