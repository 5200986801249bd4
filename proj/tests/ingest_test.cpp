#include "uncross/ingest.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "testutil.hpp"

namespace uncross {
namespace {

using testutil::tx;

std::vector<OrderRow> orders_from(const std::string& text) {
    std::istringstream in(text);
    return parse_orders(in);
}

std::vector<TradeRecord> trades_from(const std::string& text) {
    std::istringstream in(text);
    return parse_trades(in);
}

std::vector<RawOrderEvent> events_from(const std::string& text) {
    std::istringstream in(text);
    return parse_raw_events(in);
}

template <typename Fn>
ParseError capture_error(Fn&& fn) {
    try {
        fn();
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "expected a parse error";
    return ParseError(0, 0, "no error");
}

TEST(ParseOrders, ReadsRowsIncludingMarketSentinel) {
    const auto rows = orders_from(
        "id,timestamp,quantity,price\n"
        "1,1633000000000001,100,2550\n"
        "2,5,3,M\n");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0], (OrderRow{1, 1633000000000001, 100, 2550}));
    EXPECT_EQ(rows[1], (OrderRow{2, 5, 3, std::nullopt}));
}

TEST(ParseOrders, HeaderOnlyMeansNoRows) {
    EXPECT_TRUE(orders_from("id,timestamp,quantity,price\n").empty());
}

TEST(ParseOrders, ToleratesTrailingWhitespaceAndCarriageReturns) {
    const auto rows = orders_from(
        "id,timestamp,quantity,price   \r\n"
        "1,2,3,4\t \r\n");
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0], (OrderRow{1, 2, 3, 4}));
}

TEST(ParseOrders, RejectsMissingHeader) {
    const ParseError e =
        capture_error([] { orders_from("1,2,3,4\n"); });
    EXPECT_EQ(e.line(), 1u);
    EXPECT_NE(std::string(e.what()).find("expected header"), std::string::npos);
}

TEST(ParseOrders, RejectsRepeatedHeader) {
    const ParseError e = capture_error([] {
        orders_from(
            "id,timestamp,quantity,price\n"
            "id,timestamp,quantity,price\n");
    });
    EXPECT_EQ(e.line(), 2u);
}

TEST(ParseOrders, RejectsEmptyInput) {
    const ParseError e = capture_error([] { orders_from(""); });
    EXPECT_EQ(e.line(), 0u);
}

TEST(ParseOrders, RejectsWrongColumnCount) {
    const ParseError e = capture_error(
        [] { orders_from("id,timestamp,quantity,price\n1,2,3\n"); });
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find("4 columns"), std::string::npos);
}

TEST(ParseOrders, ReportsColumnOfBadInteger) {
    const ParseError e = capture_error(
        [] { orders_from("id,timestamp,quantity,price\n1,2x,3,4\n"); });
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);  // the timestamp field starts at column 3
}

TEST(ParseOrders, RejectsNonPositiveQuantityAndNegativePrice) {
    EXPECT_THROW(orders_from("id,timestamp,quantity,price\n1,2,0,4\n"),
                 ParseError);
    EXPECT_THROW(orders_from("id,timestamp,quantity,price\n1,2,-3,4\n"),
                 ParseError);
    EXPECT_THROW(orders_from("id,timestamp,quantity,price\n1,2,3,-4\n"),
                 ParseError);
}

TEST(ParseTrades, ReadsRowsAndRejectsMarketPrice) {
    const auto trades = trades_from(
        "bid_id,ask_id,quantity,price\n"
        "1,3,5,95\n");
    ASSERT_EQ(trades.size(), 1u);
    EXPECT_EQ(trades[0], tx(1, 3, 5, 95));
    EXPECT_THROW(trades_from("bid_id,ask_id,quantity,price\n1,3,5,M\n"),
                 ParseError);
}

TEST(ParseRawEvents, ReadsAllActionsAndSides) {
    const auto events = events_from(
        "id,timestamp,side,action,quantity,price\n"
        "1,10,B,N,5,100\n"
        "2,11,A,N,5,M\n"
        "1,12,B,U,4,101\n"
        "2,13,A,D,,\n");
    ASSERT_EQ(events.size(), 4u);
    EXPECT_EQ(events[0],
              (RawOrderEvent{1, 10, Side::Bid, EventAction::New, 5, 100}));
    EXPECT_EQ(events[1],
              (RawOrderEvent{2, 11, Side::Ask, EventAction::New, 5, std::nullopt}));
    EXPECT_EQ(events[2],
              (RawOrderEvent{1, 12, Side::Bid, EventAction::Update, 4, 101}));
    EXPECT_EQ(events[3].action, EventAction::Delete);
    EXPECT_EQ(events[3].id, 2);
}

TEST(ParseRawEvents, RejectsBadSideActionAndNonEmptyDeleteFields) {
    const std::string header = "id,timestamp,side,action,quantity,price\n";
    EXPECT_THROW(events_from(header + "1,10,X,N,5,100\n"), ParseError);
    EXPECT_THROW(events_from(header + "1,10,B,Z,5,100\n"), ParseError);
    EXPECT_THROW(events_from(header + "1,10,B,D,5,\n"), ParseError);
    EXPECT_THROW(events_from(header + "1,10,B,D,,100\n"), ParseError);
}

TEST(WriteOrders, CanonicalRoundTrip) {
    const std::string canonical =
        "id,timestamp,quantity,price\n"
        "1,2,3,4\n"
        "7,8,9,M\n";
    std::ostringstream out;
    write_orders(out, orders_from(canonical));
    EXPECT_EQ(out.str(), canonical);
}

TEST(WriteTrades, CanonicalRoundTrip) {
    const std::string canonical =
        "bid_id,ask_id,quantity,price\n"
        "1,3,5,95\n";
    std::ostringstream out;
    write_trades(out, trades_from(canonical));
    EXPECT_EQ(out.str(), canonical);
}

TEST(ParseFiles, MissingFileAndContextPrefix) {
    EXPECT_THROW(parse_orders_file("/nonexistent/nowhere.csv"), ParseError);

    namespace fs = std::filesystem;
    const fs::path dir =
        fs::temp_directory_path() / "uncross_ingest_test";
    fs::create_directories(dir);
    const fs::path bad = dir / "bad.csv";
    std::ofstream(bad) << "id,timestamp,quantity,price\n1,2,zzz,4\n";
    const ParseError e = capture_error([&bad] { parse_orders_file(bad); });
    EXPECT_EQ(e.line(), 2u);
    EXPECT_NE(std::string(e.what()).find(bad.string()), std::string::npos);
    fs::remove_all(dir);
}

TEST(ResolveBook, UpdateKeepsOriginalTimestampByDefault) {
    const auto events = events_from(
        "id,timestamp,side,action,quantity,price\n"
        "1,10,B,N,5,100\n"
        "1,20,B,U,4,101\n");
    const ResolvedBooks books = resolve_book(events);
    ASSERT_EQ(books.bids.size(), 1u);
    EXPECT_EQ(books.bids[0], (OrderRow{1, 10, 4, 101}));
    EXPECT_TRUE(books.warnings.empty());

    ResolveOptions requeue;
    requeue.update_requeues_time = true;
    const ResolvedBooks requeued = resolve_book(events, requeue);
    ASSERT_EQ(requeued.bids.size(), 1u);
    EXPECT_EQ(requeued.bids[0], (OrderRow{1, 20, 4, 101}));
}

TEST(ResolveBook, DeleteRemovesTheOrder) {
    const auto events = events_from(
        "id,timestamp,side,action,quantity,price\n"
        "1,10,A,N,5,100\n"
        "1,20,A,D,,\n");
    const ResolvedBooks books = resolve_book(events);
    EXPECT_TRUE(books.bids.empty());
    EXPECT_TRUE(books.asks.empty());
    EXPECT_TRUE(books.warnings.empty());
}

TEST(ResolveBook, UnknownOrWrongSideEventsWarnAndSkip) {
    const auto events = events_from(
        "id,timestamp,side,action,quantity,price\n"
        "1,10,B,N,5,100\n"
        "2,11,A,U,4,90\n"
        "1,12,A,D,,\n");
    const ResolvedBooks books = resolve_book(events);
    ASSERT_EQ(books.bids.size(), 1u);
    EXPECT_EQ(books.bids[0], (OrderRow{1, 10, 5, 100}));
    ASSERT_EQ(books.warnings.size(), 2u);
    EXPECT_NE(books.warnings[0].find("no such order"), std::string::npos);
    EXPECT_NE(books.warnings[1].find("other side"), std::string::npos);
}

TEST(ResolveBook, NewForLiveIdWarnsAndReplaces) {
    const auto events = events_from(
        "id,timestamp,side,action,quantity,price\n"
        "1,10,B,N,5,100\n"
        "1,20,B,N,2,90\n");
    const ResolvedBooks books = resolve_book(events);
    ASSERT_EQ(books.bids.size(), 1u);
    EXPECT_EQ(books.bids[0], (OrderRow{1, 20, 2, 90}));
    ASSERT_EQ(books.warnings.size(), 1u);
    EXPECT_NE(books.warnings[0].find("replacing"), std::string::npos);
}

TEST(ResolveBook, ReplaysByTimestampNotFileOrder) {
    // The Update is listed first but happens later; the New must apply
    // before it even though the lines are out of order.
    const auto events = events_from(
        "id,timestamp,side,action,quantity,price\n"
        "1,20,B,U,4,101\n"
        "1,10,B,N,5,100\n");
    const ResolvedBooks books = resolve_book(events);
    ASSERT_EQ(books.bids.size(), 1u);
    EXPECT_EQ(books.bids[0], (OrderRow{1, 10, 4, 101}));
    EXPECT_TRUE(books.warnings.empty());
}

TEST(ResolveBook, EqualTimestampsKeepFileOrder) {
    const auto events = events_from(
        "id,timestamp,side,action,quantity,price\n"
        "1,10,B,N,5,100\n"
        "1,10,B,U,4,101\n");
    const ResolvedBooks books = resolve_book(events);
    ASSERT_EQ(books.bids.size(), 1u);
    EXPECT_EQ(books.bids[0].quantity, 4);
}

TEST(ResolveBook, SplitsSidesAndSortsById) {
    const auto events = events_from(
        "id,timestamp,side,action,quantity,price\n"
        "9,10,A,N,1,50\n"
        "2,11,B,N,1,100\n"
        "5,12,A,N,1,M\n"
        "1,13,B,N,1,90\n");
    const ResolvedBooks books = resolve_book(events);
    ASSERT_EQ(books.bids.size(), 2u);
    EXPECT_EQ(books.bids[0].id, 1);
    EXPECT_EQ(books.bids[1].id, 2);
    ASSERT_EQ(books.asks.size(), 2u);
    EXPECT_EQ(books.asks[0].id, 5);
    EXPECT_EQ(books.asks[1].id, 9);
}

TEST(StripMarketAsks, RemovesOnlyMarketRows) {
    const std::vector<OrderRow> asks = {
        {1, 10, 5, 95}, {2, 11, 5, std::nullopt}, {3, 12, 5, 90}};
    const std::vector<OrderRow> kept = strip_market_asks(asks);
    ASSERT_EQ(kept.size(), 2u);
    EXPECT_EQ(kept[0].id, 1);
    EXPECT_EQ(kept[1].id, 3);
}

TEST(SubstituteMarketPrices, MarketBidsTopMarketAsksBottom) {
    const std::vector<OrderRow> bids = {{1, 10, 5, 100},
                                        {2, 11, 5, std::nullopt}};
    const std::vector<OrderRow> asks = {{3, 12, 5, std::nullopt},
                                        {4, 13, 5, 95}};
    const auto [bid_side, ask_side] = substitute_market_prices(bids, asks);
    EXPECT_EQ(bid_side.side, Side::Bid);
    EXPECT_EQ(ask_side.side, Side::Ask);
    ASSERT_EQ(bid_side.orders.size(), 2u);
    EXPECT_EQ(bid_side.orders[0].price, 100);
    EXPECT_EQ(bid_side.orders[1].price, kMaxPrice);
    ASSERT_EQ(ask_side.orders.size(), 2u);
    EXPECT_EQ(ask_side.orders[0].price, 0);
    EXPECT_EQ(ask_side.orders[1].price, 95);
    // A market order is maximally competitive after substitution.
    EXPECT_TRUE(bid_precedes(bid_side.orders[1], bid_side.orders[0]));
    EXPECT_TRUE(ask_precedes(ask_side.orders[0], ask_side.orders[1]));
}

}  // namespace
}  // namespace uncross
