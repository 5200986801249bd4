// End-to-end tests of the command-line tool: each case launches the
// real binary (path injected at compile time) in a scratch directory
// and checks exit codes and exact byte output.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef UNCROSS_CLI_PATH
#error "UNCROSS_CLI_PATH must point at the built binary"
#endif
#ifndef UNCROSS_FIXTURE_DIR
#error "UNCROSS_FIXTURE_DIR must point at tests/fixtures"
#endif

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        const auto* info =
            ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() /
               (std::string("uncross_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }

    void TearDown() override { fs::remove_all(dir_); }

    fs::path write_file(const std::string& name, const std::string& content) {
        const fs::path path = dir_ / name;
        std::ofstream(path, std::ios::binary) << content;
        return path;
    }

    static std::string fixture(const std::string& name) {
        return (fs::path(UNCROSS_FIXTURE_DIR) / name).string();
    }

    RunResult run(const std::string& args) {
        const fs::path out_path = dir_ / "stdout.txt";
        const fs::path err_path = dir_ / "stderr.txt";
        const std::string command = std::string("\"") + UNCROSS_CLI_PATH +
                                    "\" " + args + " > \"" +
                                    out_path.string() + "\" 2> \"" +
                                    err_path.string() + "\"";
        const int status = std::system(command.c_str());
        RunResult result;
        result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        result.out = read_file(out_path);
        result.err = read_file(err_path);
        return result;
    }

    fs::path dir_;
};

constexpr const char* kCleanLine = "Matching does not violate the guidelines";
constexpr const char* kViolationLine = "Violation detected!";

bool ends_with_line(const std::string& text, const std::string& line) {
    const std::string tail = line + "\n";
    return text.size() >= tail.size() &&
           text.compare(text.size() - tail.size(), tail.size(), tail) == 0;
}

TEST_F(CliTest, UmWritesSinglePriceTrades) {
    const fs::path out = dir_ / "trades.csv";
    const RunResult r =
        run("um --bids " + fixture("volume_gap_bids.csv") + " --asks " +
            fixture("volume_gap_asks.csv") + " --out " + out.string());
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(read_file(out), "bid_id,ask_id,quantity,price\n1,3,1,70\n");
}

TEST_F(CliTest, UmDefaultsToStdout) {
    const RunResult r = run("um --bids " + fixture("volume_gap_bids.csv") +
                            " --asks " + fixture("volume_gap_asks.csv"));
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(r.out, "bid_id,ask_id,quantity,price\n1,3,1,70\n");
}

TEST_F(CliTest, MmTradesBothUnits) {
    const RunResult r = run("mm --bids " + fixture("volume_gap_bids.csv") +
                            " --asks " + fixture("volume_gap_asks.csv"));
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(r.out,
              "bid_id,ask_id,quantity,price\n"
              "2,3,1,70\n"
              "1,4,1,90\n");
}

TEST_F(CliTest, RepeatedRunsAreByteIdentical) {
    const std::string args = "mm --bids " + fixture("volume_gap_bids.csv") +
                             " --asks " + fixture("volume_gap_asks.csv");
    const RunResult first = run(args);
    const RunResult second = run(args);
    EXPECT_EQ(first.exit_code, 0);
    EXPECT_EQ(first.out, second.out);
    EXPECT_EQ(first.err, second.err);
}

TEST_F(CliTest, AuditAcceptsItsOwnReferenceOutput) {
    const fs::path trades = dir_ / "trades.csv";
    ASSERT_EQ(run("um --bids " + fixture("volume_gap_bids.csv") + " --asks " +
                  fixture("volume_gap_asks.csv") + " --out " + trades.string())
                  .exit_code,
              0);
    const RunResult r =
        run("audit --bids " + fixture("volume_gap_bids.csv") + " --asks " +
            fixture("volume_gap_asks.csv") + " --trades " + trades.string());
    EXPECT_EQ(r.exit_code, 0) << r.out << r.err;
    EXPECT_TRUE(ends_with_line(r.out, kCleanLine)) << r.out;
}

TEST_F(CliTest, AuditFlagsAVolumeDivergence) {
    // The reference fills bid 1; handing the unit to bid 2 instead is a
    // fairness violation that shows up as diverging per-order volumes.
    const fs::path trades =
        write_file("trades.csv", "bid_id,ask_id,quantity,price\n2,3,1,70\n");
    const RunResult r =
        run("audit --bids " + fixture("volume_gap_bids.csv") + " --asks " +
            fixture("volume_gap_asks.csv") + " --trades " + trades.string());
    EXPECT_EQ(r.exit_code, 1);
    EXPECT_TRUE(ends_with_line(r.out, kViolationLine)) << r.out;
    EXPECT_NE(r.out.find("volumes diverging: 2"), std::string::npos) << r.out;
}

TEST_F(CliTest, MarketAsksAreStrippedByDefault) {
    const RunResult r =
        run("audit --bids " + fixture("market_ask_bids.csv") + " --asks " +
            fixture("market_ask_asks.csv") + " --trades " +
            fixture("market_ask_trades.csv"));
    EXPECT_EQ(r.exit_code, 0) << r.out << r.err;
    EXPECT_TRUE(ends_with_line(r.out, kCleanLine)) << r.out;
    EXPECT_NE(r.out.find("market asks removed"), std::string::npos);
}

TEST_F(CliTest, KeepingMarketAsksFlagsTheSameTrades) {
    const RunResult r =
        run("audit --keep-market-asks --bids " + fixture("market_ask_bids.csv") +
            " --asks " + fixture("market_ask_asks.csv") + " --trades " +
            fixture("market_ask_trades.csv"));
    EXPECT_EQ(r.exit_code, 1) << r.out << r.err;
    EXPECT_TRUE(ends_with_line(r.out, kViolationLine)) << r.out;
    EXPECT_NE(r.out.find("market asks kept"), std::string::npos);
}

TEST_F(CliTest, RawEventLogResolvesToTheSameBooks) {
    const RunResult clean =
        run("audit --raw-events " + fixture("market_ask_events.csv") +
            " --trades " + fixture("market_ask_trades.csv"));
    EXPECT_EQ(clean.exit_code, 0) << clean.out << clean.err;
    EXPECT_TRUE(ends_with_line(clean.out, kCleanLine));
    EXPECT_NE(clean.out.find("book resolution"), std::string::npos);

    const RunResult kept =
        run("audit --keep-market-asks --raw-events " +
            fixture("market_ask_events.csv") + " --trades " +
            fixture("market_ask_trades.csv"));
    EXPECT_EQ(kept.exit_code, 1);
    EXPECT_TRUE(ends_with_line(kept.out, kViolationLine));
}

TEST_F(CliTest, AuditWritesTheComparisonCsv) {
    const fs::path report = dir_ / "report.csv";
    const RunResult r =
        run("audit --bids " + fixture("market_ask_bids.csv") + " --asks " +
            fixture("market_ask_asks.csv") + " --trades " +
            fixture("market_ask_trades.csv") + " --report-csv " +
            report.string());
    EXPECT_EQ(r.exit_code, 0);
    EXPECT_EQ(read_file(report),
              "order_id,side,exchange_qty,reference_qty,equal\n"
              "1,B,5,5,1\n"
              "3,A,5,5,1\n");
}

TEST_F(CliTest, MissingFileIsAnInputError) {
    const RunResult r = run("um --bids /nonexistent/nowhere.csv --asks " +
                            fixture("volume_gap_asks.csv"));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("error:"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("cannot open file"), std::string::npos) << r.err;
}

TEST_F(CliTest, MalformedCsvIsAnInputErrorWithCoordinates) {
    const fs::path bad =
        write_file("bad.csv", "id,timestamp,quantity,price\n1,2,zzz,4\n");
    const RunResult r = run("um --bids " + bad.string() + " --asks " +
                            fixture("volume_gap_asks.csv"));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
}

TEST_F(CliTest, DuplicateOrderIdIsAnInputError) {
    const fs::path dup = write_file(
        "dup.csv", "id,timestamp,quantity,price\n1,1,1,100\n1,2,1,90\n");
    const RunResult r = run("um --bids " + dup.string() + " --asks " +
                            fixture("volume_gap_asks.csv"));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("error:"), std::string::npos) << r.err;
}

TEST_F(CliTest, AuditWithoutBooksIsAnInputError) {
    const RunResult r =
        run("audit --trades " + fixture("market_ask_trades.csv"));
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("provide --raw-events"), std::string::npos) << r.err;
}

TEST_F(CliTest, BadUsageIsAnInputError) {
    EXPECT_EQ(run("um --asks " + fixture("volume_gap_asks.csv")).exit_code, 2);
    EXPECT_EQ(run("no-such-command").exit_code, 2);
    EXPECT_EQ(run("--help").exit_code, 0);
}

TEST_F(CliTest, OracleCheckSmallRunPasses) {
    const RunResult r = run("oracle-check --instances 20 --seed 7 --quiet");
    EXPECT_EQ(r.exit_code, 0) << r.out << r.err;
    EXPECT_NE(r.out.find("all invariants hold on 20 seeded instances"),
              std::string::npos)
        << r.out;
}

TEST_F(CliTest, OracleCheckRefusesAnOversizedBudget) {
    const RunResult r = run("oracle-check --instances 1 --max-orders 6");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("refusing"), std::string::npos) << r.err;
}

TEST_F(CliTest, OracleCheckRejectsNonPositiveQuantityBudget) {
    const RunResult r = run("oracle-check --instances 1 --max-quantity 0");
    EXPECT_EQ(r.exit_code, 2);
}

TEST_F(CliTest, MarketBidTradesAtTheTop) {
    const fs::path bids = write_file(
        "market_bid.csv", "id,timestamp,quantity,price\n1,1,1,M\n2,2,1,100\n");
    const fs::path asks =
        write_file("one_ask.csv", "id,timestamp,quantity,price\n3,1,1,70\n");
    const RunResult r =
        run("um --bids " + bids.string() + " --asks " + asks.string());
    EXPECT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(r.out, "bid_id,ask_id,quantity,price\n1,3,1,70\n");
}

}  // namespace
