#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "washtrace/errors.hpp"
#include "washtrace/ingest.hpp"

using namespace washtrace;
using washtrace::testing::acct;

namespace {

const std::string header = "hash,from_address,to_address,value,input,block_number,gas\n";

std::string row(const AccountId& from, const AccountId& to, const std::string& value, const std::string& input,
                std::uint64_t block = 100) {
    return "0xfeed," + from.hex() + "," + to.hex() + "," + value + "," + input + "," + std::to_string(block) + ",21000\n";
}

TransactionLoad ingest(const std::string& body, const ExclusionList& ex = {},
                       std::optional<std::uint64_t> max_block = pos_cutoff_block) {
    std::istringstream in(header + body);
    return read_transactions(in, ex, max_block);
}

void expect_conserved(const IngestStats& s) {
    EXPECT_EQ(s.rows_read, s.rows_kept + s.dropped_total());
}

} // namespace

TEST(Exclusions, DedupAndCaseFold) {
    std::istringstream in("# cex\n0xAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA\n\n0xaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa\n");
    const auto ex = read_exclusions(in);
    EXPECT_EQ(ex.size(), 1u);
}

TEST(Exclusions, EmptyFile) {
    std::istringstream in("");
    EXPECT_EQ(read_exclusions(in).size(), 0u);
}

TEST(Exclusions, MalformedLineWarned) {
    std::istringstream in("notanaddress\n");
    std::vector<std::string> warnings;
    EXPECT_EQ(read_exclusions(in, &warnings).size(), 0u);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("line 1"), std::string::npos);
}

TEST(Exclusions, UnreadableFile) {
    EXPECT_THROW(load_exclusions("/nonexistent/exclusions.txt"), io_error);
}

TEST(Transactions, KeepsPlainPositiveTransfer) {
    const auto load = ingest(row(acct(1), acct(2), "5000000000000000000", "0x"));
    EXPECT_TRUE(load.graph.has_edge(acct(1), acct(2)));
    EXPECT_EQ(load.stats.rows_kept, 1u);
    expect_conserved(load.stats);
}

TEST(Transactions, DropsContractCall) {
    const auto load = ingest(row(acct(1), acct(2), "1", "0xa9059cbb00000000"));
    EXPECT_EQ(load.stats.dropped_contract_call, 1u);
    EXPECT_EQ(load.graph.edge_count(), 0u);
}

TEST(Transactions, DropsZeroValue) {
    const auto load = ingest(row(acct(1), acct(2), "0", "0x") + row(acct(1), acct(3), "000", "0x"));
    EXPECT_EQ(load.stats.dropped_zero_value, 2u);
}

TEST(Transactions, DropsExcludedEndpoint) {
    ExclusionList ex;
    ex.addresses.insert(acct(2));
    const auto load = ingest(row(acct(1), acct(2), "1", "0x") + row(acct(2), acct(3), "1", "0x"), ex);
    EXPECT_EQ(load.stats.dropped_excluded, 2u);
    EXPECT_EQ(load.graph.edge_count(), 0u);
}

TEST(Transactions, BlockCutoff) {
    const auto body = row(acct(1), acct(2), "1", "0x", pos_cutoff_block) +
                      row(acct(2), acct(3), "1", "0x", pos_cutoff_block + 1);
    const auto capped = ingest(body);
    EXPECT_EQ(capped.stats.rows_kept, 1u);
    EXPECT_EQ(capped.stats.dropped_after_cutoff, 1u);
    EXPECT_EQ(capped.stats.max_block_seen, pos_cutoff_block + 1);
    EXPECT_EQ(ingest(body, {}, std::nullopt).stats.rows_kept, 2u);
}

TEST(Transactions, WeiBeyond64BitsIsPositive) {
    const auto load = ingest(row(acct(1), acct(2), "1000000000000000000000000000000", "0x"));
    EXPECT_EQ(load.stats.rows_kept, 1u);
}

TEST(Transactions, MalformedRowsSkippedAndCounted) {
    const auto load = ingest(row(acct(1), acct(2), "12abc", "0x") + "0xfeed,0x12,0x34,1,0x,5,0\n" + "too,short\n" +
                             row(acct(1), acct(2), "1", "0x"));
    EXPECT_EQ(load.stats.dropped_malformed, 3u);
    EXPECT_EQ(load.stats.rows_kept, 1u);
    expect_conserved(load.stats);
}

TEST(Transactions, MissingColumnIsFatal) {
    std::istringstream in("from_address,to_address,value,block_number\n");
    EXPECT_THROW(read_transactions(in, {}), data_error);
}

TEST(Transactions, ConservationOrderIndependenceAndIdempotence) {
    std::mt19937_64 rng(21);
    const std::vector<std::string> values{"0", "1", "7000", "0.0", "bad"};
    const std::vector<std::string> inputs{"0x", "0x", "0x", "0xa9059cbb"};
    ExclusionList ex;
    ex.addresses.insert(acct(3));
    std::vector<std::string> rows;
    for (int i = 0; i < 400; ++i)
        rows.push_back(row(acct(rng() % 30), acct(rng() % 30), values[rng() % values.size()],
                           inputs[rng() % inputs.size()], pos_cutoff_block - 50 + rng() % 100));
    auto join = [](const std::vector<std::string>& v) {
        std::string s;
        for (const auto& r : v) s += r;
        return s;
    };
    const auto first = ingest(join(rows), ex);
    expect_conserved(first.stats);
    EXPECT_EQ(first.stats.rows_read, 400u);

    std::shuffle(rows.begin(), rows.end(), rng);
    const auto shuffled = ingest(join(rows), ex);
    EXPECT_EQ(shuffled.graph, first.graph);

    std::ostringstream kept;
    write_edges_as_transactions(kept, first.graph);
    std::istringstream again(kept.str());
    EXPECT_EQ(read_transactions(again, ex).graph, first.graph);
}

namespace {

const std::string trace_header = "collection,token_id,from_address,to_address,value_usd,block_number,log_index,timestamp\n";

std::string trace_row(const std::string& collection, std::uint64_t token, const AccountId& from, const AccountId& to,
                      const std::string& value, std::uint64_t block, std::uint64_t log = 0) {
    return collection + "," + std::to_string(token) + "," + from.hex() + "," + to.hex() + "," + value + "," +
           std::to_string(block) + "," + std::to_string(log) + "," + std::to_string(1'600'000'000 + block) + "\n";
}

} // namespace

TEST(Traces, SortedWithSeq) {
    std::istringstream in(trace_header + trace_row("c", 7, acct(2), acct(3), "5", 20) +
                          trace_row("c", 7, acct(1), acct(2), "0", 10));
    const auto load = read_traces(in);
    const auto& trace = load.traces.at("c").at(0);
    ASSERT_EQ(trace.events.size(), 2u);
    EXPECT_EQ(trace.events[0].block_number, 10u);
    EXPECT_EQ(trace.events[0].seq, 0u);
    EXPECT_EQ(trace.events[1].seq, 1u);
    EXPECT_TRUE(trace.events[0].is_transfer());
    EXPECT_TRUE(trace.events[1].is_trade());
    EXPECT_EQ(load.stats.continuity_warnings, 0u);
}

TEST(Traces, RejectsSelfTransferAndNegativeValue) {
    std::istringstream in(trace_header + trace_row("c", 1, acct(1), acct(1), "3", 1) +
                          trace_row("c", 1, acct(1), acct(2), "-3", 2) + trace_row("c", 1, acct(1), acct(2), "x", 3));
    const auto load = read_traces(in);
    EXPECT_EQ(load.stats.dropped_self_transfer, 1u);
    EXPECT_EQ(load.stats.dropped_negative_value, 1u);
    EXPECT_EQ(load.stats.dropped_malformed, 1u);
    EXPECT_EQ(load.stats.rows_kept, 0u);
    EXPECT_EQ(load.warnings.size(), 3u);
}

TEST(Traces, ContinuityWarning) {
    std::istringstream in(trace_header + trace_row("c", 1, acct(1), acct(2), "3", 1) +
                          trace_row("c", 1, acct(5), acct(6), "3", 2));
    const auto load = read_traces(in);
    EXPECT_EQ(load.stats.continuity_warnings, 1u);
    EXPECT_EQ(load.stats.rows_kept, 2u);
}

TEST(Traces, MissingColumnIsFatal) {
    std::istringstream in("collection,token_id,from_address,to_address\n");
    EXPECT_THROW(read_traces(in), data_error);
}

TEST(Traces, OrderIndependentAndRoundTrips) {
    std::mt19937_64 rng(8);
    std::vector<std::string> rows;
    for (int i = 0; i < 200; ++i)
        rows.push_back(trace_row(i % 2 ? "alpha" : "beta", rng() % 10, acct(rng() % 20), acct(20 + rng() % 20),
                                 std::to_string(rng() % 3 == 0 ? 0 : rng() % 1000) + ".25", rng() % 50, rng() % 4));
    auto load = [&] {
        std::string body = trace_header;
        for (const auto& r : rows) body += r;
        std::istringstream in(body);
        return read_traces(in);
    };
    const auto first = load();
    std::shuffle(rows.begin(), rows.end(), rng);
    const auto second = load();
    EXPECT_EQ(first.traces, second.traces);

    std::ostringstream out;
    write_traces_csv(out, first.traces);
    std::istringstream back(out.str());
    EXPECT_EQ(read_traces(back).traces, first.traces);
}
