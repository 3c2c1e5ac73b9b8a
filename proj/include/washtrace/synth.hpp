#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "washtrace/account.hpp"
#include "washtrace/graph.hpp"
#include "washtrace/trace.hpp"

namespace washtrace {

struct SynthConfig {
    std::uint64_t seed = 1;
    std::uint64_t honest_accounts = 1000;
    std::uint64_t ring_count = 5;
    std::uint64_t ring_size = 3;
    // Ring sizes are drawn uniformly from [ring_size, ring_size_max];
    // 0 means every ring has exactly ring_size members.
    std::uint64_t ring_size_max = 0;
    std::uint64_t trades_per_ring = 6;
    std::uint64_t honest_trades = 2000;
    std::uint64_t background_tx = 5000;
    std::uint32_t link_path_hops = 3;
    double price_base_usd = 1000.0;
    std::string collection = "synth";
};

// Throws data_error describing the first inconsistency.
void validate(const SynthConfig& config);

struct WashEventRef {
    std::uint64_t token_id = 0;
    std::uint32_t seq = 0;

    auto operator<=>(const WashEventRef&) const = default;
};

struct GroundTruth {
    std::vector<WashEventRef> wash_events;                // sorted
    std::vector<std::vector<AccountId>> colluding_accounts; // one sorted list per ring
};

nlohmann::json to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const nlohmann::json& j);

// A raw transactions-CSV row, including rows the ingest filter must drop.
struct TxRow {
    AccountId from;
    AccountId to;
    std::string value; // wei, decimal
    std::string input;
    std::uint64_t block_number = 0;
};

struct SynthData {
    std::vector<TxRow> transactions;
    TransactionGraph graph; // the normal transfers among `transactions`
    TraceSet traces;
    std::vector<AccountId> owners; // every account appearing in a trace, sorted
    GroundTruth truth;
};

// Deterministic for a given config. Ring members are wired pairwise by
// private chains of exactly link_path_hops transfers; nothing in the
// transaction graph leads into an honest account, so honest counterparties
// are never linked. Every ring token ends with a sale to an honest buyer.
SynthData generate(const SynthConfig& config);

void write_transactions_csv(std::ostream& out, const std::vector<TxRow>& rows);
void write_owners(std::ostream& out, const std::vector<AccountId>& owners);

// transactions.csv, traces.csv, owners.txt and ground_truth.json in dir.
void write_synth_files(const SynthData& data, const std::string& dir);

std::vector<AccountId> read_owners(std::istream& in);
std::vector<AccountId> load_owners(const std::string& path);

} // namespace washtrace
