#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "washtrace/account.hpp"
#include "washtrace/graph.hpp"
#include "washtrace/trace.hpp"

namespace washtrace {

// Last proof-of-work block on Ethereum mainnet.
inline constexpr std::uint64_t pos_cutoff_block = 15537393;

// Loaders keep at most this many warning messages; counters are exact.
inline constexpr std::size_t max_kept_warnings = 1000;

struct ExclusionList {
    std::unordered_set<AccountId> addresses;

    bool contains(const AccountId& a) const { return addresses.contains(a); }
    std::size_t size() const noexcept { return addresses.size(); }
};

// One address per line; blank lines and lines starting with '#' are skipped.
// Malformed lines are skipped with a warning naming the line number.
ExclusionList read_exclusions(std::istream& in, std::vector<std::string>* warnings = nullptr);
ExclusionList load_exclusions(const std::string& path, std::vector<std::string>* warnings = nullptr);

struct IngestStats {
    std::uint64_t rows_read = 0;
    std::uint64_t rows_kept = 0;
    std::uint64_t dropped_contract_call = 0;
    std::uint64_t dropped_zero_value = 0;
    std::uint64_t dropped_excluded = 0;
    std::uint64_t dropped_after_cutoff = 0;
    std::uint64_t dropped_malformed = 0;
    std::uint64_t max_block_seen = 0;
    // Kept rows that did not produce a new graph edge.
    std::uint64_t duplicate_edges = 0;
    std::uint64_t self_loops = 0;

    std::uint64_t dropped_total() const noexcept {
        return dropped_contract_call + dropped_zero_value + dropped_excluded + dropped_after_cutoff +
               dropped_malformed;
    }
};

nlohmann::json to_json(const IngestStats& s);

struct TransactionLoad {
    TransactionGraph graph;
    IngestStats stats;
    std::vector<std::string> warnings;
};

// Keeps rows with input "0x", value > 0, block_number <= max_block (when set)
// and neither endpoint excluded. Required columns: from_address, to_address,
// value, input, block_number. Throws data_error on a missing column.
TransactionLoad read_transactions(std::istream& in, const ExclusionList& exclusions,
                                  std::optional<std::uint64_t> max_block = pos_cutoff_block);
TransactionLoad load_transactions(const std::string& path, const ExclusionList& exclusions,
                                  std::optional<std::uint64_t> max_block = pos_cutoff_block);

// Graph edges as a transactions CSV that read_transactions accepts unchanged.
void write_edges_as_transactions(std::ostream& out, const TransactionGraph& graph);

// True for a non-negative decimal integer string (fraction digits allowed)
// with at least one non-zero digit. Sets ok=false on anything unparsable.
bool decimal_string_positive(std::string_view s, bool& ok) noexcept;

struct TraceIngestStats {
    std::uint64_t rows_read = 0;
    std::uint64_t rows_kept = 0;
    std::uint64_t dropped_negative_value = 0;
    std::uint64_t dropped_self_transfer = 0;
    std::uint64_t dropped_malformed = 0;
    std::uint64_t continuity_warnings = 0;
    std::uint64_t tokens = 0;
};

nlohmann::json to_json(const TraceIngestStats& s);

struct TraceLoad {
    TraceSet traces;
    TraceIngestStats stats;
    std::vector<std::string> warnings;
};

// Header: collection,token_id,from_address,to_address,value_usd,block_number,
// log_index,timestamp. Events are grouped per (collection, token_id) and put
// in chain order.
TraceLoad read_traces(std::istream& in);
TraceLoad load_traces(const std::string& path);

void write_traces_csv(std::ostream& out, const TraceSet& traces);

} // namespace washtrace
