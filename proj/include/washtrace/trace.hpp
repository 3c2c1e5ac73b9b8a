#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "washtrace/account.hpp"

namespace washtrace {

// One ownership change of a token. value_usd == 0 is a plain transfer,
// value_usd > 0 a trade.
struct TraceEvent {
    std::uint64_t token_id = 0;
    std::uint32_t seq = 0;
    AccountId from;
    AccountId to;
    double value_usd = 0.0;
    std::uint64_t block_number = 0;
    std::uint64_t log_index = 0;
    std::uint64_t timestamp = 0;

    bool is_trade() const noexcept { return value_usd > 0.0; }
    bool is_transfer() const noexcept { return value_usd == 0.0; }

    bool operator==(const TraceEvent&) const = default;
};

// Ownership history of one token, ordered by (block_number, log_index).
struct NftTrace {
    std::uint64_t token_id = 0;
    std::vector<TraceEvent> events;

    bool operator==(const NftTrace&) const = default;
};

// collection name -> traces sorted by token_id
using TraceSet = std::map<std::string, std::vector<NftTrace>>;

// Sorts events into chain order, breaking exact key ties by content, and
// renumbers seq. Sets token_id on every event.
void normalize_trace(NftTrace& trace);

// Distinct accounts appearing as sender or receiver, sorted.
std::vector<AccountId> trace_accounts(const NftTrace& trace);

// Human-readable descriptions of ownership-continuity and timestamp-order
// violations. Empty for a clean trace.
std::vector<std::string> check_trace(const NftTrace& trace);

} // namespace washtrace
