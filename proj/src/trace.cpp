#include "washtrace/trace.hpp"

#include <algorithm>
#include <tuple>

#include <fmt/format.h>

namespace washtrace {

void normalize_trace(NftTrace& trace) {
    std::sort(trace.events.begin(), trace.events.end(), [](const TraceEvent& a, const TraceEvent& b) {
        return std::tie(a.block_number, a.log_index, a.timestamp, a.from, a.to, a.value_usd) <
               std::tie(b.block_number, b.log_index, b.timestamp, b.from, b.to, b.value_usd);
    });
    for (std::uint32_t i = 0; i < trace.events.size(); ++i) {
        trace.events[i].seq = i;
        trace.events[i].token_id = trace.token_id;
    }
}

std::vector<AccountId> trace_accounts(const NftTrace& trace) {
    std::vector<AccountId> out;
    out.reserve(trace.events.size() * 2);
    for (const auto& e : trace.events) {
        out.push_back(e.from);
        out.push_back(e.to);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::string> check_trace(const NftTrace& trace) {
    std::vector<std::string> warnings;
    for (std::size_t i = 1; i < trace.events.size(); ++i) {
        const auto& prev = trace.events[i - 1];
        const auto& cur = trace.events[i];
        if (cur.from != prev.to)
            warnings.push_back(fmt::format("token {} seq {}: sender {} is not the current owner {}",
                                           trace.token_id, cur.seq, cur.from.hex(), prev.to.hex()));
        if (cur.timestamp < prev.timestamp)
            warnings.push_back(fmt::format("token {} seq {}: timestamp {} precedes previous event ({})",
                                           trace.token_id, cur.seq, cur.timestamp, prev.timestamp));
    }
    return warnings;
}

} // namespace washtrace
