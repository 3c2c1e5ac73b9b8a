#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "washtrace/account.hpp"
#include "washtrace/linkability.hpp"
#include "washtrace/partition.hpp"
#include "washtrace/trace.hpp"

namespace washtrace {

struct DetectionConfig {
    // Links with hops <= this join the endpoint accounts' clusters.
    std::uint32_t max_link_hops = default_max_hops;
    // Only accounts joined by zero-value transfers take part in clustering,
    // so a trade between two accounts linked solely through the linkability
    // network is not flagged. Off by default: every trace account is seeded
    // as a singleton first.
    bool strict = false;
};

struct WashReport {
    std::uint64_t token_id = 0;
    std::uint32_t max_link_hops = 0; // threshold the report was produced with
    double total_volume_usd = 0.0;
    double washed_volume_usd = 0.0;
    std::uint64_t wash_sales = 0;
    std::uint64_t total_sales = 0;
    double ratio = 0.0;                  // washed / total, 0 when total is 0
    std::vector<std::uint32_t> flagged_events; // seq of every wash sale

    bool operator==(const WashReport&) const = default;
};

// Suspicion order: higher ratio first, then more wash sales, then lower token_id.
bool more_suspicious(const WashReport& a, const WashReport& b) noexcept;
void rank_by_suspicion(std::vector<WashReport>& reports);

using AccountSet = std::set<AccountId>;

// {from, to} for every zero-value event, in event order.
std::vector<AccountSet> cluster_on_nft_transfer(const NftTrace& trace);

// Blocks are the connected components of the "shares an account" relation.
Partition merge_common_sets(std::span<const AccountSet> sets);

// Unites the endpoints of every link with hops <= max_link_hops whose
// endpoints are both already indexed in the partition. Link direction is
// ignored.
Partition cluster_on_linkability(Partition partition, const LinkabilityNetwork& ln, std::uint32_t max_link_hops);

struct TokenAnalysis {
    WashReport report;
    Partition clusters; // final partition the flags were decided on
};

// Throws data_error when config.max_link_hops is 0 or exceeds ln.max_hops().
TokenAnalysis analyze_token(const NftTrace& trace, const LinkabilityNetwork& ln, const DetectionConfig& config);

WashReport detect_wash_trades(const NftTrace& trace, const LinkabilityNetwork& ln, const DetectionConfig& config);

// Buckets 0..5 and ">5".
inline constexpr std::size_t histogram_buckets = 7;

struct CollectionSummary {
    std::string collection;
    std::uint64_t tokens = 0;
    double total_volume_usd = 0.0;
    double washed_volume_usd = 0.0;
    double wash_share = 0.0; // washed / total, 0 when total is 0
    std::array<std::uint64_t, histogram_buckets> histogram{};
};

struct CollectionReport {
    std::vector<WashReport> reports; // ranked by suspicion
    CollectionSummary summary;
};

CollectionReport collection_report(const std::string& collection, std::span<const NftTrace> traces,
                                   const LinkabilityNetwork& ln, const DetectionConfig& config,
                                   unsigned workers = 1);

struct SweepRow {
    std::uint32_t max_link_hops = 0;
    double avg_wash_trades_per_token = 0.0;
    // 100 * distinct accounts sitting in a multi-account cluster of some token
    //     / distinct accounts across all traces
    double pct_linked_accounts = 0.0;
    std::uint64_t total_flagged = 0;

    bool operator==(const SweepRow&) const = default;
};

// Detection at max_link_hops = 1..h_max, one row per threshold. Throws
// data_error when h_max is 0 or exceeds ln.max_hops().
std::vector<SweepRow> depth_sweep(std::span<const NftTrace> traces, const LinkabilityNetwork& ln,
                                  std::uint32_t h_max, unsigned workers = 1);

} // namespace washtrace
