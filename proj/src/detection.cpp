#include "washtrace/detection.hpp"

#include <algorithm>
#include <tuple>
#include <unordered_set>

#include <fmt/format.h>

#include "washtrace/errors.hpp"
#include "washtrace/parallel.hpp"

namespace washtrace {

namespace {

void check_depth(std::uint32_t hops, const LinkabilityNetwork& ln, const char* what) {
    if (hops < 1)
        throw data_error(fmt::format("{} must be at least 1", what));
    if (hops > ln.max_hops())
        throw data_error(fmt::format("{} {} exceeds the linkability network's construction depth {}", what, hops,
                                     ln.max_hops()));
}

} // namespace

bool more_suspicious(const WashReport& a, const WashReport& b) noexcept {
    if (a.ratio != b.ratio)
        return a.ratio > b.ratio;
    if (a.wash_sales != b.wash_sales)
        return a.wash_sales > b.wash_sales;
    return a.token_id < b.token_id;
}

void rank_by_suspicion(std::vector<WashReport>& reports) {
    std::sort(reports.begin(), reports.end(), more_suspicious);
}

std::vector<AccountSet> cluster_on_nft_transfer(const NftTrace& trace) {
    std::vector<AccountSet> sets;
    for (const auto& e : trace.events)
        if (e.is_transfer())
            sets.push_back({e.from, e.to});
    return sets;
}

Partition merge_common_sets(std::span<const AccountSet> sets) {
    Partition p;
    for (const auto& s : sets) {
        if (s.empty())
            continue;
        const auto first = p.add(*s.begin());
        for (const auto& a : s)
            p.unite(first, p.add(a));
    }
    return p;
}

Partition cluster_on_linkability(Partition partition, const LinkabilityNetwork& ln, std::uint32_t max_link_hops) {
    // Iterating the out-links of every indexed account visits each relevant
    // link once from its src side, which covers both directions.
    const std::size_t n = partition.size();
    for (Partition::index_type i = 0; i < n; ++i) {
        for (const auto& link : ln.links_from(partition.accounts()[i])) {
            if (link.hops > max_link_hops)
                continue;
            if (auto j = partition.index_of(link.dst))
                partition.unite(i, *j);
        }
    }
    return partition;
}

TokenAnalysis analyze_token(const NftTrace& trace, const LinkabilityNetwork& ln, const DetectionConfig& config) {
    check_depth(config.max_link_hops, ln, "max_link_hops");

    const auto transfer_sets = cluster_on_nft_transfer(trace);
    Partition clusters = merge_common_sets(transfer_sets);
    if (!config.strict) {
        for (const auto& e : trace.events) {
            clusters.add(e.from);
            clusters.add(e.to);
        }
    }
    clusters = cluster_on_linkability(std::move(clusters), ln, config.max_link_hops);

    WashReport r;
    r.token_id = trace.token_id;
    r.max_link_hops = config.max_link_hops;
    for (const auto& e : trace.events) {
        if (!e.is_trade())
            continue;
        ++r.total_sales;
        r.total_volume_usd += e.value_usd;
        if (clusters.same_block(e.from, e.to)) {
            ++r.wash_sales;
            r.washed_volume_usd += e.value_usd;
            r.flagged_events.push_back(e.seq);
        }
    }
    r.ratio = r.total_volume_usd > 0.0 ? r.washed_volume_usd / r.total_volume_usd : 0.0;
    return {std::move(r), std::move(clusters)};
}

WashReport detect_wash_trades(const NftTrace& trace, const LinkabilityNetwork& ln, const DetectionConfig& config) {
    return analyze_token(trace, ln, config).report;
}

CollectionReport collection_report(const std::string& collection, std::span<const NftTrace> traces,
                                   const LinkabilityNetwork& ln, const DetectionConfig& config, unsigned workers) {
    check_depth(config.max_link_hops, ln, "max_link_hops");

    CollectionReport out;
    out.reports.resize(traces.size());
    parallel_for(traces.size(), workers,
                 [&](unsigned, std::size_t i) { out.reports[i] = detect_wash_trades(traces[i], ln, config); });

    auto& s = out.summary;
    s.collection = collection;
    s.tokens = traces.size();
    // Summed in input order so totals do not depend on scheduling.
    for (const auto& r : out.reports) {
        s.total_volume_usd += r.total_volume_usd;
        s.washed_volume_usd += r.washed_volume_usd;
        ++s.histogram[std::min<std::uint64_t>(r.wash_sales, histogram_buckets - 1)];
    }
    s.wash_share = s.total_volume_usd > 0.0 ? s.washed_volume_usd / s.total_volume_usd : 0.0;
    rank_by_suspicion(out.reports);
    return out;
}

std::vector<SweepRow> depth_sweep(std::span<const NftTrace> traces, const LinkabilityNetwork& ln,
                                  std::uint32_t h_max, unsigned workers) {
    check_depth(h_max, ln, "h_max");

    std::unordered_set<AccountId> all_accounts;
    for (const auto& t : traces)
        for (const auto& a : trace_accounts(t))
            all_accounts.insert(a);

    struct TokenResult {
        std::uint64_t flagged = 0;
        std::vector<AccountId> linked;
    };

    std::vector<SweepRow> rows;
    rows.reserve(h_max);
    for (std::uint32_t h = 1; h <= h_max; ++h) {
        const DetectionConfig config{h, false};
        std::vector<TokenResult> results(traces.size());
        parallel_for(traces.size(), workers, [&](unsigned, std::size_t i) {
            auto analysis = analyze_token(traces[i], ln, config);
            auto& res = results[i];
            res.flagged = analysis.report.wash_sales;
            const auto& c = analysis.clusters;
            for (Partition::index_type k = 0; k < c.size(); ++k)
                if (c.block_size(k) > 1)
                    res.linked.push_back(c.accounts()[k]);
        });

        SweepRow row;
        row.max_link_hops = h;
        std::unordered_set<AccountId> linked;
        for (const auto& res : results) {
            row.total_flagged += res.flagged;
            linked.insert(res.linked.begin(), res.linked.end());
        }
        row.avg_wash_trades_per_token =
            traces.empty() ? 0.0 : static_cast<double>(row.total_flagged) / static_cast<double>(traces.size());
        row.pct_linked_accounts = all_accounts.empty() ? 0.0
                                                       : 100.0 * static_cast<double>(linked.size()) /
                                                             static_cast<double>(all_accounts.size());
        rows.push_back(row);
    }
    return rows;
}

} // namespace washtrace
