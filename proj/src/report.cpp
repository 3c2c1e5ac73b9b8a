#include "washtrace/report.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "washtrace/csv.hpp"

namespace washtrace {

std::optional<TableFormat> parse_table_format(std::string_view name) {
    if (name == "csv") return TableFormat::csv;
    if (name == "json") return TableFormat::json;
    if (name == "text") return TableFormat::text;
    return std::nullopt;
}

std::string_view extension(TableFormat f) {
    switch (f) {
    case TableFormat::csv: return "csv";
    case TableFormat::json: return "json";
    case TableFormat::text: return "txt";
    }
    return "txt";
}

std::string render_stats_table(std::vector<WashReport> reports, TableFormat format) {
    rank_by_suspicion(reports);
    std::string out;
    switch (format) {
    case TableFormat::csv:
        out = "token_id,total_volume,washed_volume,wash_sales,total_sales,ratio\n";
        for (const auto& r : reports)
            out += fmt::format("{},{},{},{},{},{}\n", r.token_id, format_double(r.total_volume_usd),
                               format_double(r.washed_volume_usd), r.wash_sales, r.total_sales,
                               format_double(r.ratio));
        break;
    case TableFormat::json: {
        auto rows = nlohmann::json::array();
        for (const auto& r : reports)
            rows.push_back({{"token_id", r.token_id},
                            {"total_volume", r.total_volume_usd},
                            {"washed_volume", r.washed_volume_usd},
                            {"wash_sales", r.wash_sales},
                            {"total_sales", r.total_sales},
                            {"ratio", r.ratio},
                            {"max_link_hops", r.max_link_hops},
                            {"flagged_events", r.flagged_events}});
        out = rows.dump(2) + "\n";
        break;
    }
    case TableFormat::text:
        out = fmt::format("{:>12}  {:>18}  {:>18}  {:>10}  {:>11}  {:>6}\n", "token_id", "total_volume",
                          "washed_volume", "wash_sales", "total_sales", "ratio");
        for (const auto& r : reports)
            out += fmt::format("{:>12}  {:>18.2f}  {:>18.2f}  {:>10}  {:>11}  {:>6.3f}\n", r.token_id,
                               r.total_volume_usd, r.washed_volume_usd, r.wash_sales, r.total_sales, r.ratio);
        break;
    }
    return out;
}

std::string render_histogram(const CollectionSummary& summary) {
    std::string out = "bucket,count\n";
    for (std::size_t b = 0; b < histogram_buckets; ++b) {
        const std::string label = b + 1 == histogram_buckets ? ">5" : std::to_string(b);
        out += fmt::format("{},{}\n", label, summary.histogram[b]);
    }
    return out;
}

std::string render_volume_summary(std::span<const CollectionSummary> summaries) {
    std::string out = "collection,legit_volume,washed_volume\n";
    for (const auto& s : summaries)
        out += fmt::format("{},{},{}\n", csv_field(s.collection), format_double(s.total_volume_usd - s.washed_volume_usd),
                           format_double(s.washed_volume_usd));
    return out;
}

std::string render_sweep(std::span<const SweepRow> rows) {
    std::string out = "max_link_hops,avg_wash_trades,pct_linked_accounts,total_flagged\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{}\n", r.max_link_hops, format_double(r.avg_wash_trades_per_token),
                           format_double(r.pct_linked_accounts), r.total_flagged);
    return out;
}

std::string export_token_dot(const NftTrace& trace, const LinkabilityNetwork& ln, const WashReport& report) {
    std::string out = fmt::format("digraph \"token_{}\" {{\n", trace.token_id);
    const auto accounts = trace_accounts(trace);
    for (const auto& a : accounts)
        out += fmt::format("  \"{}\";\n", a.hex());

    for (const auto& e : trace.events) {
        if (e.is_transfer()) {
            out += fmt::format("  \"{}\" -> \"{}\" [kind=transfer, seq={}, color=blue];\n", e.from.hex(), e.to.hex(),
                               e.seq);
            continue;
        }
        const bool flagged =
            std::binary_search(report.flagged_events.begin(), report.flagged_events.end(), e.seq);
        out += fmt::format("  \"{}\" -> \"{}\" [kind=trade, seq={}, label=\"${}\"{}];\n", e.from.hex(), e.to.hex(),
                           e.seq, format_double(e.value_usd), flagged ? ", flagged=true, color=red" : "");
    }

    for (const auto& a : accounts)
        for (const auto& link : ln.links_from(a))
            if (link.hops <= report.max_link_hops && std::binary_search(accounts.begin(), accounts.end(), link.dst))
                out += fmt::format("  \"{}\" -> \"{}\" [kind=link, hops={}, style=dotted, color=purple];\n",
                                   link.src.hex(), link.dst.hex(), link.hops);
    out += "}\n";
    return out;
}

} // namespace washtrace
