#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "washtrace/detection.hpp"
#include "washtrace/linkability.hpp"
#include "washtrace/trace.hpp"

namespace washtrace {

enum class TableFormat { csv, json, text };

std::optional<TableFormat> parse_table_format(std::string_view name);
std::string_view extension(TableFormat f);

// Columns token_id, total_volume, washed_volume, wash_sales, total_sales,
// ratio; rows in suspicion order. Text mode rounds ratio to 3 decimals,
// csv and json keep full precision. JSON rows also carry flagged_events.
std::string render_stats_table(std::vector<WashReport> reports, TableFormat format);

// bucket,count with buckets 0..5 and ">5".
std::string render_histogram(const CollectionSummary& summary);

// collection,legit_volume,washed_volume with legit = total - washed.
std::string render_volume_summary(std::span<const CollectionSummary> summaries);

std::string render_sweep(std::span<const SweepRow> rows);

// Trading graph of one token: one node per account; transfer, trade and
// dotted link edges. Links are drawn between trace accounts when their hops
// are within the report's threshold. Trades the report flagged carry
// flagged=true.
std::string export_token_dot(const NftTrace& trace, const LinkabilityNetwork& ln, const WashReport& report);

} // namespace washtrace
