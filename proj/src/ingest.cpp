#include "washtrace/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <utility>

#include <fmt/format.h>

#include "washtrace/csv.hpp"
#include "washtrace/errors.hpp"

namespace washtrace {

namespace {

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open for reading: " + path);
    return in;
}

void warn(std::vector<std::string>* warnings, std::string msg) {
    if (warnings && warnings->size() < max_kept_warnings)
        warnings->push_back(std::move(msg));
}

bool next_line(std::istream& in, std::string& line) {
    if (!std::getline(in, line))
        return false;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return true;
}

} // namespace

ExclusionList read_exclusions(std::istream& in, std::vector<std::string>* warnings) {
    ExclusionList out;
    std::string line;
    std::uint64_t line_no = 0;
    while (next_line(in, line)) {
        ++line_no;
        auto text = trim(line);
        if (text.empty() || text.front() == '#')
            continue;
        AccountId a;
        if (!try_parse_account(text, a)) {
            warn(warnings, fmt::format("exclusions line {}: malformed address '{}'", line_no, text));
            continue;
        }
        out.addresses.insert(a);
    }
    return out;
}

ExclusionList load_exclusions(const std::string& path, std::vector<std::string>* warnings) {
    auto in = open_input(path);
    return read_exclusions(in, warnings);
}

nlohmann::json to_json(const IngestStats& s) {
    return {
        {"rows_read", s.rows_read},
        {"rows_kept", s.rows_kept},
        {"dropped_contract_call", s.dropped_contract_call},
        {"dropped_zero_value", s.dropped_zero_value},
        {"dropped_excluded", s.dropped_excluded},
        {"dropped_after_cutoff", s.dropped_after_cutoff},
        {"dropped_malformed", s.dropped_malformed},
        {"max_block_seen", s.max_block_seen},
        {"duplicate_edges", s.duplicate_edges},
        {"self_loops", s.self_loops},
    };
}

bool decimal_string_positive(std::string_view s, bool& ok) noexcept {
    s = trim(s);
    ok = false;
    if (s.empty())
        return false;
    bool positive = false;
    bool seen_digit = false;
    bool seen_point = false;
    for (char c : s) {
        if (c == '.') {
            if (seen_point)
                return false;
            seen_point = true;
        } else if (c >= '0' && c <= '9') {
            seen_digit = true;
            positive |= c != '0';
        } else {
            return false;
        }
    }
    ok = seen_digit;
    return ok && positive;
}

TransactionLoad read_transactions(std::istream& in, const ExclusionList& exclusions,
                                  std::optional<std::uint64_t> max_block) {
    TransactionLoad out;
    auto& st = out.stats;
    std::string line;
    if (!next_line(in, line))
        throw data_error("transactions file is empty (no header)");
    const CsvHeader header(split_csv_line(line),
                           {"from_address", "to_address", "value", "input", "block_number"});
    const auto from_col = header.at("from_address");
    const auto to_col = header.at("to_address");
    const auto value_col = header.at("value");
    const auto input_col = header.at("input");
    const auto block_col = header.at("block_number");
    const auto needed = std::max({from_col, to_col, value_col, input_col, block_col}) + 1;

    GraphBuilder builder;
    std::vector<std::string> fields;
    std::uint64_t line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        ++st.rows_read;
        split_csv_line(line, fields);
        if (fields.size() < needed) {
            ++st.dropped_malformed;
            warn(&out.warnings, fmt::format("transactions line {}: expected {} fields, got {}", line_no,
                                            header.width(), fields.size()));
            continue;
        }

        std::uint64_t block = 0;
        const bool block_ok = parse_unsigned(fields[block_col], block);
        if (block_ok)
            st.max_block_seen = std::max(st.max_block_seen, block);

        // Anything carrying call data is a contract interaction, whatever
        // else the row holds (contract creations have no to_address).
        if (trim(fields[input_col]) != "0x") {
            ++st.dropped_contract_call;
            continue;
        }

        AccountId from, to;
        bool value_ok = false;
        const bool positive = decimal_string_positive(fields[value_col], value_ok);
        if (!block_ok || !value_ok || !try_parse_account(trim(fields[from_col]), from) ||
            !try_parse_account(trim(fields[to_col]), to)) {
            ++st.dropped_malformed;
            warn(&out.warnings, fmt::format("transactions line {}: unparsable row", line_no));
            continue;
        }
        if (!positive) {
            ++st.dropped_zero_value;
            continue;
        }
        if (max_block && block > *max_block) {
            ++st.dropped_after_cutoff;
            continue;
        }
        if (exclusions.contains(from) || exclusions.contains(to)) {
            ++st.dropped_excluded;
            continue;
        }
        ++st.rows_kept;
        builder.add_edge(from, to);
    }

    EdgeBuildStats es;
    out.graph = builder.build(&es);
    st.duplicate_edges = es.duplicates_dropped;
    st.self_loops = es.self_loops_dropped;
    return out;
}

TransactionLoad load_transactions(const std::string& path, const ExclusionList& exclusions,
                                  std::optional<std::uint64_t> max_block) {
    auto in = open_input(path);
    return read_transactions(in, exclusions, max_block);
}

void write_edges_as_transactions(std::ostream& out, const TransactionGraph& graph) {
    out << "from_address,to_address,value,input,block_number\n";
    for (const auto& [from, to] : graph.edge_list())
        out << from.hex() << ',' << to.hex() << ",1,0x,0\n";
}

nlohmann::json to_json(const TraceIngestStats& s) {
    return {
        {"rows_read", s.rows_read},
        {"rows_kept", s.rows_kept},
        {"dropped_negative_value", s.dropped_negative_value},
        {"dropped_self_transfer", s.dropped_self_transfer},
        {"dropped_malformed", s.dropped_malformed},
        {"continuity_warnings", s.continuity_warnings},
        {"tokens", s.tokens},
    };
}

TraceLoad read_traces(std::istream& in) {
    TraceLoad out;
    auto& st = out.stats;
    std::string line;
    if (!next_line(in, line))
        throw data_error("traces file is empty (no header)");
    const CsvHeader header(split_csv_line(line), {"collection", "token_id", "from_address", "to_address",
                                                  "value_usd", "block_number", "log_index", "timestamp"});
    const auto collection_col = header.at("collection");
    const auto token_col = header.at("token_id");
    const auto from_col = header.at("from_address");
    const auto to_col = header.at("to_address");
    const auto value_col = header.at("value_usd");
    const auto block_col = header.at("block_number");
    const auto log_col = header.at("log_index");
    const auto ts_col = header.at("timestamp");
    const auto needed =
        std::max({collection_col, token_col, from_col, to_col, value_col, block_col, log_col, ts_col}) + 1;

    std::map<std::pair<std::string, std::uint64_t>, NftTrace> grouped;
    std::vector<std::string> fields;
    std::uint64_t line_no = 1;
    while (next_line(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        ++st.rows_read;
        split_csv_line(line, fields);

        TraceEvent e;
        bool ok = fields.size() >= needed && parse_unsigned(fields[token_col], e.token_id) &&
                  try_parse_account(trim(fields[from_col]), e.from) &&
                  try_parse_account(trim(fields[to_col]), e.to) &&
                  parse_decimal(fields[value_col], e.value_usd) && parse_unsigned(fields[block_col], e.block_number) &&
                  parse_unsigned(fields[log_col], e.log_index) && parse_unsigned(fields[ts_col], e.timestamp);
        if (!ok) {
            ++st.dropped_malformed;
            warn(&out.warnings, fmt::format("traces line {}: unparsable row", line_no));
            continue;
        }
        if (e.value_usd < 0.0) {
            ++st.dropped_negative_value;
            warn(&out.warnings, fmt::format("traces line {}: negative value_usd {}", line_no, e.value_usd));
            continue;
        }
        if (e.from == e.to) {
            ++st.dropped_self_transfer;
            warn(&out.warnings, fmt::format("traces line {}: sender equals receiver {}", line_no, e.from.hex()));
            continue;
        }
        e.value_usd += 0.0; // -0.0 -> 0.0
        ++st.rows_kept;
        auto& trace = grouped[{std::string(trim(fields[collection_col])), e.token_id}];
        trace.token_id = e.token_id;
        trace.events.push_back(e);
    }

    for (auto& [key, trace] : grouped) {
        normalize_trace(trace);
        for (auto& w : check_trace(trace)) {
            ++st.continuity_warnings;
            warn(&out.warnings, key.first + ": " + std::move(w));
        }
        out.traces[key.first].push_back(std::move(trace));
        ++st.tokens;
    }
    return out;
}

TraceLoad load_traces(const std::string& path) {
    auto in = open_input(path);
    return read_traces(in);
}

void write_traces_csv(std::ostream& out, const TraceSet& traces) {
    out << "collection,token_id,from_address,to_address,value_usd,block_number,log_index,timestamp\n";
    for (const auto& [collection, list] : traces)
        for (const auto& trace : list)
            for (const auto& e : trace.events)
                out << csv_field(collection) << ',' << trace.token_id << ',' << e.from.hex() << ',' << e.to.hex()
                    << ',' << format_double(e.value_usd) << ',' << e.block_number << ',' << e.log_index << ','
                    << e.timestamp << '\n';
}

} // namespace washtrace
