#include "washtrace/csv.hpp"

#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

#include "washtrace/errors.hpp"

namespace washtrace {

std::string_view trim(std::string_view s) noexcept {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

void split_csv_line(std::string_view line, std::vector<std::string>& fields) {
    fields.clear();
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    fields.push_back(std::move(cur));
}

std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    split_csv_line(line, fields);
    return fields;
}

std::string csv_field(std::string_view s) {
    const bool needs_quotes = s.find_first_of(",\"\n") != std::string_view::npos ||
                              (!s.empty() && (s.front() == ' ' || s.back() == ' '));
    if (!needs_quotes)
        return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

CsvHeader::CsvHeader(const std::vector<std::string>& names, std::initializer_list<std::string_view> required)
    : width_(names.size()) {
    for (std::size_t i = 0; i < names.size(); ++i)
        columns_.try_emplace(std::string(trim(names[i])), i);
    std::string missing;
    for (auto name : required) {
        if (!has(name)) {
            if (!missing.empty())
                missing += ", ";
            missing += name;
        }
    }
    if (!missing.empty())
        throw data_error("missing required columns: " + missing);
}

std::size_t CsvHeader::at(std::string_view name) const {
    auto it = columns_.find(std::string(name));
    if (it == columns_.end())
        throw data_error("no column " + std::string(name));
    return it->second;
}

bool CsvHeader::has(std::string_view name) const {
    return columns_.contains(std::string(name));
}

bool parse_decimal(std::string_view s, double& out) noexcept {
    s = trim(s);
    if (s.empty())
        return false;
    // from_chars<double> is not available on every toolchain we build with.
    std::string buf(s);
    char* end = nullptr;
    const double v = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || !std::isfinite(v))
        return false;
    out = v;
    return true;
}

std::string format_double(double v) {
    return fmt::format("{}", v);
}

} // namespace washtrace
