#pragma once

#include <charconv>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <type_traits>
#include <unordered_map>
#include <vector>

namespace washtrace {

// Splits one CSV record. Double-quoted fields may contain commas and "" escapes;
// embedded newlines are not supported.
void split_csv_line(std::string_view line, std::vector<std::string>& fields);
std::vector<std::string> split_csv_line(std::string_view line);

// Quotes a field when it contains a comma, quote or leading/trailing space.
std::string csv_field(std::string_view s);

// Column lookup for a header row. Throws data_error naming every missing
// required column. Column names are matched after trimming whitespace.
class CsvHeader {
public:
    CsvHeader(const std::vector<std::string>& names, std::initializer_list<std::string_view> required);

    std::size_t at(std::string_view name) const;
    bool has(std::string_view name) const;
    std::size_t width() const noexcept { return width_; }

private:
    std::unordered_map<std::string, std::size_t> columns_;
    std::size_t width_ = 0;
};

std::string_view trim(std::string_view s) noexcept;

template <class T>
    requires std::is_unsigned_v<T>
bool parse_unsigned(std::string_view s, T& out) noexcept {
    s = trim(s);
    if (s.empty())
        return false;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && p == s.data() + s.size();
}

// Finite decimal number, optional sign and exponent.
bool parse_decimal(std::string_view s, double& out) noexcept;

// Shortest text that parses back to the same double.
std::string format_double(double v);

} // namespace washtrace
