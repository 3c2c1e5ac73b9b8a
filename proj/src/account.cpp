#include "washtrace/account.hpp"

#include <optional>

namespace washtrace {

namespace {

int hex_value(char c) noexcept {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::optional<account_parse_error> parse_into(std::string_view text, AccountId::bytes_type& out) noexcept {
    if (text.size() < 2 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X'))
        return account_parse_error::missing_prefix;
    if (text.size() != 2 + 2 * AccountId::size)
        return account_parse_error::bad_length;
    for (std::size_t i = 0; i < AccountId::size; ++i) {
        const int hi = hex_value(text[2 + 2 * i]);
        const int lo = hex_value(text[3 + 2 * i]);
        if (hi < 0 || lo < 0)
            return account_parse_error::non_hex;
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return std::nullopt;
}

} // namespace

const char* to_string(account_parse_error e) noexcept {
    switch (e) {
    case account_parse_error::bad_length: return "address must have 40 hex digits after 0x";
    case account_parse_error::missing_prefix: return "address must start with 0x";
    case account_parse_error::non_hex: return "address contains non-hex characters";
    }
    return "invalid address";
}

std::string AccountId::hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s(2 + 2 * size, '0');
    s[1] = 'x';
    for (std::size_t i = 0; i < size; ++i) {
        s[2 + 2 * i] = digits[bytes_[i] >> 4];
        s[3 + 2 * i] = digits[bytes_[i] & 0xf];
    }
    return s;
}

AccountId parse_account(std::string_view text) {
    AccountId::bytes_type bytes{};
    if (auto err = parse_into(text, bytes))
        throw account_error(*err, std::string(to_string(*err)) + ": '" + std::string(text) + "'");
    return AccountId(bytes);
}

bool try_parse_account(std::string_view text, AccountId& out) noexcept {
    AccountId::bytes_type bytes{};
    if (parse_into(text, bytes))
        return false;
    out = AccountId(bytes);
    return true;
}

} // namespace washtrace
