#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace washtrace {

enum class account_parse_error {
    bad_length,
    missing_prefix,
    non_hex,
};

const char* to_string(account_parse_error e) noexcept;

class account_error : public std::invalid_argument {
public:
    account_error(account_parse_error kind, const std::string& what)
        : std::invalid_argument(what), kind_(kind) {}
    account_parse_error kind() const noexcept { return kind_; }

private:
    account_parse_error kind_;
};

// 20-byte account address. Ordering of the raw bytes is the same as the
// ordering of the canonical lowercase hex strings.
class AccountId {
public:
    static constexpr std::size_t size = 20;
    using bytes_type = std::array<std::uint8_t, size>;

    constexpr AccountId() = default;
    explicit constexpr AccountId(const bytes_type& bytes) : bytes_(bytes) {}

    const bytes_type& bytes() const noexcept { return bytes_; }

    // "0x" + 40 lowercase hex digits.
    std::string hex() const;

    auto operator<=>(const AccountId&) const = default;
    bool operator==(const AccountId&) const = default;

private:
    bytes_type bytes_{};
};

// Accepts "0x"/"0X" followed by 40 hex digits in any case. Throws account_error.
AccountId parse_account(std::string_view text);

// Non-throwing variant for bulk ingestion.
bool try_parse_account(std::string_view text, AccountId& out) noexcept;

struct AccountHash {
    std::size_t operator()(const AccountId& a) const noexcept {
        // Addresses are hash outputs already; the first 8 bytes are uniform.
        std::uint64_t h = 0;
        for (std::size_t i = 0; i < 8; ++i)
            h = (h << 8) | a.bytes()[i];
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

} // namespace washtrace

template <>
struct std::hash<washtrace::AccountId> : washtrace::AccountHash {};
