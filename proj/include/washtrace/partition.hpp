#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "washtrace/account.hpp"

namespace washtrace {

// Disjoint sets over accounts (union by rank, path halving). Accounts are
// indexed on first add(); find/unite on unknown accounts index them too.
// Single writer only.
class Partition {
public:
    using index_type = std::uint32_t;

    index_type add(const AccountId& a);
    bool contains(const AccountId& a) const { return index_.contains(a); }
    std::size_t size() const noexcept { return accounts_.size(); }
    const std::vector<AccountId>& accounts() const noexcept { return accounts_; }

    std::optional<index_type> index_of(const AccountId& a) const;

    index_type find(index_type i) const;
    index_type find(const AccountId& a) const;

    // Returns true when two different blocks were merged.
    bool unite(index_type a, index_type b);
    bool unite(const AccountId& a, const AccountId& b);

    // True iff both accounts are indexed and share a block.
    bool same_block(const AccountId& a, const AccountId& b) const;

    std::size_t block_size(index_type i) const { return size_[find(i)]; }

    // Canonical form: every block sorted, blocks ordered by their smallest
    // member. Two partitions are equal iff their blocks() are equal.
    std::vector<std::vector<AccountId>> blocks() const;

private:
    std::vector<AccountId> accounts_;
    std::unordered_map<AccountId, index_type> index_;
    mutable std::vector<index_type> parent_;
    std::vector<std::uint8_t> rank_;
    std::vector<std::uint32_t> size_;
};

} // namespace washtrace
