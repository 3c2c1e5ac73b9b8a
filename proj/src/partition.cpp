#include "washtrace/partition.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace washtrace {

Partition::index_type Partition::add(const AccountId& a) {
    auto [it, inserted] = index_.try_emplace(a, static_cast<index_type>(accounts_.size()));
    if (inserted) {
        accounts_.push_back(a);
        parent_.push_back(it->second);
        rank_.push_back(0);
        size_.push_back(1);
    }
    return it->second;
}

std::optional<Partition::index_type> Partition::index_of(const AccountId& a) const {
    auto it = index_.find(a);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

Partition::index_type Partition::find(index_type i) const {
    while (parent_[i] != i) {
        parent_[i] = parent_[parent_[i]];
        i = parent_[i];
    }
    return i;
}

Partition::index_type Partition::find(const AccountId& a) const {
    auto i = index_of(a);
    if (!i)
        throw std::out_of_range("account not in partition: " + a.hex());
    return find(*i);
}

bool Partition::unite(index_type a, index_type b) {
    a = find(a);
    b = find(b);
    if (a == b)
        return false;
    if (rank_[a] < rank_[b])
        std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    if (rank_[a] == rank_[b])
        ++rank_[a];
    return true;
}

bool Partition::unite(const AccountId& a, const AccountId& b) {
    const auto ia = add(a);
    const auto ib = add(b);
    return unite(ia, ib);
}

bool Partition::same_block(const AccountId& a, const AccountId& b) const {
    auto ia = index_of(a);
    auto ib = index_of(b);
    return ia && ib && find(*ia) == find(*ib);
}

std::vector<std::vector<AccountId>> Partition::blocks() const {
    std::map<index_type, std::vector<AccountId>> by_root;
    for (index_type i = 0; i < accounts_.size(); ++i)
        by_root[find(i)].push_back(accounts_[i]);
    std::vector<std::vector<AccountId>> out;
    out.reserve(by_root.size());
    for (auto& [root, members] : by_root) {
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return out;
}

} // namespace washtrace
