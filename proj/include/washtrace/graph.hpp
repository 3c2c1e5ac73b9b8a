#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "washtrace/account.hpp"

namespace washtrace {

using vertex_id = std::uint32_t;

// Directed graph of direct value transfers between accounts.
//
// Vertices are stored sorted by address, so the dense vertex_id order is the
// address order and every out-neighbour list (sorted by id) is also sorted by
// address. Parallel edges and self-loops never appear. Immutable once built.
class TransactionGraph {
public:
    TransactionGraph() = default;

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t edge_count() const noexcept { return targets_.size(); }

    const std::vector<AccountId>& vertices() const noexcept { return vertices_; }
    const AccountId& account(vertex_id v) const { return vertices_.at(v); }
    std::optional<vertex_id> find(const AccountId& a) const;

    std::span<const vertex_id> out_neighbors(vertex_id v) const {
        return {targets_.data() + offsets_[v], targets_.data() + offsets_[v + 1]};
    }

    bool has_edge(const AccountId& from, const AccountId& to) const;

    // (from, to) pairs in (from, to) address order.
    std::vector<std::pair<AccountId, AccountId>> edge_list() const;

    bool operator==(const TransactionGraph& other) const {
        return vertices_ == other.vertices_ && offsets_ == other.offsets_ && targets_ == other.targets_;
    }

private:
    friend class GraphBuilder;

    std::vector<AccountId> vertices_;
    std::unordered_map<AccountId, vertex_id> index_;
    std::vector<std::uint64_t> offsets_{0};
    std::vector<vertex_id> targets_;
};

struct EdgeBuildStats {
    std::uint64_t edges_added = 0;
    std::uint64_t duplicates_dropped = 0;
    std::uint64_t self_loops_dropped = 0;
};

// Accumulates edges with accounts interned to compact ids, then produces a
// canonical TransactionGraph. Only accounts that end up on a kept edge become
// vertices.
class GraphBuilder {
public:
    void add_edge(const AccountId& from, const AccountId& to);
    std::size_t pending_edges() const noexcept { return edges_.size(); }

    // Consumes the builder's buffers.
    TransactionGraph build(EdgeBuildStats* stats = nullptr);

private:
    std::uint32_t intern(const AccountId& a);

    std::vector<AccountId> accounts_;
    std::unordered_map<AccountId, std::uint32_t> ids_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
    std::uint64_t self_loops_ = 0;
};

TransactionGraph graph_from_edges(std::span<const std::pair<AccountId, AccountId>> edges,
                                  EdgeBuildStats* stats = nullptr);

} // namespace washtrace
