#include "washtrace/graph.hpp"

#include <algorithm>
#include <numeric>

namespace washtrace {

std::optional<vertex_id> TransactionGraph::find(const AccountId& a) const {
    auto it = index_.find(a);
    if (it == index_.end())
        return std::nullopt;
    return it->second;
}

bool TransactionGraph::has_edge(const AccountId& from, const AccountId& to) const {
    auto f = find(from);
    auto t = find(to);
    if (!f || !t)
        return false;
    auto nbrs = out_neighbors(*f);
    return std::binary_search(nbrs.begin(), nbrs.end(), *t);
}

std::vector<std::pair<AccountId, AccountId>> TransactionGraph::edge_list() const {
    std::vector<std::pair<AccountId, AccountId>> out;
    out.reserve(edge_count());
    for (vertex_id v = 0; v < vertex_count(); ++v)
        for (vertex_id u : out_neighbors(v))
            out.emplace_back(vertices_[v], vertices_[u]);
    return out;
}

std::uint32_t GraphBuilder::intern(const AccountId& a) {
    auto [it, inserted] = ids_.try_emplace(a, static_cast<std::uint32_t>(accounts_.size()));
    if (inserted)
        accounts_.push_back(a);
    return it->second;
}

void GraphBuilder::add_edge(const AccountId& from, const AccountId& to) {
    if (from == to) {
        ++self_loops_;
        return;
    }
    edges_.emplace_back(intern(from), intern(to));
}

TransactionGraph GraphBuilder::build(EdgeBuildStats* stats) {
    // Rank interned ids by address so the final ids follow address order.
    std::vector<std::uint32_t> order(accounts_.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return accounts_[a] < accounts_[b]; });
    std::vector<std::uint32_t> rank(accounts_.size());
    for (std::uint32_t r = 0; r < order.size(); ++r)
        rank[order[r]] = r;

    for (auto& [f, t] : edges_) {
        f = rank[f];
        t = rank[t];
    }
    std::sort(edges_.begin(), edges_.end());
    const auto total = edges_.size();
    edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());

    TransactionGraph g;
    g.vertices_.reserve(accounts_.size());
    for (auto id : order)
        g.vertices_.push_back(accounts_[id]);
    g.index_.reserve(g.vertices_.size());
    for (vertex_id v = 0; v < g.vertices_.size(); ++v)
        g.index_.emplace(g.vertices_[v], v);

    g.offsets_.assign(g.vertices_.size() + 1, 0);
    g.targets_.reserve(edges_.size());
    for (const auto& [f, t] : edges_) {
        ++g.offsets_[f + 1];
        g.targets_.push_back(t);
    }
    std::partial_sum(g.offsets_.begin(), g.offsets_.end(), g.offsets_.begin());

    if (stats) {
        stats->edges_added = edges_.size();
        stats->duplicates_dropped = total - edges_.size();
        stats->self_loops_dropped = self_loops_;
    }

    accounts_.clear();
    ids_.clear();
    edges_.clear();
    self_loops_ = 0;
    return g;
}

TransactionGraph graph_from_edges(std::span<const std::pair<AccountId, AccountId>> edges,
                                  EdgeBuildStats* stats) {
    GraphBuilder builder;
    for (const auto& [f, t] : edges)
        builder.add_edge(f, t);
    return builder.build(stats);
}

} // namespace washtrace
