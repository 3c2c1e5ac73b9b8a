#pragma once

// Reference implementations used only by tests. They deliberately share no
// code with the library's graph, BFS or union-find paths.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "washtrace/account.hpp"
#include "washtrace/detection.hpp"
#include "washtrace/linkability.hpp"

namespace washtrace::testing {

// Deterministic address for a small integer, ordered like the integer.
inline AccountId acct(std::uint32_t n) {
    AccountId::bytes_type b{};
    b[16] = static_cast<std::uint8_t>(n >> 24);
    b[17] = static_cast<std::uint8_t>(n >> 16);
    b[18] = static_cast<std::uint8_t>(n >> 8);
    b[19] = static_cast<std::uint8_t>(n);
    return AccountId(b);
}

using EdgeList = std::vector<std::pair<AccountId, AccountId>>;
using Adjacency = std::map<AccountId, std::vector<AccountId>>;

inline Adjacency adjacency_of(const EdgeList& edges) {
    Adjacency adj;
    for (const auto& [f, t] : edges)
        if (f != t)
            adj[f].push_back(t);
    return adj;
}

// src -> dst -> hops
using HopTable = std::map<AccountId, std::map<AccountId, std::uint32_t>>;

// Every simple path of at most max_hops edges from every owner, keeping the
// shortest length per owner pair. Exponential; small graphs only.
inline HopTable enumerate_paths(const EdgeList& edges, const std::vector<AccountId>& owners, std::uint32_t max_hops) {
    const auto adj = adjacency_of(edges);
    const std::set<AccountId> owner_set(owners.begin(), owners.end());
    HopTable out;
    for (const auto& root : owner_set) {
        std::set<AccountId> on_path{root};
        std::function<void(const AccountId&, std::uint32_t)> walk = [&](const AccountId& v, std::uint32_t depth) {
            if (depth == max_hops)
                return;
            auto it = adj.find(v);
            if (it == adj.end())
                return;
            for (const auto& u : it->second) {
                if (on_path.contains(u))
                    continue;
                if (owner_set.contains(u)) {
                    auto [slot, inserted] = out[root].try_emplace(u, depth + 1);
                    if (!inserted)
                        slot->second = std::min(slot->second, depth + 1);
                }
                on_path.insert(u);
                walk(u, depth + 1);
                on_path.erase(u);
            }
        };
        walk(root, 0);
    }
    return out;
}

// Unbounded BFS from each owner over the whole graph, then restricted to
// owner targets within max_hops.
inline HopTable all_pairs_oracle(const EdgeList& edges, const std::vector<AccountId>& owners, std::uint32_t max_hops) {
    const auto adj = adjacency_of(edges);
    const std::set<AccountId> owner_set(owners.begin(), owners.end());
    HopTable out;
    for (const auto& root : owner_set) {
        std::map<AccountId, std::uint32_t> dist{{root, 0}};
        std::deque<AccountId> queue{root};
        while (!queue.empty()) {
            const auto v = queue.front();
            queue.pop_front();
            auto it = adj.find(v);
            if (it == adj.end())
                continue;
            for (const auto& u : it->second)
                if (dist.try_emplace(u, dist[v] + 1).second)
                    queue.push_back(u);
        }
        for (const auto& [u, d] : dist)
            if (u != root && d <= max_hops && owner_set.contains(u))
                out[root][u] = d;
    }
    return out;
}

inline HopTable hop_table(const LinkabilityNetwork& ln) {
    HopTable out;
    for (const auto& e : ln.edges())
        out[e.src][e.dst] = e.hops;
    return out;
}

// Literal pairwise loop: repeatedly scan pairs of sets, merging S_b into S_a
// whenever any member of one is linked to any member of the other, until a
// full scan merges nothing.
inline std::vector<std::vector<AccountId>> naive_link_clustering(std::vector<std::set<AccountId>> sets,
                                                                 const LinkabilityNetwork& ln,
                                                                 std::uint32_t max_link_hops) {
    auto are_any_linked = [&](const std::set<AccountId>& a, const std::set<AccountId>& b) {
        for (const auto& x : a)
            for (const auto& y : b)
                if (ln.linked(x, y, max_link_hops))
                    return true;
        return false;
    };
    bool linked = true;
    while (linked) {
        linked = false;
        for (std::size_t a = 0; a < sets.size(); ++a) {
            for (std::size_t b = a + 1; b < sets.size();) {
                if (are_any_linked(sets[a], sets[b])) {
                    sets[a].insert(sets[b].begin(), sets[b].end());
                    sets.erase(sets.begin() + static_cast<std::ptrdiff_t>(b));
                    linked = true;
                } else {
                    ++b;
                }
            }
        }
    }
    std::vector<std::vector<AccountId>> blocks;
    for (const auto& s : sets)
        blocks.emplace_back(s.begin(), s.end());
    std::sort(blocks.begin(), blocks.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return blocks;
}

// Repeatedly merges any two sets sharing an element.
inline std::vector<std::set<AccountId>> naive_merge_common(std::vector<std::set<AccountId>> sets) {
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t a = 0; a < sets.size() && !merged; ++a)
            for (std::size_t b = a + 1; b < sets.size() && !merged; ++b) {
                const bool overlap = std::any_of(sets[b].begin(), sets[b].end(),
                                                 [&](const AccountId& x) { return sets[a].contains(x); });
                if (overlap) {
                    sets[a].insert(sets[b].begin(), sets[b].end());
                    sets.erase(sets.begin() + static_cast<std::ptrdiff_t>(b));
                    merged = true;
                }
            }
    }
    return sets;
}

inline std::vector<std::vector<AccountId>> canonical(std::vector<std::set<AccountId>> sets) {
    std::vector<std::vector<AccountId>> blocks;
    for (const auto& s : sets)
        if (!s.empty())
            blocks.emplace_back(s.begin(), s.end());
    std::sort(blocks.begin(), blocks.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return blocks;
}

struct RandomGraph {
    EdgeList edges;
    std::vector<AccountId> owners;
};

// Up to `vertices` accounts and `edges` directed edges (duplicates and
// self-loops included on purpose), with up to `owners` owners.
inline RandomGraph random_graph(std::mt19937_64& rng, std::uint32_t vertices, std::uint32_t edges, std::uint32_t owners) {
    RandomGraph g;
    auto pick = [&](std::uint32_t n) { return static_cast<std::uint32_t>(rng() % n); };
    const std::uint32_t n = 2 + pick(vertices - 1);
    const std::uint32_t m = pick(edges + 1);
    for (std::uint32_t i = 0; i < m; ++i)
        g.edges.emplace_back(acct(pick(n)), acct(pick(n)));
    const std::uint32_t k = 1 + pick(owners);
    for (std::uint32_t i = 0; i < k; ++i)
        g.owners.push_back(acct(pick(n + 5))); // some owners are not in the graph
    return g;
}

} // namespace washtrace::testing
