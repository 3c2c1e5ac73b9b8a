#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "washtrace/account.hpp"
#include "washtrace/graph.hpp"

namespace washtrace {

// Default path length limit: transaction paths of up to 4 edges link two
// owners.
inline constexpr std::uint32_t default_max_hops = 4;

struct LinkEdge {
    AccountId src;
    AccountId dst;
    std::uint32_t hops = 0; // edges on the shortest src -> dst path

    bool operator==(const LinkEdge&) const = default;
};

// Owner-to-owner reachability within a hop budget. Edges are kept sorted by
// (src, dst); each ordered pair appears at most once.
class LinkabilityNetwork {
public:
    LinkabilityNetwork() = default;

    // Validates every edge (1 <= hops <= max_hops, src != dst, both endpoints
    // owners) and throws data_error otherwise. Sorts owners and edges.
    LinkabilityNetwork(std::vector<AccountId> owners, std::vector<LinkEdge> edges, std::uint32_t max_hops);

    std::uint32_t max_hops() const noexcept { return max_hops_; }
    const std::vector<AccountId>& owners() const noexcept { return owners_; }
    const std::vector<LinkEdge>& edges() const noexcept { return edges_; }
    std::size_t size() const noexcept { return edges_.size(); }

    std::span<const LinkEdge> links_from(const AccountId& src) const;
    std::optional<std::uint32_t> hops(const AccountId& src, const AccountId& dst) const;

    // Linked in either direction with hops <= limit.
    bool linked(const AccountId& a, const AccountId& b, std::uint32_t limit) const;

    bool operator==(const LinkabilityNetwork&) const = default;

private:
    std::vector<AccountId> owners_;
    std::vector<LinkEdge> edges_;
    std::uint32_t max_hops_ = 0;
};

struct BfsConfig {
    std::uint32_t max_hops = default_max_hops; // >= 1
    unsigned workers = 0;                      // 0 = hardware concurrency
};

// Owners reachable from root along out-edges within max_hops edges, with
// their exact shortest hop counts, sorted by address. A root that is not a
// graph vertex yields an empty result.
std::vector<std::pair<AccountId, std::uint32_t>> bfs_from_root(const TransactionGraph& graph,
                                                                const AccountId& root,
                                                                std::span<const AccountId> owners,
                                                                std::uint32_t max_hops);

// One depth-limited BFS per owner, run in parallel over roots. The result
// does not depend on the worker count.
LinkabilityNetwork build_linkability_network(const TransactionGraph& graph,
                                             std::span<const AccountId> owners,
                                             const BfsConfig& config);

// "# max_hops=N" line, then header src,dst,hops, then rows in (src,dst) order.
void write_linkability_csv(std::ostream& out, const LinkabilityNetwork& ln);
void save_linkability_csv(const std::string& path, const LinkabilityNetwork& ln);

// Reads the format above. Without a "# max_hops=N" line the construction
// depth is taken to be the largest hops value present. The owner set is the
// set of edge endpoints.
LinkabilityNetwork read_linkability_csv(std::istream& in);
LinkabilityNetwork load_linkability_csv(const std::string& path);

} // namespace washtrace
