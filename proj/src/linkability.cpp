#include "washtrace/linkability.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>

#include <fmt/format.h>

#include "washtrace/csv.hpp"
#include "washtrace/errors.hpp"
#include "washtrace/parallel.hpp"

namespace washtrace {

namespace {

bool edge_less(const LinkEdge& a, const LinkEdge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
}

class Bitset {
public:
    explicit Bitset(std::size_t n) : words_((n + 63) / 64, 0) {}
    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }

private:
    std::vector<std::uint64_t> words_;
};

// Per-worker scratch space, reused across roots.
struct BfsWorkspace {
    explicit BfsWorkspace(std::size_t n) : visited(n) {}

    Bitset visited;
    std::vector<vertex_id> seen; // every vertex marked during the current root
    std::vector<vertex_id> frontier;
    std::vector<vertex_id> next;
};

using RootHits = std::vector<std::pair<vertex_id, std::uint32_t>>;

// Level-synchronous BFS. A vertex is marked when first discovered, so the
// level it is discovered at is its shortest hop count.
RootHits bfs_hits(const TransactionGraph& graph, vertex_id root, const Bitset& owner_mask,
                  std::uint32_t max_hops, BfsWorkspace& ws) {
    RootHits hits;
    ws.seen.clear();
    ws.frontier.clear();
    ws.visited.set(root);
    ws.seen.push_back(root);
    ws.frontier.push_back(root);

    for (std::uint32_t hops = 1; hops <= max_hops && !ws.frontier.empty(); ++hops) {
        ws.next.clear();
        for (vertex_id v : ws.frontier) {
            for (vertex_id u : graph.out_neighbors(v)) {
                if (ws.visited.test(u))
                    continue;
                ws.visited.set(u);
                ws.seen.push_back(u);
                ws.next.push_back(u);
                if (owner_mask.test(u))
                    hits.emplace_back(u, hops);
            }
        }
        std::swap(ws.frontier, ws.next);
    }

    for (vertex_id v : ws.seen)
        ws.visited.reset(v);
    std::sort(hits.begin(), hits.end());
    return hits;
}

Bitset owner_mask_for(const TransactionGraph& graph, std::span<const AccountId> owners) {
    Bitset mask(graph.vertex_count());
    for (const auto& a : owners)
        if (auto v = graph.find(a))
            mask.set(*v);
    return mask;
}

std::vector<AccountId> sorted_unique(std::span<const AccountId> accounts) {
    std::vector<AccountId> out(accounts.begin(), accounts.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

LinkabilityNetwork::LinkabilityNetwork(std::vector<AccountId> owners, std::vector<LinkEdge> edges,
                                       std::uint32_t max_hops)
    : owners_(std::move(owners)), edges_(std::move(edges)), max_hops_(max_hops) {
    std::sort(owners_.begin(), owners_.end());
    owners_.erase(std::unique(owners_.begin(), owners_.end()), owners_.end());
    std::sort(edges_.begin(), edges_.end(), edge_less);

    auto is_owner = [&](const AccountId& a) { return std::binary_search(owners_.begin(), owners_.end(), a); };
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        if (e.hops < 1 || e.hops > max_hops_)
            throw data_error(fmt::format("link {} -> {} has hops {} outside 1..{}", e.src.hex(), e.dst.hex(),
                                         e.hops, max_hops_));
        if (e.src == e.dst)
            throw data_error("self link on " + e.src.hex());
        if (!is_owner(e.src) || !is_owner(e.dst))
            throw data_error(fmt::format("link {} -> {} has an endpoint outside the owner set", e.src.hex(),
                                         e.dst.hex()));
        if (i > 0 && edges_[i - 1].src == e.src && edges_[i - 1].dst == e.dst)
            throw data_error(fmt::format("duplicate link {} -> {}", e.src.hex(), e.dst.hex()));
    }
}

std::span<const LinkEdge> LinkabilityNetwork::links_from(const AccountId& src) const {
    auto lo = std::partition_point(edges_.begin(), edges_.end(), [&](const LinkEdge& e) { return e.src < src; });
    auto hi = std::partition_point(lo, edges_.end(), [&](const LinkEdge& e) { return e.src == src; });
    return {lo, hi};
}

std::optional<std::uint32_t> LinkabilityNetwork::hops(const AccountId& src, const AccountId& dst) const {
    auto links = links_from(src);
    auto it = std::partition_point(links.begin(), links.end(), [&](const LinkEdge& e) { return e.dst < dst; });
    if (it == links.end() || it->dst != dst)
        return std::nullopt;
    return it->hops;
}

bool LinkabilityNetwork::linked(const AccountId& a, const AccountId& b, std::uint32_t limit) const {
    auto ab = hops(a, b);
    if (ab && *ab <= limit)
        return true;
    auto ba = hops(b, a);
    return ba && *ba <= limit;
}

std::vector<std::pair<AccountId, std::uint32_t>> bfs_from_root(const TransactionGraph& graph,
                                                                const AccountId& root,
                                                                std::span<const AccountId> owners,
                                                                std::uint32_t max_hops) {
    std::vector<std::pair<AccountId, std::uint32_t>> out;
    auto r = graph.find(root);
    if (!r || max_hops == 0)
        return out;
    BfsWorkspace ws(graph.vertex_count());
    for (auto [v, hops] : bfs_hits(graph, *r, owner_mask_for(graph, owners), max_hops, ws))
        out.emplace_back(graph.account(v), hops);
    return out;
}

LinkabilityNetwork build_linkability_network(const TransactionGraph& graph, std::span<const AccountId> owners,
                                             const BfsConfig& config) {
    if (config.max_hops < 1)
        throw data_error("max_hops must be at least 1");

    auto owner_list = sorted_unique(owners);
    const Bitset mask = owner_mask_for(graph, owner_list);

    std::vector<vertex_id> roots;
    for (const auto& a : owner_list)
        if (auto v = graph.find(a))
            roots.push_back(*v);

    std::vector<RootHits> per_root(roots.size());
    const unsigned workers = std::min<unsigned>(resolve_workers(config.workers),
                                                static_cast<unsigned>(std::max<std::size_t>(roots.size(), 1)));
    std::vector<std::unique_ptr<BfsWorkspace>> spaces(workers);
    parallel_for(roots.size(), workers, [&](unsigned w, std::size_t i) {
        if (!spaces[w])
            spaces[w] = std::make_unique<BfsWorkspace>(graph.vertex_count());
        per_root[i] = bfs_hits(graph, roots[i], mask, config.max_hops, *spaces[w]);
    });
    spaces.clear();

    // Roots are in address order and each root's hits are too, so the merged
    // edge list is already sorted by (src, dst).
    std::vector<LinkEdge> edges;
    std::size_t total = 0;
    for (const auto& hits : per_root)
        total += hits.size();
    edges.reserve(total);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        for (auto [v, hops] : per_root[i])
            edges.push_back({graph.account(roots[i]), graph.account(v), hops});
        RootHits().swap(per_root[i]);
    }
    return LinkabilityNetwork(std::move(owner_list), std::move(edges), config.max_hops);
}

void write_linkability_csv(std::ostream& out, const LinkabilityNetwork& ln) {
    out << "# max_hops=" << ln.max_hops() << '\n';
    out << "src,dst,hops\n";
    for (const auto& e : ln.edges())
        out << e.src.hex() << ',' << e.dst.hex() << ',' << e.hops << '\n';
}

void save_linkability_csv(const std::string& path, const LinkabilityNetwork& ln) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot open for writing: " + path);
    write_linkability_csv(out, ln);
    if (!out.flush())
        throw io_error("write failed: " + path);
}

LinkabilityNetwork read_linkability_csv(std::istream& in) {
    std::optional<std::uint32_t> declared;
    std::string line;
    std::uint64_t line_no = 0;

    // Leading comment lines, then the header.
    std::vector<std::string> fields;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        if (line.front() == '#') {
            constexpr std::string_view key = "max_hops=";
            auto pos = line.find(key);
            if (pos != std::string::npos) {
                std::uint32_t v = 0;
                auto begin = line.data() + pos + key.size();
                auto [p, ec] = std::from_chars(begin, line.data() + line.size(), v);
                if (ec != std::errc() || v == 0)
                    throw data_error("bad max_hops comment on line " + std::to_string(line_no));
                declared = v;
            }
            continue;
        }
        break;
    }
    if (line.empty() || line.front() == '#')
        throw data_error("linkability file has no header");
    const CsvHeader header(split_csv_line(line), {"src", "dst", "hops"});
    const auto src_col = header.at("src");
    const auto dst_col = header.at("dst");
    const auto hops_col = header.at("hops");

    std::vector<LinkEdge> edges;
    std::vector<AccountId> owners;
    std::uint32_t observed = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line.front() == '#')
            continue;
        split_csv_line(line, fields);
        LinkEdge e;
        if (fields.size() < header.width() || !try_parse_account(fields[src_col], e.src) ||
            !try_parse_account(fields[dst_col], e.dst) || !parse_unsigned(fields[hops_col], e.hops))
            throw data_error("malformed linkability row on line " + std::to_string(line_no));
        observed = std::max(observed, e.hops);
        owners.push_back(e.src);
        owners.push_back(e.dst);
        edges.push_back(e);
    }
    const std::uint32_t max_hops = declared ? *declared : std::max<std::uint32_t>(observed, 1);
    return LinkabilityNetwork(std::move(owners), std::move(edges), max_hops);
}

LinkabilityNetwork load_linkability_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open for reading: " + path);
    return read_linkability_csv(in);
}

} // namespace washtrace
