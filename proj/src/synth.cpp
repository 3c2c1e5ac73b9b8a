#include "washtrace/synth.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <unordered_set>

#include <fmt/format.h>

#include "washtrace/csv.hpp"
#include "washtrace/errors.hpp"
#include "washtrace/ingest.hpp"

namespace washtrace {

namespace {

// Empty call data marks a plain value transfer.
constexpr std::string_view plain_input = "0x";
constexpr std::string_view token_call_input =
    "0xa9059cbb000000000000000000000000000000000000000000000000000000000000beef";

constexpr std::uint64_t first_block = 4'000'000;
constexpr std::uint64_t last_block = 15'000'000;
constexpr std::uint64_t genesis_time = 1'438'269'973;
constexpr std::uint64_t seconds_per_block = 13;
constexpr std::uint64_t trades_per_honest_token = 5;

// mt19937_64 output is fully specified by the standard; the std
// distributions are not, so ranges are mapped by hand.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }
    std::uint64_t below(std::uint64_t n) { return n ? engine_() % n : 0; }
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

class AccountFactory {
public:
    explicit AccountFactory(Stream& rng) : rng_(rng) {}

    AccountId fresh() {
        for (;;) {
            AccountId::bytes_type b{};
            for (std::size_t i = 0; i < b.size(); i += 8) {
                const auto word = rng_.next();
                for (std::size_t k = 0; k < 8 && i + k < b.size(); ++k)
                    b[i + k] = static_cast<std::uint8_t>(word >> (8 * k));
            }
            AccountId a(b);
            if (used_.insert(a).second)
                return a;
        }
    }

    std::vector<AccountId> fresh(std::uint64_t n) {
        std::vector<AccountId> out;
        out.reserve(n);
        for (std::uint64_t i = 0; i < n; ++i)
            out.push_back(fresh());
        return out;
    }

private:
    Stream& rng_;
    std::unordered_set<AccountId> used_;
};

double price(Stream& rng, double base) {
    return std::round(base * (0.5 + rng.unit()) * 100.0) / 100.0;
}

std::string wei(Stream& rng) {
    return std::to_string(1 + rng.below(10'000'000'000'000ull) * 1'000'000);
}

// Appends an event continuing the chain of blocks for one token.
struct TraceCursor {
    NftTrace& trace;
    std::uint64_t block;

    void push(Stream& rng, const AccountId& from, const AccountId& to, double value) {
        block += rng.between(1, 5000);
        TraceEvent e;
        e.token_id = trace.token_id;
        e.seq = static_cast<std::uint32_t>(trace.events.size());
        e.from = from;
        e.to = to;
        e.value_usd = value;
        e.block_number = block;
        e.log_index = rng.below(300);
        e.timestamp = genesis_time + block * seconds_per_block;
        trace.events.push_back(e);
    }
};

} // namespace

void validate(const SynthConfig& c) {
    if (c.ring_count > 0 && c.ring_size < 2)
        throw data_error("ring_size must be at least 2 when ring_count > 0");
    if (c.ring_size_max != 0 && c.ring_size_max < c.ring_size)
        throw data_error("ring_size_max must not be below ring_size");
    if (c.trades_per_ring > 0 && c.ring_count > 0 && c.ring_size < 2)
        throw data_error("trades_per_ring > 0 requires ring_size >= 2");
    if (c.link_path_hops < 1)
        throw data_error("link_path_hops must be at least 1");
    if (c.honest_trades > 0 && c.honest_accounts < 2)
        throw data_error("honest_trades > 0 requires at least 2 honest accounts");
    if (!(c.price_base_usd > 0.0) || !std::isfinite(c.price_base_usd))
        throw data_error("price_base_usd must be positive");
    if (c.collection.empty())
        throw data_error("collection name must not be empty");
}

SynthData generate(const SynthConfig& config) {
    validate(config);
    Stream rng(config.seed);
    AccountFactory accounts(rng);
    SynthData out;

    const auto honest = accounts.fresh(config.honest_accounts);

    std::vector<std::vector<AccountId>> rings;
    for (std::uint64_t r = 0; r < config.ring_count; ++r) {
        const auto hi = std::max(config.ring_size, config.ring_size_max);
        rings.push_back(accounts.fresh(rng.between(config.ring_size, hi)));
    }

    auto& rows = out.transactions;
    auto block = [&] { return rng.between(first_block, last_block); };

    // Private chains: member i -> x1 -> ... -> member j, for every i < j.
    for (const auto& ring : rings) {
        for (std::size_t i = 0; i < ring.size(); ++i) {
            for (std::size_t j = i + 1; j < ring.size(); ++j) {
                AccountId prev = ring[i];
                for (std::uint32_t h = 1; h < config.link_path_hops; ++h) {
                    const auto mid = accounts.fresh();
                    rows.push_back({prev, mid, wei(rng), std::string(plain_input), block()});
                    prev = mid;
                }
                rows.push_back({prev, ring[j], wei(rng), std::string(plain_input), block()});
            }
        }
    }

    // Background traffic never enters an owner account. Noise rows between
    // honest accounts are contract calls or zero-value transfers, which the
    // ingest filter must drop.
    std::vector<AccountId> senders = honest;
    for (const auto& ring : rings)
        senders.insert(senders.end(), ring.begin(), ring.end());
    const auto pool = accounts.fresh(config.background_tx ? std::max<std::uint64_t>(16, config.background_tx / 4) : 0);
    for (std::uint64_t t = 0; t < config.background_tx; ++t) {
        const auto kind = rng.below(20);
        if (kind < 2 && honest.size() >= 2) {
            const auto ia = rng.below(honest.size());
            const auto& a = honest[ia];
            const auto& b = honest[(ia + 1 + rng.below(honest.size() - 1)) % honest.size()];
            if (kind == 0)
                rows.push_back({a, b, wei(rng), std::string(token_call_input), block()});
            else
                rows.push_back({a, b, "0", std::string(plain_input), block()});
        } else if (kind < 11 && !senders.empty()) {
            rows.push_back({senders[rng.below(senders.size())], pool[rng.below(pool.size())], wei(rng),
                            std::string(plain_input), block()});
        } else {
            const auto a = pool[rng.below(pool.size())];
            const auto b = pool[rng.below(pool.size())];
            rows.push_back({a, b, wei(rng), std::string(plain_input), block()});
        }
    }

    GraphBuilder builder;
    for (const auto& row : rows)
        if (row.input == plain_input && row.value != "0")
            builder.add_edge(row.from, row.to);
    out.graph = builder.build();

    auto& traces = out.traces[config.collection];
    std::uint64_t next_token = 1;

    for (const auto& ring : rings) {
        out.truth.colluding_accounts.push_back(ring);
        std::sort(out.truth.colluding_accounts.back().begin(), out.truth.colluding_accounts.back().end());
        if (config.trades_per_ring == 0)
            continue;
        NftTrace trace;
        trace.token_id = next_token++;
        TraceCursor cursor{trace, rng.between(10'000'000, 12'000'000)};
        // Cyclic trades m0 -> m1 -> ... -> m0 at rising prices.
        for (std::uint64_t k = 0; k < config.trades_per_ring; ++k) {
            const auto& from = ring[k % ring.size()];
            const auto& to = ring[(k + 1) % ring.size()];
            const double value = std::round(config.price_base_usd * (1.0 + 0.25 * k) * 100.0) / 100.0;
            cursor.push(rng, from, to, value);
            out.truth.wash_events.push_back({trace.token_id, trace.events.back().seq});
        }
        if (!honest.empty())
            cursor.push(rng, trace.events.back().to, honest[rng.below(honest.size())],
                        price(rng, config.price_base_usd * 2.0));
        traces.push_back(std::move(trace));
    }

    for (std::uint64_t done = 0; done < config.honest_trades;) {
        NftTrace trace;
        trace.token_id = next_token++;
        TraceCursor cursor{trace, rng.between(10'000'000, 12'000'000)};
        const auto n = std::min({trades_per_honest_token, config.honest_trades - done,
                                 static_cast<std::uint64_t>(honest.size() - 1)});
        std::vector<AccountId> holders{honest[rng.below(honest.size())]};
        for (std::uint64_t k = 0; k < n; ++k) {
            AccountId buyer;
            do {
                buyer = honest[rng.below(honest.size())];
            } while (std::find(holders.begin(), holders.end(), buyer) != holders.end());
            cursor.push(rng, holders.back(), buyer, price(rng, config.price_base_usd));
            holders.push_back(buyer);
        }
        done += n;
        traces.push_back(std::move(trace));
    }

    std::unordered_set<AccountId> owner_set;
    for (const auto& t : traces)
        for (const auto& e : t.events) {
            owner_set.insert(e.from);
            owner_set.insert(e.to);
        }
    out.owners.assign(owner_set.begin(), owner_set.end());
    std::sort(out.owners.begin(), out.owners.end());
    std::sort(out.truth.wash_events.begin(), out.truth.wash_events.end());
    return out;
}

nlohmann::json to_json(const GroundTruth& truth) {
    nlohmann::json events = nlohmann::json::array();
    for (const auto& e : truth.wash_events)
        events.push_back({{"token_id", e.token_id}, {"seq", e.seq}});
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& ring : truth.colluding_accounts) {
        nlohmann::json members = nlohmann::json::array();
        for (const auto& a : ring)
            members.push_back(a.hex());
        groups.push_back(std::move(members));
    }
    return {{"wash_events", std::move(events)}, {"colluding_accounts", std::move(groups)}};
}

GroundTruth ground_truth_from_json(const nlohmann::json& j) {
    GroundTruth t;
    try {
        for (const auto& e : j.at("wash_events"))
            t.wash_events.push_back({e.at("token_id").get<std::uint64_t>(), e.at("seq").get<std::uint32_t>()});
        for (const auto& ring : j.at("colluding_accounts")) {
            auto& members = t.colluding_accounts.emplace_back();
            for (const auto& a : ring)
                members.push_back(parse_account(a.get<std::string>()));
        }
    } catch (const nlohmann::json::exception& e) {
        throw data_error(std::string("malformed ground truth: ") + e.what());
    } catch (const account_error& e) {
        throw data_error(std::string("malformed ground truth: ") + e.what());
    }
    std::sort(t.wash_events.begin(), t.wash_events.end());
    return t;
}

void write_transactions_csv(std::ostream& out, const std::vector<TxRow>& rows) {
    out << "from_address,to_address,value,input,block_number\n";
    for (const auto& r : rows)
        out << r.from.hex() << ',' << r.to.hex() << ',' << r.value << ',' << r.input << ',' << r.block_number << '\n';
}

void write_owners(std::ostream& out, const std::vector<AccountId>& owners) {
    for (const auto& a : owners)
        out << a.hex() << '\n';
}

namespace {

template <class Fn>
void write_file(const std::filesystem::path& path, Fn&& fn) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot open for writing: " + path.string());
    fn(out);
    if (!out.flush())
        throw io_error("write failed: " + path.string());
}

} // namespace

void write_synth_files(const SynthData& data, const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw io_error("cannot create directory " + dir + ": " + ec.message());
    const std::filesystem::path base(dir);
    write_file(base / "transactions.csv", [&](std::ostream& o) { write_transactions_csv(o, data.transactions); });
    write_file(base / "traces.csv", [&](std::ostream& o) { write_traces_csv(o, data.traces); });
    write_file(base / "owners.txt", [&](std::ostream& o) { write_owners(o, data.owners); });
    write_file(base / "ground_truth.json", [&](std::ostream& o) { o << to_json(data.truth).dump(2) << '\n'; });
}

std::vector<AccountId> read_owners(std::istream& in) {
    std::vector<AccountId> out;
    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = trim(line);
        if (text.empty() || text.front() == '#')
            continue;
        AccountId a;
        if (!try_parse_account(text, a))
            throw data_error(fmt::format("owners line {}: malformed address '{}'", line_no, text));
        out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<AccountId> load_owners(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw io_error("cannot open for reading: " + path);
    return read_owners(in);
}

} // namespace washtrace
