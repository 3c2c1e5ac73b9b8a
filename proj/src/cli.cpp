#include "washtrace/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <tuple>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "washtrace/detection.hpp"
#include "washtrace/errors.hpp"
#include "washtrace/ingest.hpp"
#include "washtrace/linkability.hpp"
#include "washtrace/report.hpp"
#include "washtrace/synth.hpp"

namespace washtrace::cli {

namespace {

constexpr const char* workers_env = "WASHTRACE_WORKERS";
constexpr std::size_t max_printed_warnings = 20;

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw io_error("cannot open for writing: " + path.string());
    out << text;
    if (!out.flush())
        throw io_error("write failed: " + path.string());
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw io_error("cannot create directory " + dir + ": " + ec.message());
}

void print_warnings(std::ostream& err, const std::vector<std::string>& warnings) {
    for (std::size_t i = 0; i < warnings.size() && i < max_printed_warnings; ++i)
        err << "warning: " << warnings[i] << '\n';
    if (warnings.size() > max_printed_warnings)
        err << "warning: " << warnings.size() - max_printed_warnings << " more warnings suppressed\n";
}

void emit_stats(std::ostream& err, const std::string& stats_out, const nlohmann::json& stats) {
    if (stats_out.empty())
        err << stats.dump() << '\n';
    else
        write_text(stats_out, stats.dump(2) + "\n");
}

// Collection names end up in file names.
std::string file_stem(const std::string& collection) {
    std::string s = collection;
    for (char& c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'))
            c = '_';
    return s.empty() ? "_" : s;
}

struct BuildArgs {
    std::string transactions, owners, exclusions, out, stats_out;
    std::uint32_t max_hops = default_max_hops;
    std::uint64_t max_block = pos_cutoff_block;
    bool no_cutoff = false;
    unsigned workers = 0;
};

struct DetectArgs {
    std::string traces, linkability, out_dir, format = "csv", stats_out;
    std::uint32_t max_link_hops = default_max_hops;
    bool strict = false;
    bool dot = false;
    unsigned workers = 0;
};

struct SweepArgs {
    std::string traces, linkability, out, stats_out;
    std::uint32_t h_max = 20;
    unsigned workers = 0;
};

struct SynthArgs {
    SynthConfig config;
    std::string out_dir;
};

int build_linkability(const BuildArgs& a, std::ostream& out, std::ostream& err) {
    std::vector<std::string> warnings;
    ExclusionList exclusions;
    if (!a.exclusions.empty())
        exclusions = load_exclusions(a.exclusions, &warnings);
    const auto owners = load_owners(a.owners);
    auto load = load_transactions(a.transactions, exclusions,
                                  a.no_cutoff ? std::nullopt : std::optional<std::uint64_t>(a.max_block));
    warnings.insert(warnings.end(), load.warnings.begin(), load.warnings.end());
    print_warnings(err, warnings);

    const auto ln = build_linkability_network(load.graph, owners, {a.max_hops, a.workers});
    save_linkability_csv(a.out, ln);

    auto stats = to_json(load.stats);
    stats["exclusions"] = exclusions.size();
    stats["vertices"] = load.graph.vertex_count();
    stats["edges"] = load.graph.edge_count();
    stats["owners"] = owners.size();
    stats["links"] = ln.size();
    emit_stats(err, a.stats_out, stats);
    out << "wrote " << ln.size() << " links to " << a.out << '\n';
    return ok;
}

int detect(const DetectArgs& a, std::ostream& out, std::ostream& err) {
    const auto format = parse_table_format(a.format);
    if (!format) {
        err << "--format must be one of csv, json, text\n";
        return usage;
    }
    auto traces = load_traces(a.traces);
    print_warnings(err, traces.warnings);
    const auto ln = load_linkability_csv(a.linkability);
    if (a.max_link_hops > ln.max_hops())
        throw data_error("--max-link-hops " + std::to_string(a.max_link_hops) +
                         " exceeds the linkability file's max_hops " + std::to_string(ln.max_hops()));
    ensure_dir(a.out_dir);
    const std::filesystem::path dir(a.out_dir);
    const DetectionConfig config{a.max_link_hops, a.strict};

    std::vector<CollectionSummary> summaries;
    auto flagged = nlohmann::json::array();
    std::uint64_t total_flagged = 0;
    for (const auto& [collection, list] : traces.traces) {
        auto result = collection_report(collection, list, ln, config, a.workers);
        const auto stem = file_stem(collection);
        write_text(dir / (stem + "_stats." + std::string(extension(*format))),
                   render_stats_table(result.reports, *format));
        write_text(dir / (stem + "_histogram.csv"), render_histogram(result.summary));

        auto by_token = result.reports;
        std::sort(by_token.begin(), by_token.end(),
                  [](const WashReport& x, const WashReport& y) { return x.token_id < y.token_id; });
        for (const auto& r : by_token) {
            for (auto seq : r.flagged_events)
                flagged.push_back({{"collection", collection}, {"token_id", r.token_id}, {"seq", seq}});
            total_flagged += r.wash_sales;
        }

        if (a.dot) {
            ensure_dir((dir / "dot").string());
            for (const auto& r : by_token) {
                if (r.wash_sales == 0)
                    continue;
                auto it = std::lower_bound(list.begin(), list.end(), r.token_id,
                                           [](const NftTrace& t, std::uint64_t id) { return t.token_id < id; });
                write_text(dir / "dot" / (stem + "_" + std::to_string(r.token_id) + ".dot"),
                           export_token_dot(*it, ln, r));
            }
        }
        summaries.push_back(result.summary);
    }
    write_text(dir / "volume_summary.csv", render_volume_summary(summaries));
    write_text(dir / "flagged_events.json", nlohmann::json{{"wash_events", flagged}}.dump(2) + "\n");

    auto stats = to_json(traces.stats);
    stats["links"] = ln.size();
    stats["flagged"] = total_flagged;
    emit_stats(err, a.stats_out, stats);
    out << "flagged " << total_flagged << " wash sales across " << traces.stats.tokens << " tokens\n";
    return ok;
}

int sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    auto traces = load_traces(a.traces);
    print_warnings(err, traces.warnings);
    const auto ln = load_linkability_csv(a.linkability);
    std::vector<NftTrace> all;
    for (auto& [collection, list] : traces.traces)
        std::move(list.begin(), list.end(), std::back_inserter(all));
    const auto rows = depth_sweep(all, ln, a.h_max, a.workers);
    write_text(a.out, render_sweep(rows));
    emit_stats(err, a.stats_out, to_json(traces.stats));
    out << "wrote " << rows.size() << " sweep rows to " << a.out << '\n';
    return ok;
}

int synth(const SynthArgs& a, std::ostream& out, std::ostream& err) {
    try {
        validate(a.config);
    } catch (const data_error& e) {
        err << "error: " << e.what() << '\n';
        return usage;
    }
    const auto data = generate(a.config);
    write_synth_files(data, a.out_dir);
    out << "wrote " << data.transactions.size() << " transactions, " << data.owners.size() << " owners, "
        << data.truth.wash_events.size() << " planted wash sales to " << a.out_dir << '\n';
    return ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"NFT wash-trade detection over ownership traces and account linkability"};
    app.name(args.empty() ? "washtrace" : args.front());
    app.require_subcommand(1);

    BuildArgs build;
    auto* build_cmd = app.add_subcommand("build-linkability", "Build the owner linkability network");
    build_cmd->add_option("--transactions", build.transactions, "Transactions CSV")->required();
    build_cmd->add_option("--owners", build.owners, "Owner addresses, one per line")->required();
    build_cmd->add_option("--exclusions", build.exclusions, "Addresses to drop (exchanges, pools)");
    build_cmd->add_option("--max-hops", build.max_hops, "Longest transaction path that links two owners")
        ->check(CLI::Range(1u, 255u))
        ->capture_default_str();
    build_cmd->add_option("--max-block", build.max_block, "Ignore transactions after this block")
        ->capture_default_str();
    build_cmd->add_flag("--no-max-block", build.no_cutoff, "Keep transactions from every block");
    build_cmd->add_option("--workers", build.workers, "BFS threads (0 = all cores)")->envname(workers_env);
    build_cmd->add_option("--out", build.out, "Output linkability CSV")->required();
    build_cmd->add_option("--stats-out", build.stats_out, "Write ingest statistics JSON here instead of stderr");

    DetectArgs det;
    auto* detect_cmd = app.add_subcommand("detect", "Flag wash sales in ownership traces");
    detect_cmd->add_option("--traces", det.traces, "Traces CSV")->required();
    detect_cmd->add_option("--linkability", det.linkability, "Linkability CSV")->required();
    detect_cmd->add_option("--max-link-hops", det.max_link_hops, "Links with at most this many hops cluster accounts")
        ->check(CLI::Range(1u, 255u))
        ->capture_default_str();
    detect_cmd->add_flag("--strict-paper,--strict", det.strict,
                         "Cluster only accounts joined by zero-value transfers before applying links");
    detect_cmd->add_option("--out-dir", det.out_dir, "Output directory")->required();
    detect_cmd->add_option("--format", det.format, "Stats table format: csv, json or text")->capture_default_str();
    detect_cmd->add_flag("--dot", det.dot, "Write a DOT graph for every token with wash sales");
    detect_cmd->add_option("--workers", det.workers, "Threads (0 = all cores)")->envname(workers_env);
    detect_cmd->add_option("--stats-out", det.stats_out, "Write ingest statistics JSON here instead of stderr");

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run detection at every link threshold 1..h-max");
    sweep_cmd->add_option("--traces", sw.traces, "Traces CSV")->required();
    sweep_cmd->add_option("--linkability", sw.linkability, "Linkability CSV")->required();
    sweep_cmd->add_option("--h-max", sw.h_max, "Largest threshold")->check(CLI::Range(1u, 255u))->capture_default_str();
    sweep_cmd->add_option("--out", sw.out, "Output CSV")->required();
    sweep_cmd->add_option("--workers", sw.workers, "Threads (0 = all cores)")->envname(workers_env);
    sweep_cmd->add_option("--stats-out", sw.stats_out, "Write ingest statistics JSON here instead of stderr");

    SynthArgs syn;
    auto& sc = syn.config;
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset with planted wash-trading rings");
    synth_cmd->add_option("--seed", sc.seed)->capture_default_str();
    synth_cmd->add_option("--out-dir", syn.out_dir)->required();
    synth_cmd->add_option("--honest-accounts", sc.honest_accounts)->capture_default_str();
    synth_cmd->add_option("--ring-count", sc.ring_count)->capture_default_str();
    synth_cmd->add_option("--ring-size", sc.ring_size)->capture_default_str();
    synth_cmd->add_option("--ring-size-max", sc.ring_size_max, "Upper bound for ring sizes (0 = ring-size)")
        ->capture_default_str();
    synth_cmd->add_option("--trades-per-ring", sc.trades_per_ring)->capture_default_str();
    synth_cmd->add_option("--honest-trades", sc.honest_trades)->capture_default_str();
    synth_cmd->add_option("--background-tx", sc.background_tx)->capture_default_str();
    synth_cmd->add_option("--link-path-hops", sc.link_path_hops)->capture_default_str();
    synth_cmd->add_option("--price-base-usd", sc.price_base_usd)->capture_default_str();
    synth_cmd->add_option("--collection", sc.collection)->capture_default_str();

    std::vector<std::string> rest(args.rbegin(), args.rend());
    if (!rest.empty())
        rest.pop_back();
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return usage;
    }

    try {
        if (build_cmd->parsed())
            return build_linkability(build, out, err);
        if (detect_cmd->parsed())
            return detect(det, out, err);
        if (sweep_cmd->parsed())
            return sweep(sw, out, err);
        if (synth_cmd->parsed())
            return synth(syn, out, err);
    } catch (const io_error& e) {
        err << "error: " << e.what() << '\n';
        return io;
    } catch (const data_error& e) {
        err << "error: " << e.what() << '\n';
        return data;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return io;
    }
    return usage;
}

} // namespace washtrace::cli
