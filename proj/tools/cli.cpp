// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <walletscope/graph.hpp>
#include <walletscope/parallel.hpp>
#include <walletscope/rpc.hpp>
#include <walletscope/store.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>

#ifndef WALLETSCOPE_DEFAULT_RULES
#define WALLETSCOPE_DEFAULT_RULES "data/blueprints.rules"
#endif

namespace walletscope::cli
{
namespace
{
struct usage_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct Context
{
    Config config;
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    bool verbose = false;
};

/// Either stdin ("-") or an opened file.
class Input
{
public:
    Input(const std::string& path, std::istream& stdin_stream) : name_{path}
    {
        if (path == "-")
        {
            stream_ = &stdin_stream;
            return;
        }
        file_ = std::make_unique<std::ifstream>(path);
        if (!*file_)
            throw io_error{"cannot open " + path};
        stream_ = file_.get();
    }

    std::istream& stream() noexcept { return *stream_; }
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
    std::unique_ptr<std::ifstream> file_;
    std::istream* stream_ = nullptr;
};

void report_diagnostics(Context& ctx, const std::string& source, std::span<const Diagnostic> diags)
{
    for (const auto& d : diags)
        ctx.err << source << ':' << d.line << ": " << d.message << '\n';
}

std::string rules_path(const Context& ctx)
{
    return ctx.config.rules.empty() ? std::string{WALLETSCOPE_DEFAULT_RULES} : ctx.config.rules;
}

RpcClient rpc_client(const Context& ctx)
{
    if (ctx.config.rpc_url.empty())
        throw usage_error{"no RPC endpoint: set --rpc-url or WALLETSCOPE_RPC_URL"};
    try
    {
        return RpcClient{RpcEndpoint::parse(ctx.config.rpc_url)};
    }
    catch (const std::invalid_argument& e)
    {
        throw usage_error{e.what()};
    }
}

/// Adds creator information from the registry to stored address records.
void refresh_creators(Store& store)
{
    std::vector<AddressRecord> updates;
    for (const auto& [a, r] : store.addresses())
    {
        const auto* c = store.registry().find(a);
        if (!c || !c->creator)
            continue;
        if (r.creator == c->creator && r.creation_block == c->creation_block)
            continue;
        auto u = r;
        u.creator = c->creator;
        u.creation_block = c->creation_block;
        u.classification.reset();
        u.usage.reset();
        updates.push_back(std::move(u));
    }
    for (const auto& u : updates)
        store.put_address(u);
}

void add_code(Store& store, const Address& a, const Bytecode& code)
{
    const auto& rec = store.put_code(code);
    AddressRecord r;
    r.address = a;
    r.code_hash = rec.code_hash;
    if (const auto* old = store.get_address(a))
    {
        r.creator = old->creator;
        r.creation_block = old->creation_block;
    }
    store.put_address(r);
}

int cmd_ingest_code(Context& ctx, const std::string& file, bool creation, bool from_rpc)
{
    auto store = Store::open(ctx.config.store);
    Input input{file, ctx.in};
    const auto source = creation ? CodeSource::creation : CodeSource::deployed;
    const auto codes_before = store.codes().size();

    std::optional<RpcClient> client;
    if (from_rpc)
        client = rpc_client(ctx);

    size_t ingested = 0;
    std::vector<Diagnostic> diags;
    std::string line;
    size_t line_no = 0;
    while (std::getline(input.stream(), line))
    {
        ++line_no;
        const auto fields = split_whitespace(line);
        if (fields.empty() || fields[0][0] == '#')
            continue;
        try
        {
            const auto a = Address::from_hex(fields[0]);
            Bytecode code;
            if (from_rpc)
            {
                if (fields.size() != 1)
                    throw hex_error{"expected '<address>'"};
                code = {client->get_code(a), source};
            }
            else
            {
                if (fields.size() != 2)
                    throw hex_error{"expected '<address> <hex code>'"};
                code = Bytecode::from_hex(fields[1], source);
            }
            if (code.code.empty())
            {
                diags.push_back({line_no, a.hex() + " has no code"});
                continue;
            }
            add_code(store, a, code);
            ++ingested;
        }
        catch (const hex_error& e)
        {
            diags.push_back({line_no, e.what()});
        }
    }
    refresh_creators(store);
    store.flush();
    report_diagnostics(ctx, input.name(), diags);
    ctx.out << "addresses\t" << ingested << '\n'
            << "new_codes\t" << store.codes().size() - codes_before << '\n'
            << "rejected\t" << diags.size() << '\n';
    return exit_ok;
}

std::pair<uint64_t, uint64_t> parse_block_range(const std::string& text)
{
    const auto parts = split(text, ':');
    try
    {
        if (parts.size() == 1)
            return {std::stoull(parts[0]), std::stoull(parts[0])};
        if (parts.size() == 2)
        {
            const auto a = std::stoull(parts[0]), b = std::stoull(parts[1]);
            if (a <= b)
                return {a, b};
        }
    }
    catch (const std::logic_error&)
    {
    }
    throw usage_error{"invalid block range '" + text + "', expected FROM[:TO]"};
}

int cmd_ingest_traces(Context& ctx, const std::string& file, const std::string& blocks)
{
    auto store = Store::open(ctx.config.store);
    TraceLoad load;
    std::string source = file;
    if (!blocks.empty())
    {
        auto client = rpc_client(ctx);
        const auto [first, last] = parse_block_range(blocks);
        for (auto b = first; b <= last; ++b)
        {
            auto msgs = client.trace_block(b);
            load.messages.insert(load.messages.end(), msgs.begin(), msgs.end());
        }
        source = "rpc";
    }
    else
    {
        Input input{file, ctx.in};
        load = parse_traces(input.stream());
    }
    const auto added = store.put_messages(load.messages);
    refresh_creators(store);
    store.flush();
    report_diagnostics(ctx, source, load.diagnostics);
    ctx.out << "messages\t" << added << '\n'
            << "rejected\t" << load.diagnostics.size() << '\n'
            << "contracts\t" << store.registry().contracts().size() << '\n';
    return exit_ok;
}

int cmd_ingest_events(Context& ctx, const std::string& file)
{
    auto store = Store::open(ctx.config.store);
    Input input{file, ctx.in};
    const auto load = parse_events(input.stream());
    const auto added = store.put_events(load.events);
    store.flush();
    report_diagnostics(ctx, input.name(), load.diagnostics);
    ctx.out << "events\t" << added << '\n' << "rejected\t" << load.diagnostics.size() << '\n';
    return exit_ok;
}

int cmd_skeleton(Context& ctx, const std::string& file, bool creation)
{
    Input input{file, ctx.in};
    const auto codes = read_hex_lines(
        input.stream(), creation ? CodeSource::creation : CodeSource::deployed);
    const auto lines = parallel_map(codes, ctx.config.jobs, [](const Bytecode& c) {
        const auto s = skeletonize(c);
        return to_hex(s.bytes) + ' ' + s.hash.hex();
    });
    for (const auto& l : lines)
        ctx.out << l << '\n';
    return exit_ok;
}

std::optional<SignatureDirectory> load_optional_directory(Context& ctx, const std::string& path)
{
    if (path.empty())
        return std::nullopt;
    auto load = load_directory(path);
    report_diagnostics(ctx, path, load.diagnostics);
    return std::move(load.directory);
}

std::string resolution_field(const InterfaceSet& iface, const SignatureDirectory& dir)
{
    std::string out;
    for (const auto& e : restore_headers(iface, dir).entries)
    {
        if (!out.empty())
            out += ' ';
        out += e.selector.str();
        out += '=';
        if (!e.resolved())
            out += '?';
        for (size_t i = 0; i < e.headers.size(); ++i)
            out += (i ? "|" : "") + e.headers[i].text();
    }
    return out;
}

int cmd_interface(Context& ctx, const std::string& file, const std::string& directory)
{
    Input input{file, ctx.in};
    const auto dir = load_optional_directory(ctx, directory);
    const auto codes = read_hex_lines(input.stream());
    const auto ifaces = parallel_map(codes, ctx.config.jobs,
        [](const Bytecode& c) { return extract_interface(c); });
    for (const auto& iface : ifaces)
    {
        ctx.out << iface.size() << '\t' << iface.str();
        if (dir)
            ctx.out << '\t' << resolution_field(iface, *dir);
        ctx.out << '\n';
    }
    return exit_ok;
}

std::vector<UsageProfile> usage_profiles(const Store& store)
{
    return build_usage_profiles(store.registry().messages(), store.events());
}

int cmd_rules(Context& ctx)
{
    ctx.out << format_blueprints(load_blueprints(rules_path(ctx)));
    return exit_ok;
}

int cmd_classify(Context& ctx)
{
    auto store = Store::open(ctx.config.store);
    const auto rules = load_blueprints(rules_path(ctx));
    const auto lookup = store.interface_lookup();
    const auto evidence = evaluate_trace_rules(store.registry(), rules, lookup);

    std::vector<Address> addresses;
    for (const auto& [a, r] : store.addresses())
        addresses.push_back(a);

    const TraceContext no_evidence;
    const auto results = parallel_map(addresses, ctx.config.jobs, [&](const Address& a) {
        const auto it = evidence.find(a);
        const auto& trace = it == evidence.end() ? no_evidence : it->second;
        return classify(*lookup(a), trace, rules);
    });

    std::map<Address, UsageBucket> buckets;
    for (const auto& p : usage_profiles(store))
        buckets[p.address] = p.bucket();

    for (size_t i = 0; i < addresses.size(); ++i)
    {
        const auto& a = addresses[i];
        const auto& c = results[i];
        store.set_classification(a, c);
        const auto b = buckets.find(a);
        store.set_usage(a, b == buckets.end() ? UsageBucket::unused : b->second);
        ctx.out << a.hex() << '\t';
        if (c)
            ctx.out << c->blueprint << '\t' << to_string(c->wallet_type) << '\n';
        else
            ctx.out << "none\t-\n";
    }
    store.flush();
    return exit_ok;
}

int cmd_factories(Context& ctx, const FactoryThresholds& thresholds, bool all)
{
    const auto store = Store::open(ctx.config.store);
    for (const auto& p : identify_factories(store.registry(), thresholds))
    {
        if (!all && !p.is_factory)
            continue;
        ctx.out << p.creator.hex() << '\t' << p.children << '\t' << p.distinct_skeletons() << '\t'
                << (p.is_factory ? "factory" : "-") << '\n';
    }
    return exit_ok;
}

int cmd_fuzz(Context& ctx, const std::vector<std::string>& seed_args, const std::string& names,
    std::vector<std::string> patterns, double theta, const std::string& directory)
{
    const auto store = Store::open(ctx.config.store);
    const auto dir = load_optional_directory(ctx, directory);
    const auto lookup = store.interface_lookup();

    std::set<Address> seed_addresses;
    for (const auto& s : seed_args)
    {
        try
        {
            seed_addresses.insert(Address::from_hex(s));
        }
        catch (const hex_error& e)
        {
            throw usage_error{"invalid seed address: " + std::string{e.what()}};
        }
    }
    if (!names.empty())
    {
        Input input{names, ctx.in};
        const auto corpus = parse_name_corpus(input.stream());
        if (patterns.empty())
            patterns = {"wallet", "Wallet"};
        for (const auto& c : filter_by_name(corpus, patterns))
            seed_addresses.insert(c.address);
    }

    std::vector<InterfaceSet> seeds;
    for (const auto& a : seed_addresses)
    {
        if (auto iface = lookup(a))
            seeds.push_back(std::move(*iface));
        else
            ctx.err << "seed " << a.hex() << " has no code in the store; skipped\n";
    }
    if (seeds.empty())
        throw usage_error{"no seed contract with code in the store"};

    std::vector<InterfaceSet> corpus;
    for (const auto& [a, r] : store.addresses())
        corpus.push_back(store.codes().at(r.code_hash).interface);

    const auto result = derive_idiosyncratic_set(seeds, document_frequency(corpus), theta);
    for (const auto s : result)
    {
        ctx.out << s.str();
        if (dir)
        {
            const auto headers = dir->lookup(s);
            ctx.out << '\t';
            if (headers.empty())
                ctx.out << '?';
            for (size_t i = 0; i < headers.size(); ++i)
                ctx.out << (i ? "|" : "") << headers[i].text();
        }
        ctx.out << '\n';
    }
    return exit_ok;
}

std::set<Address> classified_wallets(const Store& store)
{
    std::set<Address> out;
    for (const auto& [a, r] : store.addresses())
        if (r.classification)
            out.insert(a);
    return out;
}

std::set<Address> token_holders(const Store& store)
{
    std::set<Address> out;
    for (const auto& p : usage_profiles(store))
        if (p.held_tokens)
            out.insert(p.address);
    return out;
}

void print_graph_experiments(Context& ctx, const Store& store, bool wallets, bool holders)
{
    const auto g = build_call_graph(store.registry().messages(), store.registry());
    ctx.out << format_component_stats(connected_components(g), "graph\tfull\t");

    const auto print_removal = [&](std::string_view name, const std::set<Address>& removed) {
        const auto r = remove_and_recompute(g, [&](const Address& a) { return removed.contains(a); });
        const auto prefix = "graph\t" + std::string{name} + '\t';
        ctx.out << prefix << "removed\t" << removed.size() << '\n';
        ctx.out << format_component_stats(r.after_unpruned, prefix + "unpruned\t");
        ctx.out << format_component_stats(r.after, prefix + "pruned\t");
    };

    const auto w = classified_wallets(store);
    if (wallets)
        print_removal("minus_wallets", w);
    if (holders)
    {
        auto removed = w;
        const auto h = token_holders(store);
        removed.insert(h.begin(), h.end());
        print_removal("minus_wallets_and_holders", removed);
    }
}

int cmd_graph(Context& ctx, bool wallets, bool holders)
{
    const auto store = Store::open(ctx.config.store);
    print_graph_experiments(ctx, store, wallets, holders);
    return exit_ok;
}

void print_counts(Context& ctx, std::string_view section, std::string_view key, const VarietyCounts& c)
{
    ctx.out << section << '\t' << key << '\t' << c.deployments << '\t' << c.bytecodes << '\t'
            << c.skeletons << '\t' << c.creators << '\n';
}

void print_variety(Context& ctx, const Store& store)
{
    std::vector<Deployment> wallets;
    for (auto& d : store.deployments())
        if (!d.blueprint.empty())
            wallets.push_back(std::move(d));
    const auto r = variety_report(wallets);

    ctx.out << "variety\tkey\tdeployments\tbytecodes\tskeletons\tcreators\n";
    for (const auto& [type, c] : r.by_type)
        print_counts(ctx, "type", to_string(type), c);
    for (const auto& [name, c] : r.by_blueprint)
        print_counts(ctx, "blueprint", name, c);
    print_counts(ctx, "total", "all", r.total);
}

inline constexpr uint64_t usage_bin_width = 100'000;

void print_usage(Context& ctx, const Store& store)
{
    std::map<Address, UsageBucket> buckets;
    for (const auto& p : usage_profiles(store))
        buckets[p.address] = p.bucket();

    // bin start block (nullopt: creation unknown) -> counts per bucket
    std::map<std::optional<uint64_t>, std::array<size_t, 4>> bins;
    for (const auto& [a, r] : store.addresses())
    {
        if (!r.classification)
            continue;
        std::optional<uint64_t> block = r.creation_block;
        if (!block)
            if (const auto* c = store.registry().find(a); c && c->creator)
                block = c->creation_block;
        const auto bin = block ? std::optional{*block / usage_bin_width * usage_bin_width} : std::nullopt;
        const auto b = buckets.find(a);
        ++bins[bin][static_cast<size_t>(b == buckets.end() ? UsageBucket::unused : b->second)];
    }

    ctx.out << "usage\tbin_start";
    for (const auto b : all_usage_buckets)
        ctx.out << '\t' << to_string(b);
    ctx.out << '\n';
    for (const auto& [bin, counts] : bins)
    {
        ctx.out << "usage\t" << (bin ? std::to_string(*bin) : "-");
        for (const auto n : counts)
            ctx.out << '\t' << n;
        ctx.out << '\n';
    }
}

int cmd_report(Context& ctx, bool variety, bool usage, bool graph)
{
    const auto store = Store::open(ctx.config.store);
    if (!variety && !usage && !graph)
        variety = usage = graph = true;
    if (variety)
        print_variety(ctx, store);
    if (usage)
        print_usage(ctx, store);
    if (graph)
        print_graph_experiments(ctx, store, true, true);
    return exit_ok;
}
}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
    std::ostream& err, const EnvLookup& env)
{
    CLI::App app{"walletscope: identify, classify and profile wallet contracts", "walletscope"};
    app.require_subcommand(1);
    app.fallthrough();

    ConfigOverrides flags;
    std::string config_file;
    bool verbose = false;
    app.add_option("--store", flags.store, "Store log file (env WALLETSCOPE_STORE)");
    app.add_option("--rules", flags.rules, "Blueprint rule file (env WALLETSCOPE_RULES)");
    app.add_option("--rpc-url", flags.rpc_url, "JSON-RPC endpoint (env WALLETSCOPE_RPC_URL)");
    app.add_option("--jobs,-j", flags.jobs, "Worker threads for per-contract analyses")
        ->check(CLI::PositiveNumber);
    app.add_option("--config", config_file, "JSON config file")->check(CLI::ExistingFile);
    app.add_flag("--verbose,-v", verbose, "Timing information on the error stream");

    std::string file = "-";
    bool creation = false;
    bool from_rpc = false;
    std::string blocks;
    std::string directory;
    FactoryThresholds thresholds;
    bool all = false;
    std::vector<std::string> seeds;
    std::string names;
    std::vector<std::string> patterns;
    double theta = default_fuzz_threshold;
    bool remove_wallets = false, remove_holders = false;
    bool variety = false, usage = false, graph = false;

    auto* ingest_code = app.add_subcommand("ingest-code", "Store code from '<address> <hex>' lines");
    ingest_code->add_option("file", file, "Input file, '-' for stdin");
    ingest_code->add_flag("--creation", creation, "Input is creation code");
    ingest_code->add_flag("--rpc", from_rpc, "Input lists addresses; fetch code with eth_getCode");

    auto* ingest_traces = app.add_subcommand("ingest-traces", "Store messages from a trace file");
    ingest_traces->add_option("file", file, "Trace file, '-' for stdin");
    ingest_traces->add_option("--rpc-blocks", blocks, "Fetch FROM[:TO] with debug_traceBlockByNumber");

    auto* ingest_events = app.add_subcommand("ingest-events", "Store Transfer events");
    ingest_events->add_option("file", file, "Event file, '-' for stdin");

    auto* skeleton = app.add_subcommand("skeleton", "Print '<skeleton> <hash>' per hex line");
    skeleton->add_option("file", file, "Hex lines, '-' for stdin");
    skeleton->add_flag("--creation", creation, "Input is creation code");

    auto* interface = app.add_subcommand("interface", "Print '<count>\\t<selectors>' per hex line");
    interface->add_option("file", file, "Hex lines, '-' for stdin");
    interface->add_option("--directory", directory, "Signature directory for header restoration");

    auto* rules_cmd = app.add_subcommand("rules", "Validate the rule file and print it in canonical form");

    auto* classify_cmd = app.add_subcommand("classify", "Classify stored contracts");

    auto* factories = app.add_subcommand("factories", "List factories");
    factories->add_option("--min-children", thresholds.min_children, "Minimum number of children")
        ->capture_default_str();
    factories->add_option("--max-skeletons", thresholds.max_skeletons, "Maximum child skeletons")
        ->capture_default_str();
    factories->add_flag("--all", all, "List every creator");

    auto* fuzz = app.add_subcommand("fuzz", "Derive an idiosyncratic selector set from seeds");
    fuzz->add_option("--seed", seeds, "Seed contract address (repeatable)");
    fuzz->add_option("--names", names, "Name corpus '<address>\\t<name>'");
    fuzz->add_option("--pattern", patterns, "Name substring (repeatable; default wallet, Wallet)");
    fuzz->add_option("--theta", theta, "Maximum corpus document frequency")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    fuzz->add_option("--directory", directory, "Signature directory for header restoration");

    auto* graph_cmd = app.add_subcommand("graph", "Call-graph component statistics");
    graph_cmd->add_flag("--remove-wallets", remove_wallets, "Also remove classified wallets");
    graph_cmd->add_flag("--remove-holders", remove_holders, "Also remove wallets and token holders");

    auto* report = app.add_subcommand("report", "Variety, usage and graph report");
    report->add_flag("--variety", variety, "Variety table");
    report->add_flag("--usage", usage, "Usage buckets per 100k-block bin");
    report->add_flag("--graph", graph, "Graph experiments");

    try
    {
        std::vector<std::string> reversed{args.rbegin(), args.rend()};
        app.parse(std::move(reversed));
    }
    catch (const CLI::ParseError& e)
    {
        const auto code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    const auto started = std::chrono::steady_clock::now();
    int status = exit_ok;
    try
    {
        Context ctx{resolve_config(flags, env,
                        config_file.empty() ? std::nullopt : std::optional{std::filesystem::path{config_file}}),
            in, out, err, verbose};

        if (*ingest_code)
            status = cmd_ingest_code(ctx, file, creation, from_rpc);
        else if (*ingest_traces)
            status = cmd_ingest_traces(ctx, file, blocks);
        else if (*ingest_events)
            status = cmd_ingest_events(ctx, file);
        else if (*skeleton)
            status = cmd_skeleton(ctx, file, creation);
        else if (*interface)
            status = cmd_interface(ctx, file, directory);
        else if (*rules_cmd)
            status = cmd_rules(ctx);
        else if (*classify_cmd)
            status = cmd_classify(ctx);
        else if (*factories)
            status = cmd_factories(ctx, thresholds, all);
        else if (*fuzz)
            status = cmd_fuzz(ctx, seeds, names, patterns, theta, directory);
        else if (*graph_cmd)
            status = cmd_graph(ctx, remove_wallets || remove_holders, remove_holders);
        else if (*report)
            status = cmd_report(ctx, variety, usage, graph);
    }
    catch (const usage_error& e)
    {
        err << "walletscope: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const corruption_error& e)
    {
        err << "walletscope: corrupt store: " << e.what() << '\n';
        return exit_corruption;
    }
    catch (const no_idiosyncratic_set& e)
    {
        err << "walletscope: no idiosyncratic set: " << e.what() << '\n';
        return exit_no_idiosyncratic_set;
    }
    catch (const std::exception& e)
    {
        // I/O failures, malformed input files and RPC errors.
        err << "walletscope: " << e.what() << '\n';
        return exit_io;
    }

    if (verbose)
    {
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::steady_clock::now() - started);
        err << "walletscope: " << app.get_subcommands().front()->get_name() << " finished in "
            << ms.count() << " ms\n";
    }
    out.flush();
    return status;
}

}  // namespace walletscope::cli
