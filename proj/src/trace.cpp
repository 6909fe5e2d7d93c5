// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <walletscope/keccak.hpp>
#include <walletscope/trace.hpp>

#include <algorithm>
#include <charconv>
#include <istream>

namespace walletscope
{
namespace
{
constexpr std::string_view message_kind_names[] = {
    "create", "create2", "call", "delegatecall", "staticcall", "selfdestruct"};

constexpr std::string_view usage_bucket_names[] = {"both", "eth_only", "tokens_only", "unused"};

template <typename T>
T parse_uint(std::string_view s, std::string_view field)
{
    T v{};
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
        throw parse_error{0, "invalid " + std::string{field} + " '" + std::string{s} + "'"};
    return v;
}

Address parse_address(std::string_view s, std::string_view field)
{
    try
    {
        return Address::from_hex(s);
    }
    catch (const hex_error& e)
    {
        throw parse_error{0, "invalid " + std::string{field} + ": " + e.what()};
    }
}

Wei parse_amount(std::string_view s, std::string_view field)
{
    try
    {
        return Wei::from_decimal(s);
    }
    catch (const std::invalid_argument&)
    {
        throw parse_error{0, "invalid " + std::string{field} + " '" + std::string{s} + "'"};
    }
}

std::vector<std::string> split_tabs(std::string_view line)
{
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    return split(line, '\t');
}

template <typename T, typename Parse>
void parse_lines(std::istream& in, std::vector<T>& out, std::vector<Diagnostic>& diags, Parse parse)
{
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        try
        {
            out.push_back(parse(line));
        }
        catch (const parse_error& e)
        {
            diags.push_back({line_no, e.what()});
        }
    }
}

struct KnownSelectors
{
    Selector ctor1 = selector_of("constructor(address)");
    Selector ctor2 = selector_of("constructor(address,address)");
    Selector sweep = selector_of("sweep(address,uint256)");
    Selector sweep_all = selector_of("sweepAll(address)");
    Selector controller = selector_of("controller()");
    Selector token_fallback = selector_of("tokenFallback(address,uint256,bytes)");
    Selector transfer = selector_of("transfer(address,uint256)");
    Selector transfer_from = selector_of("transferFrom(address,address,uint256)");
    Selector mint = selector_of("mint(address,uint256)");
    Selector balance_of = selector_of("balanceOf(address)");
};

const KnownSelectors& known() noexcept
{
    static const KnownSelectors k;
    return k;
}

// The only signature is sweep or sweepAll, plus optionally `extra`.
bool is_sweep_interface(const InterfaceSet& iface, Selector extra) noexcept
{
    const auto& k = known();
    bool has_sweep = false;
    for (const auto s : iface)
    {
        if (s == k.sweep || s == k.sweep_all)
            has_sweep = true;
        else if (s != extra)
            return false;
    }
    return has_sweep;
}
}  // namespace

std::string_view to_string(MessageKind k) noexcept
{
    return message_kind_names[static_cast<size_t>(k)];
}

std::optional<MessageKind> parse_message_kind(std::string_view s) noexcept
{
    for (size_t i = 0; i < std::size(message_kind_names); ++i)
        if (message_kind_names[i] == s)
            return static_cast<MessageKind>(i);
    return std::nullopt;
}

std::string format_message(const Message& m)
{
    std::string out;
    out += std::to_string(m.block);
    out += '\t';
    out += m.tx_id;
    out += '\t';
    out += std::to_string(m.index);
    out += '\t';
    out += to_string(m.kind);
    out += '\t';
    out += m.from.hex();
    out += '\t';
    out += m.to ? m.to->hex() : "-";
    out += '\t';
    out += m.value.decimal();
    out += '\t';
    out += m.selector ? m.selector->str() : "-";
    out += '\t';
    out += m.success ? '1' : '0';
    if (!m.args.empty())
    {
        out += '\t';
        out += to_hex(m.args);
    }
    return out;
}

Message parse_message(std::string_view line)
{
    const auto f = split_tabs(line);
    if (f.size() != 9 && f.size() != 10)
        throw parse_error{0, "expected 9 or 10 tab-separated fields, got " + std::to_string(f.size())};

    Message m;
    m.block = parse_uint<uint64_t>(f[0], "block");
    if (f[1].empty())
        throw parse_error{0, "empty tx_id"};
    m.tx_id = f[1];
    m.index = parse_uint<uint32_t>(f[2], "intra_tx_index");
    const auto kind = parse_message_kind(f[3]);
    if (!kind)
        throw parse_error{0, "unknown message kind '" + f[3] + "'"};
    m.kind = *kind;
    m.from = parse_address(f[4], "from");
    if (f[5] != "-")
        m.to = parse_address(f[5], "to");
    m.value = parse_amount(f[6], "value");
    if (f[7] != "-")
    {
        try
        {
            m.selector = Selector::parse(f[7]);
        }
        catch (const hex_error& e)
        {
            throw parse_error{0, std::string{"invalid selector: "} + e.what()};
        }
    }
    if (f[8] != "0" && f[8] != "1")
        throw parse_error{0, "success must be 0 or 1"};
    m.success = f[8] == "1";
    if (f.size() == 10 && f[9] != "-")
    {
        try
        {
            m.args = from_hex(f[9]);
        }
        catch (const hex_error& e)
        {
            throw parse_error{0, std::string{"invalid args: "} + e.what()};
        }
    }
    if (is_create(m.kind) && m.success && !m.to)
        throw parse_error{0, "successful create without a created address"};
    return m;
}

TraceLoad parse_traces(std::istream& in)
{
    TraceLoad r;
    parse_lines(in, r.messages, r.diagnostics, parse_message);
    return r;
}

std::string format_event(const TokenEvent& e)
{
    return std::to_string(e.block) + '\t' + e.tx_id + '\t' + e.emitter.hex() + '\t' +
           e.from.hex() + '\t' + e.to.hex() + '\t' + e.amount.decimal();
}

TokenEvent parse_event(std::string_view line)
{
    const auto f = split_tabs(line);
    if (f.size() != 6)
        throw parse_error{0, "expected 6 tab-separated fields, got " + std::to_string(f.size())};
    TokenEvent e;
    e.block = parse_uint<uint64_t>(f[0], "block");
    if (f[1].empty())
        throw parse_error{0, "empty tx_id"};
    e.tx_id = f[1];
    e.emitter = parse_address(f[2], "emitter");
    e.from = parse_address(f[3], "from");
    e.to = parse_address(f[4], "to");
    e.amount = parse_amount(f[5], "amount");
    return e;
}

EventLoad parse_events(std::istream& in)
{
    EventLoad r;
    parse_lines(in, r.events, r.diagnostics, parse_event);
    return r;
}

Registry::IngestStats Registry::ingest(std::span<const Message> messages)
{
    IngestStats stats;
    for (const auto& m : messages)
    {
        const auto [it, inserted] = by_key_.try_emplace(Key{m.tx_id, m.index}, m);
        if (inserted)
            ++stats.added;
        else if (it->second == m)
            ++stats.duplicates;
        else
        {
            ++stats.conflicts;
            if (format_message(m) < format_message(it->second))
                it->second = m;
        }
    }
    rebuild();
    return stats;
}

void Registry::attach_code(const Address& address, const hash256& code_hash, const hash256& skeleton_hash)
{
    code_[address] = {code_hash, skeleton_hash};
    auto& r = contracts_[address];
    r.address = address;
    r.code_hash = code_hash;
    r.skeleton_hash = skeleton_hash;
    for (const auto& child : children(address))
        contracts_[child].creator_is_contract = true;
}

std::span<const size_t> Registry::transaction(const std::string& tx_id) const noexcept
{
    const auto it = by_tx_.find(tx_id);
    if (it == by_tx_.end())
        return {};
    return it->second;
}

const ContractRecord* Registry::find(const Address& a) const noexcept
{
    const auto it = contracts_.find(a);
    return it == contracts_.end() ? nullptr : &it->second;
}

std::span<const Address> Registry::children(const Address& creator) const noexcept
{
    const auto it = children_.find(creator);
    if (it == children_.end())
        return {};
    return it->second;
}

void Registry::rebuild()
{
    ordered_.clear();
    ordered_.reserve(by_key_.size());
    for (const auto& [k, m] : by_key_)
        ordered_.push_back(m);
    std::stable_sort(ordered_.begin(), ordered_.end(), [](const Message& a, const Message& b) {
        return std::tie(a.block, a.tx_id, a.index) < std::tie(b.block, b.tx_id, b.index);
    });

    by_tx_.clear();
    contracts_.clear();
    children_.clear();
    for (size_t i = 0; i < ordered_.size(); ++i)
    {
        const auto& m = ordered_[i];
        by_tx_[m.tx_id].push_back(i);
        // The earliest successful create of an address is its deployment.
        if (is_create(m.kind) && m.success && m.to && !contracts_.contains(*m.to))
        {
            ContractRecord r;
            r.address = *m.to;
            r.creator = m.from;
            r.creation_block = m.block;
            r.creation_tx = m.tx_id;
            contracts_.emplace(r.address, std::move(r));
        }
    }
    for (const auto& [a, hashes] : code_)
    {
        auto& r = contracts_[a];
        r.address = a;
        r.code_hash = hashes.first;
        r.skeleton_hash = hashes.second;
    }
    for (auto& [a, r] : contracts_)
    {
        if (!r.creator)
            continue;
        r.creator_is_contract = contracts_.contains(*r.creator);
        children_[*r.creator].push_back(a);
    }
}

const hash256& empty_skeleton_hash() noexcept
{
    static const hash256 h = keccak256(bytes_view{});
    return h;
}

std::vector<FactoryProfile> identify_factories(const Registry& registry, const FactoryThresholds& thresholds)
{
    std::vector<FactoryProfile> out;
    for (const auto& [creator, kids] : registry.creators())
    {
        FactoryProfile p;
        p.creator = creator;
        p.children = kids.size();
        for (const auto& child : kids)
        {
            const auto* r = registry.find(child);
            const auto& skel = r && r->skeleton_hash ? *r->skeleton_hash : empty_skeleton_hash();
            ++p.skeleton_histogram[skel];
        }
        p.is_factory = p.children >= thresholds.min_children &&
                       p.distinct_skeletons() <= thresholds.max_skeletons;
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<TwinMatch> find_twin_constructor_delegatecalls(const Registry& registry)
{
    const auto& k = known();
    std::vector<TwinMatch> out;
    std::string current_tx;
    std::set<Address> wallets, companions;

    const auto flush = [&] {
        for (const auto& w : wallets)
        {
            const auto c = std::find_if(
                companions.begin(), companions.end(), [&](const Address& a) { return a != w; });
            if (c != companions.end())
                out.push_back({w, *c, current_tx});
        }
        wallets.clear();
        companions.clear();
    };

    // Messages of one tx are contiguous in the (block, tx_id, index) order.
    for (const auto& m : registry.messages())
    {
        if (m.tx_id != current_tx)
        {
            flush();
            current_tx = m.tx_id;
        }
        if (m.kind != MessageKind::delegatecall || !m.success || !m.selector ||
            !registry.is_contract(m.from))
            continue;
        if (*m.selector == k.ctor1)
            wallets.insert(m.from);
        else if (*m.selector == k.ctor2)
            companions.insert(m.from);
    }
    flush();
    return out;
}

std::vector<ControllerMatch> find_controller_sweepers(
    const Registry& registry, const InterfaceLookup& interfaces)
{
    const auto& k = known();
    std::vector<ControllerMatch> out;
    for (const auto& [c, record] : registry.contracts())
    {
        if (!record.creator)
            continue;

        // A sweeper created during the deployment of c.
        std::optional<Address> sweeper;
        for (const auto i : registry.transaction(record.creation_tx))
        {
            const auto& m = registry.messages()[i];
            if (!is_create(m.kind) || !m.success || !m.to || *m.to == c)
                continue;
            const auto iface = interfaces(*m.to);
            if (iface && is_sweep_interface(*iface, k.controller) && (!sweeper || *m.to < *sweeper))
                sweeper = *m.to;
        }
        if (!sweeper)
            continue;

        // Wallets of a single code family, created after the deployment.
        std::vector<Address> wallets;
        std::set<hash256> families;
        for (const auto& w : registry.children(c))
        {
            const auto* r = registry.find(w);
            if (r->creation_tx == record.creation_tx)
                continue;
            wallets.push_back(w);
            families.insert(r->skeleton_hash ? *r->skeleton_hash : empty_skeleton_hash());
        }
        if (wallets.empty() || families.size() != 1)
            continue;

        // Wallets expose only sweep entry points.
        const auto all_sweepable = std::all_of(wallets.begin(), wallets.end(), [&](const Address& w) {
            const auto iface = interfaces(w);
            return iface && is_sweep_interface(*iface, k.token_fallback);
        });
        if (!all_sweepable)
            continue;

        out.push_back({c, *sweeper, std::move(wallets)});
    }
    return out;
}

std::set<Address> find_factory_lineage(
    const Registry& registry, const TraceRule& rule, const InterfaceLookup& interfaces)
{
    std::set<Address> out;
    for (const auto& [creator, kids] : registry.creators())
    {
        bool lineage = std::find(rule.creators.begin(), rule.creators.end(), creator) !=
                       rule.creators.end();
        if (!lineage && rule.factory_rule)
        {
            const auto iface = interfaces(creator);
            lineage = iface && evaluate_rule(*rule.factory_rule, *iface).matched;
        }
        if (lineage)
            out.insert(kids.begin(), kids.end());
    }
    return out;
}

std::set<Address> match_trace_patterns(const Registry& registry, TracePatternKind kind,
    const InterfaceLookup& interfaces, const TraceRule* rule)
{
    std::set<Address> out;
    switch (kind)
    {
    case TracePatternKind::factory_lineage:
        if (rule)
            out = find_factory_lineage(registry, *rule, interfaces);
        break;
    case TracePatternKind::twin_constructor_delegatecall:
        for (const auto& t : find_twin_constructor_delegatecalls(registry))
        {
            out.insert(t.wallet);
            out.insert(t.companion);
        }
        break;
    case TracePatternKind::controller_sweeper:
        for (const auto& c : find_controller_sweepers(registry, interfaces))
            out.insert(c.controller);
        break;
    }
    return out;
}

std::map<Address, TraceContext> evaluate_trace_rules(
    const Registry& registry, const RuleSet& rules, const InterfaceLookup& interfaces)
{
    std::map<Address, TraceContext> out;
    std::optional<std::vector<TwinMatch>> twins;
    std::optional<std::vector<ControllerMatch>> controllers;

    for (const auto& b : rules)
    {
        if (!b.trace_rule)
            continue;
        switch (b.trace_rule->kind)
        {
        case TracePatternKind::factory_lineage:
            for (const auto& a : find_factory_lineage(registry, *b.trace_rule, interfaces))
                out[a].confirmed.insert(b.name);
            break;
        case TracePatternKind::twin_constructor_delegatecall:
            if (!twins)
                twins = find_twin_constructor_delegatecalls(registry);
            for (const auto& t : *twins)
                out[t.wallet].confirmed.insert(b.name);
            break;
        case TracePatternKind::controller_sweeper:
            if (!controllers)
                controllers = find_controller_sweepers(registry, interfaces);
            for (const auto& c : *controllers)
                for (const auto& w : c.wallets)
                    out[w].confirmed.insert(b.name);
            break;
        }
    }
    return out;
}

std::string_view to_string(UsageBucket b) noexcept
{
    return usage_bucket_names[static_cast<size_t>(b)];
}

std::optional<UsageBucket> parse_usage_bucket(std::string_view s) noexcept
{
    for (size_t i = 0; i < std::size(usage_bucket_names); ++i)
        if (usage_bucket_names[i] == s)
            return static_cast<UsageBucket>(i);
    return std::nullopt;
}

std::vector<Address> token_holder_arguments(const Message& m)
{
    if (!m.success || !m.selector || !is_call(m.kind))
        return {};
    const auto& k = known();
    size_t n = 0;
    if (*m.selector == k.transfer || *m.selector == k.mint || *m.selector == k.balance_of)
        n = 1;
    else if (*m.selector == k.transfer_from)
        n = 2;

    std::vector<Address> out;
    for (size_t i = 0; i < n && (i + 1) * 32 <= m.args.size(); ++i)
        out.push_back(Address::from_view(bytes_view{m.args}.subspan(i * 32 + 12, 20)));
    return out;
}

std::vector<UsageProfile> build_usage_profiles(
    std::span<const Message> messages, std::span<const TokenEvent> events)
{
    std::map<Address, UsageProfile> profiles;
    const auto touch = [&](const Address& a) -> UsageProfile& {
        auto& p = profiles[a];
        p.address = a;
        return p;
    };

    for (const auto& m : messages)
    {
        const bool eth = m.success && !m.value.is_zero();
        touch(m.from).held_eth |= eth;
        if (m.to)
            touch(*m.to).held_eth |= eth;
        for (const auto& h : token_holder_arguments(m))
            touch(h).held_tokens = true;
    }
    for (const auto& e : events)
    {
        touch(e.emitter);
        touch(e.from).held_tokens = true;
        touch(e.to).held_tokens = true;
    }

    std::vector<UsageProfile> out;
    out.reserve(profiles.size());
    for (const auto& [a, p] : profiles)
        out.push_back(p);
    return out;
}

VarietyCounts count_variety(std::span<const Deployment> deployments)
{
    std::set<Address> addresses, creators;
    std::set<hash256> codes, skeletons;
    for (const auto& d : deployments)
    {
        addresses.insert(d.address);
        if (d.code_hash)
            codes.insert(*d.code_hash);
        if (d.skeleton_hash)
            skeletons.insert(*d.skeleton_hash);
        if (d.creator)
            creators.insert(*d.creator);
    }
    return {addresses.size(), codes.size(), skeletons.size(), creators.size()};
}

VarietyReport variety_report(std::span<const Deployment> deployments)
{
    std::map<WalletType, std::vector<Deployment>> by_type;
    std::map<std::string, std::vector<Deployment>> by_blueprint;
    for (const auto& d : deployments)
    {
        by_type[d.wallet_type].push_back(d);
        by_blueprint[d.blueprint].push_back(d);
    }

    VarietyReport r;
    for (const auto t : all_wallet_types)
        r.by_type[t] = count_variety(by_type[t]);
    for (const auto& [name, ds] : by_blueprint)
        r.by_blueprint[name] = count_variety(ds);
    r.total = count_variety(deployments);
    return r;
}

}  // namespace walletscope
