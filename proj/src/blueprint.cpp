// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <walletscope/blueprint.hpp>

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

namespace walletscope
{
namespace
{
constexpr std::string_view wallet_type_names[] = {
    "simple", "multisig", "forwarder", "controlled", "update", "smart"};

constexpr std::string_view feature_names[feature_count] = {"eth", "erc20_tokens",
    "advanced_tokens", "owner_admin", "multisig", "cosigner", "third_party_control", "forwarding",
    "flexible_transactions", "daily_limit_timelock", "recovery", "lifecycle", "update_logic",
    "module_admin"};

constexpr std::string_view trace_kind_names[] = {
    "factory_lineage", "twin_constructor_delegatecall", "controller_sweeper"};

constexpr std::string_view combination_names[] = {"any", "all", "confirm"};

template <typename E, size_t N>
std::optional<E> parse_enum(std::string_view s, const std::string_view (&names)[N]) noexcept
{
    for (size_t i = 0; i < N; ++i)
        if (names[i] == s)
            return static_cast<E>(i);
    return std::nullopt;
}
}  // namespace

std::string_view to_string(WalletType t) noexcept
{
    return wallet_type_names[static_cast<size_t>(t)];
}

std::optional<WalletType> parse_wallet_type(std::string_view s) noexcept
{
    return parse_enum<WalletType>(s, wallet_type_names);
}

std::string_view to_string(Feature f) noexcept
{
    return feature_names[static_cast<size_t>(f)];
}

std::optional<Feature> parse_feature(std::string_view s) noexcept
{
    return parse_enum<Feature>(s, feature_names);
}

std::string_view to_string(TracePatternKind k) noexcept
{
    return trace_kind_names[static_cast<size_t>(k)];
}

std::optional<TracePatternKind> parse_trace_kind(std::string_view s) noexcept
{
    return parse_enum<TracePatternKind>(s, trace_kind_names);
}

std::string_view to_string(TraceCombination c) noexcept
{
    return combination_names[static_cast<size_t>(c)];
}

SignatureRef SignatureRef::parse(std::string_view text)
{
    if (text.size() == 10 && text.starts_with("0x"))
        return {Selector::parse(text), std::nullopt};
    auto h = FunctionHeader::parse(text);
    return {selector_of(h), std::move(h)};
}

bool ranks_before(const MatchResult& a, const MatchResult& b) noexcept
{
    if (a.required_size != b.required_size)
        return a.required_size > b.required_size;
    if (a.extra_selector_count != b.extra_selector_count)
        return a.extra_selector_count < b.extra_selector_count;
    return a.blueprint < b.blueprint;
}

MatchResult evaluate_rule(
    const SignatureRule& rule, const InterfaceSet& iface, const std::string& blueprint_name)
{
    MatchResult r;
    r.blueprint = blueprint_name;
    r.required_size = rule.required.size() + rule.any_of.size();

    bool all_required = true;
    std::set<Selector> known;
    for (const auto& ref : rule.required)
    {
        known.insert(ref.selector);
        if (iface.contains(ref.selector))
            ++r.matched_required_count;
        else
            all_required = false;
    }
    for (const auto& group : rule.any_of)
    {
        bool hit = false;
        for (const auto& ref : group)
        {
            known.insert(ref.selector);
            hit = hit || iface.contains(ref.selector);
        }
        if (hit)
            ++r.matched_required_count;
        else
            all_required = false;
    }
    for (const auto& ref : rule.optional)
        known.insert(ref.selector);

    const bool forbidden_hit = std::any_of(rule.forbidden.begin(), rule.forbidden.end(),
        [&](const SignatureRef& ref) { return iface.contains(ref.selector); });

    r.extra_selector_count = static_cast<size_t>(
        std::count_if(iface.begin(), iface.end(), [&](Selector s) { return !known.contains(s); }));

    r.matched = all_required && !forbidden_hit &&
                (!rule.max_extra || r.extra_selector_count <= *rule.max_extra);
    return r;
}

namespace
{
void validate_signature_rule(const SignatureRule& rule, const std::string& what)
{
    if (rule.required.empty() && rule.any_of.empty())
        throw std::invalid_argument{what + ": required set is empty"};
    for (const auto& f : rule.forbidden)
    {
        const auto clash = std::any_of(rule.required.begin(), rule.required.end(),
            [&](const SignatureRef& r) { return r.selector == f.selector; });
        if (clash)
            throw std::invalid_argument{what + ": " + f.str() + " is both required and forbidden"};
    }
    for (const auto& g : rule.any_of)
        if (g.empty())
            throw std::invalid_argument{what + ": empty any_of group"};
}

void validate(const Blueprint& b)
{
    if (b.name.empty())
        throw std::invalid_argument{"blueprint without a name"};
    if (!b.signature_rule && !b.trace_rule)
        throw std::invalid_argument{b.name + ": needs a signature rule or a trace rule"};
    if (b.signature_rule)
        validate_signature_rule(*b.signature_rule, b.name);
    if (b.trace_rule)
    {
        const auto& t = *b.trace_rule;
        if (t.kind == TracePatternKind::factory_lineage)
        {
            if (!t.factory_rule && t.creators.empty())
                throw std::invalid_argument{
                    b.name + ": factory_lineage needs a factory signature rule or creators"};
            if (t.factory_rule)
                validate_signature_rule(*t.factory_rule, b.name + " (factory)");
        }
        else if (t.factory_rule || !t.creators.empty())
            throw std::invalid_argument{b.name + ": factory clauses require factory_lineage"};
        if (t.combine != TraceCombination::any && !b.signature_rule)
            throw std::invalid_argument{
                b.name + ": trace combination '" + std::string{to_string(t.combine)} +
                "' needs a signature rule"};
    }
}
}  // namespace

void RuleSet::add(Blueprint b)
{
    try
    {
        validate(b);
    }
    catch (const std::invalid_argument& e)
    {
        throw parse_error{0, e.what()};
    }
    if (find(b.name))
        throw parse_error{0, "duplicate blueprint name '" + b.name + "'"};
    blueprints_.push_back(std::move(b));
}

const Blueprint* RuleSet::find(std::string_view name) const noexcept
{
    const auto it = std::find_if(
        blueprints_.begin(), blueprints_.end(), [&](const Blueprint& b) { return b.name == name; });
    return it == blueprints_.end() ? nullptr : &*it;
}

namespace
{
struct RecordText
{
    size_t line = 0;
    std::string text;
};

std::vector<RecordText> split_records(std::istream& in)
{
    std::vector<RecordText> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const auto t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        if (line[0] == ' ' || line[0] == '\t')
        {
            if (out.empty())
                throw parse_error{line_no, "continuation line without a record"};
            out.back().text += ' ';
            out.back().text += t;
        }
        else
            out.push_back({line_no, t});
    }
    return out;
}

std::vector<SignatureRef> parse_refs(std::span<const std::string> tokens)
{
    std::vector<SignatureRef> out;
    for (const auto& t : tokens)
        out.push_back(SignatureRef::parse(t));
    return out;
}

size_t parse_count(const std::vector<std::string>& args, const std::string& keyword)
{
    if (args.size() != 1 || args[0].empty() ||
        !std::all_of(args[0].begin(), args[0].end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw std::invalid_argument{keyword + " expects one nonnegative integer"};
    return std::stoul(args[0]);
}

Blueprint parse_record(const std::string& text)
{
    const auto colon = text.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument{"expected '<name>: <type>'"};

    Blueprint b;
    b.name = trim(std::string_view{text}.substr(0, colon));
    auto clauses = split(std::string_view{text}.substr(colon + 1), ';');

    const auto type_text = trim(clauses[0]);
    const auto type = parse_wallet_type(type_text);
    if (!type)
        throw std::invalid_argument{"unknown wallet type '" + type_text + "'"};
    b.wallet_type = *type;

    SignatureRule sig;
    bool has_sig = false;
    SignatureRule factory;
    bool has_factory = false;
    TraceRule trace;
    bool has_trace = false;
    std::vector<Address> creators;

    for (size_t i = 1; i < clauses.size(); ++i)
    {
        const auto clause = trim(clauses[i]);
        if (clause.empty())
            continue;
        const auto space = clause.find(' ');
        const auto keyword = clause.substr(0, space);
        const auto rest = space == std::string::npos ? std::string{} : trim(clause.substr(space));
        const auto args = split_whitespace(rest);

        if (keyword == "provenance")
            b.provenance = rest;
        else if (keyword == "features")
        {
            for (const auto& a : args)
            {
                const auto f = parse_feature(a);
                if (!f)
                    throw std::invalid_argument{"unknown feature '" + a + "'"};
                b.features.insert(*f);
            }
        }
        else if (keyword == "required" || keyword == "optional" || keyword == "forbidden" ||
                 keyword == "any_of")
        {
            if (args.empty())
                throw std::invalid_argument{keyword + " needs at least one signature"};
            auto refs = parse_refs(args);
            has_sig = true;
            if (keyword == "required")
                sig.required.insert(sig.required.end(), refs.begin(), refs.end());
            else if (keyword == "optional")
                sig.optional.insert(sig.optional.end(), refs.begin(), refs.end());
            else if (keyword == "forbidden")
                sig.forbidden.insert(sig.forbidden.end(), refs.begin(), refs.end());
            else
                sig.any_of.push_back(std::move(refs));
        }
        else if (keyword == "max_extra")
        {
            sig.max_extra = parse_count(args, keyword);
            has_sig = true;
        }
        else if (keyword == "factory_required" || keyword == "factory_any_of")
        {
            if (args.empty())
                throw std::invalid_argument{keyword + " needs at least one signature"};
            auto refs = parse_refs(args);
            has_factory = true;
            if (keyword == "factory_required")
                factory.required.insert(factory.required.end(), refs.begin(), refs.end());
            else
                factory.any_of.push_back(std::move(refs));
        }
        else if (keyword == "factory_max_extra")
        {
            factory.max_extra = parse_count(args, keyword);
            has_factory = true;
        }
        else if (keyword == "creators")
        {
            if (args.empty())
                throw std::invalid_argument{"creators needs at least one address"};
            for (const auto& a : args)
                creators.push_back(Address::from_hex(a));
        }
        else if (keyword == "trace")
        {
            if (has_trace)
                throw std::invalid_argument{"more than one trace clause"};
            if (args.empty() || args.size() > 2)
                throw std::invalid_argument{"trace expects '<kind> [any|all|confirm]'"};
            const auto kind = parse_trace_kind(args[0]);
            if (!kind)
                throw std::invalid_argument{"unknown trace pattern '" + args[0] + "'"};
            trace.kind = *kind;
            if (args.size() == 2)
            {
                const auto c = parse_enum<TraceCombination>(args[1], combination_names);
                if (!c)
                    throw std::invalid_argument{"unknown trace combination '" + args[1] + "'"};
                trace.combine = *c;
            }
            has_trace = true;
        }
        else
            throw std::invalid_argument{"unknown clause '" + keyword + "'"};
    }

    if ((has_factory || !creators.empty()) && !has_trace)
        throw std::invalid_argument{"factory clauses require a trace clause"};
    if (has_sig)
        b.signature_rule = std::move(sig);
    if (has_trace)
    {
        if (has_factory)
            trace.factory_rule = std::move(factory);
        trace.creators = std::move(creators);
        b.trace_rule = std::move(trace);
    }
    return b;
}

void append_refs(std::string& out, std::string_view keyword, std::span<const SignatureRef> refs)
{
    if (refs.empty())
        return;
    out += "; ";
    out += keyword;
    for (const auto& r : refs)
    {
        out += ' ';
        out += r.str();
    }
}
}  // namespace

RuleSet parse_blueprints(std::istream& in)
{
    RuleSet rules;
    for (const auto& rec : split_records(in))
    {
        try
        {
            rules.add(parse_record(rec.text));
        }
        catch (const parse_error& e)
        {
            throw parse_error{rec.line, e.what()};
        }
        catch (const std::invalid_argument& e)
        {
            throw parse_error{rec.line, e.what()};
        }
    }
    return rules;
}

RuleSet load_blueprints(const std::filesystem::path& path)
{
    std::ifstream in{path};
    if (!in)
        throw io_error{"cannot open blueprint rules " + path.string()};
    return parse_blueprints(in);
}

std::string format_blueprints(const RuleSet& rules)
{
    std::string out;
    for (const auto& b : rules)
    {
        out += b.name;
        out += ": ";
        out += to_string(b.wallet_type);
        if (!b.features.empty())
        {
            out += "; features";
            for (const auto f : b.features)
            {
                out += ' ';
                out += to_string(f);
            }
        }
        if (const auto& s = b.signature_rule)
        {
            append_refs(out, "required", s->required);
            for (const auto& g : s->any_of)
                append_refs(out, "any_of", g);
            append_refs(out, "optional", s->optional);
            append_refs(out, "forbidden", s->forbidden);
            if (s->max_extra)
                out += "; max_extra " + std::to_string(*s->max_extra);
        }
        if (const auto& t = b.trace_rule)
        {
            out += "; trace ";
            out += to_string(t->kind);
            out += ' ';
            out += to_string(t->combine);
            if (const auto& f = t->factory_rule)
            {
                append_refs(out, "factory_required", f->required);
                for (const auto& g : f->any_of)
                    append_refs(out, "factory_any_of", g);
                if (f->max_extra)
                    out += "; factory_max_extra " + std::to_string(*f->max_extra);
            }
            if (!t->creators.empty())
            {
                out += "; creators";
                for (const auto& a : t->creators)
                {
                    out += ' ';
                    out += a.hex();
                }
            }
        }
        if (!b.provenance.empty())
        {
            out += "; provenance ";
            out += b.provenance;
        }
        out += '\n';
    }
    return out;
}

std::vector<MatchResult> match_interface(const InterfaceSet& iface, const RuleSet& rules)
{
    std::vector<MatchResult> out;
    if (iface.empty())
        return out;
    for (const auto& b : rules)
    {
        if (!b.signature_rule)
            continue;
        auto r = evaluate_rule(*b.signature_rule, iface, b.name);
        if (r.matched)
            out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), ranks_before);
    return out;
}

std::optional<Classification> classify(
    const InterfaceSet& iface, const TraceContext& trace, const RuleSet& rules)
{
    struct Candidate
    {
        MatchResult rank;
        const Blueprint* blueprint;
        bool confirmed;
    };
    std::vector<Candidate> candidates;

    for (const auto& b : rules)
    {
        std::optional<MatchResult> sig;
        if (b.signature_rule && !iface.empty())
            sig = evaluate_rule(*b.signature_rule, iface, b.name);
        const bool sig_ok = sig && sig->matched;
        const bool trace_ok = b.trace_rule && trace.confirmed.contains(b.name);

        bool matched = false;
        if (!b.trace_rule)
            matched = sig_ok;
        else if (!b.signature_rule)
            matched = trace_ok;
        else
        {
            switch (b.trace_rule->combine)
            {
            case TraceCombination::any:
                matched = sig_ok || trace_ok;
                break;
            case TraceCombination::all:
                matched = sig_ok && trace_ok;
                break;
            case TraceCombination::confirm:
                matched = sig_ok;
                break;
            }
        }
        if (!matched)
            continue;

        MatchResult rank;
        if (sig_ok)
            rank = *sig;
        else
            rank.blueprint = b.name;
        candidates.push_back({std::move(rank), &b, trace_ok});
    }

    if (candidates.empty())
        return std::nullopt;

    const auto better = [](const Candidate& a, const Candidate& b) {
        if (a.confirmed != b.confirmed)
            return a.confirmed;
        return ranks_before(a.rank, b.rank);
    };
    const auto& best = *std::min_element(candidates.begin(), candidates.end(), better);
    return Classification{best.blueprint->name, best.blueprint->wallet_type, best.confirmed};
}

SelectorFrequency document_frequency(std::span<const InterfaceSet> corpus)
{
    SelectorFrequency freq;
    if (corpus.empty())
        return freq;
    std::map<Selector, size_t> counts;
    for (const auto& iface : corpus)
        for (const auto s : iface)
            ++counts[s];
    for (const auto& [s, n] : counts)
        freq[s] = static_cast<double>(n) / static_cast<double>(corpus.size());
    return freq;
}

InterfaceSet derive_idiosyncratic_set(
    std::span<const InterfaceSet> seeds, const SelectorFrequency& corpus_freq, double threshold)
{
    if (seeds.empty())
        throw std::invalid_argument{"blueprint fuzzing needs at least one seed interface"};
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw std::invalid_argument{"frequency threshold must lie in [0, 1]"};

    InterfaceSet common = seeds[0];
    for (const auto& seed : seeds.subspan(1))
    {
        InterfaceSet next;
        for (const auto s : common)
            if (seed.contains(s))
                next.insert(s);
        common = std::move(next);
    }
    if (common.empty())
        throw no_idiosyncratic_set{"seed interfaces have no selector in common"};

    InterfaceSet out;
    for (const auto s : common)
    {
        const auto it = corpus_freq.find(s);
        const auto f = it == corpus_freq.end() ? 0.0 : it->second;
        if (f <= threshold)
            out.insert(s);
    }
    if (out.empty())
        throw no_idiosyncratic_set{"every common selector exceeds the frequency threshold"};
    return out;
}

std::vector<NamedContract> parse_name_corpus(std::istream& in)
{
    std::vector<NamedContract> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const auto t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw parse_error{line_no, "expected '<address>\\t<name>'"};
        try
        {
            out.push_back({Address::from_hex(trim(line.substr(0, tab))), line.substr(tab + 1)});
        }
        catch (const hex_error& e)
        {
            throw parse_error{line_no, e.what()};
        }
    }
    return out;
}

std::vector<NamedContract> filter_by_name(
    std::span<const NamedContract> corpus, std::span<const std::string> needles)
{
    std::vector<NamedContract> out;
    for (const auto& c : corpus)
    {
        const auto hit = std::any_of(needles.begin(), needles.end(),
            [&](const std::string& n) { return c.name.find(n) != std::string::npos; });
        if (hit)
            out.push_back(c);
    }
    return out;
}

}  // namespace walletscope
