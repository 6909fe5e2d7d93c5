// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include "asm.hpp"
#include "generators.hpp"

#include <fstream>

namespace walletscope::test
{
namespace
{
std::ifstream open(const std::filesystem::path& p)
{
    std::ifstream in{p};
    if (!in)
        throw std::runtime_error{"cannot open fixture " + p.string()};
    return in;
}
}  // namespace

std::filesystem::path corpus_dir()
{
    return fixtures_dir() / "corpus";
}

std::vector<DispatcherCase> load_dispatchers()
{
    auto in = open(fixtures_dir() / "dispatchers.txt");
    std::vector<DispatcherCase> out;
    std::string text;
    const auto finish = [&] {
        if (!out.empty())
            out.back().code = assemble(text);
        text.clear();
    };
    std::string line;
    while (std::getline(in, line))
    {
        if (line.starts_with("#"))
            continue;
        if (line.starts_with("== "))
        {
            finish();
            out.push_back({line.substr(3), {}, {}});
        }
        else if (line.starts_with("expect:"))
        {
            const auto rest = trim(line.substr(7));
            if (rest != "-")
                out.back().expected = InterfaceSet::parse(rest);
        }
        else
            text += line + '\n';
    }
    finish();
    return out;
}

std::vector<SelectorVector> load_selector_vectors()
{
    auto in = open(fixtures_dir() / "oracles" / "selectors.tsv");
    std::vector<SelectorVector> out;
    std::string line;
    while (std::getline(in, line))
    {
        const auto f = split(line, '\t');
        if (f.size() != 2)
            throw std::runtime_error{"malformed selector vector: " + line};
        out.push_back({f[0], Selector::parse(f[1])});
    }
    return out;
}

std::vector<ExpectedClass> load_expected_classification()
{
    auto in = open(corpus_dir() / "expected_classify.tsv");
    std::vector<ExpectedClass> out;
    std::string line;
    while (std::getline(in, line))
    {
        const auto f = split(line, '\t');
        if (f.size() != 3)
            throw std::runtime_error{"malformed expectation: " + line};
        out.push_back({Address::from_hex(f[0]), f[1], f[2]});
    }
    return out;
}

std::string classify_store(const Store& store, const RuleSet& rules)
{
    const auto lookup = store.interface_lookup();
    const auto evidence = evaluate_trace_rules(store.registry(), rules, lookup);
    std::string out;
    for (const auto& [a, r] : store.addresses())
    {
        const auto it = evidence.find(a);
        const auto c = classify(*lookup(a), it == evidence.end() ? TraceContext{} : it->second, rules);
        out += a.hex() + '\t';
        out += c ? c->blueprint + '\t' + std::string{to_string(c->wallet_type)} : "none\t-";
        out += '\n';
    }
    return out;
}

Store load_corpus_store()
{
    Store store;
    auto codes = open(corpus_dir() / "codes.txt");
    std::string line;
    while (std::getline(codes, line))
    {
        const auto f = split_whitespace(line);
        if (f.empty() || f[0].starts_with("#"))
            continue;
        const auto& rec = store.put_code(Bytecode::from_hex(f[1]));
        store.put_address({Address::from_hex(f[0]), rec.code_hash, {}, {}, {}, {}});
    }

    auto traces = open(corpus_dir() / "traces.tsv");
    const auto messages = parse_traces(traces);
    if (!messages.diagnostics.empty())
        throw std::runtime_error{"corpus trace: " + messages.diagnostics.front().message};
    store.put_messages(messages.messages);

    auto events = open(corpus_dir() / "events.tsv");
    const auto ev = parse_events(events);
    if (!ev.diagnostics.empty())
        throw std::runtime_error{"corpus events: " + ev.diagnostics.front().message};
    store.put_events(ev.events);
    return store;
}

}  // namespace walletscope::test
