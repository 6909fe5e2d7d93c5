// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <walletscope/graph.hpp>

#include <algorithm>
#include <numeric>

namespace walletscope
{
DisjointSet::DisjointSet(size_t n) : parent_(n), size_(n, 1)
{
    std::iota(parent_.begin(), parent_.end(), size_t{0});
}

size_t DisjointSet::find(size_t x) noexcept
{
    while (parent_[x] != x)
    {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool DisjointSet::unite(size_t x, size_t y) noexcept
{
    x = find(x);
    y = find(y);
    if (x == y)
        return false;
    if (size_[x] < size_[y])
        std::swap(x, y);
    parent_[y] = x;
    size_[x] += size_[y];
    return true;
}

CallGraph CallGraph::from_edges(std::span<const Edge> edges)
{
    CallGraph g;
    for (const auto& e : edges)
    {
        g.edges.insert(e);
        g.nodes.insert(e.first);
        g.nodes.insert(e.second);
    }
    return g;
}

CallGraph build_call_graph(std::span<const Message> messages, const Registry& registry)
{
    std::vector<Edge> edges;
    for (const auto& m : messages)
    {
        if (is_call(m.kind) && m.to && registry.is_contract(m.from) && registry.is_contract(*m.to))
            edges.emplace_back(m.from, *m.to);
    }
    return CallGraph::from_edges(edges);
}

ComponentStats connected_components(const CallGraph& g, std::span<const Address> isolated)
{
    std::vector<Address> nodes{g.nodes.begin(), g.nodes.end()};
    for (const auto& a : isolated)
        if (!g.nodes.contains(a))
            nodes.push_back(a);
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

    const auto index = [&](const Address& a) {
        return static_cast<size_t>(std::lower_bound(nodes.begin(), nodes.end(), a) - nodes.begin());
    };

    DisjointSet ds{nodes.size()};
    for (const auto& [from, to] : g.edges)
        ds.unite(index(from), index(to));

    ComponentStats s;
    s.nodes = nodes.size();
    s.edges = g.edges.size();
    std::vector<size_t> sizes;
    for (size_t i = 0; i < nodes.size(); ++i)
        if (ds.find(i) == i)
            sizes.push_back(ds.set_size(i));

    s.components = sizes.size();
    for (const auto n : sizes)
        ++s.histogram[n];
    std::sort(sizes.begin(), sizes.end(), std::greater<>{});
    s.largest = sizes.empty() ? 0 : sizes.front();
    sizes.resize(std::min(sizes.size(), top_component_count));
    s.top = std::move(sizes);
    return s;
}

RemovalStats remove_and_recompute(
    const CallGraph& g, const std::function<bool(const Address&)>& remove)
{
    RemovalStats r;
    r.before = connected_components(g);

    std::vector<Edge> kept;
    std::vector<Address> survivors;
    for (const auto& e : g.edges)
        if (!remove(e.first) && !remove(e.second))
            kept.push_back(e);
    for (const auto& n : g.nodes)
        if (!remove(n))
            survivors.push_back(n);

    const auto pruned = CallGraph::from_edges(kept);
    r.after_unpruned = connected_components(pruned, survivors);
    r.after = connected_components(pruned);
    return r;
}

std::string format_component_stats(const ComponentStats& s, std::string_view prefix)
{
    std::string out;
    const auto line = [&](std::string_view key, const std::string& value) {
        out += prefix;
        out += key;
        out += '\t';
        out += value;
        out += '\n';
    };
    line("nodes", std::to_string(s.nodes));
    line("edges", std::to_string(s.edges));
    line("components", std::to_string(s.components));
    line("largest", std::to_string(s.largest));

    std::string top;
    for (const auto n : s.top)
        top += (top.empty() ? "" : " ") + std::to_string(n);
    line("top", top);

    std::string hist;
    for (const auto& [size, count] : s.histogram)
        hist += (hist.empty() ? "" : " ") + std::to_string(size) + ':' + std::to_string(count);
    line("histogram", hist);
    return out;
}

}  // namespace walletscope
