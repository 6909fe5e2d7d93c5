// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <walletscope/trace.hpp>

#include <functional>
#include <map>
#include <set>
#include <utility>
#include <vector>

namespace walletscope
{
/// Disjoint-set forest with union by size and path halving.
class DisjointSet
{
public:
    explicit DisjointSet(size_t n);

    size_t find(size_t x) noexcept;

    /// Returns false when x and y were already joined.
    bool unite(size_t x, size_t y) noexcept;

    size_t set_size(size_t x) noexcept { return size_[find(x)]; }

private:
    std::vector<size_t> parent_;
    std::vector<size_t> size_;
};

using Edge = std::pair<Address, Address>;

/// Contract call graph. Nodes are exactly the endpoints of the edges, so
/// contracts called only by users (or not at all) never appear.
struct CallGraph
{
    std::set<Edge> edges;
    std::set<Address> nodes;

    /// Builds from directed edges; duplicates collapse.
    static CallGraph from_edges(std::span<const Edge> edges);
};

/// Edges for call, delegatecall and staticcall messages between contracts of
/// the registry. Failed messages count: the call was attempted.
CallGraph build_call_graph(std::span<const Message> messages, const Registry& registry);

struct ComponentStats
{
    size_t nodes = 0;
    size_t edges = 0;
    size_t components = 0;
    size_t largest = 0;
    /// component size -> number of components of that size
    std::map<size_t, size_t> histogram;
    /// Up to ten largest component sizes, descending.
    std::vector<size_t> top;

    friend bool operator==(const ComponentStats&, const ComponentStats&) = default;
};

inline constexpr size_t top_component_count = 10;

/// Weakly connected components; `isolated` nodes (no incident edge) count as
/// components of size 1.
ComponentStats connected_components(const CallGraph& g, std::span<const Address> isolated = {});

struct RemovalStats
{
    ComponentStats before;
    /// Remaining nodes, including those left without edges.
    ComponentStats after_unpruned;
    /// After pruning the nodes left without edges.
    ComponentStats after;
};

RemovalStats remove_and_recompute(
    const CallGraph& g, const std::function<bool(const Address&)>& remove);

/// Machine-readable lines "<prefix><key>\t<value>" for nodes, edges, components,
/// largest, top ("s1 s2 ...") and histogram ("size:count ...").
std::string format_component_stats(const ComponentStats& s, std::string_view prefix = {});

}  // namespace walletscope
