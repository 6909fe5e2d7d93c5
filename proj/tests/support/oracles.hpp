// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "generators.hpp"

#include <map>

namespace walletscope::test
{
struct UsageInput
{
    std::vector<Message> messages;
    std::vector<TokenEvent> events;
};

/// `count` random messages over `addresses` numbered addresses, with token
/// calls, partial argument words, failures and Transfer events mixed in.
UsageInput random_usage_input(Rng& rng, size_t count, uint64_t addresses);

/// Usage bucket of every address, answering each question by a full scan.
std::map<Address, UsageBucket> usage_oracle(const UsageInput& input);

/// Component sizes by breadth-first search over undirected adjacency,
/// descending. `extra` adds nodes without edges.
std::vector<size_t> bfs_component_sizes(const CallGraph& g, std::span<const Address> extra = {});

/// Empty string when `s` agrees with the component sizes, else a description.
std::string compare_component_stats(const ComponentStats& s, const std::vector<size_t>& sizes);

}  // namespace walletscope::test
