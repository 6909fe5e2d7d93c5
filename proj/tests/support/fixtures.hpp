// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <walletscope/store.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace walletscope::test
{
struct DispatcherCase
{
    std::string name;
    bytes code;
    InterfaceSet expected;
};

/// Reads tests/fixtures/dispatchers.txt.
std::vector<DispatcherCase> load_dispatchers();

struct SelectorVector
{
    std::string header;
    Selector selector;
};

/// Reads the frozen selector oracle.
std::vector<SelectorVector> load_selector_vectors();

struct ExpectedClass
{
    Address address;
    std::string blueprint;  ///< "none" when unclassified
    std::string wallet_type;  ///< "-" when unclassified
};

std::vector<ExpectedClass> load_expected_classification();

/// The classification corpus loaded into a volatile store.
Store load_corpus_store();

/// Classifies every stored address against `rules` and prints one
/// '<address>\t<blueprint>\t<type>' line each, as `walletscope classify` does.
std::string classify_store(const Store& store, const RuleSet& rules);

std::filesystem::path corpus_dir();

}  // namespace walletscope::test
