// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

namespace walletscope
{
struct Config
{
    std::string store = "walletscope.store";
    std::string rules;
    std::string rpc_url;
    size_t jobs = 1;
};

/// Values given on the command line; unset fields fall through.
struct ConfigOverrides
{
    std::optional<std::string> store;
    std::optional<std::string> rules;
    std::optional<std::string> rpc_url;
    std::optional<size_t> jobs;
};

using EnvLookup = std::function<std::optional<std::string>(const char* name)>;

/// Reads the process environment.
std::optional<std::string> process_env(const char* name);

/// Precedence: flags, then WALLETSCOPE_STORE / WALLETSCOPE_RULES /
/// WALLETSCOPE_RPC_URL, then the JSON config file, then defaults.
/// Throws io_error for an unreadable file and parse_error for bad JSON or
/// mistyped keys.
Config resolve_config(const ConfigOverrides& flags, const EnvLookup& env,
    const std::optional<std::filesystem::path>& config_file);

}  // namespace walletscope
