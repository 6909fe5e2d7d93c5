// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <walletscope/config.hpp>
#include <walletscope/errors.hpp>

#include <json.hpp>

#include <cstdlib>
#include <fstream>

namespace walletscope
{
std::optional<std::string> process_env(const char* name)
{
    if (const char* v = std::getenv(name); v != nullptr && *v != '\0')
        return std::string{v};
    return std::nullopt;
}

Config resolve_config(const ConfigOverrides& flags, const EnvLookup& env,
    const std::optional<std::filesystem::path>& config_file)
{
    Config c;

    if (config_file)
    {
        std::ifstream in{*config_file};
        if (!in)
            throw io_error{"cannot open config file " + config_file->string()};
        nlohmann::json j;
        try
        {
            j = nlohmann::json::parse(in);
            if (!j.is_object())
                throw parse_error{0, "config file must hold a JSON object"};
            c.store = j.value("store", c.store);
            c.rules = j.value("rules", c.rules);
            c.rpc_url = j.value("rpc_url", c.rpc_url);
            c.jobs = j.value("jobs", c.jobs);
        }
        catch (const nlohmann::json::exception& e)
        {
            throw parse_error{0, config_file->string() + ": " + e.what()};
        }
    }

    if (env)
    {
        if (auto v = env("WALLETSCOPE_STORE"))
            c.store = *v;
        if (auto v = env("WALLETSCOPE_RULES"))
            c.rules = *v;
        if (auto v = env("WALLETSCOPE_RPC_URL"))
            c.rpc_url = *v;
    }

    if (flags.store)
        c.store = *flags.store;
    if (flags.rules)
        c.rules = *flags.rules;
    if (flags.rpc_url)
        c.rpc_url = *flags.rpc_url;
    if (flags.jobs)
        c.jobs = *flags.jobs;
    if (c.jobs == 0)
        c.jobs = 1;
    return c;
}

}  // namespace walletscope
