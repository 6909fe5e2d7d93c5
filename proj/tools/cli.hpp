// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <walletscope/config.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace walletscope::cli
{
enum ExitCode : int
{
    exit_ok = 0,
    exit_usage = 1,
    exit_io = 2,
    exit_corruption = 3,
    exit_no_idiosyncratic_set = 4,
};

/// Runs the walletscope command line. Machine-readable results go to `out`,
/// diagnostics to `err`. `env` supplies the WALLETSCOPE_* variables.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
    std::ostream& err, const EnvLookup& env = process_env);

}  // namespace walletscope::cli
