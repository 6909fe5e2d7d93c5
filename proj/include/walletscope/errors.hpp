// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace walletscope
{
/// A file could not be opened, read or written.
struct io_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Structured text input violated its grammar. `line` is 1-based, 0 if unknown.
struct parse_error : std::runtime_error
{
    size_t line = 0;

    parse_error(size_t line_no, const std::string& what)
      : std::runtime_error{line_no != 0 ? "line " + std::to_string(line_no) + ": " + what : what},
        line{line_no}
    {}
};

/// Persisted data failed an integrity check on read-back.
struct corruption_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

/// Line-level problem reported alongside a successful load.
struct Diagnostic
{
    size_t line = 0;
    std::string message;
};

}  // namespace walletscope
