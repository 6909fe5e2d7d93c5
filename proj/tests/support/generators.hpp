// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <walletscope/graph.hpp>

#include <filesystem>
#include <random>
#include <string>

namespace walletscope::test
{
using Rng = std::mt19937_64;

/// Random instruction stream of `count` instructions. With `truncated_tail`
/// the last instruction may be a PUSH cut short by the end of the code.
bytes random_code(Rng& rng, size_t count, bool truncated_tail = false);

/// Same opcodes, fresh random PUSH arguments.
bytes mutate_push_args(bytes code, Rng& rng);

/// A solc-style metadata trailer (bzzr0 layout) with a random hash.
bytes random_metadata(Rng& rng);

struct MessageSpec
{
    std::string tx_id;
    uint32_t index = 0;
    MessageKind kind = MessageKind::call;
    Address from;
    std::optional<Address> to;
    uint64_t value = 0;
    std::optional<std::string> header;
    bool success = true;
    bytes args;
    uint64_t block = 1;
};

Message make_message(const MessageSpec& s);

/// ABI word holding an address.
bytes abi_address(const Address& a);

/// ABI word holding a small integer.
bytes abi_uint(uint64_t v);

/// Random directed edges over `nodes` numbered addresses.
std::vector<Edge> random_edges(Rng& rng, size_t nodes, size_t edges);

std::filesystem::path fixtures_dir();
std::filesystem::path data_dir();

std::string read_file(const std::filesystem::path& p);

/// A fresh empty directory below the system temp directory.
std::filesystem::path temp_dir(const std::string& tag);

}  // namespace walletscope::test
