// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <walletscope/trace.hpp>

#include <string>
#include <vector>

namespace walletscope
{
/// Transport or protocol failure talking to a node.
struct rpc_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct RpcEndpoint
{
    std::string host;
    int port = 80;
    std::string path = "/";

    /// Accepts http://host[:port][/path]. Throws std::invalid_argument otherwise.
    static RpcEndpoint parse(std::string_view url);
};

/// Minimal Ethereum JSON-RPC client over plain HTTP.
class RpcClient
{
public:
    explicit RpcClient(RpcEndpoint endpoint) : endpoint_{std::move(endpoint)} {}

    /// eth_getCode at `block` ("latest" or a 0x quantity).
    bytes get_code(const Address& address, const std::string& block = "latest");

    /// debug_traceBlockByNumber with the callTracer, flattened to messages in
    /// depth-first order. Frames below a failed frame are marked failed.
    std::vector<Message> trace_block(uint64_t block);

private:
    std::string call(const std::string& method, const std::string& params_json);

    RpcEndpoint endpoint_;
    uint64_t next_id_ = 1;
};

/// Flattens one callTracer result tree (JSON text) into messages.
std::vector<Message> flatten_call_trace(
    std::string_view call_json, uint64_t block, const std::string& tx_id);

}  // namespace walletscope
