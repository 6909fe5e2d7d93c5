// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <walletscope/rpc.hpp>

#include <httplib.h>
#include <json.hpp>

#include <charconv>

namespace walletscope
{
using nlohmann::json;

namespace
{
std::optional<MessageKind> kind_of_frame(std::string_view type) noexcept
{
    if (type == "CREATE")
        return MessageKind::create;
    if (type == "CREATE2")
        return MessageKind::create2;
    if (type == "CALL" || type == "CALLCODE")
        return MessageKind::call;
    if (type == "DELEGATECALL")
        return MessageKind::delegatecall;
    if (type == "STATICCALL")
        return MessageKind::staticcall;
    if (type == "SELFDESTRUCT")
        return MessageKind::selfdestruct;
    return std::nullopt;
}

void flatten(const json& frame, uint64_t block, const std::string& tx_id, bool parent_ok,
    std::vector<Message>& out)
{
    const auto kind = kind_of_frame(frame.value("type", ""));
    if (!kind)
        throw rpc_error{"unknown call frame type '" + frame.value("type", "") + "'"};

    Message m;
    m.block = block;
    m.tx_id = tx_id;
    m.index = static_cast<uint32_t>(out.size());
    m.kind = *kind;
    m.from = Address::from_hex(frame.at("from").get<std::string>());
    if (const auto it = frame.find("to"); it != frame.end() && it->is_string())
        m.to = Address::from_hex(it->get<std::string>());
    if (const auto it = frame.find("value"); it != frame.end() && it->is_string())
        m.value = Wei::from_hex_quantity(it->get<std::string>());
    m.success = parent_ok && !frame.contains("error");
    if (is_create(m.kind) && !m.success)
        m.to.reset();
    if (is_call(m.kind))
    {
        const auto input = from_hex(frame.value("input", "0x"));
        if (input.size() >= 4)
        {
            m.selector = Selector::from_view(bytes_view{input}.first(4));
            m.args.assign(input.begin() + 4, input.end());
        }
    }
    out.push_back(std::move(m));

    const bool ok = out.back().success;
    if (const auto it = frame.find("calls"); it != frame.end())
        for (const auto& child : *it)
            flatten(child, block, tx_id, ok, out);
}

std::string quantity(uint64_t v)
{
    char buf[20];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v, 16);
    (void)ec;
    return "0x" + std::string{buf, p};
}
}  // namespace

RpcEndpoint RpcEndpoint::parse(std::string_view url)
{
    constexpr std::string_view scheme = "http://";
    if (!url.starts_with(scheme))
        throw std::invalid_argument{"RPC URL must start with http://"};
    url.remove_prefix(scheme.size());

    RpcEndpoint e;
    const auto slash = url.find('/');
    auto authority = url.substr(0, slash);
    if (slash != std::string_view::npos)
        e.path = std::string{url.substr(slash)};
    if (const auto colon = authority.rfind(':'); colon != std::string_view::npos)
    {
        const auto port = authority.substr(colon + 1);
        const auto [p, ec] = std::from_chars(port.data(), port.data() + port.size(), e.port);
        if (ec != std::errc{} || p != port.data() + port.size() || e.port <= 0 || e.port > 65535)
            throw std::invalid_argument{"invalid port in RPC URL"};
        authority = authority.substr(0, colon);
    }
    if (authority.empty())
        throw std::invalid_argument{"missing host in RPC URL"};
    e.host = std::string{authority};
    return e;
}

std::string RpcClient::call(const std::string& method, const std::string& params_json)
{
    const json request = {{"jsonrpc", "2.0"}, {"id", next_id_++}, {"method", method},
        {"params", json::parse(params_json)}};

    httplib::Client client{endpoint_.host, endpoint_.port};
    client.set_connection_timeout(10);
    client.set_read_timeout(120);
    const auto res = client.Post(endpoint_.path, request.dump(), "application/json");
    if (!res)
        throw rpc_error{"HTTP request failed: " + httplib::to_string(res.error())};
    if (res->status != 200)
        throw rpc_error{"HTTP status " + std::to_string(res->status)};

    json reply;
    try
    {
        reply = json::parse(res->body);
    }
    catch (const json::parse_error& e)
    {
        throw rpc_error{std::string{"malformed JSON-RPC reply: "} + e.what()};
    }
    if (const auto it = reply.find("error"); it != reply.end() && !it->is_null())
        throw rpc_error{method + ": " + it->dump()};
    if (!reply.contains("result"))
        throw rpc_error{method + ": reply without result"};
    return reply["result"].dump();
}

bytes RpcClient::get_code(const Address& address, const std::string& block)
{
    const auto result = json::parse(call("eth_getCode", json::array({address.hex(), block}).dump()));
    if (!result.is_string())
        throw rpc_error{"eth_getCode: result is not a string"};
    return from_hex(result.get<std::string>());
}

std::vector<Message> RpcClient::trace_block(uint64_t block)
{
    const auto params = json::array({quantity(block), {{"tracer", "callTracer"}}});
    const auto result = json::parse(call("debug_traceBlockByNumber", params.dump()));
    if (!result.is_array())
        throw rpc_error{"debug_traceBlockByNumber: result is not an array"};

    std::vector<Message> out;
    for (size_t i = 0; i < result.size(); ++i)
    {
        const auto& entry = result[i];
        const auto tx_id = entry.contains("txHash") ? entry["txHash"].get<std::string>()
                                                    : std::to_string(block) + ":" + std::to_string(i);
        const auto& frame = entry.contains("result") ? entry["result"] : entry;
        auto msgs = flatten_call_trace(frame.dump(), block, tx_id);
        out.insert(out.end(), msgs.begin(), msgs.end());
    }
    return out;
}

std::vector<Message> flatten_call_trace(
    std::string_view call_json, uint64_t block, const std::string& tx_id)
{
    std::vector<Message> out;
    try
    {
        flatten(json::parse(call_json), block, tx_id, true, out);
    }
    catch (const json::exception& e)
    {
        throw rpc_error{std::string{"malformed call frame: "} + e.what()};
    }
    catch (const std::invalid_argument& e)
    {
        throw rpc_error{std::string{"malformed call frame: "} + e.what()};
    }
    return out;
}

}  // namespace walletscope
