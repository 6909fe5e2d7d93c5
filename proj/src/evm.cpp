// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <walletscope/evm.hpp>

#include <algorithm>
#include <array>
#include <istream>
#include <sstream>

namespace walletscope
{
namespace
{
constexpr std::array<std::string_view, 256> make_names() noexcept
{
    std::array<std::string_view, 256> n{};
    n[0x00] = "STOP";
    n[0x01] = "ADD";
    n[0x02] = "MUL";
    n[0x03] = "SUB";
    n[0x04] = "DIV";
    n[0x05] = "SDIV";
    n[0x06] = "MOD";
    n[0x07] = "SMOD";
    n[0x08] = "ADDMOD";
    n[0x09] = "MULMOD";
    n[0x0a] = "EXP";
    n[0x0b] = "SIGNEXTEND";
    n[0x10] = "LT";
    n[0x11] = "GT";
    n[0x12] = "SLT";
    n[0x13] = "SGT";
    n[0x14] = "EQ";
    n[0x15] = "ISZERO";
    n[0x16] = "AND";
    n[0x17] = "OR";
    n[0x18] = "XOR";
    n[0x19] = "NOT";
    n[0x1a] = "BYTE";
    n[0x1b] = "SHL";
    n[0x1c] = "SHR";
    n[0x1d] = "SAR";
    n[0x20] = "SHA3";
    n[0x30] = "ADDRESS";
    n[0x31] = "BALANCE";
    n[0x32] = "ORIGIN";
    n[0x33] = "CALLER";
    n[0x34] = "CALLVALUE";
    n[0x35] = "CALLDATALOAD";
    n[0x36] = "CALLDATASIZE";
    n[0x37] = "CALLDATACOPY";
    n[0x38] = "CODESIZE";
    n[0x39] = "CODECOPY";
    n[0x3a] = "GASPRICE";
    n[0x3b] = "EXTCODESIZE";
    n[0x3c] = "EXTCODECOPY";
    n[0x3d] = "RETURNDATASIZE";
    n[0x3e] = "RETURNDATACOPY";
    n[0x3f] = "EXTCODEHASH";
    n[0x40] = "BLOCKHASH";
    n[0x41] = "COINBASE";
    n[0x42] = "TIMESTAMP";
    n[0x43] = "NUMBER";
    n[0x44] = "DIFFICULTY";
    n[0x45] = "GASLIMIT";
    n[0x46] = "CHAINID";
    n[0x47] = "SELFBALANCE";
    n[0x50] = "POP";
    n[0x51] = "MLOAD";
    n[0x52] = "MSTORE";
    n[0x53] = "MSTORE8";
    n[0x54] = "SLOAD";
    n[0x55] = "SSTORE";
    n[0x56] = "JUMP";
    n[0x57] = "JUMPI";
    n[0x58] = "PC";
    n[0x59] = "MSIZE";
    n[0x5a] = "GAS";
    n[0x5b] = "JUMPDEST";
    constexpr std::string_view push[] = {"PUSH1", "PUSH2", "PUSH3", "PUSH4", "PUSH5", "PUSH6",
        "PUSH7", "PUSH8", "PUSH9", "PUSH10", "PUSH11", "PUSH12", "PUSH13", "PUSH14", "PUSH15",
        "PUSH16", "PUSH17", "PUSH18", "PUSH19", "PUSH20", "PUSH21", "PUSH22", "PUSH23", "PUSH24",
        "PUSH25", "PUSH26", "PUSH27", "PUSH28", "PUSH29", "PUSH30", "PUSH31", "PUSH32"};
    constexpr std::string_view dup[] = {"DUP1", "DUP2", "DUP3", "DUP4", "DUP5", "DUP6", "DUP7",
        "DUP8", "DUP9", "DUP10", "DUP11", "DUP12", "DUP13", "DUP14", "DUP15", "DUP16"};
    constexpr std::string_view swap[] = {"SWAP1", "SWAP2", "SWAP3", "SWAP4", "SWAP5", "SWAP6",
        "SWAP7", "SWAP8", "SWAP9", "SWAP10", "SWAP11", "SWAP12", "SWAP13", "SWAP14", "SWAP15",
        "SWAP16"};
    for (size_t i = 0; i < 32; ++i)
        n[0x60 + i] = push[i];
    for (size_t i = 0; i < 16; ++i)
    {
        n[0x80 + i] = dup[i];
        n[0x90 + i] = swap[i];
    }
    n[0xa0] = "LOG0";
    n[0xa1] = "LOG1";
    n[0xa2] = "LOG2";
    n[0xa3] = "LOG3";
    n[0xa4] = "LOG4";
    n[0xf0] = "CREATE";
    n[0xf1] = "CALL";
    n[0xf2] = "CALLCODE";
    n[0xf3] = "RETURN";
    n[0xf4] = "DELEGATECALL";
    n[0xf5] = "CREATE2";
    n[0xfa] = "STATICCALL";
    n[0xfd] = "REVERT";
    n[0xfe] = "INVALID";
    n[0xff] = "SELFDESTRUCT";
    return n;
}

constexpr auto names = make_names();

// Prologues emitted by solc for deployed code.
constexpr std::array<std::array<uint8_t, 7>, 5> solc_prologues_raw = {{
    {0x60, 0x60, 0x60, 0x40, 0x52},
    {0x60, 0x80, 0x60, 0x40, 0x52},
    {0x60, 0x80, 0x60, 0x40, 0x81, 0x81, 0x52},
    {0x60, 0x80, 0x60, 0x40, 0x81, 0x90, 0x52},
    {0x60, 0x80, 0x60, 0x40, 0x90, 0x81, 0x52},
}};
constexpr std::array<size_t, 5> solc_prologue_sizes = {5, 5, 7, 7, 7};

bool starts_with_solc_prologue(bytes_view code) noexcept
{
    for (size_t i = 0; i < solc_prologues_raw.size(); ++i)
    {
        const auto n = solc_prologue_sizes[i];
        if (code.size() >= n && std::equal(code.begin(), code.begin() + n,
                                    solc_prologues_raw[i].begin()))
            return true;
    }
    return false;
}

// CBOR map header followed by the text-string key of the swarm/ipfs hash.
struct MetadataMarker
{
    std::array<uint8_t, 6> key;
    size_t key_size;
};
constexpr MetadataMarker metadata_markers[] = {
    {{0x65, 'b', 'z', 'z', 'r', '0'}, 6},
    {{0x65, 'b', 'z', 'z', 'r', '1'}, 6},
    {{0x64, 'i', 'p', 'f', 's'}, 5},
};

bool has_metadata_marker(bytes_view payload) noexcept
{
    if (payload.empty())
        return false;
    const auto map_header = payload[0];
    if (map_header < 0xa1 || map_header > 0xa5)
        return false;
    const auto rest = payload.subspan(1);
    for (const auto& m : metadata_markers)
    {
        if (rest.size() >= m.key_size &&
            std::equal(m.key.begin(), m.key.begin() + m.key_size, rest.begin()))
            return true;
    }
    return false;
}
}  // namespace

bool is_defined(uint8_t op) noexcept
{
    return !names[op].empty();
}

std::string_view mnemonic(uint8_t op) noexcept
{
    return is_defined(op) ? names[op] : std::string_view{"INVALID"};
}

std::vector<Instruction> disassemble(bytes_view code)
{
    std::vector<Instruction> out;
    out.reserve(code.size());
    for (size_t i = 0; i < code.size();)
    {
        Instruction ins;
        ins.offset = i;
        ins.opcode = code[i];
        ++i;
        if (const auto n = push_size(ins.opcode); n != 0)
        {
            const auto avail = std::min(n, code.size() - i);
            ins.push_arg.emplace(code.begin() + static_cast<std::ptrdiff_t>(i),
                code.begin() + static_cast<std::ptrdiff_t>(i + avail));
            ins.truncated = avail < n;
            i += avail;
        }
        out.push_back(std::move(ins));
    }
    return out;
}

bytes encode(std::span<const Instruction> instructions)
{
    bytes out;
    for (const auto& ins : instructions)
    {
        out.push_back(ins.opcode);
        if (ins.push_arg)
            out.insert(out.end(), ins.push_arg->begin(), ins.push_arg->end());
    }
    return out;
}

std::string format_listing(std::span<const Instruction> instructions)
{
    std::ostringstream os;
    for (const auto& ins : instructions)
    {
        os << ins.offset << ": " << ins.name();
        if (!is_defined(ins.opcode))
            os << " (" << to_hex(bytes_view{&ins.opcode, 1}) << ")";
        if (ins.push_arg)
            os << ' ' << to_hex(*ins.push_arg);
        if (ins.truncated)
            os << " (truncated)";
        os << '\n';
    }
    return os.str();
}

std::string_view to_string(SolcKind k) noexcept
{
    switch (k)
    {
    case SolcKind::plain_solc:
        return "plain_solc";
    case SolcKind::library_solc:
        return "library_solc";
    case SolcKind::other:
        break;
    }
    return "other";
}

SolcKind detect_solc(bytes_view code) noexcept
{
    if (starts_with_solc_prologue(code))
        return SolcKind::plain_solc;

    // Libraries: PUSHn <self address> followed by POP or ADDRESS EQ, then the prologue.
    if (code.empty() || !is_push(code[0]))
        return SolcKind::other;
    const auto after_push = 1 + push_size(code[0]);
    if (code.size() <= after_push)
        return SolcKind::other;
    const auto rest = code.subspan(after_push);
    if (rest[0] == OP_POP && starts_with_solc_prologue(rest.subspan(1)))
        return SolcKind::library_solc;
    if (rest.size() >= 2 && rest[0] == OP_ADDRESS && rest[1] == OP_EQ &&
        starts_with_solc_prologue(rest.subspan(2)))
        return SolcKind::library_solc;
    return SolcKind::other;
}

std::optional<MetadataTrailer> locate_metadata(bytes_view code) noexcept
{
    if (code.size() < 2)
        return std::nullopt;
    const size_t payload_len = size_t{code[code.size() - 2]} << 8 | code[code.size() - 1];
    if (payload_len + 2 > code.size())
        return std::nullopt;
    const auto start = code.size() - 2 - payload_len;
    if (!has_metadata_marker(code.subspan(start, payload_len)))
        return std::nullopt;
    return MetadataTrailer{start, payload_len + 2};
}

std::vector<MetadataTrailer> find_embedded_metadata(bytes_view code)
{
    std::vector<MetadataTrailer> out;
    for (size_t start = 0; start < code.size(); ++start)
    {
        if (!has_metadata_marker(code.subspan(start)))
            continue;
        // The length suffix follows the payload; accept the smallest consistent one.
        for (size_t end = start + 1; end + 2 <= code.size(); ++end)
        {
            const size_t len = size_t{code[end]} << 8 | code[end + 1];
            if (len == end - start)
            {
                out.push_back({start, len + 2});
                start = end + 1;
                break;
            }
            if (end - start > 0xffff)
                break;
        }
    }
    return out;
}

std::vector<Bytecode> read_hex_lines(std::istream& in, CodeSource source)
{
    std::vector<Bytecode> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;
        try
        {
            out.push_back({from_hex(t), source});
        }
        catch (const hex_error& e)
        {
            throw hex_error{"line " + std::to_string(line_no) + ": " + e.what()};
        }
    }
    return out;
}

}  // namespace walletscope
