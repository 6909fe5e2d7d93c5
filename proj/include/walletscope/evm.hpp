// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <walletscope/bytes.hpp>

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace walletscope
{
/// Opcode values referenced by the analyses. The full table (through the
/// Istanbul fork) lives in evm.cpp; see mnemonic().
enum Opcode : uint8_t
{
    OP_STOP = 0x00,
    OP_ADD = 0x01,
    OP_SUB = 0x03,
    OP_DIV = 0x04,
    OP_EXP = 0x0a,
    OP_LT = 0x10,
    OP_GT = 0x11,
    OP_EQ = 0x14,
    OP_ISZERO = 0x15,
    OP_AND = 0x16,
    OP_SHR = 0x1c,
    OP_ADDRESS = 0x30,
    OP_CALLDATALOAD = 0x35,
    OP_POP = 0x50,
    OP_JUMP = 0x56,
    OP_JUMPI = 0x57,
    OP_JUMPDEST = 0x5b,
    OP_PUSH1 = 0x60,
    OP_PUSH4 = 0x63,
    OP_PUSH20 = 0x73,
    OP_PUSH29 = 0x7c,
    OP_PUSH32 = 0x7f,
    OP_DUP1 = 0x80,
    OP_DUP16 = 0x8f,
    OP_SWAP1 = 0x90,
    OP_SWAP16 = 0x9f,
    OP_RETURN = 0xf3,
    OP_REVERT = 0xfd,
    OP_INVALID = 0xfe,
    OP_SELFDESTRUCT = 0xff,
};

constexpr bool is_push(uint8_t op) noexcept
{
    return op >= OP_PUSH1 && op <= OP_PUSH32;
}

constexpr size_t push_size(uint8_t op) noexcept
{
    return is_push(op) ? size_t{op} - OP_PUSH1 + 1 : 0;
}

/// Whether `op` is defined in the instruction set up to and including Istanbul.
bool is_defined(uint8_t op) noexcept;

/// Mnemonic for `op`; undefined values report "INVALID".
std::string_view mnemonic(uint8_t op) noexcept;

enum class CodeSource
{
    deployed,
    creation,
};

struct Bytecode
{
    bytes code;
    CodeSource source = CodeSource::deployed;

    static Bytecode from_hex(std::string_view hex, CodeSource source = CodeSource::deployed)
    {
        return {walletscope::from_hex(hex), source};
    }

    std::string hex() const { return to_hex(code); }

    friend bool operator==(const Bytecode&, const Bytecode&) = default;
};

struct Instruction
{
    size_t offset = 0;
    uint8_t opcode = OP_STOP;
    /// Present exactly for PUSH1..PUSH32; shorter than the push width iff truncated.
    std::optional<bytes> push_arg;
    bool truncated = false;

    std::string_view name() const noexcept { return mnemonic(opcode); }

    /// Encoded length in the code, counting only bytes that are actually present.
    size_t size() const noexcept { return 1 + (push_arg ? push_arg->size() : 0); }

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// Decodes every byte sequence; never fails.
std::vector<Instruction> disassemble(bytes_view code);

/// Re-encodes a decoded instruction stream. encode(disassemble(c)) == c.
bytes encode(std::span<const Instruction> instructions);

/// Human-readable listing, one "offset: MNEMONIC [0xarg]" per line.
std::string format_listing(std::span<const Instruction> instructions);

enum class SolcKind
{
    plain_solc,
    library_solc,
    other,
};

std::string_view to_string(SolcKind k) noexcept;

/// Compiler fingerprint from the deployed-code prologue.
SolcKind detect_solc(bytes_view code) noexcept;

struct MetadataTrailer
{
    size_t start_offset = 0;
    /// CBOR payload plus the 2-byte big-endian length suffix.
    size_t length = 0;

    friend bool operator==(const MetadataTrailer&, const MetadataTrailer&) = default;
};

/// Locates the solc CBOR metadata trailer at the end of `code`.
/// Only the bzzr0 / bzzr1 / ipfs marker shapes are recognized.
std::optional<MetadataTrailer> locate_metadata(bytes_view code) noexcept;

/// Finds every embedded trailer whose own length suffix is consistent, scanning
/// the whole code. Used for creation code, where the runtime code (with its
/// trailer) is followed by constructor arguments.
std::vector<MetadataTrailer> find_embedded_metadata(bytes_view code);

/// Reads the hex text format: one hex string per line, blank lines and
/// '#' comments ignored. Throws hex_error with the line number on bad input.
std::vector<Bytecode> read_hex_lines(std::istream& in, CodeSource source = CodeSource::deployed);

}  // namespace walletscope
