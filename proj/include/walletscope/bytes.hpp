// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace walletscope
{
using bytes = std::vector<uint8_t>;
using bytes_view = std::span<const uint8_t>;

/// Thrown for malformed hex text.
struct hex_error : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

/// Encodes as lowercase hex, 0x-prefixed unless `prefix` is false.
std::string to_hex(bytes_view data, bool prefix = true);

/// Decodes hex with or without a 0x prefix. Either letter case is accepted.
bytes from_hex(std::string_view hex);

/// Fixed-width byte string with value semantics and lexicographic order.
template <size_t N>
struct fixed_bytes
{
    std::array<uint8_t, N> bytes{};

    static constexpr size_t size() noexcept { return N; }

    static fixed_bytes from_view(bytes_view data)
    {
        if (data.size() != N)
            throw hex_error{"expected " + std::to_string(N) + " bytes, got " +
                            std::to_string(data.size())};
        fixed_bytes r;
        std::copy(data.begin(), data.end(), r.bytes.begin());
        return r;
    }

    static fixed_bytes from_hex(std::string_view hex)
    {
        return from_view(walletscope::from_hex(hex));
    }

    bytes_view view() const noexcept { return bytes; }
    std::string hex(bool prefix = true) const { return to_hex(bytes, prefix); }

    friend auto operator<=>(const fixed_bytes&, const fixed_bytes&) = default;
};

/// 32-byte digest (Keccak-256 output).
struct hash256 : fixed_bytes<32>
{
    using fixed_bytes::fixed_bytes;
    hash256() = default;
    hash256(const fixed_bytes<32>& b) : fixed_bytes{b} {}
    static hash256 from_hex(std::string_view hex) { return fixed_bytes::from_hex(hex); }
};

/// 20-byte account address.
struct Address : fixed_bytes<20>
{
    using fixed_bytes::fixed_bytes;
    Address() = default;
    Address(const fixed_bytes<20>& b) : fixed_bytes{b} {}

    /// Accepts 40 hex digits with optional 0x prefix, any letter case.
    static Address from_hex(std::string_view hex);

    /// Convenience for synthetic fixtures: the address whose low 8 bytes hold `n`.
    static Address from_number(uint64_t n) noexcept;
};

template <size_t N>
struct fixed_bytes_hash
{
    size_t operator()(const fixed_bytes<N>& b) const noexcept
    {
        size_t h = 0xcbf29ce484222325;
        for (auto v : b.bytes)
            h = (h ^ v) * 0x100000001b3;
        return h;
    }
};

using AddressHash = fixed_bytes_hash<20>;
using Hash256Hash = fixed_bytes_hash<32>;

/// Nonnegative integer amount of wei kept as a normalized decimal string.
/// Values span the full 256-bit range; only the sign test is arithmetic.
class Wei
{
public:
    Wei() = default;

    /// Parses decimal digits; leading zeros are dropped.
    static Wei from_decimal(std::string_view digits);

    /// Parses a 0x-prefixed hex quantity, as used by JSON-RPC.
    static Wei from_hex_quantity(std::string_view hex);

    bool is_zero() const noexcept { return digits_ == "0"; }
    const std::string& decimal() const noexcept { return digits_; }

    friend bool operator==(const Wei&, const Wei&) = default;

private:
    std::string digits_ = "0";
};

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_whitespace(std::string_view s);

}  // namespace walletscope
