// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <walletscope/bytes.hpp>

#include <algorithm>
#include <cctype>

namespace walletscope
{
namespace
{
int hex_value(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

std::string_view strip_prefix(std::string_view hex) noexcept
{
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X'))
        hex.remove_prefix(2);
    return hex;
}
}  // namespace

std::string to_hex(bytes_view data, bool prefix)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2 + 2);
    if (prefix)
        out += "0x";
    for (const auto b : data)
    {
        out += digits[b >> 4];
        out += digits[b & 0xf];
    }
    return out;
}

bytes from_hex(std::string_view hex)
{
    hex = strip_prefix(hex);
    if (hex.size() % 2 != 0)
        throw hex_error{"odd number of hex digits"};
    bytes out;
    out.reserve(hex.size() / 2);
    for (size_t i = 0; i < hex.size(); i += 2)
    {
        const auto hi = hex_value(hex[i]);
        const auto lo = hex_value(hex[i + 1]);
        if (hi < 0 || lo < 0)
            throw hex_error{"invalid hex digit at position " + std::to_string(i)};
        out.push_back(static_cast<uint8_t>(hi << 4 | lo));
    }
    return out;
}

Address Address::from_hex(std::string_view hex)
{
    const auto digits = strip_prefix(hex);
    if (digits.size() != 40)
        throw hex_error{"address must have 40 hex digits: " + std::string{hex}};
    return fixed_bytes::from_hex(digits);
}

Address Address::from_number(uint64_t n) noexcept
{
    Address a;
    for (size_t i = 0; i < 8; ++i)
        a.bytes[19 - i] = static_cast<uint8_t>(n >> (8 * i));
    return a;
}

Wei Wei::from_decimal(std::string_view digits)
{
    if (digits.empty())
        throw std::invalid_argument{"empty decimal amount"};
    if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw std::invalid_argument{"invalid decimal amount: " + std::string{digits}};
    const auto first = digits.find_first_not_of('0');
    Wei w;
    w.digits_ = first == std::string_view::npos ? "0" : std::string{digits.substr(first)};
    return w;
}

Wei Wei::from_hex_quantity(std::string_view hex)
{
    hex = strip_prefix(hex);
    if (hex.empty())
        throw std::invalid_argument{"empty hex quantity"};

    // Base conversion on a little-endian vector of decimal digits.
    std::vector<uint8_t> dec{0};
    for (const char c : hex)
    {
        const auto v = hex_value(c);
        if (v < 0)
            throw std::invalid_argument{"invalid hex quantity: " + std::string{hex}};
        unsigned carry = static_cast<unsigned>(v);
        for (auto& d : dec)
        {
            const unsigned x = d * 16u + carry;
            d = static_cast<uint8_t>(x % 10);
            carry = x / 10;
        }
        while (carry != 0)
        {
            dec.push_back(static_cast<uint8_t>(carry % 10));
            carry /= 10;
        }
    }
    std::string s;
    for (auto it = dec.rbegin(); it != dec.rend(); ++it)
        s += static_cast<char>('0' + *it);
    return from_decimal(s);
}

std::string trim(std::string_view s)
{
    const auto ws = " \t\r\n\v\f";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return std::string{s.substr(b, e - b + 1)};
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    size_t start = 0;
    while (true)
    {
        const auto pos = s.find(sep, start);
        if (pos == std::string_view::npos)
        {
            out.emplace_back(s.substr(start));
            return out;
        }
        out.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string> split_whitespace(std::string_view s)
{
    std::vector<std::string> out;
    size_t i = 0;
    while (i < s.size())
    {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        const auto b = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        if (i > b)
            out.emplace_back(s.substr(b, i - b));
    }
    return out;
}

}  // namespace walletscope
