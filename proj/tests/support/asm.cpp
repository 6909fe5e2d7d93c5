// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include "asm.hpp"

#include <walletscope/evm.hpp>

#include <map>
#include <sstream>

namespace walletscope::test
{
namespace
{
const std::map<std::string, uint8_t, std::less<>>& opcode_table()
{
    static const auto table = [] {
        std::map<std::string, uint8_t, std::less<>> t;
        for (unsigned op = 0; op < 256; ++op)
            if (is_defined(static_cast<uint8_t>(op)))
                t.emplace(std::string{mnemonic(static_cast<uint8_t>(op))}, static_cast<uint8_t>(op));
        return t;
    }();
    return table;
}
}  // namespace

bytes assemble(std::string_view text)
{
    std::string stripped;
    for (const auto& line : split(text, '\n'))
        stripped += line.substr(0, line.find('#')) + ' ';

    bytes out;
    const auto tokens = split_whitespace(stripped);
    for (size_t i = 0; i < tokens.size(); ++i)
    {
        const auto& t = tokens[i];
        if (t.starts_with("raw:"))
        {
            const auto b = from_hex(t.substr(4));
            out.insert(out.end(), b.begin(), b.end());
            continue;
        }
        const auto it = opcode_table().find(t);
        if (it == opcode_table().end())
            throw std::invalid_argument{"unknown mnemonic '" + t + "'"};
        out.push_back(it->second);
        if (!is_push(it->second))
            continue;
        if (++i == tokens.size())
            throw std::invalid_argument{t + " without an argument"};
        auto digits = tokens[i].starts_with("0x") ? tokens[i].substr(2) : tokens[i];
        if (digits.size() % 2 != 0)
            digits.insert(digits.begin(), '0');
        const auto arg = from_hex(digits);
        const auto width = push_size(it->second);
        if (arg.size() > width)
            throw std::invalid_argument{"argument too wide for " + t};
        out.insert(out.end(), width - arg.size(), 0);
        out.insert(out.end(), arg.begin(), arg.end());
    }
    return out;
}

}  // namespace walletscope::test
