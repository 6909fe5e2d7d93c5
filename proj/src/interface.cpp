// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <walletscope/interface.hpp>
#include <walletscope/keccak.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>

namespace walletscope
{
Selector Selector::from_value(uint32_t v) noexcept
{
    Selector s;
    for (size_t i = 0; i < 4; ++i)
        s.bytes[i] = static_cast<uint8_t>(v >> (24 - 8 * i));
    return s;
}

Selector Selector::parse(std::string_view text)
{
    auto digits = text;
    if (digits.size() >= 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X'))
        digits.remove_prefix(2);
    if (digits.size() != 8)
        throw hex_error{"selector must have 8 hex digits: " + std::string{text}};
    return fixed_bytes::from_hex(digits);
}

uint32_t Selector::value() const noexcept
{
    return uint32_t{bytes[0]} << 24 | uint32_t{bytes[1]} << 16 | uint32_t{bytes[2]} << 8 |
           bytes[3];
}

namespace
{
bool is_ident_start(char c) noexcept
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool is_ident_char(char c) noexcept
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

std::string canonical_base_type(std::string_view t)
{
    if (t == "uint")
        return "uint256";
    if (t == "int")
        return "int256";
    if (t == "byte")
        return "bytes1";
    if (t == "fixed")
        return "fixed128x18";
    if (t == "ufixed")
        return "ufixed128x18";
    return std::string{t};
}

/// Recursive-descent canonicalizer over the parameter list grammar.
class HeaderParser
{
public:
    explicit HeaderParser(std::string_view s) : s_{s} {}

    std::string parse()
    {
        std::string out;
        if (pos_ >= s_.size() || !is_ident_start(s_[pos_]))
            fail("function name expected");
        while (pos_ < s_.size() && is_ident_char(s_[pos_]))
            out += s_[pos_++];
        out += tuple();
        if (pos_ != s_.size())
            fail("trailing characters after parameter list");
        return out;
    }

private:
    [[noreturn]] void fail(const std::string& why) const
    {
        throw header_error{"malformed function header '" + std::string{s_} + "': " + why};
    }

    char peek() const noexcept { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    void expect(char c)
    {
        if (peek() != c)
            fail(std::string{"expected '"} + c + "'");
        ++pos_;
    }

    std::string tuple()
    {
        std::string out = "(";
        expect('(');
        if (peek() != ')')
        {
            out += type();
            while (peek() == ',')
            {
                ++pos_;
                out += ',';
                out += type();
            }
        }
        expect(')');
        out += ')';
        return out;
    }

    std::string type()
    {
        std::string out;
        if (peek() == '(')
            out = tuple();
        else
        {
            const auto b = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_])))
                ++pos_;
            if (pos_ == b)
                fail("parameter type expected at position " + std::to_string(b));
            out = canonical_base_type(s_.substr(b, pos_ - b));
        }
        while (peek() == '[')
        {
            ++pos_;
            out += '[';
            while (std::isdigit(static_cast<unsigned char>(peek())))
                out += s_[pos_++];
            expect(']');
            out += ']';
        }
        return out;
    }

    std::string_view s_;
    size_t pos_ = 0;
};
}  // namespace

FunctionHeader FunctionHeader::parse(std::string_view text)
{
    if (std::any_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
        throw header_error{"function header contains whitespace: '" + std::string{text} + "'"};
    FunctionHeader h;
    h.text_ = HeaderParser{text}.parse();
    return h;
}

Selector selector_of(const FunctionHeader& header) noexcept
{
    const auto h = keccak256(header.text());
    Selector s;
    std::copy_n(h.bytes.begin(), 4, s.bytes.begin());
    return s;
}

Selector selector_of(std::string_view header_text)
{
    return selector_of(FunctionHeader::parse(header_text));
}

std::string InterfaceSet::str() const
{
    std::string out;
    for (const auto& s : selectors_)
    {
        if (!out.empty())
            out += ' ';
        out += s.str();
    }
    return out;
}

InterfaceSet InterfaceSet::parse(std::string_view text)
{
    InterfaceSet out;
    for (const auto& tok : split_whitespace(text))
        out.insert(Selector::parse(tok));
    return out;
}

namespace
{
constexpr uint32_t selector_mask = 0xffffffff;
constexpr size_t jumpi_window = 8;
constexpr size_t chain_window = 16;

bool is_stack_shuffle(uint8_t op) noexcept
{
    return op >= OP_DUP1 && op <= OP_SWAP16;
}

bool ends_block(uint8_t op) noexcept
{
    switch (op)
    {
    case OP_STOP:
    case OP_JUMP:
    case OP_JUMPDEST:
    case OP_RETURN:
    case OP_REVERT:
    case OP_INVALID:
    case OP_SELFDESTRUCT:
        return true;
    default:
        return !is_defined(op);
    }
}

uint32_t push_value(const Instruction& ins) noexcept
{
    uint32_t v = 0;
    for (const auto b : *ins.push_arg)
        v = v << 8 | b;
    return v;
}

// The divisor 2^224 that shifts the selector to the low four bytes.
bool is_selector_divisor(const Instruction& ins) noexcept
{
    if (ins.opcode != OP_PUSH29 && ins.opcode != OP_PUSH32)
        return false;
    if (ins.truncated)
        return false;
    const auto& arg = *ins.push_arg;
    const auto one_at = arg.size() - 29;
    for (size_t i = 0; i < arg.size(); ++i)
    {
        if (arg[i] != (i == one_at ? 1 : 0))
            return false;
    }
    return true;
}

/// Index of the next instruction after `i` that is not a DUP/SWAP.
size_t next_significant(std::span<const Instruction> ins, size_t i) noexcept
{
    ++i;
    while (i < ins.size() && is_stack_shuffle(ins[i].opcode))
        ++i;
    return i;
}

/// Index of the comparison consuming the constant pushed at `i`, or npos.
size_t find_comparison(std::span<const Instruction> ins, size_t i) noexcept
{
    const auto s1 = next_significant(ins, i);
    const auto s2 = s1 < ins.size() ? next_significant(ins, s1) : ins.size();
    for (const auto s : {s1, s2})
    {
        if (s >= ins.size())
            break;
        if (ins[s].opcode == OP_EQ)
            return s;
        if (ins[s].opcode == OP_SUB)
        {
            const auto z = next_significant(ins, s);
            if (z < ins.size() && ins[z].opcode == OP_ISZERO)
                return z;
        }
    }
    return std::string::npos;
}

bool jumpi_follows(std::span<const Instruction> ins, size_t c) noexcept
{
    for (size_t k = c + 1; k < ins.size() && k <= c + jumpi_window; ++k)
    {
        if (ins[k].opcode == OP_JUMPI)
            return true;
        if (ends_block(ins[k].opcode))
            return false;
    }
    return false;
}

bool extracts_selector(std::span<const Instruction> ins, size_t i) noexcept
{
    // PUSH29/PUSH32 2^224 ... DIV
    if (is_selector_divisor(ins[i]))
    {
        for (size_t k = i + 1; k < ins.size() && k <= i + 4; ++k)
            if (ins[k].opcode == OP_DIV)
                return true;
        return false;
    }
    // PUSH1 0xe0 ... SHR  and the older PUSH1 0xe0 PUSH1 0x02 EXP
    if (ins[i].opcode == OP_PUSH1 && !ins[i].truncated && (*ins[i].push_arg)[0] == 0xe0)
    {
        const auto s = next_significant(ins, i);
        if (s < ins.size() && ins[s].opcode == OP_SHR)
            return true;
        if (s + 1 < ins.size() && ins[s].opcode == OP_PUSH1 && !ins[s].truncated &&
            (*ins[s].push_arg)[0] == 0x02 && ins[s + 1].opcode == OP_EXP)
            return true;
    }
    return false;
}
}  // namespace

InterfaceSet extract_interface(const Bytecode& code)
{
    const auto ins = disassemble(code.code);
    const auto first_load = std::find_if(ins.begin(), ins.end(),
        [](const Instruction& x) { return x.opcode == OP_CALLDATALOAD; });
    if (first_load == ins.end())
        return {};

    struct Candidate
    {
        size_t index;
        uint32_t value;
        bool wide;
    };
    std::vector<Candidate> candidates;
    bool selector_extracted = false;

    // Legacy code sets up the divisor before loading the call data.
    const auto start = static_cast<size_t>(first_load - ins.begin()) + 1;
    for (size_t i = 0; i < ins.size(); ++i)
    {
        const auto& x = ins[i];
        if (!x.push_arg)
            continue;
        if (!selector_extracted && extracts_selector(ins, i))
            selector_extracted = true;
        if (i < start)
            continue;

        const auto width = push_size(x.opcode);
        if (x.truncated || width > 4)
            continue;
        const auto value = push_value(x);
        if (width == 4 && value == selector_mask)
            continue;

        const auto c = find_comparison(ins, i);
        if (c == std::string::npos || !jumpi_follows(ins, c))
            continue;

        if (width == 4)
            candidates.push_back({i, value, true});
        else if (selector_extracted && i > 0 && ins[i - 1].opcode == OP_DUP1 &&
                 c == i + 1)
            candidates.push_back({i, value, false});
    }

    InterfaceSet out;
    for (size_t k = 0; k < candidates.size(); ++k)
    {
        const auto& cand = candidates[k];
        bool accept = cand.wide;
        if (!accept)
        {
            const auto near_wide = [&](const Candidate& other) {
                const auto d = other.index > cand.index ? other.index - cand.index :
                                                          cand.index - other.index;
                return other.wide && d <= chain_window;
            };
            accept = std::any_of(candidates.begin(), candidates.end(), near_wide);
        }
        if (accept)
            out.insert(Selector::from_value(cand.value));
    }
    return out;
}

SignatureDirectory::AddResult SignatureDirectory::add(const FunctionHeader& header)
{
    return add(selector_of(header), header);
}

SignatureDirectory::AddResult SignatureDirectory::add(Selector selector, const FunctionHeader& header)
{
    if (selector_of(header) != selector)
        return AddResult::mismatch;
    auto& list = entries_[selector];
    if (std::find(list.begin(), list.end(), header) != list.end())
        return AddResult::duplicate;
    list.push_back(header);
    ++header_count_;
    return AddResult::added;
}

std::span<const FunctionHeader> SignatureDirectory::lookup(Selector s) const noexcept
{
    const auto it = entries_.find(s);
    if (it == entries_.end())
        return {};
    return it->second;
}

DirectoryLoad parse_directory(std::istream& in)
{
    DirectoryLoad r;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        const auto t = trim(line);
        if (t.empty() || t[0] == '#')
            continue;

        const auto reject = [&](const std::string& why) {
            ++r.rejected;
            r.diagnostics.push_back({line_no, why});
        };
        if (line.size() < 10 || line[8] != ' ')
        {
            reject("expected '<8 hex digits> <header>'");
            continue;
        }
        try
        {
            const auto sel = Selector::parse(std::string_view{line}.substr(0, 8));
            const auto header = FunctionHeader::parse(std::string_view{line}.substr(9));
            switch (r.directory.add(sel, header))
            {
            case SignatureDirectory::AddResult::added:
                ++r.loaded;
                break;
            case SignatureDirectory::AddResult::duplicate:
                ++r.duplicates;
                break;
            case SignatureDirectory::AddResult::mismatch:
                reject("selector " + sel.str() + " does not match " + header.text());
                break;
            }
        }
        catch (const std::invalid_argument& e)
        {
            reject(e.what());
        }
    }
    return r;
}

DirectoryLoad load_directory(const std::filesystem::path& path)
{
    std::ifstream in{path};
    if (!in)
        throw io_error{"cannot open signature directory " + path.string()};
    auto r = parse_directory(in);
    if (in.bad())
        throw io_error{"error reading signature directory " + path.string()};
    return r;
}

size_t RestoredInterface::resolved_count() const noexcept
{
    return static_cast<size_t>(
        std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.resolved(); }));
}

double RestoredInterface::resolution_ratio() const noexcept
{
    if (entries.empty())
        return 1.0;
    return static_cast<double>(resolved_count()) / static_cast<double>(entries.size());
}

RestoredInterface restore_headers(const InterfaceSet& iface, const SignatureDirectory& dir)
{
    RestoredInterface r;
    for (const auto s : iface)
    {
        const auto found = dir.lookup(s);
        r.entries.push_back({s, {found.begin(), found.end()}});
    }
    return r;
}

}  // namespace walletscope
