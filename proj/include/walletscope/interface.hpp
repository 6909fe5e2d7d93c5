// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <walletscope/errors.hpp>
#include <walletscope/evm.hpp>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace walletscope
{
/// 4-byte ABI function selector.
struct Selector : fixed_bytes<4>
{
    Selector() = default;
    Selector(const fixed_bytes<4>& b) : fixed_bytes{b} {}

    static Selector from_value(uint32_t v) noexcept;

    /// Parses 8 hex digits, optionally 0x-prefixed.
    static Selector parse(std::string_view text);

    uint32_t value() const noexcept;

    /// 8 lowercase hex digits, no prefix.
    std::string str() const { return hex(false); }
};

/// Thrown for function headers that cannot be canonicalized.
struct header_error : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

/// Canonical function signature text such as "transfer(address,uint256)".
class FunctionHeader
{
public:
    /// Validates and canonicalizes: type aliases are expanded (uint -> uint256,
    /// int -> int256, byte -> bytes1, fixed -> fixed128x18, ufixed -> ufixed128x18).
    /// Whitespace, unbalanced parentheses or a malformed name are rejected.
    static FunctionHeader parse(std::string_view text);

    const std::string& text() const noexcept { return text_; }
    std::string_view name() const noexcept { return std::string_view{text_}.substr(0, text_.find('(')); }

    friend auto operator<=>(const FunctionHeader&, const FunctionHeader&) = default;

private:
    std::string text_;
};

/// First four bytes of Keccak-256 of the header text.
Selector selector_of(const FunctionHeader& header) noexcept;

/// Parses then hashes; throws header_error for malformed text.
Selector selector_of(std::string_view header_text);

/// Set of selectors a contract dispatches on.
class InterfaceSet
{
public:
    InterfaceSet() = default;
    InterfaceSet(std::initializer_list<Selector> init) : selectors_{init} {}
    template <typename It>
    InterfaceSet(It first, It last) : selectors_{first, last}
    {}

    bool insert(Selector s) { return selectors_.insert(s).second; }
    bool contains(Selector s) const { return selectors_.contains(s); }
    size_t size() const noexcept { return selectors_.size(); }
    bool empty() const noexcept { return selectors_.empty(); }

    auto begin() const noexcept { return selectors_.begin(); }
    auto end() const noexcept { return selectors_.end(); }

    /// Sorted selectors separated by single spaces; empty string for {}.
    std::string str() const;

    /// Inverse of str().
    static InterfaceSet parse(std::string_view text);

    friend bool operator==(const InterfaceSet&, const InterfaceSet&) = default;

private:
    std::set<Selector> selectors_;
};

/// Recovers the dispatcher's selector constants from deployed code.
///
/// A PUSH4 constant qualifies when one of the next two instructions, ignoring
/// DUP/SWAP, is EQ (or SUB followed by ISZERO) and a JUMPI follows within 8
/// instructions in the same basic block. Only code after the first
/// CALLDATALOAD is considered. Shorter pushes (selectors with leading zero
/// bytes) qualify in the `DUP1 PUSHn c EQ` form once the selector has been
/// extracted via DIV by 2^224 or SHR by 224, and only next to a PUSH4
/// comparison chain. Binary-search splits (LT/GT) are not comparisons and the
/// mask 0xffffffff is never reported.
InterfaceSet extract_interface(const Bytecode& code);

/// Lookup table from selector to the headers known to hash to it.
class SignatureDirectory
{
public:
    enum class AddResult
    {
        added,
        duplicate,
        mismatch,
    };

    /// Adds `header` under its own selector.
    AddResult add(const FunctionHeader& header);

    /// Adds `header` under `selector`; rejected when the header does not hash to it.
    AddResult add(Selector selector, const FunctionHeader& header);

    /// Headers for `s` in insertion order; empty when unknown.
    std::span<const FunctionHeader> lookup(Selector s) const noexcept;

    size_t selector_count() const noexcept { return entries_.size(); }
    size_t header_count() const noexcept { return header_count_; }

    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

private:
    std::map<Selector, std::vector<FunctionHeader>> entries_;
    size_t header_count_ = 0;
};

struct DirectoryLoad
{
    SignatureDirectory directory;
    size_t loaded = 0;
    size_t duplicates = 0;
    size_t rejected = 0;
    std::vector<Diagnostic> diagnostics;
};

/// Parses "<8 hex digits> <header>" lines; '#' starts a comment line.
DirectoryLoad parse_directory(std::istream& in);

/// Throws io_error when the file cannot be read.
DirectoryLoad load_directory(const std::filesystem::path& path);

struct HeaderResolution
{
    Selector selector;
    /// Empty when the selector is unresolved.
    std::vector<FunctionHeader> headers;

    bool resolved() const noexcept { return !headers.empty(); }
};

struct RestoredInterface
{
    std::vector<HeaderResolution> entries;

    size_t resolved_count() const noexcept;

    /// Resolved over total; 1.0 for an empty interface.
    double resolution_ratio() const noexcept;
};

RestoredInterface restore_headers(const InterfaceSet& iface, const SignatureDirectory& dir);

}  // namespace walletscope
