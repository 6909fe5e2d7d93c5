// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <walletscope/skeleton.hpp>
#include <walletscope/trace.hpp>

#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>

namespace walletscope
{
inline constexpr std::string_view store_header = "walletscope-store v1";

struct CodeRecord
{
    hash256 code_hash;
    Bytecode code;
    hash256 skeleton_hash;
    InterfaceSet interface;
    SolcKind solc = SolcKind::other;

    /// Computes hash and caches from the bytes.
    static CodeRecord from_code(const Bytecode& code);

    friend bool operator==(const CodeRecord&, const CodeRecord&) = default;
};

struct AddressRecord
{
    Address address;
    hash256 code_hash;
    std::optional<Address> creator;
    std::optional<uint64_t> creation_block;
    std::optional<Classification> classification;
    std::optional<UsageBucket> usage;

    friend bool operator==(const AddressRecord&, const AddressRecord&) = default;
};

/// Restricts dedup_stats; an empty filter selects every address record.
struct StatsFilter
{
    std::optional<WalletType> wallet_type;
    std::optional<std::string> blueprint;
};

/// Append-only record log with an in-memory index rebuilt on open.
///
/// Line formats (tab-separated, after the header line):
///   C code_hash code skeleton_hash interface solc source
///   A address code_hash creator creation_block
///   K address blueprint wallet_type trace_confirmed
///   U address bucket
///   M <trace line>
///   E <event line>
/// A later A/K/U line for the same address replaces the earlier one.
class Store
{
public:
    /// Volatile store; nothing is written.
    Store() = default;

    /// Opens or creates the log. Throws io_error when the file cannot be
    /// opened and corruption_error when a record fails verification.
    static Store open(const std::filesystem::path& path);

    /// Reads a log without opening it for writing.
    static Store read(std::istream& in);

    Store(Store&&) noexcept = default;
    Store& operator=(Store&&) noexcept = default;

    /// Idempotent content-addressed insert.
    const CodeRecord& put_code(const Bytecode& code);
    const CodeRecord* get_code(const hash256& code_hash) const noexcept;

    /// Throws std::invalid_argument when the code hash is unknown.
    void put_address(const AddressRecord& record);
    const AddressRecord* get_address(const Address& a) const noexcept;

    void set_classification(const Address& a, const std::optional<Classification>& c);
    void set_usage(const Address& a, UsageBucket bucket);

    /// Returns the number of messages not stored before.
    size_t put_messages(std::span<const Message> messages);
    size_t put_events(std::span<const TokenEvent> events);

    const std::map<hash256, CodeRecord>& codes() const noexcept { return codes_; }
    const std::map<Address, AddressRecord>& addresses() const noexcept { return addresses_; }
    const Registry& registry() const noexcept { return registry_; }
    const std::vector<TokenEvent>& events() const noexcept { return events_; }

    /// Interface of a stored address, for trace pattern evaluation.
    InterfaceLookup interface_lookup() const;

    /// Address records selected by `filter` as variety inputs.
    std::vector<Deployment> deployments(const StatsFilter& filter = {}) const;

    VarietyCounts dedup_stats(const StatsFilter& filter = {}) const;

    void flush();

private:
    void apply_line(std::string_view line, size_t line_no);
    void append(const std::string& line);
    void index_address(const AddressRecord& r);

    std::map<hash256, CodeRecord> codes_;
    std::map<Address, AddressRecord> addresses_;
    Registry registry_;
    std::vector<TokenEvent> events_;
    std::set<std::string> message_lines_;
    std::set<std::string> event_lines_;
    std::unique_ptr<std::ofstream> log_;
};

}  // namespace walletscope
