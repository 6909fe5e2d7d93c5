// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <walletscope/blueprint.hpp>

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace walletscope
{
enum class MessageKind
{
    create,
    create2,
    call,
    delegatecall,
    staticcall,
    selfdestruct,
};

std::string_view to_string(MessageKind k) noexcept;
std::optional<MessageKind> parse_message_kind(std::string_view s) noexcept;

constexpr bool is_create(MessageKind k) noexcept
{
    return k == MessageKind::create || k == MessageKind::create2;
}

constexpr bool is_call(MessageKind k) noexcept
{
    return k == MessageKind::call || k == MessageKind::delegatecall ||
           k == MessageKind::staticcall;
}

/// One trace entry: an external transaction or an internal message.
struct Message
{
    uint64_t block = 0;
    std::string tx_id;
    uint32_t index = 0;
    MessageKind kind = MessageKind::call;
    Address from;
    /// The callee, or the created address of a successful create.
    std::optional<Address> to;
    Wei value;
    std::optional<Selector> selector;
    bool success = true;
    /// ABI-encoded call arguments following the selector; optional 10th field.
    bytes args;

    friend bool operator==(const Message&, const Message&) = default;
};

/// One line of the trace file format (tab-separated, no newline).
std::string format_message(const Message& m);

/// Throws parse_error (without line number) on a malformed line.
Message parse_message(std::string_view line);

struct TraceLoad
{
    std::vector<Message> messages;
    std::vector<Diagnostic> diagnostics;
};

/// Malformed lines are skipped and reported; '#' and blank lines are ignored.
TraceLoad parse_traces(std::istream& in);

/// Transfer(address,address,uint256) event.
struct TokenEvent
{
    uint64_t block = 0;
    std::string tx_id;
    Address emitter;
    Address from;
    Address to;
    Wei amount;

    friend bool operator==(const TokenEvent&, const TokenEvent&) = default;
};

std::string format_event(const TokenEvent& e);
TokenEvent parse_event(std::string_view line);

struct EventLoad
{
    std::vector<TokenEvent> events;
    std::vector<Diagnostic> diagnostics;
};

EventLoad parse_events(std::istream& in);

struct ContractRecord
{
    Address address;
    std::optional<hash256> code_hash;
    std::optional<hash256> skeleton_hash;
    /// Absent for contracts known only from their code.
    std::optional<Address> creator;
    bool creator_is_contract = false;
    uint64_t creation_block = 0;
    std::string creation_tx;

    friend bool operator==(const ContractRecord&, const ContractRecord&) = default;
};

/// Message set plus the contract registry derived from it. The state is a
/// function of the set of messages: order and repetition do not matter.
class Registry
{
public:
    struct IngestStats
    {
        size_t added = 0;
        size_t duplicates = 0;
        /// Same (tx_id, index) with different content; the smaller line wins.
        size_t conflicts = 0;
    };

    IngestStats ingest(std::span<const Message> messages);

    /// Records the code of `address`; makes it a contract even without a create.
    void attach_code(const Address& address, const hash256& code_hash, const hash256& skeleton_hash);

    /// All messages ordered by (block, tx_id, index).
    const std::vector<Message>& messages() const noexcept { return ordered_; }

    /// Message indices of one transaction, in index order.
    std::span<const size_t> transaction(const std::string& tx_id) const noexcept;

    const std::map<Address, ContractRecord>& contracts() const noexcept { return contracts_; }
    const ContractRecord* find(const Address& a) const noexcept;
    bool is_contract(const Address& a) const noexcept { return contracts_.contains(a); }

    /// Contracts created by `creator`, ascending.
    std::span<const Address> children(const Address& creator) const noexcept;

    /// Creators with at least one child.
    const std::map<Address, std::vector<Address>>& creators() const noexcept { return children_; }

private:
    void rebuild();

    struct Key
    {
        std::string tx_id;
        uint32_t index;
        friend auto operator<=>(const Key&, const Key&) = default;
    };

    std::map<Key, Message> by_key_;
    std::map<Address, std::pair<hash256, hash256>> code_;
    std::vector<Message> ordered_;
    std::map<std::string, std::vector<size_t>> by_tx_;
    std::map<Address, ContractRecord> contracts_;
    std::map<Address, std::vector<Address>> children_;
};

/// Skeleton hash of the empty code; used for children whose code is unknown.
const hash256& empty_skeleton_hash() noexcept;

struct FactoryThresholds
{
    size_t min_children = 10;
    size_t max_skeletons = 3;
};

struct FactoryProfile
{
    Address creator;
    size_t children = 0;
    std::map<hash256, size_t> skeleton_histogram;
    bool is_factory = false;

    size_t distinct_skeletons() const noexcept { return skeleton_histogram.size(); }
};

/// Profiles of every creator, ascending by address, with the factory mark set.
std::vector<FactoryProfile> identify_factories(
    const Registry& registry, const FactoryThresholds& thresholds = {});

/// Resolves the interface of a contract; nullopt when the code is unknown.
using InterfaceLookup = std::function<std::optional<InterfaceSet>(const Address&)>;

struct TwinMatch
{
    Address wallet;     ///< delegatecalls constructor(address)
    Address companion;  ///< delegatecalls constructor(address,address)
    std::string tx_id;
};

std::vector<TwinMatch> find_twin_constructor_delegatecalls(const Registry& registry);

struct ControllerMatch
{
    Address controller;
    Address sweeper;
    std::vector<Address> wallets;
};

std::vector<ControllerMatch> find_controller_sweepers(
    const Registry& registry, const InterfaceLookup& interfaces);

/// Children whose creator satisfies the factory part of `rule`.
std::set<Address> find_factory_lineage(
    const Registry& registry, const TraceRule& rule, const InterfaceLookup& interfaces);

/// Addresses matched by a pattern kind. For twins both contracts are reported,
/// for controllers the controller. factory_lineage needs `rule`.
std::set<Address> match_trace_patterns(const Registry& registry, TracePatternKind kind,
    const InterfaceLookup& interfaces, const TraceRule* rule = nullptr);

/// Per-address trace evidence for every trace rule in `rules`. Twin rules
/// confirm the wallet of each pair; controller rules confirm the wallets.
std::map<Address, TraceContext> evaluate_trace_rules(
    const Registry& registry, const RuleSet& rules, const InterfaceLookup& interfaces);

enum class UsageBucket
{
    both,
    eth_only,
    tokens_only,
    unused,
};

inline constexpr UsageBucket all_usage_buckets[] = {
    UsageBucket::both, UsageBucket::eth_only, UsageBucket::tokens_only, UsageBucket::unused};

std::string_view to_string(UsageBucket b) noexcept;
std::optional<UsageBucket> parse_usage_bucket(std::string_view s) noexcept;

constexpr UsageBucket bucket_of(bool held_eth, bool held_tokens) noexcept
{
    if (held_eth)
        return held_tokens ? UsageBucket::both : UsageBucket::eth_only;
    return held_tokens ? UsageBucket::tokens_only : UsageBucket::unused;
}

struct UsageProfile
{
    Address address;
    bool held_eth = false;
    bool held_tokens = false;

    UsageBucket bucket() const noexcept { return bucket_of(held_eth, held_tokens); }
};

/// Token holders named in the arguments of a successful call to transfer,
/// transferFrom, mint or balanceOf.
std::vector<Address> token_holder_arguments(const Message& m);

/// One profile per address seen in `messages` or `events`, ascending.
std::vector<UsageProfile> build_usage_profiles(
    std::span<const Message> messages, std::span<const TokenEvent> events);

/// A classified deployment as counted by the variety statistics.
struct Deployment
{
    Address address;
    std::optional<hash256> code_hash;
    std::optional<hash256> skeleton_hash;
    std::optional<Address> creator;
    std::string blueprint;
    WalletType wallet_type = WalletType::simple;
};

struct VarietyCounts
{
    size_t deployments = 0;
    size_t bytecodes = 0;
    size_t skeletons = 0;
    size_t creators = 0;

    /// deployments / skeletons; 0 when there are no skeletons.
    double deployments_per_skeleton() const noexcept
    {
        return skeletons == 0 ? 0.0 : static_cast<double>(deployments) / static_cast<double>(skeletons);
    }

    friend bool operator==(const VarietyCounts&, const VarietyCounts&) = default;
};

VarietyCounts count_variety(std::span<const Deployment> deployments);

struct VarietyReport
{
    /// Every wallet type, including empty ones.
    std::map<WalletType, VarietyCounts> by_type;
    std::map<std::string, VarietyCounts> by_blueprint;
    VarietyCounts total;
};

VarietyReport variety_report(std::span<const Deployment> deployments);

}  // namespace walletscope
