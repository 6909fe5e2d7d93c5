// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <walletscope/interface.hpp>

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace walletscope
{
enum class WalletType
{
    simple,
    multisig,
    forwarder,
    controlled,
    update,
    smart,
};

inline constexpr WalletType all_wallet_types[] = {WalletType::simple, WalletType::multisig,
    WalletType::forwarder, WalletType::controlled, WalletType::update, WalletType::smart};

std::string_view to_string(WalletType t) noexcept;
std::optional<WalletType> parse_wallet_type(std::string_view s) noexcept;

enum class Feature
{
    eth,
    erc20_tokens,
    advanced_tokens,
    owner_admin,
    multisig,
    cosigner,
    third_party_control,
    forwarding,
    flexible_transactions,
    daily_limit_timelock,
    recovery,
    lifecycle,
    update_logic,
    module_admin,
};

inline constexpr size_t feature_count = 14;

std::string_view to_string(Feature f) noexcept;
std::optional<Feature> parse_feature(std::string_view s) noexcept;

/// Entry of a signature rule: a canonical header, or a bare selector for
/// entry points whose header is unknown.
struct SignatureRef
{
    Selector selector;
    std::optional<FunctionHeader> header;

    /// Accepts "0x" + 8 hex digits or a function header.
    static SignatureRef parse(std::string_view text);

    std::string str() const { return header ? header->text() : "0x" + selector.str(); }

    friend bool operator==(const SignatureRef& a, const SignatureRef& b) noexcept
    {
        return a.selector == b.selector && a.header == b.header;
    }
};

struct SignatureRule
{
    std::vector<SignatureRef> required;
    /// Each group is satisfied by any one of its members.
    std::vector<std::vector<SignatureRef>> any_of;
    std::vector<SignatureRef> optional;
    std::vector<SignatureRef> forbidden;
    /// Bound on selectors outside required, any_of and optional; unset = unbounded.
    std::optional<size_t> max_extra;

    friend bool operator==(const SignatureRule&, const SignatureRule&) = default;
};

struct MatchResult
{
    std::string blueprint;
    bool matched = false;
    /// Required selectors plus satisfied any_of groups.
    size_t matched_required_count = 0;
    size_t extra_selector_count = 0;
    /// Size of the required part of the rule; the primary ranking key.
    size_t required_size = 0;
};

/// Ranking: larger required set, then fewer extras, then name.
bool ranks_before(const MatchResult& a, const MatchResult& b) noexcept;

MatchResult evaluate_rule(
    const SignatureRule& rule, const InterfaceSet& iface, const std::string& blueprint_name = {});

enum class TracePatternKind
{
    factory_lineage,
    twin_constructor_delegatecall,
    controller_sweeper,
};

std::string_view to_string(TracePatternKind k) noexcept;
std::optional<TracePatternKind> parse_trace_kind(std::string_view s) noexcept;

/// How trace evidence combines with the signature rule of the same blueprint.
enum class TraceCombination
{
    any,      ///< signature match or trace evidence
    all,      ///< signature match and trace evidence
    confirm,  ///< signature match required; trace evidence raises precedence
};

std::string_view to_string(TraceCombination c) noexcept;

struct TraceRule
{
    TracePatternKind kind = TracePatternKind::factory_lineage;
    TraceCombination combine = TraceCombination::any;
    /// factory_lineage only: the creator's interface must satisfy this rule ...
    std::optional<SignatureRule> factory_rule;
    /// ... or the creator must be one of these addresses.
    std::vector<Address> creators;

    friend bool operator==(const TraceRule&, const TraceRule&) = default;
};

struct Blueprint
{
    std::string name;
    WalletType wallet_type = WalletType::simple;
    std::set<Feature> features;
    std::optional<SignatureRule> signature_rule;
    std::optional<TraceRule> trace_rule;
    std::string provenance;

    friend bool operator==(const Blueprint&, const Blueprint&) = default;
};

/// Blueprints in file order with unique names. Immutable after load.
class RuleSet
{
public:
    RuleSet() = default;

    /// Throws parse_error on a duplicate name or an invalid blueprint.
    void add(Blueprint b);

    const Blueprint* find(std::string_view name) const noexcept;

    size_t size() const noexcept { return blueprints_.size(); }
    bool empty() const noexcept { return blueprints_.empty(); }
    auto begin() const noexcept { return blueprints_.begin(); }
    auto end() const noexcept { return blueprints_.end(); }

    friend bool operator==(const RuleSet&, const RuleSet&) = default;

private:
    std::vector<Blueprint> blueprints_;
};

/// Parses the blueprint rule format (see docs/blueprint-format.md).
RuleSet parse_blueprints(std::istream& in);

/// Throws io_error when unreadable, parse_error on grammar violations.
RuleSet load_blueprints(const std::filesystem::path& path);

/// Canonical one-record-per-line rendering; parse_blueprints(format) round-trips.
std::string format_blueprints(const RuleSet& rules);

/// Matched signature-rule blueprints, best first.
std::vector<MatchResult> match_interface(const InterfaceSet& iface, const RuleSet& rules);

/// Names of blueprints whose trace rule holds for one contract.
struct TraceContext
{
    std::set<std::string> confirmed;
};

struct Classification
{
    std::string blueprint;
    WalletType wallet_type = WalletType::simple;
    bool trace_confirmed = false;

    friend bool operator==(const Classification&, const Classification&) = default;
};

/// Combines signature matches with trace evidence. Blueprints confirmed by a
/// trace rule take precedence over pure signature matches; ties follow the
/// match_interface ranking.
std::optional<Classification> classify(
    const InterfaceSet& iface, const TraceContext& trace, const RuleSet& rules);

/// Thrown when seeds share no sufficiently rare selector.
struct no_idiosyncratic_set : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

using SelectorFrequency = std::map<Selector, double>;

/// Fraction of interfaces in `corpus` containing each selector.
SelectorFrequency document_frequency(std::span<const InterfaceSet> corpus);

inline constexpr double default_fuzz_threshold = 0.01;

/// Intersection of the seed interfaces minus selectors whose corpus document
/// frequency exceeds `threshold`. Throws no_idiosyncratic_set when empty.
InterfaceSet derive_idiosyncratic_set(std::span<const InterfaceSet> seeds,
    const SelectorFrequency& corpus_freq, double threshold = default_fuzz_threshold);

struct NamedContract
{
    Address address;
    std::string name;

    friend bool operator==(const NamedContract&, const NamedContract&) = default;
};

/// Reads "<address><TAB><contract name>" lines.
std::vector<NamedContract> parse_name_corpus(std::istream& in);

/// Contracts whose name contains any of `needles` (case-sensitive substrings).
std::vector<NamedContract> filter_by_name(
    std::span<const NamedContract> corpus, std::span<const std::string> needles);

}  // namespace walletscope
