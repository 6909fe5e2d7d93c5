// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <walletscope/keccak.hpp>
#include <walletscope/store.hpp>

#include <charconv>
#include <sstream>

namespace walletscope
{
namespace
{
std::string_view to_string(CodeSource s) noexcept
{
    return s == CodeSource::creation ? "creation" : "deployed";
}

std::optional<CodeSource> parse_source(std::string_view s) noexcept
{
    if (s == "deployed")
        return CodeSource::deployed;
    if (s == "creation")
        return CodeSource::creation;
    return std::nullopt;
}

std::optional<SolcKind> parse_solc(std::string_view s) noexcept
{
    for (const auto k : {SolcKind::plain_solc, SolcKind::library_solc, SolcKind::other})
        if (to_string(k) == s)
            return k;
    return std::nullopt;
}

std::string join_tab(std::initializer_list<std::string_view> fields)
{
    std::string out;
    for (const auto f : fields)
    {
        if (!out.empty())
            out += '\t';
        out += f;
    }
    return out;
}

[[noreturn]] void corrupt(size_t line_no, const std::string& what)
{
    throw corruption_error{"store line " + std::to_string(line_no) + ": " + what};
}

std::string interface_field(const InterfaceSet& iface)
{
    return iface.empty() ? "-" : iface.str();
}
}  // namespace

CodeRecord CodeRecord::from_code(const Bytecode& code)
{
    CodeRecord r;
    r.code_hash = keccak256(code.code);
    r.code = code;
    r.skeleton_hash = skeletonize(code).hash;
    r.interface = extract_interface(code);
    r.solc = detect_solc(code.code);
    return r;
}

Store Store::open(const std::filesystem::path& path)
{
    Store s;
    std::error_code ec;
    const bool exists = std::filesystem::exists(path, ec);
    if (exists)
    {
        std::ifstream in{path};
        if (!in)
            throw io_error{"cannot read store " + path.string()};
        s = read(in);
    }
    s.log_ = std::make_unique<std::ofstream>(path, std::ios::app);
    if (!*s.log_)
        throw io_error{"cannot open store " + path.string() + " for writing"};
    if (!exists)
        s.append(std::string{store_header});
    return s;
}

Store Store::read(std::istream& in)
{
    Store s;
    std::string line;
    if (!std::getline(in, line) || line != store_header)
        corrupt(1, "missing or unsupported version header");

    // Messages are ingested in one batch; the registry rebuild is not incremental.
    std::vector<Message> messages;
    size_t line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty())
            continue;
        if (line.starts_with("M\t"))
        {
            try
            {
                messages.push_back(parse_message(std::string_view{line}.substr(2)));
                s.message_lines_.insert(format_message(messages.back()));
            }
            catch (const parse_error& e)
            {
                corrupt(line_no, e.what());
            }
        }
        else
            s.apply_line(line, line_no);
    }
    if (in.bad())
        throw io_error{"read failure in store"};
    s.registry_.ingest(messages);
    return s;
}

void Store::apply_line(std::string_view line, size_t line_no)
{
    if (line.size() < 2 || line[1] != '\t')
        corrupt(line_no, "malformed record");
    const auto f = split(line, '\t');
    const auto& tag = f[0];
    try
    {
        if (tag == "C")
        {
            if (f.size() != 7)
                corrupt(line_no, "C record needs 7 fields");
            const auto source = parse_source(f[6]);
            if (!source)
                corrupt(line_no, "unknown code source '" + f[6] + "'");
            const auto r = CodeRecord::from_code({from_hex(f[2]), *source});
            if (r.code_hash != hash256::from_hex(f[1]))
                corrupt(line_no, "code hash mismatch for " + f[1]);
            if (r.skeleton_hash != hash256::from_hex(f[3]))
                corrupt(line_no, "skeleton hash mismatch for " + f[1]);
            if (interface_field(r.interface) != f[4])
                corrupt(line_no, "interface mismatch for " + f[1]);
            if (parse_solc(f[5]) != r.solc)
                corrupt(line_no, "compiler fingerprint mismatch for " + f[1]);
            codes_.insert_or_assign(r.code_hash, r);
        }
        else if (tag == "A")
        {
            if (f.size() != 5)
                corrupt(line_no, "A record needs 5 fields");
            AddressRecord r;
            r.address = Address::from_hex(f[1]);
            r.code_hash = hash256::from_hex(f[2]);
            if (!codes_.contains(r.code_hash))
                corrupt(line_no, "address record refers to unknown code " + f[2]);
            if (f[3] != "-")
                r.creator = Address::from_hex(f[3]);
            if (f[4] != "-")
            {
                uint64_t b = 0;
                const auto [p, ec] = std::from_chars(f[4].data(), f[4].data() + f[4].size(), b);
                if (ec != std::errc{} || p != f[4].data() + f[4].size())
                    corrupt(line_no, "invalid creation block");
                r.creation_block = b;
            }
            if (const auto* old = get_address(r.address))
            {
                r.classification = old->classification;
                r.usage = old->usage;
            }
            index_address(r);
        }
        else if (tag == "K")
        {
            if (f.size() != 5)
                corrupt(line_no, "K record needs 5 fields");
            auto it = addresses_.find(Address::from_hex(f[1]));
            if (it == addresses_.end())
                corrupt(line_no, "classification for unknown address " + f[1]);
            if (f[2] == "-")
                it->second.classification.reset();
            else
            {
                const auto type = parse_wallet_type(f[3]);
                if (!type || (f[4] != "0" && f[4] != "1"))
                    corrupt(line_no, "malformed classification");
                it->second.classification = Classification{f[2], *type, f[4] == "1"};
            }
        }
        else if (tag == "U")
        {
            if (f.size() != 3)
                corrupt(line_no, "U record needs 3 fields");
            auto it = addresses_.find(Address::from_hex(f[1]));
            const auto bucket = parse_usage_bucket(f[2]);
            if (it == addresses_.end() || !bucket)
                corrupt(line_no, "malformed usage record");
            it->second.usage = *bucket;
        }
        else if (tag == "E")
        {
            const auto rest = std::string{line.substr(2)};
            const auto e = parse_event(rest);
            if (event_lines_.insert(format_event(e)).second)
                events_.push_back(e);
        }
        else
            corrupt(line_no, "unknown record type '" + tag + "'");
    }
    catch (const std::invalid_argument& e)
    {
        corrupt(line_no, e.what());
    }
    catch (const parse_error& e)
    {
        corrupt(line_no, e.what());
    }
}

void Store::append(const std::string& line)
{
    if (!log_)
        return;
    *log_ << line << '\n';
    if (!*log_)
        throw io_error{"write to store failed"};
}

void Store::flush()
{
    if (log_)
    {
        log_->flush();
        if (!*log_)
            throw io_error{"flush of store failed"};
    }
}

void Store::index_address(const AddressRecord& r)
{
    const auto& code = codes_.at(r.code_hash);
    registry_.attach_code(r.address, code.code_hash, code.skeleton_hash);
    addresses_.insert_or_assign(r.address, r);
}

const CodeRecord& Store::put_code(const Bytecode& code)
{
    auto r = CodeRecord::from_code(code);
    if (const auto it = codes_.find(r.code_hash); it != codes_.end())
    {
        if (it->second.code.source != code.source)
            throw std::invalid_argument{
                "code " + r.code_hash.hex() + " already stored as " +
                std::string{to_string(it->second.code.source)} + " code"};
        return it->second;
    }
    append(join_tab({"C", r.code_hash.hex(), r.code.hex(), r.skeleton_hash.hex(),
        interface_field(r.interface), to_string(r.solc), to_string(code.source)}));
    return codes_.emplace(r.code_hash, std::move(r)).first->second;
}

const CodeRecord* Store::get_code(const hash256& code_hash) const noexcept
{
    const auto it = codes_.find(code_hash);
    return it == codes_.end() ? nullptr : &it->second;
}

void Store::put_address(const AddressRecord& record)
{
    if (!codes_.contains(record.code_hash))
        throw std::invalid_argument{"unknown code hash " + record.code_hash.hex()};

    const auto* old = get_address(record.address);
    const bool same_row = old && old->code_hash == record.code_hash &&
                          old->creator == record.creator &&
                          old->creation_block == record.creation_block;
    if (!same_row)
    {
        append(join_tab({"A", record.address.hex(), record.code_hash.hex(),
            record.creator ? record.creator->hex() : "-",
            record.creation_block ? std::to_string(*record.creation_block) : "-"}));
        auto r = record;
        if (old)
        {
            r.classification = old->classification;
            r.usage = old->usage;
        }
        index_address(r);
    }
    if (record.classification)
        set_classification(record.address, record.classification);
    if (record.usage)
        set_usage(record.address, *record.usage);
}

const AddressRecord* Store::get_address(const Address& a) const noexcept
{
    const auto it = addresses_.find(a);
    return it == addresses_.end() ? nullptr : &it->second;
}

void Store::set_classification(const Address& a, const std::optional<Classification>& c)
{
    const auto it = addresses_.find(a);
    if (it == addresses_.end())
        throw std::invalid_argument{"unknown address " + a.hex()};
    if (it->second.classification == c)
        return;
    if (c)
        append(join_tab({"K", a.hex(), c->blueprint, to_string(c->wallet_type),
            c->trace_confirmed ? "1" : "0"}));
    else
        append(join_tab({"K", a.hex(), "-", "-", "0"}));
    it->second.classification = c;
}

void Store::set_usage(const Address& a, UsageBucket bucket)
{
    const auto it = addresses_.find(a);
    if (it == addresses_.end())
        throw std::invalid_argument{"unknown address " + a.hex()};
    if (it->second.usage == bucket)
        return;
    append(join_tab({"U", a.hex(), to_string(bucket)}));
    it->second.usage = bucket;
}

size_t Store::put_messages(std::span<const Message> messages)
{
    const auto before = registry_.messages().size();
    for (const auto& m : messages)
    {
        // Conflicting lines are logged as well; replay resolves them identically.
        auto text = format_message(m);
        if (message_lines_.insert(text).second)
            append("M\t" + text);
    }
    registry_.ingest(messages);
    return registry_.messages().size() - before;
}

size_t Store::put_events(std::span<const TokenEvent> events)
{
    size_t added = 0;
    for (const auto& e : events)
    {
        auto text = format_event(e);
        if (!event_lines_.insert(text).second)
            continue;
        append("E\t" + text);
        events_.push_back(e);
        ++added;
    }
    return added;
}

InterfaceLookup Store::interface_lookup() const
{
    return [this](const Address& a) -> std::optional<InterfaceSet> {
        const auto* r = get_address(a);
        if (!r)
            return std::nullopt;
        return codes_.at(r->code_hash).interface;
    };
}

std::vector<Deployment> Store::deployments(const StatsFilter& filter) const
{
    std::vector<Deployment> out;
    for (const auto& [a, r] : addresses_)
    {
        const auto& c = r.classification;
        if (filter.wallet_type && (!c || c->wallet_type != *filter.wallet_type))
            continue;
        if (filter.blueprint && (!c || c->blueprint != *filter.blueprint))
            continue;

        Deployment d;
        d.address = a;
        d.code_hash = r.code_hash;
        d.skeleton_hash = codes_.at(r.code_hash).skeleton_hash;
        d.creator = r.creator;
        if (!d.creator)
            if (const auto* cr = registry_.find(a))
                d.creator = cr->creator;
        if (c)
        {
            d.blueprint = c->blueprint;
            d.wallet_type = c->wallet_type;
        }
        out.push_back(std::move(d));
    }
    return out;
}

VarietyCounts Store::dedup_stats(const StatsFilter& filter) const
{
    return count_variety(deployments(filter));
}

}  // namespace walletscope
