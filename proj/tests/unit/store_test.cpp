// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include "generators.hpp"

#include <walletscope/errors.hpp>
#include <walletscope/keccak.hpp>
#include <walletscope/store.hpp>

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace walletscope;

namespace
{
Address A(uint64_t n)
{
    return Address::from_number(n);
}

// PUSH1 <v> PUSH1 0 SSTORE STOP: distinct code, one skeleton.
Bytecode tiny(uint8_t v)
{
    return {bytes{0x60, v, 0x60, 0x00, 0x55, 0x00}};
}

AddressRecord at(uint64_t n, const hash256& code, std::optional<uint64_t> creator = {})
{
    AddressRecord r;
    r.address = A(n);
    r.code_hash = code;
    if (creator)
        r.creator = A(*creator);
    r.creation_block = 100 + n;
    return r;
}

void fill(Store& s)
{
    const auto c1 = s.put_code(tiny(1)).code_hash;
    const auto c2 = s.put_code(tiny(2)).code_hash;
    const auto c3 = s.put_code(Bytecode::from_hex("0x363d3d37")).code_hash;
    s.put_address(at(1, c1, 50));
    s.put_address(at(2, c1, 50));
    s.put_address(at(3, c2, 51));
    s.put_address(at(4, c3));
    s.set_classification(A(1), Classification{"X", WalletType::simple, false});
    s.set_classification(A(2), Classification{"X", WalletType::simple, true});
    s.set_classification(A(3), Classification{"Y", WalletType::multisig, false});
    s.set_usage(A(1), UsageBucket::eth_only);

    test::MessageSpec m;
    m.tx_id = "0xaa";
    m.from = A(50);
    m.to = A(1);
    m.value = 5;
    s.put_messages(std::vector{test::make_message(m)});
    s.put_events(std::vector{TokenEvent{3, "0xbb", A(4), A(1), A(2), Wei::from_decimal("9")}});
}

std::string dump(const Store& s)
{
    std::ostringstream out;
    for (const auto& [h, c] : s.codes())
        out << h.hex() << ' ' << c.code.hex() << ' ' << c.skeleton_hash.hex() << ' ' << c.interface.str()
            << '\n';
    for (const auto& [a, r] : s.addresses())
    {
        out << a.hex() << ' ' << r.code_hash.hex() << ' ' << (r.creator ? r.creator->hex() : "-");
        if (r.classification)
            out << ' ' << r.classification->blueprint << ' ' << r.classification->trace_confirmed;
        if (r.usage)
            out << ' ' << to_string(*r.usage);
        out << '\n';
    }
    for (const auto& m : s.registry().messages())
        out << format_message(m) << '\n';
    for (const auto& e : s.events())
        out << format_event(e) << '\n';
    return out.str();
}
}  // namespace

TEST(store, put_code_is_idempotent)
{
    Store s;
    const auto& a = s.put_code(tiny(7));
    const auto h = a.code_hash;
    EXPECT_EQ(h, keccak256(tiny(7).code));
    s.put_code(tiny(7));
    EXPECT_EQ(s.codes().size(), 1u);
    ASSERT_NE(s.get_code(h), nullptr);
    EXPECT_EQ(s.get_code(h)->code, tiny(7));
    EXPECT_EQ(s.get_code(keccak256("nothing")), nullptr);
    EXPECT_THROW(s.put_code({tiny(7).code, CodeSource::creation}), std::invalid_argument);
}

TEST(store, address_needs_code)
{
    Store s;
    EXPECT_THROW(s.put_address(at(1, keccak256("x"))), std::invalid_argument);
    EXPECT_EQ(s.get_address(A(1)), nullptr);
    EXPECT_THROW(s.set_usage(A(1), UsageBucket::both), std::invalid_argument);
}

TEST(store, round_trip_through_file)
{
    const auto dir = test::temp_dir("store");
    const auto path = dir / "s.log";
    std::string before;
    {
        auto s = Store::open(path);
        fill(s);
        // repeating every write adds no records
        fill(s);
        s.flush();
        before = dump(s);
    }
    const auto log = test::read_file(path);
    EXPECT_TRUE(log.starts_with(std::string{store_header} + "\n"));
    {
        auto s = Store::open(path);
        EXPECT_EQ(dump(s), before);
        fill(s);
    }
    EXPECT_EQ(test::read_file(path), log);
    std::filesystem::remove_all(dir);
}

TEST(store, classification_can_be_cleared)
{
    const auto dir = test::temp_dir("store_clear");
    const auto path = dir / "s.log";
    {
        auto s = Store::open(path);
        fill(s);
        s.set_classification(A(1), std::nullopt);
    }
    std::ifstream in{path};
    const auto s = Store::read(in);
    EXPECT_FALSE(s.get_address(A(1))->classification);
    EXPECT_TRUE(s.get_address(A(2))->classification);
    std::filesystem::remove_all(dir);
}

TEST(store, corruption_is_detected)
{
    const auto dir = test::temp_dir("store_bad");
    const auto path = dir / "s.log";
    {
        auto s = Store::open(path);
        fill(s);
    }
    const auto good = test::read_file(path);
    const auto code_hex = Bytecode{tiny(1)}.hex();
    const auto pos = good.find("\t" + code_hex + "\t");
    ASSERT_NE(pos, std::string::npos);

    auto tampered = good;
    tampered[pos + code_hex.size()] = tampered[pos + code_hex.size()] == '0' ? '1' : '0';
    std::istringstream in{tampered};
    EXPECT_THROW(Store::read(in), corruption_error);

    for (const auto& bad : {std::string{"walletscope-store v0\n"}, good + "Z\tjunk\n",
             good + "A\t" + A(9).hex() + "\t" + keccak256("x").hex() + "\t-\t-\n",
             good + "U\t" + A(1).hex() + "\tsometimes\n", good + "M\tnot a message\n"})
    {
        std::istringstream bad_in{bad};
        EXPECT_THROW(Store::read(bad_in), corruption_error);
    }

    {
        std::ofstream out{path};
        out << tampered;
    }
    EXPECT_THROW(Store::open(path), corruption_error);
    std::filesystem::remove_all(dir);
}

TEST(store, unwritable_path)
{
    EXPECT_THROW(Store::open("/nonexistent-dir/for/store.log"), io_error);
}

TEST(store, registry_and_lookup)
{
    Store s;
    fill(s);
    EXPECT_TRUE(s.registry().is_contract(A(4)));
    EXPECT_EQ(s.registry().messages().size(), 1u);
    EXPECT_EQ(s.events().size(), 1u);
    const auto lookup = s.interface_lookup();
    EXPECT_TRUE(lookup(A(1)));
    EXPECT_FALSE(lookup(A(77)));
}

TEST(store, dedup_stats)
{
    Store s;
    fill(s);
    EXPECT_EQ(s.dedup_stats(), (VarietyCounts{4, 3, 2, 2}));
    EXPECT_EQ(s.dedup_stats({WalletType::simple, std::nullopt}), (VarietyCounts{2, 1, 1, 1}));
    EXPECT_EQ(s.dedup_stats({std::nullopt, "Y"}), (VarietyCounts{1, 1, 1, 1}));
    EXPECT_EQ(s.dedup_stats({WalletType::smart, std::nullopt}), VarietyCounts{});
    EXPECT_EQ(Store{}.dedup_stats(), VarietyCounts{});
}

TEST(store, three_clones)
{
    Store s;
    const auto c = s.put_code(tiny(1)).code_hash;
    for (uint64_t i = 1; i <= 3; ++i)
        s.put_address(at(i, c, 10 + i));
    const auto v = s.dedup_stats();
    EXPECT_EQ(v.deployments, 3u);
    EXPECT_EQ(v.bytecodes, 1u);
    EXPECT_EQ(v.skeletons, 1u);
    EXPECT_LE(v.creators, 3u);
}

TEST(store, variety_ordering_against_naive_count)
{
    test::Rng rng{99};
    Store s;
    std::vector<hash256> codes;
    for (uint8_t v = 0; v < 20; ++v)
    {
        auto b = tiny(v);
        if (v % 4 == 0)
            b.code.insert(b.code.begin(), 0x5b);
        codes.push_back(s.put_code(b).code_hash);
    }
    static const char* names[] = {"P", "Q", "R"};
    for (uint64_t i = 1; i <= 200; ++i)
    {
        s.put_address(at(i, codes[rng() % codes.size()], 1000 + rng() % 15));
        if (rng() % 4)
        {
            const auto k = rng() % 3;
            s.set_classification(A(i), Classification{names[k], all_wallet_types[k], false});
        }
    }

    std::vector<StatsFilter> filters{{}};
    for (const auto t : all_wallet_types)
        filters.push_back({t, std::nullopt});
    for (const auto* n : names)
        filters.push_back({std::nullopt, std::string{n}});

    for (const auto& f : filters)
    {
        std::set<Address> d;
        std::set<hash256> b, k;
        std::set<Address> c;
        for (const auto& [a, r] : s.addresses())
        {
            const auto& cl = r.classification;
            if ((f.wallet_type && (!cl || cl->wallet_type != *f.wallet_type)) ||
                (f.blueprint && (!cl || cl->blueprint != *f.blueprint)))
                continue;
            d.insert(a);
            b.insert(r.code_hash);
            k.insert(s.get_code(r.code_hash)->skeleton_hash);
            c.insert(*r.creator);
        }
        const auto v = s.dedup_stats(f);
        EXPECT_EQ(v, (VarietyCounts{d.size(), b.size(), k.size(), c.size()}));
        EXPECT_GE(v.deployments, v.bytecodes);
        EXPECT_GE(v.bytecodes, v.skeletons);
    }
}
