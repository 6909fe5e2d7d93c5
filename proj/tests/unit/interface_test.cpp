// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include "asm.hpp"
#include "fixtures.hpp"
#include "generators.hpp"

#include <walletscope/blueprint.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace walletscope;

TEST(selector, known_values)
{
    EXPECT_EQ(selector_of("transfer(address,uint256)").str(), "a9059cbb");
    EXPECT_EQ(selector_of("balanceOf(address)").str(), "70a08231");
    EXPECT_EQ(Selector::from_value(0xa9059cbb), Selector::parse("0xa9059cbb"));
    EXPECT_EQ(Selector::parse("A9059CBB").value(), 0xa9059cbbu);
    EXPECT_THROW(Selector::parse("a9059c"), hex_error);
}

TEST(selector, matches_reference_oracle)
{
    const auto vectors = test::load_selector_vectors();
    EXPECT_GE(vectors.size(), 50u);
    for (const auto& v : vectors)
        EXPECT_EQ(selector_of(v.header), v.selector) << v.header;
}

TEST(selector, oracle_covers_rule_file)
{
    std::set<std::string> covered;
    for (const auto& v : test::load_selector_vectors())
        covered.insert(v.header);
    const auto rules = load_blueprints(test::data_dir() / "blueprints.rules");
    const auto check = [&](const SignatureRef& r) {
        if (r.header)
        {
            EXPECT_TRUE(covered.contains(r.header->text())) << r.header->text();
        }
    };
    for (const auto& b : rules)
    {
        const auto visit = [&](const SignatureRule& s) {
            for (const auto& r : s.required)
                check(r);
            for (const auto& g : s.any_of)
                for (const auto& r : g)
                    check(r);
            for (const auto& r : s.optional)
                check(r);
            for (const auto& r : s.forbidden)
                check(r);
        };
        if (b.signature_rule)
            visit(*b.signature_rule);
        if (b.trace_rule && b.trace_rule->factory_rule)
            visit(*b.trace_rule->factory_rule);
    }
}

TEST(header, canonicalization)
{
    EXPECT_EQ(FunctionHeader::parse("f(uint,int,byte)").text(), "f(uint256,int256,bytes1)");
    EXPECT_EQ(FunctionHeader::parse("g(uint[],(uint,address)[2])").text(),
        "g(uint256[],(uint256,address)[2])");
    EXPECT_EQ(FunctionHeader::parse("h()").name(), "h");
    EXPECT_EQ(selector_of("transfer(address,uint)"), selector_of("transfer(address,uint256)"));
}

TEST(header, rejects_malformed)
{
    for (const auto* bad : {"f(uint256", "f(uint256))", "f (uint256)", "f(uint256, address)",
             "(uint256)", "f", "1f()", "f(,)", "f(uint256[)"})
        EXPECT_THROW(FunctionHeader::parse(bad), header_error) << bad;
}

TEST(interface_set, str_round_trip)
{
    const InterfaceSet s{Selector::from_value(0xa9059cbb), Selector::from_value(0x0000abcd)};
    EXPECT_EQ(s.str(), "0000abcd a9059cbb");
    EXPECT_EQ(InterfaceSet::parse(s.str()), s);
    EXPECT_EQ(InterfaceSet{}.str(), "");
    EXPECT_TRUE(InterfaceSet::parse("").empty());
}

TEST(extract, transfer_dispatcher)
{
    const auto code = test::assemble(
        "PUSH1 0x00 CALLDATALOAD PUSH1 0xe0 SHR DUP1 PUSH4 0xa9059cbb EQ PUSH2 0x0015 JUMPI");
    EXPECT_EQ(extract_interface({code}), (InterfaceSet{Selector::from_value(0xa9059cbb)}));
}

TEST(extract, empty_code)
{
    EXPECT_TRUE(extract_interface({}).empty());
}

TEST(extract, mask_only)
{
    EXPECT_TRUE(extract_interface({test::assemble("PUSH4 0xffffffff")}).empty());
    EXPECT_TRUE(
        extract_interface({test::assemble("PUSH1 0x00 CALLDATALOAD PUSH4 0xffffffff AND")}).empty());
}

TEST(extract, dispatcher_corpus)
{
    const auto cases = test::load_dispatchers();
    EXPECT_GE(cases.size(), 20u);
    for (const auto& c : cases)
        EXPECT_EQ(extract_interface({c.code}).str(), c.expected.str()) << c.name;
}

TEST(extract, never_reports_the_mask)
{
    test::Rng rng{99};
    const auto mask = Selector::from_value(0xffffffff);
    for (const auto& c : test::load_dispatchers())
        EXPECT_FALSE(extract_interface({c.code}).contains(mask));
    const auto prefix = test::assemble("PUSH1 0x00 CALLDATALOAD PUSH1 0xe0 SHR");
    const auto cmp = test::assemble("DUP1 PUSH4 0xffffffff EQ PUSH2 0x0010 JUMPI");
    for (int i = 0; i < 200; ++i)
    {
        auto code = prefix;
        const auto noise = test::random_code(rng, 30);
        code.insert(code.end(), cmp.begin(), cmp.end());
        code.insert(code.end(), noise.begin(), noise.end());
        EXPECT_FALSE(extract_interface({code}).contains(mask));
    }
}

TEST(directory, parse)
{
    std::istringstream in{
        "# comment\n"
        "a9059cbb transfer(address,uint256)\n"
        "a9059cbb transfer(address,uint256)\n"
        "70a08231 balanceOf(address)\n"
        "12345678 transfer(address,uint256)\n"
        "garbage\n"
        "70a08231 balanceOf(address\n"};
    const auto r = parse_directory(in);
    EXPECT_EQ(r.loaded, 2u);
    EXPECT_EQ(r.duplicates, 1u);
    EXPECT_EQ(r.rejected, 3u);
    ASSERT_EQ(r.diagnostics.size(), 3u);
    EXPECT_EQ(r.diagnostics[0].line, 5u);
    EXPECT_EQ(r.directory.selector_count(), 2u);
    EXPECT_EQ(r.directory.header_count(), 2u);
}

TEST(directory, empty_and_missing)
{
    std::istringstream in{""};
    EXPECT_EQ(parse_directory(in).directory.selector_count(), 0u);
    EXPECT_THROW(load_directory("/nonexistent/dir.txt"), io_error);
}

TEST(directory, collisions_keep_insertion_order)
{
    SignatureDirectory dir;
    EXPECT_EQ(dir.add(FunctionHeader::parse("burn(uint256)")), SignatureDirectory::AddResult::added);
    EXPECT_EQ(dir.add(FunctionHeader::parse("collate_propagate_storage(bytes16)")),
        SignatureDirectory::AddResult::added);
    EXPECT_EQ(dir.add(FunctionHeader::parse("burn(uint256)")), SignatureDirectory::AddResult::duplicate);
    EXPECT_EQ(dir.add(Selector::from_value(1), FunctionHeader::parse("burn(uint256)")),
        SignatureDirectory::AddResult::mismatch);
    const auto found = dir.lookup(Selector::from_value(0x42966c68));
    ASSERT_EQ(found.size(), 2u);
    EXPECT_EQ(found[0].text(), "burn(uint256)");
    EXPECT_EQ(found[1].text(), "collate_propagate_storage(bytes16)");
    EXPECT_EQ(dir.selector_count(), 1u);
    EXPECT_EQ(dir.header_count(), 2u);
}

TEST(restore, resolved_and_unresolved)
{
    SignatureDirectory dir;
    dir.add(FunctionHeader::parse("transfer(address,uint256)"));
    const InterfaceSet iface{Selector::from_value(0xa9059cbb), Selector::from_value(0x01020304)};
    const auto r = restore_headers(iface, dir);
    ASSERT_EQ(r.entries.size(), 2u);
    EXPECT_FALSE(r.entries[0].resolved());
    EXPECT_TRUE(r.entries[1].resolved());
    EXPECT_EQ(r.entries[1].headers[0].text(), "transfer(address,uint256)");
    EXPECT_EQ(r.resolved_count(), 1u);
    EXPECT_DOUBLE_EQ(r.resolution_ratio(), 0.5);
    EXPECT_DOUBLE_EQ(restore_headers({}, dir).resolution_ratio(), 1.0);
}
