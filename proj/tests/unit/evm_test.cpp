// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include "asm.hpp"
#include "generators.hpp"

#include <walletscope/evm.hpp>

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace walletscope;

TEST(disassemble, simple)
{
    const auto ins = disassemble(from_hex("6001600101"));
    ASSERT_EQ(ins.size(), 3u);
    EXPECT_EQ(ins[0].name(), "PUSH1");
    EXPECT_EQ(*ins[0].push_arg, bytes{0x01});
    EXPECT_EQ(ins[1].offset, 2u);
    EXPECT_EQ(ins[2].name(), "ADD");
    EXPECT_FALSE(ins[2].push_arg);
}

TEST(disassemble, stop)
{
    const auto ins = disassemble(from_hex("00"));
    ASSERT_EQ(ins.size(), 1u);
    EXPECT_EQ(ins[0].opcode, OP_STOP);
}

TEST(disassemble, truncated_push)
{
    auto ins = disassemble(from_hex("60"));
    ASSERT_EQ(ins.size(), 1u);
    EXPECT_TRUE(ins[0].truncated);
    EXPECT_TRUE(ins[0].push_arg->empty());

    ins = disassemble(from_hex("0163a905"));
    ASSERT_EQ(ins.size(), 2u);
    EXPECT_TRUE(ins[1].truncated);
    EXPECT_EQ(*ins[1].push_arg, (bytes{0xa9, 0x05}));
    EXPECT_EQ(ins[1].size(), 3u);
}

TEST(disassemble, undefined_opcodes)
{
    const auto ins = disassemble(from_hex("0c21fe"));
    ASSERT_EQ(ins.size(), 3u);
    EXPECT_FALSE(is_defined(0x0c));
    EXPECT_EQ(ins[0].name(), "INVALID");
    EXPECT_TRUE(is_defined(0xfe));
    EXPECT_EQ(format_listing(ins), "0: INVALID (0x0c)\n1: INVALID (0x21)\n2: INVALID\n");
}

TEST(disassemble, encode_round_trip)
{
    test::Rng rng{7};
    for (int i = 0; i < 200; ++i)
    {
        const auto code = test::random_code(rng, 1 + i % 60, i % 2 == 0);
        EXPECT_EQ(encode(disassemble(code)), code);
    }
}

// Listings frozen from pyevmasm (istanbul) for streams with complete pushes.
TEST(disassemble, matches_reference_disassembler)
{
    std::ifstream in{test::fixtures_dir() / "oracles" / "disasm.tsv"};
    ASSERT_TRUE(in);
    std::string line;
    size_t n = 0;
    while (std::getline(in, line))
    {
        const auto f = split(line, '\t');
        ASSERT_EQ(f.size(), 2u);
        std::string listing;
        for (const auto& ins : disassemble(from_hex(f[0])))
        {
            if (!listing.empty())
                listing += ' ';
            listing += std::to_string(ins.offset) + ':' + std::string{ins.name()};
            if (ins.push_arg)
                listing += ':' + to_hex(*ins.push_arg, false);
        }
        EXPECT_EQ(listing, f[1]) << "code " << f[0];
        ++n;
    }
    EXPECT_EQ(n, 150u);
}

TEST(solc, fingerprints)
{
    EXPECT_EQ(detect_solc(from_hex("6060604052600080fd")), SolcKind::plain_solc);
    EXPECT_EQ(detect_solc(from_hex("6080604052348015")), SolcKind::plain_solc);
    EXPECT_EQ(detect_solc(from_hex("608060408181525f")), SolcKind::plain_solc);
    const auto lib = "73" + std::string(40, 'a') + "3014" + "6080604052";
    EXPECT_EQ(detect_solc(from_hex(lib)), SolcKind::library_solc);
    const auto lib_pop = "73" + std::string(40, '0') + "50" + "6060604052";
    EXPECT_EQ(detect_solc(from_hex(lib_pop)), SolcKind::library_solc);
    EXPECT_EQ(detect_solc(from_hex("00")), SolcKind::other);
    EXPECT_EQ(detect_solc(from_hex("")), SolcKind::other);
    EXPECT_EQ(detect_solc(from_hex("6080")), SolcKind::other);
    EXPECT_EQ(detect_solc(from_hex("73" + std::string(40, 'a'))), SolcKind::other);
}

TEST(metadata, bzzr0_trailer)
{
    const auto trailer = "a165627a7a72305820" + std::string(64, '1') + "0029";
    const auto code = from_hex("6080604052600080fd00" + trailer);
    const auto m = locate_metadata(code);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->length, 0x2bu);
    EXPECT_EQ(m->start_offset, 10u);
}

TEST(metadata, ipfs_trailer)
{
    // solc 0.6+: {"ipfs": <34 bytes>, "solc": <3 bytes>}
    const auto trailer = "a264697066735822" + std::string(68, '2') + "64736f6c634300060c" + "0033";
    const auto code = from_hex("60806040" + trailer);
    const auto m = locate_metadata(code);
    ASSERT_TRUE(m);
    EXPECT_EQ(m->length, 0x35u);
    EXPECT_EQ(m->start_offset, 4u);
}

TEST(metadata, absent)
{
    EXPECT_FALSE(locate_metadata(from_hex("6001600101")));
    EXPECT_FALSE(locate_metadata(from_hex("00c8")));
    EXPECT_FALSE(locate_metadata(from_hex("c8")));
    EXPECT_FALSE(locate_metadata(from_hex("")));
    // consistent length, but no CBOR map with a hash key
    EXPECT_FALSE(locate_metadata(from_hex("6001600101" + std::string(8, '0') + "0004")));
}

TEST(metadata, embedded_trailers)
{
    test::Rng rng{3};
    const auto child = from_hex("6080604052600080fd");
    auto code = from_hex("6080604052");
    code.insert(code.end(), child.begin(), child.end());
    const auto t1 = test::random_metadata(rng);
    code.insert(code.end(), t1.begin(), t1.end());
    const auto t1_start = code.size() - t1.size();
    code.insert(code.end(), child.begin(), child.end());
    const auto t2 = test::random_metadata(rng);
    code.insert(code.end(), t2.begin(), t2.end());
    const auto t2_start = code.size() - t2.size();

    const auto found = find_embedded_metadata(code);
    ASSERT_EQ(found.size(), 2u);
    EXPECT_EQ(found[0], (MetadataTrailer{t1_start, 0x2b}));
    EXPECT_EQ(found[1], (MetadataTrailer{t2_start, 0x2b}));
}

TEST(read_hex_lines, comments_and_errors)
{
    std::istringstream in{"# comment\n6001\n\n  0x00  \n"};
    const auto codes = read_hex_lines(in, CodeSource::creation);
    ASSERT_EQ(codes.size(), 2u);
    EXPECT_EQ(codes[0].code, (bytes{0x60, 0x01}));
    EXPECT_EQ(codes[1].source, CodeSource::creation);

    std::istringstream bad{"6001\nxyz\n"};
    EXPECT_THROW(read_hex_lines(bad), hex_error);
}

TEST(assembler, pads_push_arguments)
{
    EXPECT_EQ(test::assemble("PUSH4 0x1234 EQ"), from_hex("630000123414"));
    EXPECT_EQ(test::assemble("PUSH1 0x1 # comment\nraw:60"), from_hex("600160"));
    EXPECT_THROW(test::assemble("PUSH1 0x1234"), std::invalid_argument);
    EXPECT_THROW(test::assemble("NOPE"), std::invalid_argument);
}
