// walletscope: EVM wallet contract analysis
// Copyright 2026 The walletscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"
#include "asm.hpp"
#include "generators.hpp"

#include <cli.hpp>

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace walletscope;

namespace
{
struct Result
{
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args, const std::string& input = {})
{
    std::istringstream in{input};
    std::ostringstream out, err;
    const auto no_env = [](const char*) -> std::optional<std::string> { return std::nullopt; };
    const auto code = cli::run(args, in, out, err, no_env);
    return {code, out.str(), err.str()};
}

class CliStore : public ::testing::Test
{
protected:
    void SetUp() override
    {
        dir_ = test::temp_dir("cli");
        store_ = (dir_ / "store.log").string();
    }
    void TearDown() override { std::filesystem::remove_all(dir_); }

    Result ws(std::vector<std::string> args, const std::string& input = {})
    {
        args.insert(args.begin(), {"--store", store_});
        return run(std::move(args), input);
    }

    std::string corpus(const char* name) const { return (test::corpus_dir() / name).string(); }

    std::filesystem::path dir_;
    std::string store_;
};
}  // namespace

TEST(cli, skeleton_from_stdin)
{
    const auto r = run({"skeleton"}, "# codes\n0x6001600101\n\n600100\n");
    EXPECT_EQ(r.code, cli::exit_ok) << r.err;
    const auto lines = split(r.out, '\n');
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_TRUE(lines[0].starts_with("0x6000600001 0x")) << lines[0];
    EXPECT_TRUE(lines[1].starts_with("0x60 0x")) << lines[1];
}

TEST(cli, interface_from_stdin)
{
    const auto code =
        test::assemble("PUSH1 0 CALLDATALOAD PUSH1 0xe0 SHR DUP1 PUSH4 0xa9059cbb EQ PUSH1 0x20 JUMPI STOP");
    const auto r = run({"interface", "-"}, to_hex(code) + "\n");
    EXPECT_EQ(r.code, cli::exit_ok) << r.err;
    EXPECT_EQ(r.out, "1\ta9059cbb\n");
}

TEST(cli, usage_errors)
{
    EXPECT_EQ(run({}).code, cli::exit_usage);
    EXPECT_EQ(run({"frobnicate"}).code, cli::exit_usage);
    EXPECT_EQ(run({"skeleton", "--no-such-flag"}).code, cli::exit_usage);
    EXPECT_EQ(run({"--jobs", "0", "skeleton"}).code, cli::exit_usage);
    EXPECT_EQ(run({"--help"}).code, cli::exit_ok);
}

TEST(cli, missing_and_malformed_input)
{
    auto r = run({"skeleton", "/nonexistent/codes.hex"});
    EXPECT_EQ(r.code, cli::exit_io);
    EXPECT_NE(r.err.find("walletscope:"), std::string::npos);
    EXPECT_EQ(run({"skeleton"}, "0xzz\n").code, cli::exit_io);
    EXPECT_EQ(run({"--rules", "/nonexistent.rules", "rules"}).code, cli::exit_io);
}

TEST(cli, rules_round_trip)
{
    const auto first = run({"rules"});
    ASSERT_EQ(first.code, cli::exit_ok) << first.err;
    const auto dir = test::temp_dir("cli_rules");
    const auto path = dir / "canonical.rules";
    std::ofstream{path} << first.out;
    const auto second = run({"--rules", path.string(), "rules"});
    EXPECT_EQ(second.out, first.out);
    std::filesystem::remove_all(dir);
}

TEST_F(CliStore, report_on_empty_store)
{
    const auto r = ws({"report", "--variety"});
    EXPECT_EQ(r.code, cli::exit_ok) << r.err;
    EXPECT_TRUE(r.out.starts_with("variety\tkey\tdeployments\tbytecodes\tskeletons\tcreators\n"));
    EXPECT_NE(r.out.find("total\tall\t0\t0\t0\t0"), std::string::npos) << r.out;
}

TEST_F(CliStore, corrupt_store)
{
    std::ofstream{store_} << "not a store\n";
    EXPECT_EQ(ws({"report"}).code, cli::exit_corruption);
}

TEST_F(CliStore, corpus_pipeline)
{
    auto r = ws({"ingest-code", corpus("codes.txt")});
    ASSERT_EQ(r.code, cli::exit_ok) << r.err;
    EXPECT_NE(r.out.find("rejected\t0"), std::string::npos) << r.out;
    r = ws({"ingest-traces", corpus("traces.tsv")});
    ASSERT_EQ(r.code, cli::exit_ok) << r.err;
    r = ws({"ingest-events", corpus("events.tsv")});
    ASSERT_EQ(r.code, cli::exit_ok) << r.err;

    r = ws({"classify"});
    ASSERT_EQ(r.code, cli::exit_ok) << r.err;
    EXPECT_EQ(r.out, test::read_file(test::corpus_dir() / "expected_classify.tsv"));
    EXPECT_EQ(ws({"classify"}).out, r.out);

    const auto report = ws({"report"});
    ASSERT_EQ(report.code, cli::exit_ok) << report.err;
    EXPECT_EQ(ws({"report"}).out, report.out);
    EXPECT_NE(report.out.find("type\tmultisig\t13\t13\t"), std::string::npos);
    EXPECT_NE(report.out.find("usage\tbin_start\t"), std::string::npos);
    EXPECT_NE(report.out.find("graph\tfull\tnodes\t"), std::string::npos);

    r = ws({"factories"});
    EXPECT_EQ(r.code, cli::exit_ok) << r.err;
    r = ws({"graph", "--remove-holders"});
    EXPECT_EQ(r.code, cli::exit_ok) << r.err;
    EXPECT_NE(r.out.find("minus_wallets_and_holders"), std::string::npos);
}

TEST_F(CliStore, ingest_rejects_bad_lines)
{
    const auto r = ws({"ingest-code"}, "0x0000000000000000000000000000000000000001 0x6000\nbogus\n");
    EXPECT_EQ(r.code, cli::exit_ok) << r.err;
    EXPECT_NE(r.out.find("addresses\t1"), std::string::npos);
    EXPECT_NE(r.out.find("rejected\t1"), std::string::npos);
    EXPECT_NE(r.err.find(":2:"), std::string::npos) << r.err;
}

TEST_F(CliStore, fuzz_without_idiosyncratic_set)
{
    ASSERT_EQ(ws({"ingest-code"}, "0x0000000000000000000000000000000000000001 0x6000\n").code,
        cli::exit_ok);
    const auto r = ws({"fuzz", "--seed", "0x0000000000000000000000000000000000000001"});
    EXPECT_EQ(r.code, cli::exit_no_idiosyncratic_set) << r.err;
}

TEST(cli, rpc_without_endpoint)
{
    const auto dir = test::temp_dir("cli_rpc");
    const auto r = run({"--store", (dir / "s").string(), "ingest-traces", "--rpc-blocks", "1"});
    EXPECT_EQ(r.code, cli::exit_usage);
    std::filesystem::remove_all(dir);
}
