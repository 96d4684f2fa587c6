// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>

#include "drc/units.hpp"

using namespace drc::units;

TEST(Sizes, Suffixes) {
    EXPECT_EQ(parse_size("4096"), 4096u);
    EXPECT_EQ(parse_size("12B"), 12u);
    EXPECT_EQ(parse_size("256K"), 256u * 1024);
    EXPECT_EQ(parse_size("256KiB"), 256u * 1024);
    EXPECT_EQ(parse_size("64MiB"), 64u << 20);
    EXPECT_EQ(parse_size("64 mib"), 64u << 20);
    EXPECT_EQ(parse_size("1G"), 1u << 30);
    EXPECT_EQ(parse_size("1.5K"), 1536u);
    EXPECT_EQ(parse_size("0"), 0u);
}

TEST(Sizes, Rejects) {
    for (const char* bad : {"", "abc", "12Q", "1.3B", "-4K", "0.1K", "nan"}) EXPECT_THROW(parse_size(bad), drc::ConfigError) << bad;
}

TEST(Bandwidths, Suffixes) {
    EXPECT_DOUBLE_EQ(parse_bandwidth("200M"), 2e8);
    EXPECT_DOUBLE_EQ(parse_bandwidth("200Mb/s"), 2e8);
    EXPECT_DOUBLE_EQ(parse_bandwidth("2Gbps"), 2e9);
    EXPECT_DOUBLE_EQ(parse_bandwidth("0.2G"), 2e8);
    EXPECT_DOUBLE_EQ(parse_bandwidth("1000"), 1000.0);
    EXPECT_DOUBLE_EQ(parse_bandwidth("10k"), 1e4);
    EXPECT_TRUE(std::isinf(parse_bandwidth("inf")));
    EXPECT_TRUE(std::isinf(parse_bandwidth("INF")));
}

TEST(Bandwidths, Rejects) {
    for (const char* bad : {"", "fast", "0", "-1G", "5T", "1Gxyz"}) EXPECT_THROW(parse_bandwidth(bad), drc::ConfigError) << bad;
}

TEST(Numbers, Plain) {
    EXPECT_DOUBLE_EQ(parse_number("0.005"), 0.005);
    EXPECT_DOUBLE_EQ(parse_number("365.25"), 365.25);
    for (const char* bad : {"", "x", "4years", "inf"}) EXPECT_THROW(parse_number(bad), drc::ConfigError) << bad;
}

TEST(Lists, CommaSeparated) {
    const auto v = parse_list("200M,500M,,1G", parse_bandwidth);
    ASSERT_EQ(v.size(), 3u);
    EXPECT_DOUBLE_EQ(v[0], 2e8);
    EXPECT_DOUBLE_EQ(v[2], 1e9);
    EXPECT_TRUE(parse_list("", parse_size).empty());
    EXPECT_THROW(parse_list("1K,zz", parse_size), drc::ConfigError);
}

TEST(Ranges, Geometric) {
    const auto v = parse_range("1KiB:16KiB:x2", parse_size);
    ASSERT_EQ(v.size(), 5u);
    EXPECT_DOUBLE_EQ(v.front(), 1024);
    EXPECT_DOUBLE_EQ(v.back(), 16384);
    const auto g = parse_range("100M:10G:x10", parse_bandwidth);
    ASSERT_EQ(g.size(), 3u);
    EXPECT_NEAR(g[2], 1e10, 1);
}

TEST(Ranges, ArithmeticAndList) {
    const auto v = parse_range("1M:4M:+1M", parse_size);
    ASSERT_EQ(v.size(), 4u);
    EXPECT_DOUBLE_EQ(v[3], 4.0 * (1 << 20));
    const auto l = parse_range("8K,64K", parse_size);
    ASSERT_EQ(l.size(), 2u);
    const auto one = parse_range("4M:4M:x2", parse_size);
    ASSERT_EQ(one.size(), 1u);
}

TEST(Ranges, Rejects) {
    for (const char* bad : {"", "1K:2K", "1K:2K:2", "1K:2K:x1", "1K:2K:x0.5", "1K:2K:+0", "1K:2K:xq", "4K:1K:x2", "1K:2K:x2z"})
        EXPECT_THROW(parse_range(bad, parse_size), drc::ConfigError) << bad;
}
