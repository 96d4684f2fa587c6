// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "drc/drc_codes.hpp"
#include "drc/rs_codec.hpp"

using namespace drc;

namespace {

std::uint8_t oracle_mul(std::uint8_t a, std::uint8_t b) {
    unsigned acc = 0;
    for (int i = 0; i < 8; ++i)
        if (b & (1u << i)) acc ^= static_cast<unsigned>(a) << i;
    for (int bit = 14; bit >= 8; --bit)
        if (acc & (1u << bit)) acc ^= 0x11Du << (bit - 8);
    return static_cast<std::uint8_t>(acc);
}

std::uint8_t oracle_inv(std::uint8_t a) {
    for (unsigned b = 1; b < 256; ++b)
        if (oracle_mul(a, static_cast<std::uint8_t>(b)) == 1) return static_cast<std::uint8_t>(b);
    return 0;
}

std::vector<Block> random_blocks(std::size_t k, std::size_t bytes, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::vector<Block> out(k);
    for (std::size_t i = 0; i < k; ++i) {
        out[i].index = i;
        out[i].payload.resize(bytes);
        for (auto& b : out[i].payload) b = static_cast<std::uint8_t>(rng());
    }
    return out;
}

// Byte-by-byte reference encoder: parity_j[x] = sum_i G[j][i] data_i[x].
std::vector<std::uint8_t> oracle_parity(const RsCodeSpec& spec, const std::vector<Block>& data, std::size_t j) {
    std::vector<std::uint8_t> p(data[0].payload.size(), 0);
    for (std::size_t i = 0; i < spec.k; ++i)
        for (std::size_t x = 0; x < p.size(); ++x) p[x] ^= oracle_mul(spec.generator(j, i).value(), data[i].payload[x]);
    return p;
}

}  // namespace

TEST(Geometry, ValidCombinationsAndDerivedSizes) {
    const auto g = StripeGeometry::make(64 * MiB, 256 * KiB, 2);
    EXPECT_EQ(g.strip_count(), 256u);
    EXPECT_EQ(g.substrip_size(), 128 * KiB);
    EXPECT_EQ(g.subblock_size(), 32 * MiB);
    EXPECT_EQ(testbed_geometry(3).block_size, 63 * MiB);
    EXPECT_EQ(testbed_geometry(3).strip_size, 252 * KiB);
    EXPECT_EQ(desk_geometry(3).block_size, 4032u);
    EXPECT_EQ(desk_geometry(2).block_size, 4 * KiB);
}

TEST(Geometry, InvalidCombinationsNameTheRequiredMultiple) {
    try {
        (void)StripeGeometry::make(1000, 256, 1);
        FAIL();
    } catch (const GeometryError& e) {
        EXPECT_NE(std::string(e.what()).find("multiple of the strip size 256"), std::string::npos);
    }
    try {
        (void)StripeGeometry::make(4000, 1000, 3);
        FAIL();
    } catch (const GeometryError& e) {
        EXPECT_NE(std::string(e.what()).find("multiple of 3"), std::string::npos);
    }
    EXPECT_THROW(StripeGeometry::make(0, 1, 1), GeometryError);
    EXPECT_THROW(StripeGeometry::make(8, 0, 1), GeometryError);
    EXPECT_THROW(StripeGeometry::make(8, 8, 0), GeometryError);
}

TEST(Geometry, GatherAndScatterAreInverse) {
    const auto g = StripeGeometry::make(24, 6, 3);
    std::vector<std::uint8_t> block(24);
    for (std::size_t i = 0; i < block.size(); ++i) block[i] = static_cast<std::uint8_t>(i);
    // Strips of 6 bytes hold substrips of 2; subblock 1 takes bytes 2,3 of each strip.
    EXPECT_EQ(gather_subblock(block, g, 1), (std::vector<std::uint8_t>{2, 3, 8, 9, 14, 15, 20, 21}));
    std::vector<std::uint8_t> rebuilt(24, 0);
    for (std::size_t s = 0; s < 3; ++s) scatter_subblock(gather_subblock(block, g, s), g, s, rebuilt);
    EXPECT_EQ(rebuilt, block);
    EXPECT_THROW(gather_subblock(block, g, 3), GeometryError);
    EXPECT_THROW(gather_subblock(std::vector<std::uint8_t>(23), g, 0), GeometryError);
}

TEST(CauchyCode, GeneratorMatchesDirectConstruction) {
    const auto spec = make_rs_spec(4, 3);
    // Raw Cauchy entries 1/(x_j + y_i) with x = 0..2 and y = 3..6, then the
    // same row and column normalization computed by hand.
    std::uint8_t raw[3][4];
    for (unsigned j = 0; j < 3; ++j)
        for (unsigned i = 0; i < 4; ++i) raw[j][i] = oracle_inv(static_cast<std::uint8_t>(j ^ (3 + i)));
    for (unsigned j = 0; j < 3; ++j)
        for (unsigned i = 0; i < 4; ++i) {
            std::uint8_t v = oracle_mul(raw[j][i], oracle_inv(raw[0][i]));
            const std::uint8_t col0 = oracle_mul(raw[j][0], oracle_inv(raw[0][0]));
            v = oracle_mul(v, oracle_inv(col0));
            EXPECT_EQ(spec.generator(j, i).value(), v) << j << "," << i;
        }
    for (unsigned i = 0; i < 4; ++i) EXPECT_EQ(spec.generator(0, i), gf::kOne);
    for (unsigned j = 0; j < 3; ++j) EXPECT_EQ(spec.generator(j, 0), gf::kOne);
}

TEST(CauchyCode, ExhaustivelyMds) {
    for (auto [k, m] : std::vector<std::pair<std::size_t, std::size_t>>{{6, 3}, {5, 4}, {1, 1}, {4, 2}, {6, 5}}) {
        const auto spec = make_rs_spec(k, m);
        std::size_t count = 0;
        for_each_subset(k + m, k, [&](std::span<const std::size_t> s) {
            EXPECT_EQ(rank(spec.full_rows(s)), k);
            ++count;
            return true;
        });
        std::size_t expect = 1;
        for (std::size_t i = 0; i < k; ++i) expect = expect * (k + m - i) / (i + 1);
        EXPECT_EQ(count, expect);
        EXPECT_TRUE(is_mds(spec));
    }
}

TEST(CauchyCode, ParameterChecks) {
    EXPECT_THROW(make_rs_spec(0, 2), ParameterError);
    EXPECT_THROW(make_rs_spec(2, 0), ParameterError);
    EXPECT_THROW(make_rs_spec(200, 56), ParameterError);
    const std::uint8_t dup[] = {1, 1};
    const std::uint8_t ys[] = {2, 3};
    EXPECT_THROW(make_cauchy_spec(2, 2, dup, ys), ParameterError);
}

TEST(RsCodec, EncodeMatchesByteOracle) {
    const auto spec = make_rs_spec(6, 3);
    const auto g = StripeGeometry::make(4096, 1024, 1);
    const auto data = random_blocks(6, 4096, 1);
    const auto parity = rs_encode(data, spec, g);
    ASSERT_EQ(parity.size(), 3u);
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_EQ(parity[j].index, 6 + j);
        EXPECT_EQ(parity[j].role, BlockRole::Parity);
        EXPECT_EQ(parity[j].payload, oracle_parity(spec, data, j));
    }
}

TEST(RsCodec, ZeroDataGivesZeroParity) {
    const auto spec = make_rs_spec(5, 4);
    const auto g = StripeGeometry::make(1024, 256, 1);
    std::vector<Block> data(5);
    for (std::size_t i = 0; i < 5; ++i) data[i] = {i, BlockRole::Data, std::vector<std::uint8_t>(1024, 0)};
    for (const auto& p : rs_encode(data, spec, g))
        for (auto b : p.payload) ASSERT_EQ(b, 0);
}

TEST(RsCodec, SingleDataBlockIsReplication) {
    const auto spec = make_rs_spec(1, 3);
    const auto g = StripeGeometry::make(512, 512, 1);
    const auto data = random_blocks(1, 512, 3);
    for (const auto& p : rs_encode(data, spec, g)) EXPECT_EQ(p.payload, data[0].payload);
}

TEST(RsCodec, EveryKSubsetDecodes) {
    const auto spec = make_rs_spec(6, 3);
    const auto g = StripeGeometry::make(4096, 1024, 1);
    const auto data = random_blocks(6, 4096, 7);
    auto stripe = data;
    for (auto& p : rs_encode(data, spec, g)) stripe.push_back(p);
    std::size_t checked = 0;
    for_each_subset(9, 6, [&](std::span<const std::size_t> s) {
        std::vector<Block> avail;
        // Reverse order so the decoder's own sorting is exercised.
        for (auto it = s.rbegin(); it != s.rend(); ++it) avail.push_back(stripe[*it]);
        const auto out = rs_decode(avail, spec, g);
        for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(out[i].payload, data[i].payload);
        ++checked;
        return true;
    });
    EXPECT_EQ(checked, 84u);
}

TEST(RsCodec, StripSizeDoesNotChangeBytewiseCode) {
    const auto spec = make_rs_spec(4, 2);
    const auto data = random_blocks(4, 8192, 9);
    const auto a = rs_encode(data, spec, StripeGeometry::make(8192, 1024, 1));
    const auto b = rs_encode(data, spec, StripeGeometry::make(8192, 8192, 1));
    for (std::size_t j = 0; j < 2; ++j) EXPECT_EQ(a[j].payload, b[j].payload);
}

TEST(RsCodec, ErrorsAreTyped) {
    const auto spec = make_rs_spec(4, 2);
    const auto g = StripeGeometry::make(1024, 256, 1);
    auto data = random_blocks(4, 1024, 2);
    EXPECT_THROW(rs_encode(std::span(data).first(3), spec, g), InsufficientDataError);
    auto bad = data;
    bad[2].payload.resize(1000);
    EXPECT_THROW(rs_encode(bad, spec, g), GeometryError);
    EXPECT_THROW(rs_decode(std::span(data).first(3), spec, g), InsufficientDataError);
    std::vector<Block> dup{data[0], data[0], data[1], data[2]};
    EXPECT_THROW(rs_decode(dup, spec, g), InsufficientDataError);
}

TEST(RsCodec, DegenerateGeneratorReportsFailingSubset) {
    auto spec = make_rs_spec(3, 2);
    for (std::size_t i = 0; i < 3; ++i) spec.generator(1, i) = gf::kZero;
    EXPECT_FALSE(is_mds(spec));
    const std::size_t idx[] = {0, 1, 4};
    try {
        (void)decode_matrix(spec, idx);
        FAIL();
    } catch (const MdsViolationError& e) {
        EXPECT_NE(std::string(e.what()).find("{0,1,4}"), std::string::npos);
    }
}

TEST(StripeCodec, SubblockSetsAreEncodedIndependently) {
    const auto spec = make_code("DRC(9,6,3)");
    const auto g = desk_geometry(spec.subblocks);
    const auto data = random_blocks(6, g.block_size, 21);
    const auto stripe = encode_stripe(spec, data, g);
    ASSERT_EQ(stripe.size(), 9u);
    for (std::size_t s = 0; s < spec.subblocks; ++s) {
        std::vector<Block> sub(6);
        for (std::size_t i = 0; i < 6; ++i) sub[i] = {i, BlockRole::Data, gather_subblock(data[i].payload, g, s)};
        for (std::size_t p = 0; p < 3; ++p)
            EXPECT_EQ(gather_subblock(stripe[6 + p].payload, g, s), oracle_parity(spec.set_codes[s], sub, p));
    }
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(stripe[i].payload, data[i].payload);
}

TEST(StripeCodec, DecodeFromAnyKBlocksForDrc) {
    const auto spec = make_code("DRC(9,5,3)");
    const auto g = desk_geometry(spec.subblocks);
    const auto data = random_blocks(5, g.block_size, 5);
    const auto stripe = encode_stripe(spec, data, g);
    std::size_t checked = 0;
    for_each_subset(9, 5, [&](std::span<const std::size_t> s) {
        std::vector<Block> avail;
        for (auto i : s) avail.push_back(stripe[i]);
        const auto out = decode_stripe(spec, avail, g);
        for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(out[i].payload, data[i].payload);
        ++checked;
        return true;
    });
    EXPECT_EQ(checked, 126u);
}

TEST(StripeCodec, RejectsMismatchedGeometryAndAnalyticModels) {
    const auto spec = make_code("DRC(9,6,3)");
    const auto data = random_blocks(6, 4096, 1);
    EXPECT_THROW(encode_stripe(spec, data, StripeGeometry::make(4096, 1024, 1)), GeometryError);
    const auto msr = make_code("MSR(9,6,3)");
    EXPECT_THROW(encode_stripe(msr, data, StripeGeometry::make(4096, 1024, 1)), UnsupportedScenarioError);
}
