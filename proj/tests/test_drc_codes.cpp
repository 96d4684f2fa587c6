// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include "drc/drc_codes.hpp"
#include "drc/repair.hpp"
#include "drc/validate.hpp"

using namespace drc;

namespace {

const std::vector<std::string> kDrcCodes{"DRC(6,3,3)", "DRC(6,4,3)", "DRC(8,6,4)", "DRC(9,5,3)", "DRC(9,6,3)"};

struct Stripe {
    StripeGeometry g;
    std::vector<Block> blocks;
};

Stripe encoded(const CodeSpec& spec, std::uint64_t seed) {
    Stripe s{desk_geometry(spec.subblocks), {}};
    s.blocks = encode_stripe(spec, random_data_blocks(spec.k, s.g, seed), s.g);
    return s;
}

std::vector<Block> without(const std::vector<Block>& all, std::size_t f) {
    std::vector<Block> out;
    for (const auto& b : all)
        if (b.index != f) out.push_back(b);
    return out;
}

const NodeTask* task_for(const RepairPlan& p, std::size_t block) {
    for (const auto& t : p.node_tasks)
        if (t.block == block) return &t;
    return nullptr;
}

}  // namespace

TEST(Construction, Family1Shapes) {
    const auto c963 = construct_family1(9, 6);
    EXPECT_EQ(c963.family, CodeFamily::DrcFamily1);
    EXPECT_EQ(c963.r, 3u);
    EXPECT_EQ(c963.subblocks, 3u);
    EXPECT_EQ(c963.set_codes.size(), 3u);
    for (std::size_t i = 6; i < 9; ++i) EXPECT_EQ(c963.role_of(i), BlockRole::Parity);
    const auto c643 = construct_family1(6, 4);
    EXPECT_EQ(c643.r, 3u);
    EXPECT_EQ(c643.subblocks, 2u);
    const auto c864 = construct_family1(8, 6);
    EXPECT_EQ(c864.r, 4u);
    EXPECT_EQ(c864.subblocks, 2u);
    EXPECT_EQ(c963.name(), "DRC(9,6,3)");
}

TEST(Construction, Family2Shapes) {
    const auto c = construct_family2(3);
    EXPECT_EQ(c.family, CodeFamily::DrcFamily2);
    EXPECT_EQ(c.n, 9u);
    EXPECT_EQ(c.k, 5u);
    EXPECT_EQ(c.r, 3u);
    EXPECT_EQ(c.subblocks, 2u);
    EXPECT_EQ(c.m(), 4u);
    const auto c2 = construct_family2(2);
    EXPECT_EQ(c2.name(), "DRC(6,3,3)");
    EXPECT_EQ(construct_family2(4).name(), "DRC(12,7,3)");
}

TEST(Construction, RejectsUnsupportedParameters) {
    EXPECT_THROW(construct_family1(7, 5), ParameterError);
    EXPECT_THROW(construct_family1(6, 6), ParameterError);
    EXPECT_THROW(construct_family2(1), ParameterError);
    EXPECT_THROW(construct_family2(0), ParameterError);
    EXPECT_THROW(make_code("DRC(9,4,3)"), ParameterError);
    EXPECT_THROW(make_code("XYZ(9,6,3)"), ParameterError);
    EXPECT_THROW(make_code("DRC(9,6)"), ParameterError);
    EXPECT_THROW(make_code("RS(9,6,4)"), ParameterError);
}

TEST(Construction, NameParsing) {
    const auto a = parse_code_name("DRC(9,6,3)");
    const auto b = parse_code_name("DRC:9:6:3");
    EXPECT_EQ(a.family, "DRC");
    EXPECT_EQ(b.family, "DRC");
    EXPECT_EQ(a.n, 9u);
    EXPECT_EQ(b.k, 6u);
    EXPECT_EQ(a.r, b.r);
    EXPECT_EQ(make_code("RS( 9, 6, 3 )").name(), "RS(9,6,3)");
}

TEST(Construction, DeterministicAndSerializable) {
    for (const auto& name : kDrcCodes) {
        const auto a = make_code(name);
        const auto b = make_code(name);
        EXPECT_EQ(a, b) << name;
        const auto text = code_spec_to_text(a);
        EXPECT_EQ(code_spec_to_text(code_spec_from_text(text)), text) << name;
        EXPECT_EQ(code_spec_from_text(text), a) << name;
    }
    EXPECT_THROW(code_spec_from_text("{not json"), ParameterError);
    EXPECT_THROW(code_spec_from_text("{\"family\":\"DRC-1\"}"), ParameterError);
}

TEST(Construction, SubblockCountIsPolynomial) {
    for (const auto& name : kDrcCodes) {
        const auto c = make_code(name);
        const std::size_t expect = c.family == CodeFamily::DrcFamily1 ? c.n - c.k : 2;
        EXPECT_EQ(c.subblocks, expect) << name;
    }
}

TEST(Family1Plan, Drc963FailingFirstNode) {
    const auto spec = make_code("DRC(9,6,3)");
    const auto layout = default_layout(spec);
    const auto plan = plan_repair(spec, 0, layout);
    ASSERT_FALSE(plan.direct);
    EXPECT_EQ(plan.target, NodeId{0});
    ASSERT_EQ(plan.relayer_tasks.size(), 2u);
    EXPECT_EQ(plan.relayer_tasks[0].node, NodeId{3});
    EXPECT_EQ(plan.relayer_tasks[1].node, NodeId{6});

    // The parity relayer's first output is the plain sum p1 + p4 + p7 of its
    // three stored subblocks.
    const auto& rt = plan.relayer_tasks[1];
    const NodeTask* own = task_for(plan, 6);
    ASSERT_NE(own, nullptr);
    for (std::size_t s = 0; s < 3; ++s) EXPECT_EQ(own->coefficients(0, s), gf::kOne);
    ASSERT_EQ(rt.inputs.front(), static_cast<std::size_t>(own - plan.node_tasks.data()));
    EXPECT_EQ(rt.coefficients(0, 0), gf::kOne);
    for (std::size_t c = 1; c < rt.coefficients.cols(); ++c) EXPECT_TRUE(rt.coefficients(0, c).is_zero());

    for (std::size_t local : {1u, 2u}) {
        const NodeTask* t = task_for(plan, local);
        ASSERT_NE(t, nullptr);
        EXPECT_EQ(t->outputs(), 3u);
        EXPECT_EQ(t->destination, plan.target);
    }
    for (std::size_t helper : {4u, 5u, 7u, 8u}) {
        const NodeTask* t = task_for(plan, helper);
        ASSERT_NE(t, nullptr);
        EXPECT_EQ(t->outputs(), 1u) << helper;
        EXPECT_EQ(t->destination_rack, t->rack);
    }
    for (const auto& r : plan.relayer_tasks) EXPECT_EQ(r.outputs(), 3u);

    const auto s = encoded(spec, 3);
    const auto res = execute_repair(plan, without(s.blocks, 0), s.g);
    EXPECT_EQ(res.block.payload, s.blocks[0].payload);
    EXPECT_EQ(res.traffic.total_cross_rack(), 2 * s.g.block_size);
}

TEST(Family1Plan, AlignedHelpersShareOneCombination) {
    // Every non-relayer in a non-parity rack contributes the same encoded
    // subblock to all equations, up to scale.
    const auto spec = make_code("DRC(9,6,3)");
    for (std::size_t f = 0; f < 3; ++f) {
        const auto eq = derive_equations(spec, f);
        for (std::size_t i : {4u, 5u}) EXPECT_EQ(rank(eq.coefficients[i]), 1u) << "failed " << f << " helper " << i;
    }
}

TEST(Family2Plan, Drc953FailingFirstNode) {
    const auto spec = make_code("DRC(9,5,3)");
    const auto g = testbed_geometry(spec.subblocks);
    const auto layout = default_layout(spec);
    const auto plan = plan_repair(spec, 0, layout);
    ASSERT_EQ(plan.relayer_tasks.size(), 2u);
    for (const auto& rt : plan.relayer_tasks) {
        EXPECT_EQ(rt.outputs(), 1u);
        EXPECT_EQ(rt.coefficients.cols(), 3u);
    }
    // Every non-local participant reads one subblock, that is B/2 bytes.
    for (const auto& t : plan.node_tasks) {
        if (t.rack == plan.target_rack) {
            EXPECT_TRUE(t.forward_only);
            EXPECT_EQ(t.outputs(), 2u);
            continue;
        }
        EXPECT_EQ(t.read_subblocks().size(), 1u);
        EXPECT_EQ(t.read_subblocks().size() * g.subblock_size(), 32 * MiB);
    }
    // The relayer of rack 1 receives two subblocks, 64 MiB at 64 MiB blocks.
    std::size_t inner_to_relayer = 0;
    for (const auto& t : plan.node_tasks)
        if (t.destination == plan.relayer_tasks[0].node && t.node != t.destination)
            inner_to_relayer += t.outputs() * g.subblock_size();
    EXPECT_EQ(inner_to_relayer, 64 * MiB);
}

TEST(Family2Plan, RelayerOutputCancelsRackInterference) {
    // With a1..a3 zeroed, the output of rack 1's relayer depends only on
    // a4, a5 and p1 and must vanish, so it is a function of a1..a3 alone.
    const auto spec = make_code("DRC(9,5,3)");
    const auto g = desk_geometry(spec.subblocks);
    auto data = random_data_blocks(spec.k, g, 8);
    for (std::size_t i = 0; i < 3; ++i) std::fill(data[i].payload.begin(), data[i].payload.end(), 0);
    const auto stripe = encode_stripe(spec, data, g);
    const auto plan = plan_repair(spec, 0, default_layout(spec));
    for (std::size_t q = 0; q < 2; ++q) {
        const auto& rt = plan.relayer_tasks[q];
        std::vector<Buffer> in;
        for (auto ti : rt.inputs)
            for (auto& b : node_encode(stripe[plan.node_tasks[ti].block].payload, plan.node_tasks[ti].coefficients, g))
                in.push_back(b);
        const auto out = relayer_encode(in, rt.coefficients);
        ASSERT_EQ(out.size(), 1u);
        for (auto v : out[0]) ASSERT_EQ(v, 0) << "rack " << (q + 1);
    }
}

TEST(Plans, EveryBlockRepairsExactly) {
    for (const auto& name : kDrcCodes) {
        const auto spec = make_code(name);
        const auto s = encoded(spec, 11);
        const auto layout = default_layout(spec);
        for (std::size_t f = 0; f < spec.n; ++f) {
            const auto plan = plan_repair(spec, f, layout);
            const auto res = execute_repair(plan, without(s.blocks, f), s.g);
            EXPECT_EQ(res.block.payload, s.blocks[f].payload) << name << " block " << f;
            EXPECT_EQ(res.block.role, spec.role_of(f));
        }
    }
}

TEST(Plans, ZeroStripeGivesZeroBlockAndSameTally) {
    for (const auto& name : kDrcCodes) {
        const auto spec = make_code(name);
        const auto g = desk_geometry(spec.subblocks);
        std::vector<Block> zeros(spec.k);
        for (std::size_t i = 0; i < spec.k; ++i) zeros[i] = {i, BlockRole::Data, std::vector<std::uint8_t>(g.block_size, 0)};
        const auto zs = encode_stripe(spec, zeros, g);
        const auto rs = encoded(spec, 4);
        const auto plan = plan_repair(spec, 1, default_layout(spec));
        const auto a = execute_repair(plan, without(zs, 1), g);
        const auto b = execute_repair(plan, without(rs.blocks, 1), g);
        for (auto v : a.block.payload) ASSERT_EQ(v, 0);
        EXPECT_EQ(a.traffic, b.traffic) << name;
    }
}

TEST(Plans, RelayerCrossRackVolumesAreBalanced) {
    for (const auto& name : kDrcCodes) {
        const auto spec = make_code(name);
        const auto s = encoded(spec, 5);
        const auto layout = default_layout(spec);
        for (std::size_t f = 0; f < spec.n; ++f) {
            const auto plan = plan_repair(spec, f, layout);
            const auto res = execute_repair(plan, without(s.blocks, f), s.g);
            std::vector<std::uint64_t> per;
            for (const auto& rt : plan.relayer_tasks) per.push_back(res.traffic.actors().at(rt.node).cross_rack_sent_bytes);
            ASSERT_FALSE(per.empty());
            for (auto v : per) EXPECT_EQ(v, per.front()) << name << " block " << f;
        }
    }
}

TEST(Plans, Family1RelayerReceivesNoMoreThanItSends) {
    for (const auto& name : {"DRC(6,4,3)", "DRC(8,6,4)", "DRC(9,6,3)"}) {
        const auto spec = make_code(name);
        const auto g = desk_geometry(spec.subblocks);
        for (std::size_t f = 0; f < spec.n; ++f) {
            const auto plan = plan_repair(spec, f, default_layout(spec));
            for (const auto& rt : plan.relayer_tasks) {
                std::size_t received = 0;
                for (auto ti : rt.inputs) {
                    const auto& t = plan.node_tasks[ti];
                    if (t.node != rt.node) received += t.outputs() * g.subblock_size();
                }
                EXPECT_LE(received, rt.outputs() * g.subblock_size()) << name << " block " << f;
            }
        }
    }
}

TEST(Plans, RotatedRolesStillRepairExactly) {
    for (const auto& name : kDrcCodes) {
        const auto spec = make_code(name);
        const auto s = encoded(spec, 6);
        const auto layout = default_layout(spec);
        for (std::size_t f = 0; f < spec.n; ++f)
            for (std::size_t stripe = 0; stripe < 4; ++stripe) {
                const auto roles = assign_recovery_roles(spec, layout, f, stripe);
                const auto plan = plan_repair(spec, f, layout, roles);
                const auto res = execute_repair(plan, without(s.blocks, f), s.g);
                EXPECT_EQ(res.block.payload, s.blocks[f].payload) << name << " block " << f << " stripe " << stripe;
                for (const auto& rt : plan.relayer_tasks) EXPECT_NE(rt.block, f);
            }
    }
}

TEST(Plans, RelayerMustBelongToItsRack) {
    const auto spec = make_code("DRC(9,6,3)");
    RepairRoles roles;
    roles.relayers = {6, 3};
    EXPECT_THROW(derive_equations(spec, 0, roles), ParameterError);
    roles.relayers = {3};
    EXPECT_THROW(derive_equations(spec, 0, roles), ParameterError);
    EXPECT_THROW(derive_equations(spec, 9), ParameterError);
}

TEST(Plans, SecondMissingBlockIsUnsupported) {
    const auto spec = make_code("DRC(9,5,3)");
    const auto s = encoded(spec, 2);
    const auto plan = plan_repair(spec, 0, default_layout(spec));
    auto avail = without(s.blocks, 0);
    avail.erase(avail.begin() + 3);
    EXPECT_THROW(execute_repair(plan, avail, s.g), UnsupportedScenarioError);
}

TEST(Plans, AnalyticModelHasNoPlans) {
    const auto msr = make_code("MSR(9,6,3)");
    EXPECT_THROW(derive_equations(msr, 0), UnsupportedScenarioError);
    EXPECT_THROW(validate_code(msr), UnsupportedScenarioError);
}

TEST(Validation, Drc953PassesExhaustively) {
    const auto rep = validate_code(make_code("DRC(9,5,3)"));
    EXPECT_TRUE(rep.ok()) << rep.text();
    EXPECT_EQ(rep.subsets_checked, 126u);
    EXPECT_TRUE(rep.subsets_exhaustive);
    EXPECT_EQ(rep.repairs_checked, 9u);
    EXPECT_EQ(rep.racks_checked, 3u);
    EXPECT_NE(rep.text().find("result PASS"), std::string::npos);
}

TEST(Validation, Drc864Passes) {
    const auto rep = validate_code(make_code("DRC(8,6,4)"));
    EXPECT_TRUE(rep.ok()) << rep.text();
    EXPECT_EQ(rep.subsets_checked, 28u);
}

TEST(Validation, AllCodesPass) {
    for (const auto& name : std::vector<std::string>{"DRC(6,3,3)", "DRC(6,4,3)", "DRC(9,6,3)", "RS(9,6,3)", "RS(6,4,6)"}) {
        const auto rep = validate_code(make_code(name));
        EXPECT_TRUE(rep.ok()) << rep.text();
    }
}

TEST(Validation, ZeroedCoefficientRowIsReported) {
    auto spec = make_code("DRC(9,5,3)");
    for (std::size_t c = 0; c < spec.k; ++c) spec.set_codes[0].generator(0, c) = gf::kZero;
    const auto rep = validate_code(spec);
    EXPECT_FALSE(rep.ok());
    EXPECT_FALSE(rep.mds_ok());
    const std::vector<std::size_t> expect{1, 2, 3, 4, 5};
    EXPECT_NE(std::find(rep.failing_subsets.begin(), rep.failing_subsets.end(), expect), rep.failing_subsets.end());
    EXPECT_NE(rep.text().find("failing-subset {1,2,3,4,5}"), std::string::npos);
    EXPECT_NE(rep.text().find("result FAIL"), std::string::npos);
}

TEST(Validation, CorruptedRepairTableIsReported) {
    auto spec = make_code("DRC(9,6,3)");
    spec.repair_tables[2].coefficients[4](0, 0) += gf::kOne;
    const auto rep = validate_code(spec);
    EXPECT_TRUE(rep.mds_ok());
    EXPECT_FALSE(rep.repair_ok());
    EXPECT_NE(rep.text().find("failing-repair block 2"), std::string::npos);
}
