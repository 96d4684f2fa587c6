// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "drc/code_spec.hpp"
#include "drc/drc_codes.hpp"
#include "drc/errors.hpp"
#include "drc/geometry.hpp"
#include "drc/layout.hpp"
#include "drc/matrix.hpp"
#include "drc/traffic.hpp"

namespace drc {

// A helper reads some subblocks of its block and produces encoded subblocks,
// one per coefficient row.
struct NodeTask {
    std::size_t block = 0;
    NodeId node;
    std::size_t rack = 0;
    FieldMatrix coefficients;  // outputs x subblocks
    NodeId destination;
    std::size_t destination_rack = 0;
    bool forward_only = false;  // every output is one raw subblock

    std::vector<std::size_t> read_subblocks() const {
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < coefficients.cols(); ++c)
            if (!coefficients.col_is_zero(c)) cols.push_back(c);
        return cols;
    }
    std::size_t outputs() const { return coefficients.rows(); }
};

// A relayer combines the encoded subblocks received from its rack into the
// subblocks it forwards across racks.
struct RelayerTask {
    std::size_t block = 0;
    NodeId node;
    std::size_t rack = 0;
    std::vector<std::size_t> inputs;  // node task indices; their outputs are concatenated
    FieldMatrix coefficients;         // outputs x total inputs

    std::size_t outputs() const { return coefficients.rows(); }
};

struct DecodeSource {
    enum class Kind { Node, Relayer };
    Kind kind = Kind::Node;
    std::size_t task = 0;
};

struct RepairPlan {
    std::string code_name;
    std::size_t failed_index = 0;
    BlockRole failed_role = BlockRole::Data;
    NodeId target;
    std::size_t target_rack = 0;
    std::size_t subblocks = 1;
    bool direct = false;
    std::vector<NodeTask> node_tasks;
    std::vector<RelayerTask> relayer_tasks;
    std::vector<DecodeSource> decode_sources;
    FieldMatrix decode_matrix;  // subblocks x decode inputs

    std::vector<NodeId> relayers() const {
        std::vector<NodeId> v;
        for (const auto& t : relayer_tasks) v.push_back(t.node);
        return v;
    }

    std::size_t source_outputs(const DecodeSource& s) const {
        return s.kind == DecodeSource::Kind::Node ? node_tasks[s.task].outputs() : relayer_tasks[s.task].outputs();
    }

    std::string describe() const {
        std::ostringstream os;
        os << code_name << " repair of block " << failed_index << " (" << role_name(failed_role) << ") at "
           << node_name(target) << " in rack " << target_rack << "\n";
        for (const auto& t : node_tasks)
            os << "  node-encode " << node_name(t.node) << " reads " << t.read_subblocks().size() << "/" << subblocks
               << " subblocks, sends " << t.outputs() << (t.forward_only ? " raw" : " encoded") << " to "
               << node_name(t.destination) << "\n";
        for (const auto& t : relayer_tasks)
            os << "  relayer-encode " << node_name(t.node) << " (rack " << t.rack << ") combines " << t.coefficients.cols()
               << " inputs into " << t.outputs() << " sent to " << node_name(target) << "\n";
        os << "  decode at " << node_name(target) << " from " << decode_matrix.cols() << " subblocks\n";
        return os.str();
    }
};

namespace detail {

struct NodeEncoding {
    FieldMatrix e;  // what the node sends, outputs x subblocks
    FieldMatrix k;  // equations x outputs, with W = k * e
    bool forward = false;
};

inline NodeEncoding split_node_matrix(const FieldMatrix& w) {
    NodeEncoding out;
    bool single = true;
    for (std::size_t t = 0; t < w.rows() && single; ++t) {
        std::size_t nz = 0;
        for (auto e : w.row(t)) nz += e.is_zero() ? 0 : 1;
        single = nz <= 1;
    }
    if (single) {
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < w.cols(); ++c)
            if (!w.col_is_zero(c)) cols.push_back(c);
        out.forward = true;
        out.e = FieldMatrix(cols.size(), w.cols());
        for (std::size_t i = 0; i < cols.size(); ++i) out.e(i, cols[i]) = gf::kOne;
        out.k = w.select_cols(cols);
        return out;
    }
    const auto rows = independent_rows(w);
    out.e = w.select_rows(rows);
    out.k = FieldMatrix(w.rows(), rows.size());
    for (std::size_t t = 0; t < w.rows(); ++t) {
        const auto c = express_in_rows(out.e, w.row(t));
        for (std::size_t j = 0; j < c.size(); ++j) out.k(t, j) = c[j];
    }
    return out;
}

}  // namespace detail

// Turns repair equations into a plan of node, relayer and decode steps.
inline RepairPlan compile_plan(const CodeSpec& spec, const RepairEquations& eq, const StripeLayout& layout,
                               std::optional<NodeId> target = std::nullopt) {
    if (layout.n != spec.n || layout.r != spec.r) throw TopologyError("layout does not match " + spec.name());
    detail::check_failed(spec, eq.failed);
    if (eq.coefficients.size() != spec.n) throw ConstructionError("repair table needs one matrix per block");
    const std::size_t m = spec.subblocks;
    if (eq.equations() != m) throw ConstructionError("repair table needs one equation per subblock");
    for (const auto& w : eq.coefficients)
        if (w.rows() != m || w.cols() != m) throw ConstructionError("repair coefficient matrix has wrong shape");

    RepairPlan plan;
    plan.code_name = spec.name();
    plan.failed_index = eq.failed;
    plan.failed_role = spec.role_of(eq.failed);
    plan.subblocks = m;
    plan.direct = eq.relayers.empty();
    plan.target_rack = layout.rack_of(eq.failed);
    plan.target = target.value_or(layout.node_of(eq.failed));
    if (plan.target.value >= spec.n || layout.rack_of_node(plan.target) != plan.target_rack)
        throw ParameterError("repair target must be a node of the failed block's rack");

    FieldMatrix a_inv;
    try {
        a_inv = invert(eq.coefficients[eq.failed]);
    } catch (const RankDeficiencyError& e) {
        throw ConstructionError("repair equations do not determine block " + std::to_string(eq.failed) + ": " + e.what());
    }

    std::vector<FieldMatrix> chunks;
    auto add_node_task = [&](std::size_t block, NodeId dest) {
        auto enc = detail::split_node_matrix(eq.coefficients[block]);
        NodeTask t;
        t.block = block;
        t.node = layout.node_of(block);
        t.rack = layout.rack_of(block);
        t.coefficients = std::move(enc.e);
        t.destination = dest;
        t.destination_rack = layout.rack_of_node(dest);
        t.forward_only = enc.forward;
        plan.node_tasks.push_back(std::move(t));
        return std::move(enc.k);
    };

    for (auto i : layout.rack_members(plan.target_rack)) {
        if (i == eq.failed || eq.coefficients[i].is_zero()) continue;
        chunks.push_back(add_node_task(i, plan.target));
        plan.decode_sources.push_back({DecodeSource::Kind::Node, plan.node_tasks.size() - 1});
    }

    const auto racks = detail::nonlocal_racks(spec, eq.failed);
    if (!plan.direct && eq.relayers.size() != racks.size())
        throw ConstructionError("repair table needs one relayer per non-local rack");
    for (std::size_t qi = 0; qi < racks.size(); ++qi) {
        std::vector<std::size_t> members;
        for (auto i : layout.rack_members(racks[qi]))
            if (!eq.coefficients[i].is_zero()) members.push_back(i);
        if (members.empty()) continue;
        if (plan.direct) {
            for (auto i : members) {
                chunks.push_back(add_node_task(i, plan.target));
                plan.decode_sources.push_back({DecodeSource::Kind::Node, plan.node_tasks.size() - 1});
            }
            continue;
        }
        const std::size_t relay = eq.relayers[qi];
        std::vector<std::size_t> order;
        if (!eq.coefficients[relay].is_zero()) order.push_back(relay);
        for (auto i : members)
            if (i != relay) order.push_back(i);
        RelayerTask rt;
        rt.block = relay;
        rt.node = layout.node_of(relay);
        rt.rack = racks[qi];
        std::vector<FieldMatrix> ks;
        for (auto i : order) {
            ks.push_back(add_node_task(i, rt.node));
            rt.inputs.push_back(plan.node_tasks.size() - 1);
        }
        const FieldMatrix mq = hstack(ks);
        const auto basis = independent_rows(mq);
        rt.coefficients = mq.select_rows(basis);
        FieldMatrix l(m, basis.size());
        for (std::size_t t = 0; t < m; ++t) {
            const auto c = express_in_rows(rt.coefficients, mq.row(t));
            for (std::size_t j = 0; j < c.size(); ++j) l(t, j) = c[j];
        }
        chunks.push_back(std::move(l));
        plan.relayer_tasks.push_back(std::move(rt));
        plan.decode_sources.push_back({DecodeSource::Kind::Relayer, plan.relayer_tasks.size() - 1});
    }
    plan.decode_matrix = a_inv * hstack(chunks);
    return plan;
}

inline RepairPlan plan_repair(const CodeSpec& spec, std::size_t failed, const StripeLayout& layout,
                              const RepairRoles& roles = {}) {
    return compile_plan(spec, derive_equations(spec, failed, roles), layout, roles.target);
}

// Roles for stripe `stripe` of a node recovery, rotated so consecutive
// stripes use different relayers, targets and RS helpers.
inline RepairRoles assign_recovery_roles(const CodeSpec& spec, const StripeLayout& layout, std::size_t failed,
                                         std::size_t stripe) {
    detail::check_failed(spec, failed);
    RepairRoles roles;
    const std::size_t rf = layout.rack_of(failed);
    std::vector<NodeId> candidates{layout.node_of(failed)};
    for (auto i : layout.rack_members(rf))
        if (i != failed) candidates.push_back(layout.node_of(i));
    roles.target = candidates[stripe % candidates.size()];
    if (spec.family == CodeFamily::ReedSolomon) {
        const std::size_t local = layout.rack_size() - 1;
        roles.helper_rotation = stripe * (spec.k - local);
        return roles;
    }
    for (auto q : detail::nonlocal_racks(spec, failed)) {
        const auto members = layout.rack_members(q);
        roles.relayers.push_back(members[stripe % members.size()]);
    }
    return roles;
}

// ---- coding primitives ---------------------------------------------------

using Buffer = std::vector<std::uint8_t>;

// Encodes one block into coefficients.rows() encoded subblocks. Each output
// is assembled strip by strip from encoded substrips.
inline std::vector<Buffer> node_encode(std::span<const std::uint8_t> block, const FieldMatrix& coefficients,
                                       const StripeGeometry& g) {
    g.validate();
    check_payload(block, g);
    if (coefficients.cols() != g.subblocks)
        throw GeometryError("coefficient matrix has " + std::to_string(coefficients.cols()) + " columns for " +
                            std::to_string(g.subblocks) + " subblocks");
    const std::size_t ss = g.substrip_size();
    std::vector<Buffer> out(coefficients.rows(), Buffer(g.subblock_size(), 0));
    for (std::size_t j = 0; j < g.strip_count(); ++j)
        for (std::size_t o = 0; o < coefficients.rows(); ++o)
            for (std::size_t s = 0; s < g.subblocks; ++s)
                gf::mul_add_region(coefficients(o, s), block.subspan(j * g.strip_size + s * ss, ss),
                                   std::span(out[o]).subspan(j * ss, ss));
    return out;
}

inline std::vector<Buffer> relayer_encode(std::span<const Buffer> inputs, const FieldMatrix& coefficients) {
    if (inputs.size() != coefficients.cols())
        throw IncompleteRackError("relayer expected " + std::to_string(coefficients.cols()) + " encoded subblocks, got " +
                                  std::to_string(inputs.size()));
    const std::size_t len = inputs.empty() ? 0 : inputs.front().size();
    for (const auto& b : inputs)
        if (b.size() != len) throw GeometryError("relayer inputs differ in length");
    std::vector<Buffer> out(coefficients.rows(), Buffer(len, 0));
    for (std::size_t o = 0; o < coefficients.rows(); ++o)
        for (std::size_t c = 0; c < inputs.size(); ++c) gf::mul_add_region(coefficients(o, c), inputs[c], out[o]);
    return out;
}

inline Buffer decode(std::span<const Buffer> inputs, const FieldMatrix& decode_matrix, const StripeGeometry& g) {
    g.validate();
    if (decode_matrix.rows() != g.subblocks) throw GeometryError("decode matrix does not match the subblock count");
    if (inputs.size() != decode_matrix.cols())
        throw InsufficientDataError("decode expected " + std::to_string(decode_matrix.cols()) + " subblocks, got " +
                                    std::to_string(inputs.size()));
    for (const auto& b : inputs)
        if (b.size() != g.subblock_size()) throw GeometryError("decode input has wrong length");
    Buffer block(g.block_size, 0);
    Buffer sub(g.subblock_size());
    for (std::size_t s = 0; s < g.subblocks; ++s) {
        std::fill(sub.begin(), sub.end(), std::uint8_t{0});
        for (std::size_t c = 0; c < inputs.size(); ++c) gf::mul_add_region(decode_matrix(s, c), inputs[c], sub);
        scatter_subblock(sub, g, s, block);
    }
    return block;
}

struct RepairResult {
    Block block;
    TrafficReport traffic;
};

// Runs a plan on real payloads and tallies every byte read or sent.
inline RepairResult execute_repair(const RepairPlan& plan, std::span<const Block> available, const StripeGeometry& g) {
    g.validate();
    if (g.subblocks != plan.subblocks) throw GeometryError("geometry does not match the plan's subblock count");
    std::map<std::size_t, const Block*> by_index;
    for (const auto& b : available)
        if (b.index != plan.failed_index) by_index.emplace(b.index, &b);

    const auto sub = static_cast<std::uint64_t>(g.subblock_size());
    RepairResult res;
    res.traffic.actor(plan.target, plan.target_rack);
    std::vector<std::vector<Buffer>> node_out(plan.node_tasks.size());
    for (std::size_t ti = 0; ti < plan.node_tasks.size(); ++ti) {
        const auto& t = plan.node_tasks[ti];
        auto it = by_index.find(t.block);
        if (it == by_index.end())
            throw UnsupportedScenarioError("block " + std::to_string(t.block) +
                                           " is also unavailable; only single-failure repair is supported");
        node_out[ti] = node_encode(it->second->payload, t.coefficients, g);
        res.traffic.add_disk_read(t.node, t.rack, t.read_subblocks().size() * sub);
        const std::uint64_t sent = t.outputs() * sub;
        if (t.destination == t.node)
            res.traffic.actor(t.node, t.rack);
        else if (t.destination_rack == t.rack)
            res.traffic.add_inner_rack(t.node, t.rack, sent);
        else
            res.traffic.add_cross_rack(t.node, t.rack, sent);
    }
    std::vector<std::vector<Buffer>> relay_out(plan.relayer_tasks.size());
    for (std::size_t ri = 0; ri < plan.relayer_tasks.size(); ++ri) {
        const auto& rt = plan.relayer_tasks[ri];
        std::vector<Buffer> in;
        for (auto ti : rt.inputs)
            for (const auto& b : node_out[ti]) in.push_back(b);
        relay_out[ri] = relayer_encode(in, rt.coefficients);
        res.traffic.add_cross_rack(rt.node, rt.rack, rt.outputs() * sub);
    }
    std::vector<Buffer> dec_in;
    for (const auto& s : plan.decode_sources) {
        const auto& src = s.kind == DecodeSource::Kind::Node ? node_out[s.task] : relay_out[s.task];
        dec_in.insert(dec_in.end(), src.begin(), src.end());
    }
    res.block.index = plan.failed_index;
    res.block.role = plan.failed_role;
    res.block.payload = decode(dec_in, plan.decode_matrix, g);
    return res;
}

}  // namespace drc
