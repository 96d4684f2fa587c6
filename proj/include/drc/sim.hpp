// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <tuple>
#include <string>
#include <vector>

#include "drc/code_spec.hpp"
#include "drc/errors.hpp"
#include "drc/geometry.hpp"
#include "drc/layout.hpp"
#include "drc/repair.hpp"

// Analytic timing model of hierarchical repair: per-node disks and CPUs, an
// inner-rack network per rack and a single shared cross-rack gateway.
namespace drc::sim {

inline constexpr double kMiB = 1048576.0;

// Cost of one API call on one block: fixed + slope * work, work in MiB.
struct StageCost {
    double fixed_s = 0.0;
    double per_mib_s = 0.0;

    double at(double bytes) const { return fixed_s + per_mib_s * bytes / kMiB; }

    // Line through two measured (work, seconds) points.
    static StageCost through(double x1_mib, double t1_s, double x2_mib, double t2_s) {
        const double slope = (t2_s - t1_s) / (x2_mib - x1_mib);
        return {t1_s - slope * x1_mib, slope};
    }

    friend bool operator==(const StageCost&, const StageCost&) = default;
};

struct ClusterConfig {
    std::size_t racks = 0;           // 0 sizes the cluster to the code
    std::size_t nodes_per_rack = 0;  // 0 sizes the cluster to the code
    double gateway_bandwidth_bps = 1e9;
    double gateway_efficiency = 0.953;               // achieved fraction of the nominal rate
    double inner_rack_bandwidth = 1090.0 * kMiB;     // bytes per second
    double disk_throughput = 177.0 * kMiB;           // bytes per second
    // Work for node encoding is the busiest helper's bytes read; for relayer
    // encoding and decoding it is coefficient count times subblock size.
    // The anchors come from single-block repairs at 63 and 64 MiB.
    StageCost node_encode = StageCost::through(63, 0.067, 64, 0.068);
    StageCost relayer_encode = StageCost::through(96, 0.145, 189, 0.191);
    StageCost decode = StageCost::through(192, 0.320, 756, 0.443);
    double per_strip_overhead_s = 20e-6;  // disk seek and call overhead per strip read
    std::size_t strip_parallelism = 128;  // strips a node keeps in flight

    double gateway_bytes_per_second() const { return gateway_bandwidth_bps * gateway_efficiency / 8.0; }

    void validate() const {
        auto positive = [](double v, const char* what) {
            if (!(v > 0.0)) throw ConfigError(std::string(what) + " must be positive");
        };
        positive(gateway_bandwidth_bps, "gateway bandwidth");
        positive(gateway_efficiency, "gateway efficiency");
        positive(inner_rack_bandwidth, "inner-rack bandwidth");
        positive(disk_throughput, "disk throughput");
        if (gateway_efficiency > 1.0) throw ConfigError("gateway efficiency must not exceed 1");
        if (per_strip_overhead_s < 0.0) throw ConfigError("per-strip overhead must not be negative");
        if (strip_parallelism == 0) throw ConfigError("strip parallelism must be at least 1");
        for (const StageCost* c : {&node_encode, &relayer_encode, &decode})
            if (c->fixed_s < 0.0 || c->per_mib_s < 0.0) throw ConfigError("stage costs must not be negative");
    }
};

// Ideal cluster: every bandwidth infinite and every overhead zero.
inline ClusterConfig ideal_cluster() {
    ClusterConfig c;
    const double inf = std::numeric_limits<double>::infinity();
    c.gateway_bandwidth_bps = c.inner_rack_bandwidth = c.disk_throughput = inf;
    c.node_encode = c.relayer_encode = c.decode = StageCost{};
    c.per_strip_overhead_s = 0.0;
    return c;
}

enum class Mode { Pipelined, Sequential };

struct RepairTimeline {
    double disk_read = 0;
    double node_encode = 0;
    double inner_rack_transfer = 0;  // into the relayers
    double relayer_encode = 0;
    double cross_rack_transfer = 0;
    double decode = 0;
    double local_transfer = 0;  // local helpers into the target, overlapped with the cross-rack stages

    std::vector<std::pair<std::string, double>> stages() const {
        return {{"disk_read", disk_read},
                {"node_encode", node_encode},
                {"inner_rack_transfer", inner_rack_transfer},
                {"relayer_encode", relayer_encode},
                {"cross_rack_transfer", cross_rack_transfer},
                {"decode", decode},
                {"local_transfer", local_transfer}};
    }

    // Strips stream through all stages concurrently, so the slowest stage
    // bounds the repair.
    double pipelined_total() const {
        double t = 0;
        for (const auto& [name, v] : stages()) t = std::max(t, v);
        return t;
    }
    double sequential_total() const {
        double t = 0;
        for (const auto& [name, v] : stages()) t += v;
        return t;
    }
    double total(Mode m) const { return m == Mode::Pipelined ? pipelined_total() : sequential_total(); }
};

// Busy time per resource accumulated over one or more stripes.
struct NodeLoad {
    double disk = 0;
    double node_encode = 0;
    double relayer_encode = 0;
    double decode = 0;
    double ingress = 0;
};

struct ClusterLoad {
    std::map<NodeId, NodeLoad> nodes;
    double gateway = 0;

    ClusterLoad& merge(const ClusterLoad& o) {
        for (const auto& [id, l] : o.nodes) {
            auto& mine = nodes[id];
            mine.disk += l.disk;
            mine.node_encode += l.node_encode;
            mine.relayer_encode += l.relayer_encode;
            mine.decode += l.decode;
            mine.ingress += l.ingress;
        }
        gateway += o.gateway;
        return *this;
    }

    // Largest busy time over all resources and the resource's name.
    std::pair<double, std::string> bottleneck() const {
        std::pair<double, std::string> best{gateway, "gateway"};
        auto consider = [&](double v, const std::string& what) {
            if (v > best.first) best = {v, what};
        };
        for (const auto& [id, l] : nodes) {
            consider(l.disk, node_name(id) + ".disk");
            consider(l.node_encode, node_name(id) + ".node_encode");
            consider(l.relayer_encode, node_name(id) + ".relayer_encode");
            consider(l.decode, node_name(id) + ".decode");
            consider(l.ingress, node_name(id) + ".ingress");
        }
        return best;
    }
};

namespace detail {

inline void check_topology(const CodeSpec& spec, const ClusterConfig& c) {
    if (c.racks != 0 && c.racks < spec.r)
        throw TopologyError(spec.name() + " needs " + std::to_string(spec.r) + " racks, cluster has " +
                            std::to_string(c.racks));
    if (c.nodes_per_rack != 0 && c.nodes_per_rack < spec.rack_size())
        throw TopologyError(spec.name() + " needs " + std::to_string(spec.rack_size()) + " nodes per rack, cluster has " +
                            std::to_string(c.nodes_per_rack));
}

inline double width_factor(const ClusterConfig& c, const StripeGeometry& g) {
    const double p = static_cast<double>(c.strip_parallelism);
    return p / std::min(p, static_cast<double>(g.strip_count()));
}

}  // namespace detail

// Resource busy times of one stripe repair. Only transfers between distinct
// nodes cost network time.
inline ClusterLoad plan_load(const RepairPlan& plan, const ClusterConfig& c, const StripeGeometry& g) {
    const double sub = static_cast<double>(g.subblock_size());
    const double strips = static_cast<double>(g.strip_count());
    const double width = detail::width_factor(c, g);
    ClusterLoad load;
    double gateway_bytes = 0;
    for (const auto& t : plan.node_tasks) {
        const double read = static_cast<double>(t.read_subblocks().size()) * sub;
        auto& l = load.nodes[t.node];
        if (read > 0) {
            l.disk += read / c.disk_throughput + strips * c.per_strip_overhead_s;
            l.node_encode += c.node_encode.at(read) * width;
        }
        const double sent = static_cast<double>(t.outputs()) * sub;
        if (t.destination == t.node) continue;
        if (t.destination_rack == t.rack)
            load.nodes[t.destination].ingress += sent / c.inner_rack_bandwidth;
        else
            gateway_bytes += sent;
    }
    for (const auto& rt : plan.relayer_tasks) {
        const double mac = static_cast<double>(rt.coefficients.nonzero_count()) * sub;
        load.nodes[rt.node].relayer_encode += c.relayer_encode.at(mac) * width;
        gateway_bytes += static_cast<double>(rt.outputs()) * sub;
    }
    if (!plan.decode_matrix.empty()) {
        const double mac = static_cast<double>(plan.decode_matrix.nonzero_count()) * sub;
        load.nodes[plan.target].decode += c.decode.at(mac) * width;
    }
    load.gateway = gateway_bytes / c.gateway_bytes_per_second();
    return load;
}

inline RepairTimeline timeline_of(const RepairPlan& plan, const ClusterLoad& load) {
    RepairTimeline t;
    for (const auto& [id, l] : load.nodes) {
        t.disk_read = std::max(t.disk_read, l.disk);
        t.node_encode = std::max(t.node_encode, l.node_encode);
        t.relayer_encode = std::max(t.relayer_encode, l.relayer_encode);
        t.decode = std::max(t.decode, l.decode);
    }
    for (const auto& rt : plan.relayer_tasks)
        if (auto it = load.nodes.find(rt.node); it != load.nodes.end())
            t.inner_rack_transfer = std::max(t.inner_rack_transfer, it->second.ingress);
    if (auto it = load.nodes.find(plan.target); it != load.nodes.end()) t.local_transfer = it->second.ingress;
    t.cross_rack_transfer = load.gateway;
    return t;
}

inline RepairTimeline simulate_block_repair(const CodeSpec& spec, const RepairPlan& plan, const ClusterConfig& c,
                                            const StripeGeometry& g) {
    c.validate();
    g.validate();
    detail::check_topology(spec, c);
    if (g.subblocks != plan.subblocks) throw GeometryError("geometry does not match the plan's subblock count");
    return timeline_of(plan, plan_load(plan, c, g));
}

// Plans for recovering every stripe of a failed node, with rotated roles.
inline std::vector<RepairPlan> recovery_plans(const CodeSpec& spec, std::size_t stripes, std::size_t failed = 0) {
    if (stripes == 0) throw ParameterError("node recovery needs at least one stripe");
    const StripeLayout layout = default_layout(spec);
    std::vector<RepairPlan> plans;
    for (std::size_t s = 0; s < stripes; ++s)
        plans.push_back(plan_repair(spec, failed, layout, assign_recovery_roles(spec, layout, failed, s)));
    return plans;
}

struct RecoveryResult {
    std::size_t stripes = 0;
    double seconds = 0;
    double bytes_per_second = 0;
    std::string bottleneck;

    double mib_per_second() const { return bytes_per_second / kMiB; }
};

inline RecoveryResult simulate_node_recovery(const CodeSpec& spec, std::span<const RepairPlan> plans,
                                             const ClusterConfig& c, const StripeGeometry& g) {
    c.validate();
    g.validate();
    detail::check_topology(spec, c);
    if (plans.empty()) throw ParameterError("node recovery needs at least one stripe");
    ClusterLoad total;
    for (const auto& p : plans) {
        if (p.subblocks != g.subblocks) throw GeometryError("geometry does not match the plan's subblock count");
        total.merge(plan_load(p, c, g));
    }
    RecoveryResult r;
    r.stripes = plans.size();
    std::tie(r.seconds, r.bottleneck) = total.bottleneck();
    const double bytes = static_cast<double>(plans.size()) * static_cast<double>(g.block_size);
    r.bytes_per_second = r.seconds > 0 ? bytes / r.seconds : std::numeric_limits<double>::infinity();
    return r;
}

inline RecoveryResult simulate_node_recovery(const CodeSpec& spec, const ClusterConfig& c, std::size_t stripes,
                                             const StripeGeometry& g, std::size_t failed = 0) {
    const auto plans = recovery_plans(spec, stripes, failed);
    return simulate_node_recovery(spec, plans, c, g);
}

// Time to serve a read of an unavailable data block: rebuild at a node in
// the failed block's rack, then hand the block to the client in that rack.
inline double simulate_degraded_read(const CodeSpec& spec, const ClusterConfig& c, const StripeGeometry& g,
                                     std::size_t failed = 0) {
    if (failed >= spec.k) throw ParameterError("degraded reads target data blocks (index < k)");
    const auto plan = plan_repair(spec, failed, default_layout(spec));
    const auto t = simulate_block_repair(spec, plan, c, g);
    return t.pipelined_total() + static_cast<double>(g.block_size) / c.inner_rack_bandwidth;
}

// ---- sweeps --------------------------------------------------------------

enum class SweepVariable { StripSize, BlockSize, GatewayBandwidth };

inline const char* variable_name(SweepVariable v) {
    switch (v) {
        case SweepVariable::StripSize: return "strip_size_bytes";
        case SweepVariable::BlockSize: return "block_size_bytes";
        case SweepVariable::GatewayBandwidth: return "gateway_bandwidth_bps";
    }
    return "?";
}

inline SweepVariable parse_variable(const std::string& s) {
    if (s == "strip-size" || s == "strip_size") return SweepVariable::StripSize;
    if (s == "block-size" || s == "block_size") return SweepVariable::BlockSize;
    if (s == "gateway" || s == "gateway-bandwidth" || s == "gateway_bandwidth") return SweepVariable::GatewayBandwidth;
    throw ParameterError("unknown sweep variable '" + s + "' (strip-size, block-size, gateway)");
}

struct SweepPoint {
    double value = 0;
    std::string code;
    std::optional<double> throughput_mib_s;
    std::string error;
};

struct SweepTable {
    SweepVariable variable = SweepVariable::StripSize;
    std::vector<SweepPoint> rows;

    std::vector<double> series(const std::string& code) const {
        std::vector<double> v;
        for (const auto& r : rows)
            if (r.code == code) v.push_back(r.throughput_mib_s.value_or(std::numeric_limits<double>::quiet_NaN()));
        return v;
    }

    std::string to_csv() const {
        std::ostringstream os;
        os << variable_name(variable) << ",code,recovery_throughput_mib_s,error\n";
        char buf[64];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof buf, "%.0f", r.value);
            os << buf << "," << r.code << ",";
            if (r.throughput_mib_s) {
                std::snprintf(buf, sizeof buf, "%.4f", *r.throughput_mib_s);
                os << buf;
            }
            std::string err = r.error;
            std::replace(err.begin(), err.end(), ',', ';');
            os << "," << err << "\n";
        }
        return os.str();
    }
};

struct SweepBase {
    std::size_t block_size = 64 * MiB;
    std::size_t strip_size = 256 * KiB;
    std::size_t stripes = 20;
};

// Node-recovery throughput of each code at each value of one variable, the
// others held at `base`. Invalid geometries become error rows.
inline SweepTable sweep(std::span<const CodeSpec> codes, const ClusterConfig& config, SweepVariable variable,
                        std::span<const double> values, const SweepBase& base = {}) {
    if (values.empty()) throw ParameterError("sweep range is empty");
    SweepTable table;
    table.variable = variable;
    for (const auto& spec : codes) {
        const auto plans = recovery_plans(spec, base.stripes);
        for (double v : values) {
            SweepPoint p{v, spec.name(), std::nullopt, {}};
            try {
                ClusterConfig c = config;
                std::size_t block = base.block_size, strip = base.strip_size;
                if (variable == SweepVariable::StripSize) strip = static_cast<std::size_t>(v);
                if (variable == SweepVariable::BlockSize) block = static_cast<std::size_t>(v);
                if (variable == SweepVariable::GatewayBandwidth) c.gateway_bandwidth_bps = v;
                const auto g = StripeGeometry::make(block, strip, spec.subblocks);
                p.throughput_mib_s = simulate_node_recovery(spec, plans, c, g).mib_per_second();
            } catch (const Error& e) {
                p.error = e.kind() + ": " + e.what();
            }
            table.rows.push_back(std::move(p));
        }
    }
    return table;
}

}  // namespace drc::sim
