// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: analyze, encode, repair, validate, simulate and
// reliability. Settings resolve as flags over config file over defaults.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "drc/drc.hpp"

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
namespace sim = drc::sim;
namespace rel = drc::reliability;

const std::vector<std::string> kAnalyzeCodes = {
    "RS(6,4,6)", "RS(6,4,3)", "MSR(6,4,6)", "MSR(6,4,3)", "DRC(6,4,3)", "RS(8,6,8)", "RS(8,6,4)",
    "MSR(8,6,8)", "MSR(8,6,4)", "DRC(8,6,4)", "RS(6,3,6)", "RS(6,3,3)", "MSR(6,3,6)", "MSR(6,3,3)",
    "DRC(6,3,3)", "RS(9,6,9)", "RS(9,6,3)", "MSR(9,6,9)", "MSR(9,6,3)", "DRC(9,6,3)", "RS(8,4,8)",
    "RS(8,4,4)", "MSR(8,4,8)", "MSR(8,4,4)", "DRC(8,4,4)", "RS(9,5,9)", "RS(9,5,3)", "DRC(9,5,3)"};

const std::vector<std::string> kRecoveryCodes = {"RS(9,6,3)", "DRC(9,6,3)", "RS(9,5,3)", "DRC(9,5,3)"};
const std::vector<std::string> kSweepCodes = {"DRC(6,4,3)", "DRC(6,3,3)", "DRC(8,6,4)", "DRC(9,5,3)"};
const std::vector<std::string> kBreakdownCodes = {"DRC(9,6,3)", "DRC(9,5,3)"};

struct Settings {
    std::vector<std::string> codes;
    std::optional<std::size_t> block_size;
    std::optional<std::size_t> strip_size;
    sim::ClusterConfig cluster;
    std::vector<double> gateways{0.2e9, 0.5e9, 1e9, 2e9};
    std::size_t stripes = 20;
    std::size_t failed = 0;
    std::string variable = "strip-size";
    std::string range;
    std::string table = "1";
    std::vector<double> inv_lambda1;
    std::vector<double> gamma;
    double lambda2 = 0.005;
    double days_per_year = 365.0;

    json to_json() const {
        json j;
        j["codes"] = codes;
        j["block_size"] = block_size ? json(*block_size) : json(nullptr);
        j["strip_size"] = strip_size ? json(*strip_size) : json(nullptr);
        j["gateways_bps"] = gateways;
        j["stripes"] = stripes;
        j["failed"] = failed;
        j["variable"] = variable;
        j["range"] = range;
        auto cost = [](const sim::StageCost& c) { return json{{"fixed_s", c.fixed_s}, {"per_mib_s", c.per_mib_s}}; };
        j["cluster"] = {{"racks", cluster.racks},
                        {"nodes_per_rack", cluster.nodes_per_rack},
                        {"gateway_bandwidth_bps", cluster.gateway_bandwidth_bps},
                        {"gateway_efficiency", cluster.gateway_efficiency},
                        {"inner_rack_bandwidth_mib_s", cluster.inner_rack_bandwidth / sim::kMiB},
                        {"disk_throughput_mib_s", cluster.disk_throughput / sim::kMiB},
                        {"per_strip_overhead_s", cluster.per_strip_overhead_s},
                        {"strip_parallelism", cluster.strip_parallelism},
                        {"node_encode", cost(cluster.node_encode)},
                        {"relayer_encode", cost(cluster.relayer_encode)},
                        {"decode", cost(cluster.decode)}};
        j["reliability"] = {{"table", table},
                            {"inv_lambda1_years", inv_lambda1},
                            {"gamma_bps", gamma},
                            {"lambda2", lambda2},
                            {"days_per_year", days_per_year}};
        return j;
    }
};

std::size_t json_size(const json& v) {
    return v.is_string() ? drc::units::parse_size(v.get<std::string>()) : v.get<std::size_t>();
}

double json_bandwidth(const json& v) {
    return v.is_string() ? drc::units::parse_bandwidth(v.get<std::string>()) : v.get<double>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw drc::ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

void apply_file(Settings& s, const json& j) {
    if (!j.is_object()) throw drc::ConfigError("config file must hold a JSON object");
    reject_unknown(j, {"codes", "block_size", "strip_size", "gateways", "stripes", "failed", "variable", "range",
                       "cluster", "reliability"},
                   "config file");
    try {
        if (j.contains("codes")) {
            const auto& c = j["codes"];
            s.codes = c.is_string() ? std::vector<std::string>{c.get<std::string>()} : c.get<std::vector<std::string>>();
        }
        if (j.contains("block_size")) s.block_size = json_size(j["block_size"]);
        if (j.contains("strip_size")) s.strip_size = json_size(j["strip_size"]);
        if (j.contains("gateways")) {
            s.gateways.clear();
            for (const auto& g : j["gateways"]) s.gateways.push_back(json_bandwidth(g));
        }
        if (j.contains("stripes")) s.stripes = j["stripes"].get<std::size_t>();
        if (j.contains("failed")) s.failed = j["failed"].get<std::size_t>();
        if (j.contains("variable")) s.variable = j["variable"].get<std::string>();
        if (j.contains("range")) s.range = j["range"].get<std::string>();
        if (j.contains("cluster")) {
            const auto& c = j["cluster"];
            reject_unknown(c, {"racks", "nodes_per_rack", "gateway_bandwidth_bps", "gateway_efficiency",
                               "inner_rack_bandwidth_mib_s", "disk_throughput_mib_s", "per_strip_overhead_s",
                               "strip_parallelism", "node_encode", "relayer_encode", "decode"},
                           "cluster section");
            auto& k = s.cluster;
            if (c.contains("racks")) k.racks = c["racks"].get<std::size_t>();
            if (c.contains("nodes_per_rack")) k.nodes_per_rack = c["nodes_per_rack"].get<std::size_t>();
            if (c.contains("gateway_bandwidth_bps")) k.gateway_bandwidth_bps = json_bandwidth(c["gateway_bandwidth_bps"]);
            if (c.contains("gateway_efficiency")) k.gateway_efficiency = c["gateway_efficiency"].get<double>();
            if (c.contains("inner_rack_bandwidth_mib_s"))
                k.inner_rack_bandwidth = c["inner_rack_bandwidth_mib_s"].get<double>() * sim::kMiB;
            if (c.contains("disk_throughput_mib_s")) k.disk_throughput = c["disk_throughput_mib_s"].get<double>() * sim::kMiB;
            if (c.contains("per_strip_overhead_s")) k.per_strip_overhead_s = c["per_strip_overhead_s"].get<double>();
            if (c.contains("strip_parallelism")) k.strip_parallelism = c["strip_parallelism"].get<std::size_t>();
            auto cost = [&](const char* key, sim::StageCost& out) {
                if (!c.contains(key)) return;
                reject_unknown(c[key], {"fixed_s", "per_mib_s"}, std::string("cluster.") + key);
                if (c[key].contains("fixed_s")) out.fixed_s = c[key]["fixed_s"].get<double>();
                if (c[key].contains("per_mib_s")) out.per_mib_s = c[key]["per_mib_s"].get<double>();
            };
            cost("node_encode", k.node_encode);
            cost("relayer_encode", k.relayer_encode);
            cost("decode", k.decode);
        }
        if (j.contains("reliability")) {
            const auto& r = j["reliability"];
            reject_unknown(r, {"table", "inv_lambda1_years", "gamma_bps", "lambda2", "days_per_year"}, "reliability section");
            if (r.contains("table")) s.table = r["table"].is_string() ? r["table"].get<std::string>() : std::to_string(r["table"].get<int>());
            if (r.contains("inv_lambda1_years")) s.inv_lambda1 = r["inv_lambda1_years"].get<std::vector<double>>();
            if (r.contains("gamma_bps")) {
                s.gamma.clear();
                for (const auto& g : r["gamma_bps"]) s.gamma.push_back(json_bandwidth(g));
            }
            if (r.contains("lambda2")) s.lambda2 = r["lambda2"].get<double>();
            if (r.contains("days_per_year")) s.days_per_year = r["days_per_year"].get<double>();
        }
    } catch (const json::exception& e) {
        throw drc::ConfigError(std::string("config file has a value of the wrong type: ") + e.what());
    }
}

struct Flags {
    std::string config;
    std::string manifest;
    std::string out;
    std::vector<std::string> codes;
    std::string block_size, strip_size, gateway, range, variable;
    std::string stripes, failed;
    std::string inv_lambda1, gamma, table, lambda2, days_per_year;
};

std::vector<std::string> split_codes(const std::vector<std::string>& raw) {
    // Commas inside parentheses belong to the code name.
    std::vector<std::string> out;
    for (const auto& item : raw) {
        std::string cur;
        int depth = 0;
        for (char c : item) {
            if (c == '(') ++depth;
            if (c == ')') --depth;
            if ((c == ',' || c == ';') && depth == 0) {
                if (!cur.empty()) out.push_back(cur);
                cur.clear();
            } else {
                cur.push_back(c);
            }
        }
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

Settings resolve(const Flags& f) {
    Settings s;
    if (!f.config.empty()) {
        json j;
        try {
            j = json::parse(drc::read_text(f.config));
        } catch (const json::exception& e) {
            throw drc::ConfigError("config file '" + f.config + "' is not valid JSON: " + e.what());
        }
        apply_file(s, j);
    }
    if (!f.codes.empty()) s.codes = split_codes(f.codes);
    if (!f.block_size.empty()) s.block_size = drc::units::parse_size(f.block_size);
    if (!f.strip_size.empty()) s.strip_size = drc::units::parse_size(f.strip_size);
    if (!f.gateway.empty()) {
        s.gateways = drc::units::parse_list(f.gateway, drc::units::parse_bandwidth);
        if (s.gateways.empty()) throw drc::ConfigError("gateway list is empty");
        s.cluster.gateway_bandwidth_bps = s.gateways.front();
    }
    auto count = [](const std::string& t, const char* what) {
        if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
            throw drc::ConfigError(std::string(what) + " must be a non-negative integer, got '" + t + "'");
        return static_cast<std::size_t>(std::stoull(t));
    };
    if (!f.stripes.empty()) s.stripes = count(f.stripes, "--stripes");
    if (!f.failed.empty()) s.failed = count(f.failed, "--failed");
    if (!f.variable.empty()) s.variable = f.variable;
    if (!f.range.empty()) s.range = f.range;
    if (!f.table.empty()) s.table = f.table;
    if (!f.inv_lambda1.empty()) s.inv_lambda1 = drc::units::parse_list(f.inv_lambda1, drc::units::parse_number);
    if (!f.gamma.empty()) s.gamma = drc::units::parse_list(f.gamma, drc::units::parse_bandwidth);
    if (!f.lambda2.empty()) s.lambda2 = drc::units::parse_number(f.lambda2);
    if (!f.days_per_year.empty()) s.days_per_year = drc::units::parse_number(f.days_per_year);
    s.cluster.validate();
    return s;
}

class Output {
public:
    explicit Output(const std::string& path) : path_(path) {}
    std::ostream& stream() { return path_.empty() ? std::cout : buf_; }
    void finish() {
        if (!path_.empty()) drc::write_text(path_, buf_.str());
    }

private:
    std::string path_;
    std::ostringstream buf_;
};

std::string fmt(const char* f, double v) {
    char b[64];
    std::snprintf(b, sizeof b, f, v);
    return b;
}

drc::StripeGeometry sim_geometry(const Settings& s, const drc::CodeSpec& spec) {
    const auto def = drc::testbed_geometry(spec.subblocks);
    return drc::StripeGeometry::make(s.block_size.value_or(def.block_size), s.strip_size.value_or(def.strip_size),
                                     spec.subblocks);
}

std::vector<drc::CodeSpec> build_codes(const std::vector<std::string>& names) {
    std::vector<drc::CodeSpec> v;
    for (const auto& n : names) v.push_back(drc::make_code(n));
    return v;
}

// ---- subcommands ---------------------------------------------------------

int cmd_analyze(const Settings& s, Output& out) {
    const auto& names = s.codes.empty() ? kAnalyzeCodes : s.codes;
    struct Row {
        std::size_t group;
        std::string line;
    };
    std::vector<Row> rows;
    for (const auto& name : names) {
        drc::CodeName c{"?", 0, 0, 0};
        std::string err;
        std::string body;
        try {
            c = drc::parse_code_name(name);
            const drc::CodeKind kind = c.family == "RS"    ? drc::CodeKind::RS
                                       : c.family == "MSR" ? drc::CodeKind::MSR
                                       : c.family == "DRC" ? drc::CodeKind::DRC
                                                           : throw drc::ParameterError("unknown code family '" + c.family + "'");
            const auto t = drc::analytic_cross_rack_traffic(kind, c.n, c.k, c.r);
            body = fmt("%.4f", static_cast<double>(c.n) / static_cast<double>(c.k)) + "," + fmt("%.4f", t.to_double()) +
                   "," + t.str() + ",";
        } catch (const drc::Error& e) {
            err = e.kind() + ": " + e.what();
            std::replace(err.begin(), err.end(), ',', ';');
            body = ",,,";
        }
        const std::size_t group = c.n > c.k ? c.n - c.k : 0;
        std::string label = c.family + "(" + std::to_string(c.n) + "," + std::to_string(c.k) + "," + std::to_string(c.r) + ")";
        if (c.n == 0) label = name;
        std::replace(label.begin(), label.end(), ',', ' ');
        rows.push_back({group, std::to_string(group) + "," + label + "," + std::to_string(c.n) + "," + std::to_string(c.k) +
                                   "," + std::to_string(c.r) + "," + body + err});
    }
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.group < b.group; });
    out.stream() << "n_minus_k,code,n,k,r,redundancy,cross_rack_traffic_blocks,cross_rack_traffic_exact,error\n";
    for (const auto& r : rows) out.stream() << r.line << "\n";
    return 0;
}

int cmd_encode(const Settings& s, const std::vector<std::string>& inputs, const std::string& out_dir,
               const std::string& stripe_id, Output& out) {
    if (s.codes.size() != 1) throw drc::ConfigError("encode needs exactly one --code");
    if (inputs.empty()) throw drc::ConfigError("encode needs at least one --input file");
    if (out_dir.empty()) throw drc::ConfigError("encode needs --out-dir");
    const auto spec = drc::make_code(s.codes.front());
    if (!spec.executable()) throw drc::UnsupportedScenarioError(spec.name() + " is an analytic model and cannot encode");
    std::vector<std::uint8_t> all;
    for (const auto& p : inputs) {
        const auto bytes = drc::read_file(p);
        all.insert(all.end(), bytes.begin(), bytes.end());
    }
    std::size_t block = 0;
    if (s.block_size) {
        block = *s.block_size;
        if (all.size() != spec.k * block)
            throw drc::GeometryError("input holds " + std::to_string(all.size()) + " bytes but " + spec.name() +
                                     " with block size " + std::to_string(block) + " needs exactly " +
                                     std::to_string(spec.k * block));
    } else {
        if (all.empty() || all.size() % spec.k != 0)
            throw drc::GeometryError("input holds " + std::to_string(all.size()) + " bytes, which must be a positive multiple of k = " +
                                     std::to_string(spec.k));
        block = all.size() / spec.k;
    }
    if (block % spec.subblocks != 0)
        throw drc::GeometryError("each block would hold " + std::to_string(block) + " bytes, which must be a multiple of " +
                                 std::to_string(spec.subblocks) + "; pad the input to a multiple of " +
                                 std::to_string(spec.k * spec.subblocks) + " bytes");
    std::size_t strip = 0;
    if (s.strip_size) {
        strip = *s.strip_size;
    } else {
        const auto desk = drc::desk_geometry(spec.subblocks).strip_size;
        strip = block % desk == 0 ? desk : block;
    }
    const auto g = drc::StripeGeometry::make(block, strip, spec.subblocks);
    std::vector<drc::Block> data(spec.k);
    for (std::size_t i = 0; i < spec.k; ++i) {
        data[i].index = i;
        data[i].payload.assign(all.begin() + static_cast<std::ptrdiff_t>(i * block),
                               all.begin() + static_cast<std::ptrdiff_t>((i + 1) * block));
    }
    const auto stripe = drc::encode_stripe(spec, data, g);
    fs::create_directories(out_dir);
    drc::StripeManifest m;
    m.stripe_id = stripe_id;
    m.code = spec;
    m.geometry = g;
    for (const auto& b : stripe) {
        const std::string name = "block_" + std::to_string(b.index) + ".bin";
        drc::write_file(fs::path(out_dir) / name, b.payload);
        m.blocks.push_back({b.index, b.role, name});
    }
    const auto path = fs::path(out_dir) / "manifest.json";
    m.save(path);
    out.stream() << path.string() << "\n";
    return 0;
}

int cmd_repair(const std::string& stripe_path, const std::vector<std::size_t>& failed_flags, const std::string& out_block,
               const std::string& traffic_path, bool show_plan, Output& out) {
    if (stripe_path.empty()) throw drc::ConfigError("repair needs --stripe <manifest.json>");
    const auto m = drc::StripeManifest::load(stripe_path);
    const fs::path base = fs::path(stripe_path).parent_path();
    std::vector<std::size_t> failed = failed_flags;
    std::vector<drc::Block> available;
    for (const auto& e : m.blocks) {
        const bool marked = std::find(failed.begin(), failed.end(), e.index) != failed.end();
        const auto p = base / e.path;
        if (marked) continue;
        if (!fs::exists(p)) {
            failed.push_back(e.index);
            continue;
        }
        auto bytes = drc::read_file(p);
        if (bytes.size() != m.geometry.block_size)
            throw drc::GeometryError("block file '" + p.string() + "' has " + std::to_string(bytes.size()) +
                                     " bytes, expected " + std::to_string(m.geometry.block_size));
        available.push_back({e.index, e.role, std::move(bytes)});
    }
    std::sort(failed.begin(), failed.end());
    failed.erase(std::unique(failed.begin(), failed.end()), failed.end());
    if (failed.empty()) throw drc::ParameterError("no failed block: mark one with --failed or remove its file");
    if (failed.size() > 1)
        throw drc::UnsupportedScenarioError(std::to_string(failed.size()) +
                                            " blocks are failed; only single-block repair is supported");
    const std::size_t f = failed.front();
    if (f >= m.code.n) throw drc::ParameterError("failed index " + std::to_string(f) + " is outside the stripe");
    const auto plan = drc::plan_repair(m.code, f, drc::default_layout(m.code));
    if (show_plan) std::cerr << plan.describe();
    const auto res = drc::execute_repair(plan, available, m.geometry);
    const fs::path dest = out_block.empty() ? base / m.blocks[f].path : fs::path(out_block);
    drc::write_file(dest, res.block.payload);
    if (traffic_path.empty())
        out.stream() << res.traffic.to_csv();
    else
        drc::write_text(traffic_path, res.traffic.to_csv());
    return 0;
}

int cmd_validate(const Settings& s, const std::string& code_file, const std::string& dump_spec, Output& out) {
    drc::CodeSpec spec;
    if (!code_file.empty())
        spec = drc::code_spec_from_text(drc::read_text(code_file));
    else if (s.codes.size() == 1)
        spec = drc::make_code(s.codes.front());
    else
        throw drc::ConfigError("validate needs exactly one --code or a --code-file");
    if (!dump_spec.empty()) drc::write_text(dump_spec, drc::code_spec_to_text(spec));
    const auto rep = drc::validate_code(spec);
    out.stream() << rep.text();
    if (!rep.ok()) {
        out.finish();
        std::cerr << "error: validation-failed: " << spec.name() << " failing_subsets=" << rep.failing_subsets.size()
                  << " failing_repairs=" << rep.repair_failures.size() << " failing_racks=" << rep.failing_racks.size()
                  << "\n";
        return 3;
    }
    return 0;
}

int cmd_simulate(const std::string& scenario, const Settings& s, Output& out) {
    auto& os = out.stream();
    if (scenario == "node-recovery" || scenario == "degraded-read") {
        const auto codes = build_codes(s.codes.empty() ? kRecoveryCodes : s.codes);
        if (scenario == "node-recovery")
            os << "code,gateway_bps,stripes,block_size_bytes,strip_size_bytes,seconds,throughput_mib_s,bottleneck\n";
        else
            os << "code,gateway_bps,block_size_bytes,strip_size_bytes,degraded_read_s\n";
        for (const auto& spec : codes) {
            const auto g = sim_geometry(s, spec);
            const auto plans = scenario == "node-recovery" ? sim::recovery_plans(spec, s.stripes, s.failed)
                                                           : std::vector<drc::RepairPlan>{};
            for (double bw : s.gateways) {
                sim::ClusterConfig c = s.cluster;
                c.gateway_bandwidth_bps = bw;
                if (scenario == "node-recovery") {
                    const auto r = sim::simulate_node_recovery(spec, plans, c, g);
                    os << spec.name() << "," << fmt("%.0f", bw) << "," << r.stripes << "," << g.block_size << ","
                       << g.strip_size << "," << fmt("%.6f", r.seconds) << "," << fmt("%.4f", r.mib_per_second()) << ","
                       << r.bottleneck << "\n";
                } else {
                    const double t = sim::simulate_degraded_read(spec, c, g, s.failed);
                    os << spec.name() << "," << fmt("%.0f", bw) << "," << g.block_size << "," << g.strip_size << ","
                       << fmt("%.6f", t) << "\n";
                }
            }
        }
        return 0;
    }
    if (scenario == "breakdown") {
        const auto codes = build_codes(s.codes.empty() ? kBreakdownCodes : s.codes);
        os << "code,gateway_bps,stage,seconds\n";
        for (const auto& spec : codes) {
            const auto g = sim_geometry(s, spec);
            const auto plan = drc::plan_repair(spec, s.failed, drc::default_layout(spec));
            for (double bw : s.gateways) {
                sim::ClusterConfig c = s.cluster;
                c.gateway_bandwidth_bps = bw;
                const auto t = sim::simulate_block_repair(spec, plan, c, g);
                for (const auto& [name, v] : t.stages())
                    os << spec.name() << "," << fmt("%.0f", bw) << "," << name << "," << fmt("%.6f", v) << "\n";
                os << spec.name() << "," << fmt("%.0f", bw) << ",pipelined_total," << fmt("%.6f", t.pipelined_total()) << "\n";
                os << spec.name() << "," << fmt("%.0f", bw) << ",sequential_total," << fmt("%.6f", t.sequential_total())
                   << "\n";
            }
        }
        return 0;
    }
    if (scenario == "sweep") {
        const auto codes = build_codes(s.codes.empty() ? kSweepCodes : s.codes);
        const auto var = sim::parse_variable(s.variable);
        std::string range = s.range;
        std::vector<double> values;
        if (var == sim::SweepVariable::GatewayBandwidth)
            values = drc::units::parse_range(range.empty() ? "100M:10G:x2" : range, drc::units::parse_bandwidth);
        else if (var == sim::SweepVariable::StripSize)
            values = drc::units::parse_range(range.empty() ? "1KiB:16MiB:x2" : range, drc::units::parse_size);
        else
            values = drc::units::parse_range(range.empty() ? "1MiB:256MiB:x2" : range, drc::units::parse_size);
        sim::SweepBase base;
        if (s.block_size) base.block_size = *s.block_size;
        if (s.strip_size) base.strip_size = *s.strip_size;
        base.stripes = s.stripes;
        sim::ClusterConfig c = s.cluster;
        os << sim::sweep(codes, c, var, values, base).to_csv();
        return 0;
    }
    throw drc::ConfigError("unknown simulate scenario '" + scenario + "'");
}

int cmd_reliability(const Settings& s, Output& out) {
    rel::TableGrid grid;
    if (s.table == "1")
        grid = rel::table1_grid();
    else if (s.table == "2")
        grid = rel::table2_grid();
    else
        throw drc::ConfigError("--table must be 1 or 2");
    if (!s.inv_lambda1.empty()) grid.inv_lambda1_years = s.inv_lambda1;
    if (!s.gamma.empty()) grid.gamma_bps = s.gamma;
    grid.lambda2 = s.lambda2;
    grid.days_per_year = s.days_per_year;
    out.stream() << rel::table_to_csv(rel::mttdl_table(grid));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Double Regenerating Codes toolkit: analyze, encode, repair, validate, simulate, reliability"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    app.add_option("--config", f.config, "JSON config file (flags override it)");
    app.add_option("--manifest", f.manifest, "write the resolved configuration as JSON to this path");
    app.add_option("--out,-o", f.out, "write the main output to this file instead of stdout");

    auto* analyze = app.add_subcommand("analyze", "analytic cross-rack repair traffic per code");
    analyze->add_option("--code,--codes", f.codes, "codes such as DRC(9,5,3) or RS:9:5:3");

    std::vector<std::string> inputs;
    std::string out_dir, stripe_id = "stripe-0";
    auto* encode = app.add_subcommand("encode", "encode input files into a stripe of block files");
    encode->add_option("--code", f.codes, "code to use")->required();
    encode->add_option("--input,-i", inputs, "input files, concatenated in order")->required();
    encode->add_option("--out-dir", out_dir, "directory for block files and manifest.json")->required();
    encode->add_option("--block-size", f.block_size, "block size (default: input size / k)");
    encode->add_option("--strip-size", f.strip_size, "strip size");
    encode->add_option("--stripe-id", stripe_id, "identifier stored in the manifest");

    std::string stripe_path, out_block, traffic_path;
    std::vector<std::size_t> failed_blocks;
    bool show_plan = false;
    auto* repair = app.add_subcommand("repair", "rebuild the single failed or missing block of a stripe");
    repair->add_option("--stripe", stripe_path, "stripe manifest written by encode")->required();
    repair->add_option("--failed", failed_blocks, "index of the failed block (default: the missing file)");
    repair->add_option("--output", out_block, "where to write the rebuilt block (default: its manifest path)");
    repair->add_option("--traffic", traffic_path, "write the traffic CSV here instead of stdout");
    repair->add_flag("--show-plan", show_plan, "print the repair plan to stderr");

    std::string code_file, dump_spec;
    auto* validate = app.add_subcommand("validate", "check MDS, exact repair and single-rack tolerance");
    validate->add_option("--code", f.codes, "code to construct and check");
    validate->add_option("--code-file", code_file, "code specification JSON to check");
    validate->add_option("--dump-spec", dump_spec, "write the checked specification as JSON");

    std::string scenario;
    auto* simulate = app.add_subcommand("simulate", "cluster simulation");
    simulate->add_option("scenario", scenario, "node-recovery | degraded-read | sweep | breakdown")
        ->required()
        ->check(CLI::IsMember({"node-recovery", "degraded-read", "sweep", "breakdown"}));
    simulate->add_option("--code,--codes", f.codes, "codes to simulate");
    simulate->add_option("--gateway", f.gateway, "gateway bandwidths, e.g. 200M,1G");
    simulate->add_option("--block-size", f.block_size, "block size");
    simulate->add_option("--strip-size", f.strip_size, "strip size");
    simulate->add_option("--stripes", f.stripes, "stripes per node recovery");
    simulate->add_option("--failed", f.failed, "failed block index");
    simulate->add_option("--variable", f.variable, "sweep variable: strip-size | block-size | gateway");
    simulate->add_option("--range", f.range, "sweep range lo:hi:xF, lo:hi:+S or a list");

    auto* reliability = app.add_subcommand("reliability", "MTTDL tables");
    reliability->add_option("--table", f.table, "1 (vary 1/lambda1) or 2 (vary gamma)");
    reliability->add_option("--inv-lambda1", f.inv_lambda1, "comma-separated 1/lambda1 values in years");
    reliability->add_option("--gamma", f.gamma, "comma-separated cross-rack bandwidths, e.g. 0.2G,2G");
    reliability->add_option("--lambda2", f.lambda2, "correlated failure rate per year");
    reliability->add_option("--days-per-year", f.days_per_year, "days per year used for unit conversion");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << "\n";
        return 64;
    }

    try {
        const Settings s = resolve(f);
        Output out(f.out);
        int rc = 0;
        std::string command;
        if (*analyze) {
            command = "analyze";
            rc = cmd_analyze(s, out);
        } else if (*encode) {
            command = "encode";
            rc = cmd_encode(s, inputs, out_dir, stripe_id, out);
        } else if (*repair) {
            command = "repair";
            rc = cmd_repair(stripe_path, failed_blocks, out_block, traffic_path, show_plan, out);
        } else if (*validate) {
            command = "validate";
            rc = cmd_validate(s, code_file, dump_spec, out);
        } else if (*simulate) {
            command = "simulate " + scenario;
            rc = cmd_simulate(scenario, s, out);
        } else if (*reliability) {
            command = "reliability";
            rc = cmd_reliability(s, out);
        }
        out.finish();
        if (!f.manifest.empty()) {
            json m;
            m["command"] = command;
            m["config_file"] = f.config;
            m["precedence"] = "flags > config file > defaults";
            m["settings"] = s.to_json();
            drc::write_text(f.manifest, m.dump(2) + "\n");
        }
        return rc;
    } catch (const drc::Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: internal: " << e.what() << "\n";
        return 70;
    }
}
