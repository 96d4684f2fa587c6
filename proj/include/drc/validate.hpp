// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "drc/code_spec.hpp"
#include "drc/layout.hpp"
#include "drc/repair.hpp"

namespace drc {

struct ValidationReport {
    std::string code;
    std::size_t subsets_checked = 0;
    bool subsets_exhaustive = true;
    std::vector<std::vector<std::size_t>> failing_subsets;
    std::size_t repairs_checked = 0;
    std::vector<std::string> repair_failures;
    std::size_t racks_checked = 0;
    std::vector<std::size_t> failing_racks;

    bool mds_ok() const { return failing_subsets.empty(); }
    bool repair_ok() const { return repair_failures.empty(); }
    bool rack_ok() const { return failing_racks.empty(); }
    bool ok() const { return mds_ok() && repair_ok() && rack_ok(); }

    std::string text() const {
        std::ostringstream os;
        auto verdict = [](bool b) { return b ? "PASS" : "FAIL"; };
        os << "code " << code << "\n";
        os << "mds " << verdict(mds_ok()) << " subsets=" << subsets_checked
           << (subsets_exhaustive ? " exhaustive" : " sampled") << " failing=" << failing_subsets.size() << "\n";
        for (const auto& s : failing_subsets) {
            os << "  failing-subset {";
            for (std::size_t i = 0; i < s.size(); ++i) os << (i ? "," : "") << s[i];
            os << "}\n";
        }
        os << "exact-repair " << verdict(repair_ok()) << " plans=" << repairs_checked
           << " failing=" << repair_failures.size() << "\n";
        for (const auto& f : repair_failures) os << "  failing-repair " << f << "\n";
        os << "single-rack " << verdict(rack_ok()) << " racks=" << racks_checked << " failing=" << failing_racks.size()
           << "\n";
        for (auto q : failing_racks) os << "  failing-rack " << q << "\n";
        os << "result " << verdict(ok()) << "\n";
        return os.str();
    }
};

inline std::vector<Block> random_data_blocks(std::size_t k, const StripeGeometry& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Block> data(k);
    for (std::size_t i = 0; i < k; ++i) {
        data[i].index = i;
        data[i].payload.resize(g.block_size);
        for (auto& b : data[i].payload) b = static_cast<std::uint8_t>(rng() >> 56);
    }
    return data;
}

namespace detail {

// Returns an empty string when row t of the equations annihilates every
// codeword of each set code.
inline std::string check_parity_equations(const CodeSpec& spec, const RepairEquations& eq) {
    for (std::size_t s = 0; s < spec.subblocks; ++s)
        for (std::size_t t = 0; t < eq.equations(); ++t) {
            std::vector<Element> acc(spec.k);
            for (std::size_t i = 0; i < spec.n; ++i) {
                const Element w = eq.coefficients[i](t, s);
                if (w.is_zero()) continue;
                const auto row = spec.set_codes[s].full_row(i);
                for (std::size_t c = 0; c < spec.k; ++c) acc[c] += w * row[c];
            }
            for (auto e : acc)
                if (!e.is_zero())
                    return "equation " + std::to_string(t) + " is not a parity check of subblock set " + std::to_string(s);
        }
    return {};
}

inline std::uint64_t binomial(std::size_t n, std::size_t k) {
    std::uint64_t c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
        if (c > (1ULL << 40)) return c;
    }
    return c;
}

}  // namespace detail

// Checks decodability from k-subsets, exact repair of every block, and
// survival of any single rack failure. Subsets are enumerated exhaustively
// up to `max_exhaustive` of them and sampled with a fixed seed beyond that.
inline ValidationReport validate_code(const CodeSpec& spec, std::uint64_t seed = 1,
                                      std::size_t max_exhaustive = 20000) {
    if (!spec.executable()) throw UnsupportedScenarioError(spec.name() + " is an analytic model and cannot be validated");
    spec.check_shape();
    if (spec.set_codes.size() != spec.subblocks) throw ParameterError("specification needs one code per subblock set");
    ValidationReport rep;
    rep.code = spec.name();
    const StripeGeometry g = desk_geometry(spec.subblocks);
    const auto data = random_data_blocks(spec.k, g, seed);
    const auto stripe = encode_stripe(spec, data, g);

    auto decodes = [&](std::span<const std::size_t> subset) {
        for (std::size_t s = 0; s < spec.subblocks; ++s)
            if (rank(spec.set_codes[s].full_rows(subset)) != spec.k) return false;
        std::vector<Block> avail;
        for (auto i : subset) avail.push_back(stripe[i]);
        const auto out = decode_stripe(spec, avail, g);
        for (std::size_t i = 0; i < spec.k; ++i)
            if (out[i].payload != data[i].payload) return false;
        return true;
    };

    auto check_subset = [&](std::span<const std::size_t> subset) {
        ++rep.subsets_checked;
        if (!decodes(subset)) rep.failing_subsets.emplace_back(subset.begin(), subset.end());
        return true;
    };
    if (detail::binomial(spec.n, spec.k) <= max_exhaustive) {
        for_each_subset(spec.n, spec.k, check_subset);
    } else {
        rep.subsets_exhaustive = false;
        std::mt19937_64 rng(seed ^ 0x5BD1E995ULL);
        std::vector<std::size_t> pool(spec.n);
        for (std::size_t s = 0; s < max_exhaustive; ++s) {
            for (std::size_t i = 0; i < spec.n; ++i) pool[i] = i;
            for (std::size_t i = 0; i < spec.k; ++i) std::swap(pool[i], pool[i + detail::draw(rng, spec.n - i)]);
            std::vector<std::size_t> subset(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(spec.k));
            std::sort(subset.begin(), subset.end());
            check_subset(subset);
        }
    }

    const StripeLayout layout = default_layout(spec);
    for (std::size_t f = 0; f < spec.n; ++f) {
        ++rep.repairs_checked;
        const std::string label = "block " + std::to_string(f) + ": ";
        try {
            const auto eq = derive_equations(spec, f);
            if (auto why = detail::check_parity_equations(spec, eq); !why.empty()) {
                rep.repair_failures.push_back(label + why);
                continue;
            }
            const auto plan = compile_plan(spec, eq, layout);
            const auto res = execute_repair(plan, stripe, g);
            if (res.block.payload != stripe[f].payload) rep.repair_failures.push_back(label + "reconstruction differs");
        } catch (const Error& e) {
            rep.repair_failures.push_back(label + e.what());
        }
    }

    for (std::size_t q = 0; q < spec.r; ++q) {
        ++rep.racks_checked;
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < spec.n && rest.size() < spec.k; ++i)
            if (spec.rack_of(i) != q) rest.push_back(i);
        bool ok = rest.size() == spec.k;
        if (ok) {
            try {
                ok = decodes(rest);
            } catch (const Error&) {
                ok = false;
            }
        }
        if (!ok) rep.failing_racks.push_back(q);
    }
    return rep;
}

}  // namespace drc
