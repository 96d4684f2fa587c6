// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "drc/code_spec.hpp"
#include "drc/errors.hpp"
#include "drc/layout.hpp"
#include "drc/matrix.hpp"
#include "drc/rs_codec.hpp"

namespace drc {

// Who does what when a block is rebuilt. Empty fields select the defaults:
// the lowest-indexed node of each non-local rack relays, and the target is a
// replacement node placed in the failed block's slot.
struct RepairRoles {
    std::vector<std::size_t> relayers;  // one block index per non-local rack, ascending rack order
    std::size_t helper_rotation = 0;    // RS only: offset into the non-local helper order
    std::optional<NodeId> target;

    bool is_default() const { return relayers.empty() && helper_rotation == 0; }
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h ^= h >> 31;
    h *= 0xBF58476D1CE4E5B9ULL;
    h ^= h >> 29;
    return h;
}

// Uniform index draw that depends only on the raw engine output, so the
// sequence is identical across standard library implementations.
inline std::size_t draw(std::mt19937_64& rng, std::size_t bound) { return static_cast<std::size_t>(rng() % bound); }

inline std::vector<std::size_t> nonlocal_racks(const CodeSpec& spec, std::size_t failed) {
    std::vector<std::size_t> v;
    for (std::size_t q = 0; q < spec.r; ++q)
        if (q != spec.rack_of(failed)) v.push_back(q);
    return v;
}

inline std::vector<std::size_t> rack_blocks(const CodeSpec& spec, std::size_t rack) {
    std::vector<std::size_t> v;
    for (std::size_t i = rack * spec.rack_size(); i < (rack + 1) * spec.rack_size(); ++i) v.push_back(i);
    return v;
}

inline std::vector<std::size_t> resolve_relayers(const CodeSpec& spec, std::size_t failed,
                                                 const std::vector<std::size_t>& requested) {
    const auto racks = nonlocal_racks(spec, failed);
    if (requested.empty()) {
        std::vector<std::size_t> v;
        for (auto q : racks) v.push_back(q * spec.rack_size());
        return v;
    }
    if (requested.size() != racks.size())
        throw ParameterError("expected one relayer per non-local rack (" + std::to_string(racks.size()) + ")");
    for (std::size_t i = 0; i < racks.size(); ++i)
        if (requested[i] >= spec.n || spec.rack_of(requested[i]) != racks[i])
            throw ParameterError("relayer " + std::to_string(requested[i]) + " is not in rack " +
                                 std::to_string(racks[i]));
    return requested;
}

inline void check_failed(const CodeSpec& spec, std::size_t failed) {
    if (failed >= spec.n)
        throw ParameterError("failed index " + std::to_string(failed) + " outside stripe of " + std::to_string(spec.n));
}

inline std::vector<FieldMatrix> zero_coefficients(const CodeSpec& spec, std::size_t rows) {
    return std::vector<FieldMatrix>(spec.n, FieldMatrix(rows, spec.subblocks));
}

// ---- RS: local survivors first, then non-local blocks, all sent directly.

inline RepairEquations derive_rs(const CodeSpec& spec, std::size_t failed, std::size_t rotation) {
    const std::size_t rf = spec.rack_of(failed);
    std::vector<std::size_t> helpers;
    for (auto i : rack_blocks(spec, rf))
        if (i != failed) helpers.push_back(i);
    std::vector<std::size_t> remote;
    for (std::size_t i = 0; i < spec.n; ++i)
        if (spec.rack_of(i) != rf) remote.push_back(i);
    const std::size_t need = spec.k - helpers.size();
    for (std::size_t c = 0; c < need; ++c) helpers.push_back(remote[(rotation + c) % remote.size()]);
    std::sort(helpers.begin(), helpers.end());
    const auto c = combination_for(spec.set_codes[0], failed, helpers);
    RepairEquations eq{failed, {}, zero_coefficients(spec, 1)};
    eq.coefficients[failed](0, 0) = gf::kOne;
    for (std::size_t j = 0; j < helpers.size(); ++j) eq.coefficients[helpers[j]](0, 0) = c[j];
    return eq;
}

// ---- Family 2: each of the two non-local racks repairs one subblock set.

inline RepairEquations derive_f2(const CodeSpec& spec, std::size_t failed, const std::vector<std::size_t>& relayers) {
    const auto racks = nonlocal_racks(spec, failed);
    std::vector<std::size_t> local;
    for (auto i : rack_blocks(spec, spec.rack_of(failed)))
        if (i != failed) local.push_back(i);
    RepairEquations eq{failed, relayers, zero_coefficients(spec, 2)};
    eq.coefficients[failed] = FieldMatrix::identity(2);
    for (std::size_t s = 0; s < 2; ++s) {
        std::vector<std::size_t> helpers = local;
        for (auto i : rack_blocks(spec, racks[s])) helpers.push_back(i);
        std::sort(helpers.begin(), helpers.end());
        const auto c = combination_for(spec.set_codes[s], failed, helpers);
        for (std::size_t j = 0; j < helpers.size(); ++j) eq.coefficients[helpers[j]](s, s) = c[j];
    }
    return eq;
}

// ---- Family 1: interference alignment over per-set codes.
//
// Let P be the highest-indexed non-local rack, ordered so its relayer comes
// first. Re-expressing every set code with P as the parity positions gives
// x_{s,P_j} = sum_i G_s[j][i] x_{s,i} over the k blocks outside P. Equation 0
// is the sum over s of the P_0 checks. Equation t >= 1 mixes the P_0 and P_t
// checks with coefficients alpha[t][s] and beta[t][s], chosen so that every
// non-relayer in the remaining non-local racks contributes a multiple of its
// equation-0 combination. Such nodes then send one encoded subblock that
// their relayer can reuse for all equations.

inline RepairEquations derive_f1(const CodeSpec& spec, std::size_t failed, const std::vector<std::size_t>& relayers) {
    const std::size_t m = spec.subblocks;
    const auto racks = nonlocal_racks(spec, failed);
    const std::size_t prack = racks.back();
    const std::size_t prelay = relayers.back();

    std::vector<std::size_t> pnodes{prelay};
    for (auto i : rack_blocks(spec, prack))
        if (i != prelay) pnodes.push_back(i);
    std::vector<std::size_t> info;
    for (std::size_t i = 0; i < spec.n; ++i)
        if (spec.rack_of(i) != prack) info.push_back(i);

    std::vector<FieldMatrix> gp(m, FieldMatrix(m, spec.n));
    for (std::size_t s = 0; s < m; ++s)
        for (std::size_t j = 0; j < m; ++j) {
            const auto c = combination_for(spec.set_codes[s], pnodes[j], info);
            for (std::size_t a = 0; a < info.size(); ++a) gp[s](j, info[a]) = c[a];
        }

    std::vector<std::size_t> aligned;
    for (std::size_t q = 0; q + 1 < racks.size(); ++q)
        for (auto i : rack_blocks(spec, racks[q]))
            if (i != relayers[q]) aligned.push_back(i);

    std::uint64_t base = mix_seed(spec.seed, failed);
    for (auto v : relayers) base = mix_seed(base, v + 1);

    constexpr int kAttempts = 32;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        std::mt19937_64 rng(mix_seed(base, static_cast<std::uint64_t>(attempt)));
        FieldMatrix alpha(m, m), beta(m, m);
        for (std::size_t t = 1; t < m; ++t) {
            const std::size_t unknowns = 2 * m + aligned.size();
            FieldMatrix sys(0, unknowns);
            for (std::size_t a = 0; a < aligned.size(); ++a)
                for (std::size_t s = 0; s < m; ++s) {
                    std::vector<Element> row(unknowns);
                    row[s] = gp[s](0, aligned[a]);
                    row[m + s] = gp[s](t, aligned[a]);
                    row[2 * m + a] = gp[s](0, aligned[a]);
                    sys.append_row(row);
                }
            const FieldMatrix basis = nullspace(sys);
            if (basis.rows() == 0) throw ConstructionError("alignment system for " + spec.name() + " has no solution");
            std::vector<Element> x(unknowns);
            for (std::size_t b = 0; b < basis.rows(); ++b) {
                const Element c(static_cast<std::uint8_t>(1 + draw(rng, 255)));
                for (std::size_t u = 0; u < unknowns; ++u) x[u] += c * basis(b, u);
            }
            for (std::size_t s = 0; s < m; ++s) {
                alpha(t, s) = x[s];
                beta(t, s) = x[m + s];
            }
        }

        RepairEquations eq{failed, relayers, zero_coefficients(spec, m)};
        for (auto i : info)
            for (std::size_t s = 0; s < m; ++s) {
                eq.coefficients[i](0, s) = gp[s](0, i);
                for (std::size_t t = 1; t < m; ++t)
                    eq.coefficients[i](t, s) = alpha(t, s) * gp[s](0, i) + beta(t, s) * gp[s](t, i);
            }
        for (std::size_t s = 0; s < m; ++s) {
            eq.coefficients[pnodes[0]](0, s) = gf::kOne;
            for (std::size_t t = 1; t < m; ++t) {
                eq.coefficients[pnodes[0]](t, s) = alpha(t, s);
                eq.coefficients[pnodes[t]](t, s) = beta(t, s);
            }
        }
        if (rank(eq.coefficients[failed]) == m) return eq;
    }
    throw ConstructionError("no invertible repair system found for block " + std::to_string(failed) + " of " +
                            spec.name());
}

inline RsCodeSpec random_cauchy_spec(std::size_t k, std::size_t m, std::mt19937_64& rng) {
    std::vector<std::uint8_t> pts(256);
    std::iota(pts.begin(), pts.end(), std::uint8_t{0});
    for (std::size_t i = 255; i > 0; --i) std::swap(pts[i], pts[draw(rng, i + 1)]);
    return make_cauchy_spec(k, m, std::span(pts).subspan(0, m), std::span(pts).subspan(m, k));
}

}  // namespace detail

// Repair equations for `failed` under the given roles. Default roles return
// the frozen table stored in the specification.
inline RepairEquations derive_equations(const CodeSpec& spec, std::size_t failed, const RepairRoles& roles = {}) {
    if (!spec.executable()) throw UnsupportedScenarioError(spec.name() + " is an analytic model without repair plans");
    detail::check_failed(spec, failed);
    if (roles.is_default() && failed < spec.repair_tables.size()) return spec.repair_tables[failed];
    switch (spec.family) {
        case CodeFamily::ReedSolomon: return detail::derive_rs(spec, failed, roles.helper_rotation);
        case CodeFamily::DrcFamily1:
            return detail::derive_f1(spec, failed, detail::resolve_relayers(spec, failed, roles.relayers));
        case CodeFamily::DrcFamily2:
            return detail::derive_f2(spec, failed, detail::resolve_relayers(spec, failed, roles.relayers));
        case CodeFamily::Msr: break;
    }
    throw UnsupportedScenarioError("no repair equations for " + spec.name());
}

inline CodeSpec make_rs_code(std::size_t n, std::size_t k, std::size_t r) {
    if (k < 1 || k >= n) throw ParameterError("RS code needs 1 <= k < n");
    check_rs_params(k, n - k);
    CodeSpec spec{CodeFamily::ReedSolomon, n, k, r, 1, 0, {make_rs_spec(k, n - k)}, {}};
    spec.check_shape();
    for (std::size_t f = 0; f < n; ++f) spec.repair_tables.push_back(detail::derive_rs(spec, f, 0));
    return spec;
}

inline CodeSpec make_msr_model(std::size_t n, std::size_t k, std::size_t r) {
    CodeSpec spec{CodeFamily::Msr, n, k, r, 1, 0, {}, {}};
    spec.check_shape();
    return spec;
}

// DRC(n, k, n/(n-k)) with n-k subblocks per block.
inline CodeSpec construct_family1(std::size_t n, std::size_t k, std::uint64_t seed = 1) {
    if (k < 1 || k >= n) throw ParameterError("code needs 1 <= k < n");
    const std::size_t m = n - k;
    if (n % m != 0)
        throw ParameterError("family 1 needs (n-k) to divide n, got (" + std::to_string(n) + "," + std::to_string(k) + ")");
    if (n / m < 2) throw ParameterError("family 1 needs at least two racks");
    check_rs_params(k, m);
    constexpr int kCodeAttempts = 16;
    for (int attempt = 0; attempt < kCodeAttempts; ++attempt) {
        CodeSpec spec{CodeFamily::DrcFamily1, n, k, n / m, m, detail::mix_seed(seed, static_cast<std::uint64_t>(attempt)),
                      {}, {}};
        spec.check_shape();
        std::mt19937_64 rng(spec.seed);
        for (std::size_t s = 0; s < m; ++s) spec.set_codes.push_back(detail::random_cauchy_spec(k, m, rng));
        try {
            for (std::size_t f = 0; f < n; ++f)
                spec.repair_tables.push_back(detail::derive_f1(spec, f, detail::resolve_relayers(spec, f, {})));
            return spec;
        } catch (const ConstructionError&) {
        }
    }
    throw ConstructionError("no family 1 construction found for (" + std::to_string(n) + "," + std::to_string(k) + ")");
}

// DRC(3z, 2z-1, 3) with two subblocks per block.
inline CodeSpec construct_family2(std::size_t z) {
    if (z < 2) throw ParameterError("family 2 needs z >= 2 so that r = 3 is smaller than n = 3z");
    if (3 * z > 255) throw ParameterError("family 2 code length exceeds 255");
    const std::size_t n = 3 * z, k = 2 * z - 1;
    const RsCodeSpec code = make_rs_spec(k, n - k);
    CodeSpec spec{CodeFamily::DrcFamily2, n, k, 3, 2, 0, {code, code}, {}};
    spec.check_shape();
    for (std::size_t f = 0; f < n; ++f)
        spec.repair_tables.push_back(detail::derive_f2(spec, f, detail::resolve_relayers(spec, f, {})));
    return spec;
}

inline CodeSpec make_drc_code(std::size_t n, std::size_t k, std::size_t r) {
    if (k >= 1 && k < n && r * (n - k) == n) return construct_family1(n, k);
    if (r == 3 && n % 3 == 0 && k + 1 == 2 * (n / 3)) return construct_family2(n / 3);
    throw ParameterError("DRC(" + std::to_string(n) + "," + std::to_string(k) + "," + std::to_string(r) +
                         ") is not constructible; supported are DRC(n,k,n/(n-k)) and DRC(3z,2z-1,3)");
}

inline CodeSpec make_code(const std::string& family, std::size_t n, std::size_t k, std::size_t r) {
    if (family == "RS") return make_rs_code(n, k, r);
    if (family == "MSR") return make_msr_model(n, k, r);
    if (family == "DRC") return make_drc_code(n, k, r);
    throw ParameterError("unknown code family '" + family + "' (expected RS, MSR or DRC)");
}

struct CodeName {
    std::string family;
    std::size_t n = 0, k = 0, r = 0;
};

// Accepts "DRC(9,6,3)" or "DRC:9:6:3".
inline CodeName parse_code_name(const std::string& text) {
    std::string s;
    for (char c : text)
        if (c != ' ') s.push_back(c);
    const auto open = s.find_first_of("(:");
    if (open == std::string::npos || open == 0) throw ParameterError("cannot parse code name '" + text + "'");
    CodeName out;
    out.family = s.substr(0, open);
    std::string rest = s.substr(open + 1);
    if (s[open] == '(') {
        if (rest.empty() || rest.back() != ')') throw ParameterError("cannot parse code name '" + text + "'");
        rest.pop_back();
    }
    std::vector<std::size_t> nums;
    std::size_t pos = 0;
    while (pos <= rest.size()) {
        const auto next = rest.find_first_of(",:", pos);
        const std::string tok = rest.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw ParameterError("cannot parse code name '" + text + "'");
        nums.push_back(std::stoul(tok));
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    if (nums.size() != 3) throw ParameterError("code name '" + text + "' needs three parameters (n,k,r)");
    out.n = nums[0];
    out.k = nums[1];
    out.r = nums[2];
    return out;
}

inline CodeSpec make_code(const std::string& text) {
    const auto c = parse_code_name(text);
    return make_code(c.family, c.n, c.k, c.r);
}

}  // namespace drc
