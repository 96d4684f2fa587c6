// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "drc/errors.hpp"
#include "drc/geometry.hpp"
#include "drc/matrix.hpp"

namespace drc {

// Systematic (k + m, k) code given by its m x k parity generator.
struct RsCodeSpec {
    std::size_t k = 0;
    std::size_t m = 0;
    FieldMatrix generator;

    std::size_t n() const { return k + m; }

    // Generator row of block i within the full (k + m) x k generator.
    std::vector<Element> full_row(std::size_t i) const {
        if (i >= n()) throw DomainError("block index out of range");
        if (i < k) {
            std::vector<Element> e(k);
            e[i] = gf::kOne;
            return e;
        }
        return generator.row_vector(i - k);
    }

    FieldMatrix full_rows(std::span<const std::size_t> idx) const {
        FieldMatrix g(0, k);
        for (auto i : idx) g.append_row(full_row(i));
        return g;
    }

    friend bool operator==(const RsCodeSpec&, const RsCodeSpec&) = default;
};

// Cauchy generator with entries 1/(x_j + y_i), then scaled so that the first
// row and the first column are all ones. Row and column scaling keep every
// square submatrix nonsingular.
inline RsCodeSpec make_cauchy_spec(std::size_t k, std::size_t m, std::span<const std::uint8_t> xs,
                                   std::span<const std::uint8_t> ys) {
    if (xs.size() != m || ys.size() != k) throw ParameterError("Cauchy point count does not match (k, m)");
    std::vector<bool> used(256, false);
    for (auto v : xs) {
        if (used[v]) throw ParameterError("Cauchy points must be distinct");
        used[v] = true;
    }
    for (auto v : ys) {
        if (used[v]) throw ParameterError("Cauchy points must be distinct");
        used[v] = true;
    }
    FieldMatrix g(m, k);
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t i = 0; i < k; ++i) g(j, i) = gf::inv(Element(xs[j]) + Element(ys[i]));
    for (std::size_t i = 0; i < k; ++i) {
        const Element s = gf::inv(g(0, i));
        for (std::size_t j = 0; j < m; ++j) g(j, i) *= s;
    }
    for (std::size_t j = 1; j < m; ++j) {
        const Element s = gf::inv(g(j, 0));
        for (std::size_t i = 0; i < k; ++i) g(j, i) *= s;
    }
    return {k, m, std::move(g)};
}

inline void check_rs_params(std::size_t k, std::size_t m) {
    if (k < 1 || m < 1) throw ParameterError("RS code needs k >= 1 and m >= 1");
    if (k + m > 255) throw ParameterError("RS code length k + m must not exceed 255");
}

inline RsCodeSpec make_rs_spec(std::size_t k, std::size_t m) {
    check_rs_params(k, m);
    std::vector<std::uint8_t> xs(m), ys(k);
    for (std::size_t j = 0; j < m; ++j) xs[j] = static_cast<std::uint8_t>(j);
    for (std::size_t i = 0; i < k; ++i) ys[i] = static_cast<std::uint8_t>(m + i);
    return make_cauchy_spec(k, m, xs, ys);
}

// Calls f(subset) for each size-r subset of {0, ..., n-1} in lexicographic order.
// Stops early when f returns false.
template <class F>
void for_each_subset(std::size_t n, std::size_t r, F&& f) {
    if (r > n) return;
    std::vector<std::size_t> idx(r);
    for (std::size_t i = 0; i < r; ++i) idx[i] = i;
    while (true) {
        if (!f(std::span<const std::size_t>(idx))) return;
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == n - r + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j) idx[j] = idx[j - 1] + 1;
    }
}

// True when every k-subset of the n generator rows is nonsingular.
inline bool is_mds(const RsCodeSpec& spec) {
    bool ok = true;
    for_each_subset(spec.n(), spec.k, [&](std::span<const std::size_t> s) {
        ok = rank(spec.full_rows(s)) == spec.k;
        return ok;
    });
    return ok;
}

// Matrix D with data_i = sum_j D[i][j] * block_{idx[j]}.
inline FieldMatrix decode_matrix(const RsCodeSpec& spec, std::span<const std::size_t> idx) {
    if (idx.size() != spec.k) throw InsufficientDataError("decoding needs exactly k blocks");
    try {
        return invert(spec.full_rows(idx));
    } catch (const RankDeficiencyError& e) {
        std::string list;
        for (auto i : idx) list += (list.empty() ? "" : ",") + std::to_string(i);
        throw MdsViolationError("blocks {" + list + "} do not determine the data: " + e.what());
    }
}

// Coefficients c with block_target = sum_j c[j] * block_{helpers[j]}.
inline std::vector<Element> combination_for(const RsCodeSpec& spec, std::size_t target,
                                            std::span<const std::size_t> helpers) {
    const FieldMatrix d = decode_matrix(spec, helpers);
    return left_multiply(spec.full_row(target), d);
}

// parity[j] = sum_i G[j][i] * data[i] over equal-length regions.
inline void encode_regions(const RsCodeSpec& spec, std::span<const std::span<const std::uint8_t>> data,
                           std::span<const std::span<std::uint8_t>> parity) {
    for (std::size_t j = 0; j < spec.m; ++j) {
        std::fill(parity[j].begin(), parity[j].end(), std::uint8_t{0});
        for (std::size_t i = 0; i < spec.k; ++i) gf::mul_add_region(spec.generator(j, i), data[i], parity[j]);
    }
}

// out[i] = sum_j coeff[i][j] * in[j] over equal-length regions.
inline void combine_regions(const FieldMatrix& coeff, std::span<const std::span<const std::uint8_t>> in,
                            std::span<const std::span<std::uint8_t>> out) {
    for (std::size_t i = 0; i < coeff.rows(); ++i) {
        std::fill(out[i].begin(), out[i].end(), std::uint8_t{0});
        for (std::size_t j = 0; j < coeff.cols(); ++j) gf::mul_add_region(coeff(i, j), in[j], out[i]);
    }
}

namespace detail {

inline std::span<const std::uint8_t> window(const std::vector<std::uint8_t>& v, std::size_t off, std::size_t len) {
    return {v.data() + off, len};
}
inline std::span<std::uint8_t> window(std::vector<std::uint8_t>& v, std::size_t off, std::size_t len) {
    return {v.data() + off, len};
}

inline void check_blocks(std::span<const Block> blocks, const StripeGeometry& g) {
    for (const auto& b : blocks) check_payload(b.payload, g);
}

}  // namespace detail

// Encodes k data blocks strip by strip and returns the m parity blocks
// (indices k .. k+m-1).
inline std::vector<Block> rs_encode(std::span<const Block> data, const RsCodeSpec& spec, const StripeGeometry& g) {
    g.validate();
    if (data.size() != spec.k)
        throw InsufficientDataError("encoding needs " + std::to_string(spec.k) + " data blocks, got " +
                                    std::to_string(data.size()));
    detail::check_blocks(data, g);
    std::vector<Block> parity(spec.m);
    for (std::size_t j = 0; j < spec.m; ++j) {
        parity[j].index = spec.k + j;
        parity[j].role = BlockRole::Parity;
        parity[j].payload.assign(g.block_size, 0);
    }
    std::vector<std::span<const std::uint8_t>> in(spec.k);
    std::vector<std::span<std::uint8_t>> out(spec.m);
    for (std::size_t s = 0; s < g.strip_count(); ++s) {
        const std::size_t off = s * g.strip_size;
        for (std::size_t i = 0; i < spec.k; ++i) in[i] = detail::window(data[i].payload, off, g.strip_size);
        for (std::size_t j = 0; j < spec.m; ++j) out[j] = detail::window(parity[j].payload, off, g.strip_size);
        encode_regions(spec, in, out);
    }
    return parity;
}

// Recovers the k data blocks from any k available blocks of the stripe.
inline std::vector<Block> rs_decode(std::span<const Block> available, const RsCodeSpec& spec,
                                    const StripeGeometry& g) {
    g.validate();
    std::vector<const Block*> chosen;
    std::vector<bool> seen(spec.n(), false);
    for (const auto& b : available) {
        if (b.index >= spec.n()) throw DomainError("block index out of range");
        if (seen[b.index]) continue;
        seen[b.index] = true;
        chosen.push_back(&b);
    }
    if (chosen.size() < spec.k)
        throw InsufficientDataError("decoding needs " + std::to_string(spec.k) + " distinct blocks, got " +
                                    std::to_string(chosen.size()));
    std::sort(chosen.begin(), chosen.end(), [](auto* a, auto* b) { return a->index < b->index; });
    chosen.resize(spec.k);
    std::vector<std::size_t> idx;
    for (auto* b : chosen) {
        check_payload(b->payload, g);
        idx.push_back(b->index);
    }
    const FieldMatrix d = decode_matrix(spec, idx);
    std::vector<Block> data(spec.k);
    for (std::size_t i = 0; i < spec.k; ++i) {
        data[i].index = i;
        data[i].role = BlockRole::Data;
        data[i].payload.assign(g.block_size, 0);
    }
    std::vector<std::span<const std::uint8_t>> in(spec.k);
    std::vector<std::span<std::uint8_t>> out(spec.k);
    for (std::size_t s = 0; s < g.strip_count(); ++s) {
        const std::size_t off = s * g.strip_size;
        for (std::size_t j = 0; j < spec.k; ++j) in[j] = detail::window(chosen[j]->payload, off, g.strip_size);
        for (std::size_t i = 0; i < spec.k; ++i) out[i] = detail::window(data[i].payload, off, g.strip_size);
        combine_regions(d, in, out);
    }
    return data;
}

}  // namespace drc
