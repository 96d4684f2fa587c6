// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "drc/errors.hpp"

namespace drc {

inline constexpr std::size_t KiB = 1024;
inline constexpr std::size_t MiB = 1024 * KiB;

enum class BlockRole { Data, Parity };

inline const char* role_name(BlockRole r) { return r == BlockRole::Data ? "data" : "parity"; }

struct Block {
    std::size_t index = 0;
    BlockRole role = BlockRole::Data;
    std::vector<std::uint8_t> payload;
};

// A block is a sequence of equal strips, each strip is cut into `subblocks`
// substrips, and subblock s is formed by substrip s of every strip.
struct StripeGeometry {
    std::size_t block_size = 0;
    std::size_t strip_size = 0;
    std::size_t subblocks = 1;

    std::size_t strip_count() const { return block_size / strip_size; }
    std::size_t substrip_size() const { return strip_size / subblocks; }
    std::size_t subblock_size() const { return block_size / subblocks; }

    void validate() const {
        if (subblocks == 0) throw GeometryError("subblocks per block must be at least 1");
        if (strip_size == 0) throw GeometryError("strip size must be positive");
        if (block_size == 0) throw GeometryError("block size must be positive");
        if (block_size % strip_size != 0)
            throw GeometryError("block size " + std::to_string(block_size) +
                                " must be a multiple of the strip size " + std::to_string(strip_size));
        if (strip_size % subblocks != 0)
            throw GeometryError("strip size " + std::to_string(strip_size) + " must be a multiple of " +
                                std::to_string(subblocks) + " (subblocks per block)");
    }

    static StripeGeometry make(std::size_t block, std::size_t strip, std::size_t subblocks) {
        StripeGeometry g{block, strip, subblocks};
        g.validate();
        return g;
    }

    friend bool operator==(const StripeGeometry&, const StripeGeometry&) = default;
};

// Small geometry used by tests and desk runs: 4 KiB blocks with 1 KiB strips,
// shrunk to 4032/1008 bytes when the subblock count does not divide 1 KiB.
inline StripeGeometry desk_geometry(std::size_t subblocks) {
    if (KiB % subblocks == 0) return StripeGeometry::make(4 * KiB, KiB, subblocks);
    const std::size_t strip = 1008 - 1008 % subblocks;
    return StripeGeometry::make(4 * strip, strip, subblocks);
}

// Testbed geometry: 64 MiB blocks with 256 KiB strips, or 63 MiB with 252 KiB
// strips when the subblock count does not divide 256 KiB.
inline StripeGeometry testbed_geometry(std::size_t subblocks) {
    if ((256 * KiB) % subblocks == 0) return StripeGeometry::make(64 * MiB, 256 * KiB, subblocks);
    const std::size_t strip = 252 * KiB - (252 * KiB) % subblocks;
    return StripeGeometry::make(256 * strip, strip, subblocks);
}

inline void check_payload(std::span<const std::uint8_t> block, const StripeGeometry& g) {
    if (block.size() != g.block_size)
        throw GeometryError("block of " + std::to_string(block.size()) + " bytes does not match block size " +
                            std::to_string(g.block_size));
}

inline std::vector<std::uint8_t> gather_subblock(std::span<const std::uint8_t> block, const StripeGeometry& g,
                                                 std::size_t s) {
    check_payload(block, g);
    if (s >= g.subblocks) throw GeometryError("subblock index out of range");
    const std::size_t ss = g.substrip_size();
    std::vector<std::uint8_t> out(g.subblock_size());
    for (std::size_t j = 0; j < g.strip_count(); ++j)
        std::copy_n(block.begin() + static_cast<std::ptrdiff_t>(j * g.strip_size + s * ss), ss,
                    out.begin() + static_cast<std::ptrdiff_t>(j * ss));
    return out;
}

inline void scatter_subblock(std::span<const std::uint8_t> subblock, const StripeGeometry& g, std::size_t s,
                             std::span<std::uint8_t> block) {
    check_payload(block, g);
    if (s >= g.subblocks) throw GeometryError("subblock index out of range");
    if (subblock.size() != g.subblock_size()) throw GeometryError("subblock has wrong length");
    const std::size_t ss = g.substrip_size();
    for (std::size_t j = 0; j < g.strip_count(); ++j)
        std::copy_n(subblock.begin() + static_cast<std::ptrdiff_t>(j * ss), ss,
                    block.begin() + static_cast<std::ptrdiff_t>(j * g.strip_size + s * ss));
}

}  // namespace drc
