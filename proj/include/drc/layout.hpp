// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "drc/code_spec.hpp"
#include "drc/errors.hpp"

namespace drc {

struct NodeId {
    std::size_t value = 0;
    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

inline std::string node_name(NodeId id) { return "node" + std::to_string(id.value); }

enum class PlacementMode { Flat, Hierarchical };

inline const char* placement_name(PlacementMode m) { return m == PlacementMode::Flat ? "flat" : "hierarchical"; }

// Block i of the stripe lives on node i. Racks hold consecutive blocks, so
// rack q holds blocks q*n/r .. (q+1)*n/r - 1.
struct StripeLayout {
    std::size_t n = 0;
    std::size_t r = 0;
    PlacementMode mode = PlacementMode::Hierarchical;

    std::size_t rack_size() const { return n / r; }
    std::size_t rack_of(std::size_t block) const { return block / rack_size(); }
    NodeId node_of(std::size_t block) const { return NodeId{block}; }
    std::size_t rack_of_node(NodeId id) const { return rack_of(id.value); }

    std::vector<std::size_t> rack_members(std::size_t rack) const {
        std::vector<std::size_t> v;
        for (std::size_t i = rack * rack_size(); i < (rack + 1) * rack_size(); ++i) v.push_back(i);
        return v;
    }

    friend bool operator==(const StripeLayout&, const StripeLayout&) = default;
};

inline StripeLayout place_stripe(const CodeSpec& spec, PlacementMode mode) {
    spec.check_shape();
    if (mode == PlacementMode::Flat && spec.r != spec.n)
        throw ParameterError("flat placement needs r = n, but " + spec.name() + " has r = " + std::to_string(spec.r));
    if (mode == PlacementMode::Hierarchical && spec.r == spec.n)
        throw ParameterError("hierarchical placement needs r < n, but " + spec.name() + " has r = n");
    return {spec.n, spec.r, mode};
}

inline StripeLayout default_layout(const CodeSpec& spec) {
    return place_stripe(spec, spec.r == spec.n ? PlacementMode::Flat : PlacementMode::Hierarchical);
}

}  // namespace drc
