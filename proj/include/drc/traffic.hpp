// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "drc/layout.hpp"

namespace drc {

struct ActorTraffic {
    NodeId node;
    std::size_t rack = 0;
    std::uint64_t disk_read_bytes = 0;
    std::uint64_t inner_rack_sent_bytes = 0;
    std::uint64_t cross_rack_sent_bytes = 0;

    friend bool operator==(const ActorTraffic&, const ActorTraffic&) = default;
};

// Byte tallies per actor. Merging is associative and commutative, so reports
// of several stripes can be combined in any order.
class TrafficReport {
public:
    ActorTraffic& actor(NodeId id, std::size_t rack) {
        auto [it, inserted] = actors_.try_emplace(id, ActorTraffic{id, rack});
        return it->second;
    }

    void add_disk_read(NodeId id, std::size_t rack, std::uint64_t bytes) { actor(id, rack).disk_read_bytes += bytes; }
    void add_inner_rack(NodeId id, std::size_t rack, std::uint64_t bytes) {
        actor(id, rack).inner_rack_sent_bytes += bytes;
    }
    void add_cross_rack(NodeId id, std::size_t rack, std::uint64_t bytes) {
        actor(id, rack).cross_rack_sent_bytes += bytes;
    }

    TrafficReport& merge(const TrafficReport& o) {
        for (const auto& [id, a] : o.actors_) {
            auto& mine = actor(id, a.rack);
            mine.disk_read_bytes += a.disk_read_bytes;
            mine.inner_rack_sent_bytes += a.inner_rack_sent_bytes;
            mine.cross_rack_sent_bytes += a.cross_rack_sent_bytes;
        }
        return *this;
    }

    std::uint64_t total_disk_read() const { return sum(&ActorTraffic::disk_read_bytes); }
    std::uint64_t total_inner_rack() const { return sum(&ActorTraffic::inner_rack_sent_bytes); }
    std::uint64_t total_cross_rack() const { return sum(&ActorTraffic::cross_rack_sent_bytes); }

    const std::map<NodeId, ActorTraffic>& actors() const { return actors_; }

    static constexpr const char* kCsvHeader = "actor,rack,disk_read_bytes,inner_rack_sent_bytes,cross_rack_sent_bytes";

    std::string to_csv() const {
        std::ostringstream os;
        os << kCsvHeader << "\n";
        for (const auto& [id, a] : actors_)
            os << node_name(id) << "," << a.rack << "," << a.disk_read_bytes << "," << a.inner_rack_sent_bytes << ","
               << a.cross_rack_sent_bytes << "\n";
        return os.str();
    }

    friend bool operator==(const TrafficReport&, const TrafficReport&) = default;

private:
    std::uint64_t sum(std::uint64_t ActorTraffic::*field) const {
        std::uint64_t t = 0;
        for (const auto& [id, a] : actors_) t += a.*field;
        return t;
    }

    std::map<NodeId, ActorTraffic> actors_;
};

}  // namespace drc
