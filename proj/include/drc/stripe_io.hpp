// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "drc/code_spec.hpp"
#include "drc/errors.hpp"
#include "drc/geometry.hpp"

namespace drc {

namespace fs = std::filesystem;

inline std::vector<std::uint8_t> read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw IoError("cannot open '" + p.string() + "' for reading");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_file(const fs::path& p, std::span<const std::uint8_t> bytes) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + p.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to '" + p.string() + "'");
}

inline void write_text(const fs::path& p, const std::string& text) {
    write_file(p, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

inline std::string read_text(const fs::path& p) {
    const auto bytes = read_file(p);
    return {bytes.begin(), bytes.end()};
}

struct ManifestEntry {
    std::size_t index = 0;
    BlockRole role = BlockRole::Data;
    std::string path;  // relative to the manifest's directory
};

struct StripeManifest {
    static constexpr const char* kFormat = "drc-stripe-manifest/1";

    std::string stripe_id;
    CodeSpec code;
    StripeGeometry geometry;
    std::vector<ManifestEntry> blocks;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["format"] = kFormat;
        j["stripe_id"] = stripe_id;
        j["code_name"] = code.name();
        j["geometry"] = {{"block_size", geometry.block_size},
                         {"strip_size", geometry.strip_size},
                         {"subblocks", geometry.subblocks}};
        j["blocks"] = nlohmann::json::array();
        for (const auto& b : blocks) j["blocks"].push_back({{"index", b.index}, {"role", role_name(b.role)}, {"path", b.path}});
        j["code"] = drc::to_json(code);
        return j;
    }

    static StripeManifest from_json(const nlohmann::json& j) {
        try {
            if (j.at("format").get<std::string>() != kFormat) throw ParameterError("unsupported manifest format");
            StripeManifest m;
            m.stripe_id = j.at("stripe_id").get<std::string>();
            m.code = code_spec_from_json(j.at("code"));
            const auto& g = j.at("geometry");
            m.geometry = StripeGeometry::make(g.at("block_size").get<std::size_t>(), g.at("strip_size").get<std::size_t>(),
                                              g.at("subblocks").get<std::size_t>());
            for (const auto& b : j.at("blocks")) {
                const auto role = b.at("role").get<std::string>();
                if (role != "data" && role != "parity") throw ParameterError("unknown block role '" + role + "'");
                m.blocks.push_back({b.at("index").get<std::size_t>(), role == "data" ? BlockRole::Data : BlockRole::Parity,
                                    b.at("path").get<std::string>()});
            }
            if (m.blocks.size() != m.code.n) throw ParameterError("manifest must list every block of the stripe");
            return m;
        } catch (const nlohmann::json::exception& e) {
            throw ParameterError(std::string("malformed stripe manifest: ") + e.what());
        }
    }

    void save(const fs::path& p) const { write_text(p, to_json().dump(2) + "\n"); }

    static StripeManifest load(const fs::path& p) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(read_text(p));
        } catch (const nlohmann::json::exception& e) {
            throw ParameterError("stripe manifest '" + p.string() + "' is not valid JSON: " + e.what());
        }
        return from_json(j);
    }
};

}  // namespace drc
