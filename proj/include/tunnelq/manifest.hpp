#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace tunnelq {

inline constexpr const char *kToolVersion = "0.1.0";

struct InputDigest {
    std::string path;
    std::string sha256;
};

/// Provenance record written next to every command output.
struct RunManifest {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    std::vector<InputDigest> inputs;
    std::string tool_version = kToolVersion;
    std::optional<std::uint64_t> seed;

    void add_input(const std::filesystem::path &path);
    nlohmann::json to_json() const;
};

std::string sha256_hex(const std::string &bytes);
std::string sha256_file(const std::filesystem::path &path);

} // namespace tunnelq
