#include "tunnelq/manifest.hpp"

#include <array>
#include <fstream>
#include <iterator>

#include <openssl/evp.h>

#include "tunnelq/error.hpp"

namespace tunnelq {

std::string sha256_hex(const std::string &bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error(ErrorKind::IoError, "sha256 failed");
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[digest[i] >> 4]);
        out.push_back(kHex[digest[i] & 0xf]);
    }
    return out;
}

std::string sha256_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::IoError, "cannot read " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return sha256_hex(bytes);
}

void RunManifest::add_input(const std::filesystem::path &path) {
    inputs.push_back({path.string(), sha256_file(path)});
}

nlohmann::json RunManifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["tool_version"] = tool_version;
    j["config"] = config;
    j["inputs"] = nlohmann::json::array();
    for (const auto &in : inputs)
        j["inputs"].push_back({{"path", in.path}, {"sha256", in.sha256}});
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    return j;
}

} // namespace tunnelq
