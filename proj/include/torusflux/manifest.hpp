#pragma once

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <fstream>
#include <string>

#include "torusflux/error.hpp"

namespace torusflux {

inline constexpr const char* kToolVersion = "0.1.0";

/// FNV-1a over the bytes of an artifact, recorded in manifests so re-runs
/// can be compared bit-for-bit.
inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::uint64_t fnv1a_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("file-open-failed", path);
    std::string bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    return fnv1a(bytes);
}

/// Provenance record for one CLI invocation.
class Manifest {
  public:
    Manifest(std::string command) {
        j_["tool_version"] = kToolVersion;
        j_["command"] = std::move(command);
        j_["parameters"] = nlohmann::json::object();
        j_["artifacts"] = nlohmann::json::object();
        start_ = std::chrono::steady_clock::now();
    }

    template <class T>
    void param(const std::string& key, const T& value) {
        j_["parameters"][key] = value;
    }

    template <class T>
    void stat(const std::string& key, const T& value) {
        j_["stats"][key] = value;
    }

    void artifact(const std::string& path) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a_file(path)));
        j_["artifacts"][path] = std::string(buf);
    }

    void save(const std::string& path) {
        j_["wall_time_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
        std::ofstream os(path);
        if (!os) throw io_error("file-open-failed", path);
        os << j_.dump(2) << "\n";
    }

  private:
    nlohmann::json j_;
    std::chrono::steady_clock::time_point start_;
};

}  // namespace torusflux
