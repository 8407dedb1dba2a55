#pragma once

#include <map>
#include <string>

namespace txtrace {

inline constexpr const char* kToolVersion = "0.1.0";

// Per-command provenance record: config snapshot plus input/output digests.
// Written next to the primary artifact; timings are the only
// non-reproducible fields.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config;
    std::map<std::string, std::string> inputs;   // path -> sha256
    std::map<std::string, std::string> outputs;  // path -> sha256
    double wall_seconds = 0;

    void add_input(const std::string& path);
    void add_output(const std::string& path);
    std::string to_json() const;
    void write(const std::string& path) const;
};

}  // namespace txtrace
