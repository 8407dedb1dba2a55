#include "txtrace/manifest.hpp"

#include <json.hpp>

#include "txtrace/crypto.hpp"
#include "txtrace/util.hpp"

namespace txtrace {

using nlohmann::ordered_json;

void RunManifest::add_input(const std::string& path) {
    inputs[path] = sha256_file_hex(path);
}

void RunManifest::add_output(const std::string& path) {
    outputs[path] = sha256_file_hex(path);
}

std::string RunManifest::to_json() const {
    ordered_json j;
    j["format"] = "txtrace-run-manifest";
    j["version"] = 1;
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    j["config"] = config;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["wall_seconds"] = wall_seconds;
    return j.dump(2) + "\n";
}

void RunManifest::write(const std::string& path) const {
    write_file(path, to_json());
}

}  // namespace txtrace
