#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace medcorpus {

// Per-run record written next to a command's primary output. Everything
// outside "runtime" is a deterministic function of the inputs and the
// effective configuration.
struct RunManifest {
    std::string command;
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::map<std::string, std::size_t> counts;

    std::vector<std::string> argv;
    int workers = 1;
    double wall_time_s = 0.0;

    nlohmann::json to_json() const;
};

// Throws DataError when read != kept + dropped for the counts present.
void check_counts(const RunManifest& manifest);

// "<output>.manifest.json".
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

// The manifest without its "runtime" section.
nlohmann::json deterministic_part(nlohmann::json manifest);

}  // namespace medcorpus
