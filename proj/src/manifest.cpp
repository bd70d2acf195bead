#include "medcorpus/manifest.hpp"

#include <fstream>

#include "medcorpus/error.hpp"

namespace medcorpus {

nlohmann::json RunManifest::to_json() const {
    return {{"tool", "medcorpus"},
            {"version", MEDCORPUS_VERSION},
            {"command", command},
            {"config", config},
            {"inputs", inputs},
            {"outputs", outputs},
            {"counts", counts},
            {"runtime", {{"argv", argv}, {"workers", workers}, {"wall_time_s", wall_time_s}}}};
}

void check_counts(const RunManifest& manifest) {
    const auto& c = manifest.counts;
    if (c.contains("read") && c.contains("kept") && c.contains("dropped") &&
        c.at("read") != c.at("kept") + c.at("dropped")) {
        throw DataError("inconsistent manifest counts: read " + std::to_string(c.at("read")) + " != kept " +
                        std::to_string(c.at("kept")) + " + dropped " + std::to_string(c.at("dropped")));
    }
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
    auto p = output;
    p += ".manifest.json";
    return p;
}

void write_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw DataError("cannot write manifest " + path.string());
    }
    out << manifest.to_json().dump(2) << '\n';
}

nlohmann::json deterministic_part(nlohmann::json manifest) {
    manifest.erase("runtime");
    return manifest;
}

}  // namespace medcorpus
