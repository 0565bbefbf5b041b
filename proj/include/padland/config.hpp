// JSON configuration document.
//
// Sections: camera, marker_spec, thresholds, assembly, lander, pipeline. Every
// section and key is optional; unknown keys are rejected so that typos do not
// silently fall back to defaults.

#pragma once

#include "padland/lander.hpp"
#include "padland/pipeline.hpp"

#include <json.hpp>

#include <filesystem>

namespace padland {

struct Config {
    DetectorConfig detector;
    LanderParams lander;

    /// Throws ContractError if any section violates its invariants.
    void validate() const;
};

Config config_from_json(const nlohmann::json& doc);
nlohmann::json config_to_json(const Config& config);

/// Throws IoError if unreadable, ContractError on malformed content.
Config load_config(const std::filesystem::path& path);

}  // namespace padland
