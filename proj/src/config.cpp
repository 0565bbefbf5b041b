#include "padland/config.hpp"

#include "padland/imgio.hpp"
#include "padland/json_io.hpp"

#include <fstream>

namespace padland {

namespace {

// Rejects keys in `given` that the default-serialized `known` does not have,
// recursing into nested objects.
void check_keys(const json& given, const json& known, const std::string& where) {
    if (!given.is_object()) throw ContractError(where + ": expected an object");
    for (const auto& [key, value] : given.items()) {
        const auto it = known.find(key);
        if (it == known.end()) throw ContractError("unknown config key '" + where + "." + key + "'");
        if (it->is_object()) check_keys(value, *it, where + "." + key);
    }
}

template <typename T>
void read_section(const json& doc, const char* name, T& out) {
    const auto it = doc.find(name);
    if (it == doc.end()) return;
    check_keys(*it, json(out), name);
    try {
        out = it->template get<T>();
    } catch (const json::exception& e) {
        throw ContractError(std::string("config section '") + name + "': " + e.what());
    }
}

}  // namespace

void Config::validate() const {
    detector.spec.validate();
    detector.camera.validate();
    const auto& p = detector.pipeline;
    if (p.window < 2) throw ContractError("pipeline.window must be at least 2");
    if (p.local_radius < 1) throw ContractError("pipeline.local_radius must be positive");
    const auto& t = detector.tolerances;
    if (!(t.area_tolerance > 0.0) || !(t.max_aspect >= 1.0)) throw ContractError("thresholds: invalid tolerances");
    if (!(lander.control_period_s > 0.0)) throw ContractError("lander.control_period_s must be positive");
    if (lander.lidar_median_window < 1) throw ContractError("lander.lidar_median_window must be positive");
}

Config config_from_json(const json& doc) {
    if (!doc.is_object()) throw ContractError("config: expected a JSON object");
    Config cfg;
    for (const auto& [key, value] : doc.items()) {
        if (key != "camera" && key != "marker_spec" && key != "thresholds" && key != "assembly" &&
            key != "lander" && key != "pipeline") {
            throw ContractError("unknown config section '" + key + "'");
        }
    }
    read_section(doc, "camera", cfg.detector.camera);
    read_section(doc, "marker_spec", cfg.detector.spec);
    read_section(doc, "thresholds", cfg.detector.tolerances);
    read_section(doc, "assembly", cfg.detector.assembly);
    read_section(doc, "lander", cfg.lander);
    read_section(doc, "pipeline", cfg.detector.pipeline);
    cfg.validate();
    return cfg;
}

json config_to_json(const Config& cfg) {
    return json{{"camera", cfg.detector.camera},         {"marker_spec", cfg.detector.spec},
                {"thresholds", cfg.detector.tolerances}, {"assembly", cfg.detector.assembly},
                {"lander", cfg.lander},                  {"pipeline", cfg.detector.pipeline}};
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ContractError(path.string() + ": " + e.what());
    }
    return config_from_json(doc);
}

}  // namespace padland
