#pragma once
/**
 * @file serialization.hpp
 * @brief Scene configuration JSON and far-field CSV + JSON sidecar.
 *
 * Scene configuration:
 *
 *   {
 *     "background_permeability": 1.0,
 *     "inclusions": [ {"center": [0.7, 0.5], "radius": 0.1, "permeability": 5.0} ],
 *     "wavelength": 0.4,
 *     "incident_direction_degrees": 45.0,
 *     "num_observation_directions": 256
 *   }
 *
 * background_permeability defaults to 1 and num_observation_directions to 256;
 * wavelength and incident_direction_degrees may be left out when supplied on
 * the command line.
 *
 * Far-field CSV: header `n,theta_x,theta_y,re,im`, one row per direction, every
 * value printed with 17 significant digits. The sidecar (same stem, .json)
 * carries the wave, the scene and the noise spec.
 */

#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dsm/errors.hpp"
#include "dsm/forward.hpp"
#include "dsm/imaging.hpp"
#include "dsm/indicator.hpp"
#include "dsm/model.hpp"

namespace dsm {

using Json = nlohmann::json;

inline constexpr std::size_t kDefaultObservationCount = 256;

struct SceneConfig {
    Scene scene;
    std::optional<double> wavelength;
    std::optional<double> incident_degrees;
    std::size_t num_directions = kDefaultObservationCount;
};

/// Fully resolved experiment: scene, wave and observation geometry.
struct Experiment {
    Scene scene;
    WaveContext wave;
    ObservationSet observations;
    double incident_degrees = 0.0;

    Experiment(Scene s, double wavelength, double degrees, std::size_t num_directions)
        : scene(std::move(s)),
          wave(WaveContext::from_degrees(wavelength, degrees)),
          observations(make_observation_set(num_directions)),
          incident_degrees(degrees) {}
};

namespace detail {

template <typename T>
T required(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw InvalidArgument(where + ": missing key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const Json::exception& e) {
        throw InvalidArgument(where + ": bad value for '" + key + "': " + e.what());
    }
}

inline Vec2 read_point(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw InvalidArgument(where + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace detail

inline Json scene_to_json(const Scene& scene) {
    Json inclusions = Json::array();
    for (const auto& inc : scene.inclusions())
        inclusions.push_back(
            {{"center", {inc.center.x, inc.center.y}}, {"radius", inc.radius}, {"permeability", inc.permeability}});
    return {{"background_permeability", scene.background_permeability()}, {"inclusions", inclusions}};
}

inline Scene scene_from_json(const Json& j, const std::string& where = "scene") {
    if (!j.is_object()) throw InvalidArgument(where + ": expected a JSON object");
    const double background = j.contains("background_permeability")
                                  ? detail::required<double>(j, "background_permeability", where)
                                  : 1.0;
    if (!j.contains("inclusions") || !j.at("inclusions").is_array())
        throw InvalidArgument(where + ": 'inclusions' must be an array");
    std::vector<Inhomogeneity> inclusions;
    std::size_t index = 0;
    for (const auto& item : j.at("inclusions")) {
        const std::string at = where + ".inclusions[" + std::to_string(index++) + "]";
        if (!item.is_object() || !item.contains("center")) throw InvalidArgument(at + ": missing 'center'");
        inclusions.push_back({detail::read_point(item.at("center"), at + ".center"),
                              detail::required<double>(item, "radius", at),
                              detail::required<double>(item, "permeability", at)});
    }
    return Scene(background, std::move(inclusions));
}

inline Json config_to_json(const SceneConfig& config) {
    Json j = scene_to_json(config.scene);
    if (config.wavelength) j["wavelength"] = *config.wavelength;
    if (config.incident_degrees) j["incident_direction_degrees"] = *config.incident_degrees;
    j["num_observation_directions"] = config.num_directions;
    return j;
}

inline SceneConfig config_from_json(const Json& j, const std::string& where = "config") {
    SceneConfig config{scene_from_json(j, where), std::nullopt, std::nullopt, kDefaultObservationCount};
    if (j.contains("wavelength")) config.wavelength = detail::required<double>(j, "wavelength", where);
    if (j.contains("incident_direction_degrees"))
        config.incident_degrees = detail::required<double>(j, "incident_direction_degrees", where);
    if (j.contains("num_observation_directions")) {
        const auto n = detail::required<long long>(j, "num_observation_directions", where);
        if (n < 1) throw InvalidArgument(where + ": num_observation_directions must be >= 1");
        config.num_directions = static_cast<std::size_t>(n);
    }
    return config;
}

inline Json parse_json_file(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw IoError("file not found: " + path.string());
    try {
        return Json::parse(read_file(path));
    } catch (const Json::parse_error& e) {
        throw InvalidArgument(path.string() + ": invalid JSON: " + e.what());
    }
}

inline SceneConfig load_scene_config(const std::filesystem::path& path) {
    return config_from_json(parse_json_file(path), path.string());
}

inline Json noise_to_json(const NoiseSpec& noise) {
    Json snr = noise.enabled() ? Json(noise.snr_db) : Json(nullptr);
    return {{"snr_db", snr}, {"seed", noise.seed}};
}

inline NoiseSpec noise_from_json(const Json& j) {
    NoiseSpec spec;
    if (j.contains("snr_db") && !j.at("snr_db").is_null()) spec.snr_db = j.at("snr_db").get<double>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    return spec;
}

inline std::string far_field_to_csv(const FarFieldData& data) {
    std::string out = "n,theta_x,theta_y,re,im\n";
    const auto& dirs = data.observations().directions();
    for (std::size_t n = 0; n < data.size(); ++n) {
        out += std::to_string(n + 1);
        for (double v : {dirs[n].x, dirs[n].y, data.samples()[n].real(), data.samples()[n].imag()}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

inline Json far_field_sidecar(const Experiment& experiment, const NoiseSpec& noise) {
    const Vec2 d = experiment.wave.direction();
    return {{"format", "dsm-farfield-v1"},
            {"wavelength", experiment.wave.wavelength()},
            {"wavenumber", experiment.wave.wavenumber()},
            {"incident_direction", {d.x, d.y}},
            {"incident_direction_degrees", experiment.incident_degrees},
            {"num_observation_directions", experiment.observations.count()},
            {"scene", scene_to_json(experiment.scene)},
            {"noise", noise_to_json(noise)}};
}

inline std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
    auto p = csv_path;
    return p.replace_extension(".json");
}

/// Far-field samples with everything needed to image and to compare against theory.
struct LoadedFarField {
    FarFieldData data;
    Scene scene;
    WaveContext wave;
    NoiseSpec noise;
};

inline LoadedFarField load_far_field(const std::filesystem::path& csv_path) {
    const Json meta = parse_json_file(sidecar_path(csv_path));
    const std::string where = sidecar_path(csv_path).string();
    const auto count = detail::required<std::size_t>(meta, "num_observation_directions", where);
    const double wavelength = detail::required<double>(meta, "wavelength", where);
    if (!meta.contains("incident_direction")) throw InvalidArgument(where + ": missing 'incident_direction'");
    const Vec2 d = detail::read_point(meta.at("incident_direction"), where + ".incident_direction");
    if (!meta.contains("scene")) throw InvalidArgument(where + ": missing 'scene'");
    Scene scene = scene_from_json(meta.at("scene"), where + ".scene");
    const NoiseSpec noise = meta.contains("noise") ? noise_from_json(meta.at("noise")) : NoiseSpec::none();
    ObservationSet obs = make_observation_set(count);

    std::istringstream is(read_file(csv_path));
    std::string line;
    if (!std::getline(is, line) || line != "n,theta_x,theta_y,re,im")
        throw IoError(csv_path.string() + ": missing far-field CSV header");
    std::vector<Complex> samples;
    samples.reserve(count);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        long long n = 0;
        double tx = 0.0, ty = 0.0, re = 0.0, im = 0.0;
        if (std::sscanf(line.c_str(), "%lld,%lf,%lf,%lf,%lf", &n, &tx, &ty, &re, &im) != 5)
            throw IoError(csv_path.string() + ": malformed row '" + line + "'");
        if (n != static_cast<long long>(samples.size()) + 1 || samples.size() >= count)
            throw IoError(csv_path.string() + ": unexpected row index " + std::to_string(n));
        const Vec2 expected = obs.directions()[samples.size()];
        if (std::abs(tx - expected.x) > kUnitTolerance || std::abs(ty - expected.y) > kUnitTolerance)
            throw IoError(csv_path.string() + ": direction in row " + std::to_string(n) +
                          " does not match the uniform observation set");
        samples.emplace_back(re, im);
    }
    if (samples.size() != count)
        throw IoError(csv_path.string() + ": expected " + std::to_string(count) + " rows, found " +
                      std::to_string(samples.size()));
    return {FarFieldData(obs, d, std::move(samples)), std::move(scene), WaveContext(wavelength, d), noise};
}

inline Json peaks_to_json(const std::vector<Peak>& peaks) {
    Json out = Json::array();
    for (const auto& p : peaks) out.push_back({{"x", p.position.x}, {"y", p.position.y}, {"value", p.value}});
    return out;
}

inline Json predictions_to_json(const std::vector<PeakPrediction>& predictions) {
    Json out = Json::array();
    for (const auto& pred : predictions)
        for (const auto& p : pred.positions)
            out.push_back({{"inclusion", pred.inclusion_index}, {"x", p.x}, {"y", p.y}, {"offset_radius", pred.offset_radius}});
    return out;
}

} // namespace dsm
