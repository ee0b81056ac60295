#pragma once
/**
 * @file commands.hpp
 * @brief The synthesize / image / predict / example pipeline behind the `dsm` tool.
 *
 * Every command checks all of its output paths before computing anything and
 * refuses to overwrite existing files unless `force` is set, so a failed run
 * leaves no partial outputs behind. Exit codes: 0 success, 1 degenerate
 * computation, 2 configuration or I/O error.
 */

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "dsm/errors.hpp"
#include "dsm/forward.hpp"
#include "dsm/imaging.hpp"
#include "dsm/indicator.hpp"
#include "dsm/model.hpp"
#include "dsm/presets.hpp"
#include "dsm/serialization.hpp"

namespace dsm {

namespace fs = std::filesystem;

enum ExitCode : int { kExitOk = 0, kExitDegenerate = 1, kExitConfig = 2 };

struct RunOptions {
    std::optional<fs::path> scene;
    std::optional<fs::path> data;  ///< far-field CSV for `image`; defaults to <out>/farfield.csv
    std::optional<double> wavelength;
    std::optional<double> incident_degrees;
    std::optional<std::size_t> num_directions;
    SearchGrid grid = SearchGrid::default_grid();
    std::optional<double> snr_db;
    std::uint64_t seed = 0;
    fs::path out = ".";
    bool force = false;
    unsigned threads = 1;
    double peak_min = 0.6;
    double peak_separation = 0.05;

    NoiseSpec noise() const { return snr_db ? NoiseSpec{*snr_db, seed} : NoiseSpec{NoiseSpec::none().snr_db, seed}; }
};

/// "x0,x1,y0,y1,step"
inline SearchGrid parse_grid(const std::string& text) {
    double v[5];
    char tail = 0;
    if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf,%lf%c", &v[0], &v[1], &v[2], &v[3], &v[4], &tail) != 5)
        throw InvalidArgument("--grid expects x0,x1,y0,y1,step, got '" + text + "'");
    return SearchGrid(v[0], v[1], v[2], v[3], v[4]);
}

inline Json grid_to_json(const SearchGrid& g) {
    return {{"x_min", g.x_min()}, {"x_max", g.x_max()}, {"y_min", g.y_min()}, {"y_max", g.y_max()},
            {"step", g.step()},   {"nx", g.nx()},       {"ny", g.ny()}};
}

/// Collects output files, enforces the overwrite rule up front, then writes them all.
class OutputSet {
public:
    OutputSet(fs::path dir, bool force) : dir_(std::move(dir)), force_(force) {}

    fs::path reserve(const std::string& name) {
        const fs::path p = dir_ / name;
        if (!force_ && fs::exists(p)) throw IoError(p.string() + " exists; pass --force to overwrite");
        return p;
    }

    void add(const fs::path& path, std::string contents) { pending_.emplace_back(path, std::move(contents)); }

    void flush() {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create " + dir_.string() + ": " + ec.message());
        for (const auto& [path, contents] : pending_) write_file(path, contents);
        pending_.clear();
    }

private:
    fs::path dir_;
    bool force_;
    std::vector<std::pair<fs::path, std::string>> pending_;
};

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

/// Scene file plus command-line overrides.
inline Experiment resolve_experiment(const RunOptions& opt) {
    if (!opt.scene) throw InvalidArgument("--scene is required");
    SceneConfig config = load_scene_config(*opt.scene);
    const auto wavelength = opt.wavelength ? opt.wavelength : config.wavelength;
    const auto degrees = opt.incident_degrees ? opt.incident_degrees : config.incident_degrees;
    if (!wavelength) throw InvalidArgument("wavelength missing: set it in the scene file or pass --wavelength");
    if (!degrees) throw InvalidArgument("incident direction missing: set it in the scene file or pass --incident-deg");
    return Experiment(config.scene, *wavelength, *degrees, opt.num_directions.value_or(config.num_directions));
}

inline void warn_validation(const Experiment& e, std::ostream& log) {
    for (const auto& w : validate_scene(e.scene, e.wave).warnings) log << "warning: " << w.message << "\n";
}

struct ImagingResult {
    IndicatorMap map;
    std::vector<Peak> peaks;
};

struct SynthesisOutputs {
    fs::path csv;
    fs::path sidecar;
};

inline SynthesisOutputs reserve_synthesis(OutputSet& outputs) {
    return {outputs.reserve("farfield.csv"), outputs.reserve("farfield.json")};
}

inline FarFieldData stage_synthesis(const Experiment& e, const RunOptions& opt, OutputSet& outputs,
                                    const SynthesisOutputs& paths) {
    const NoiseSpec noise = opt.noise();
    FarFieldData data = add_noise(synthesize_far_field(e.scene, e.wave, e.observations, opt.threads), noise);
    outputs.add(paths.csv, far_field_to_csv(data));
    outputs.add(paths.sidecar, dump(far_field_sidecar(e, noise)));
    return data;
}

struct MapOutputs {
    fs::path csv;
    fs::path pgm;
    fs::path report;
};

inline MapOutputs reserve_map(OutputSet& outputs, const std::string& stem, const std::string& report_name) {
    return {outputs.reserve(stem + ".csv"), outputs.reserve(stem + ".pgm"), outputs.reserve(report_name)};
}

inline double map_sup_distance(const IndicatorMap& a, const IndicatorMap& b) {
    if (a.values().size() != b.values().size()) throw InvalidArgument("maps have different sizes");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) worst = std::max(worst, std::abs(a.values()[i] - b.values()[i]));
    return worst;
}

inline void add_map_files(OutputSet& outputs, const MapOutputs& paths, const IndicatorMap& map) {
    outputs.add(paths.csv, map_to_csv(map));
    outputs.add(paths.pgm, map_to_pgm(map));
}

/// Data-based map from far-field samples; the report compares it with theory for the sidecar scene.
inline ImagingResult stage_image(const FarFieldData& data, const Scene& scene, const WaveContext& wave,
                                 const RunOptions& opt, OutputSet& outputs, const MapOutputs& paths,
                                 const IndicatorMap* analytic = nullptr) {
    IndicatorMap map = compute_map(data, wave.wavenumber(), opt.grid, opt.threads);
    auto peaks = extract_peaks(map, opt.peak_min, opt.peak_separation);
    const IndicatorMap theory = analytic ? *analytic : compute_map(scene, wave, opt.grid, opt.threads);
    const Json report = {{"peaks", peaks_to_json(peaks)},
                         {"predicted", predictions_to_json(predicted_peaks(scene, wave))},
                         {"residual", map_sup_distance(map, theory)},
                         {"grid", grid_to_json(opt.grid)}};
    add_map_files(outputs, paths, map);
    outputs.add(paths.report, dump(report));
    return {std::move(map), std::move(peaks)};
}

inline ImagingResult stage_predict(const Experiment& e, const RunOptions& opt, OutputSet& outputs,
                                   const MapOutputs& paths) {
    IndicatorMap map = compute_map(e.scene, e.wave, opt.grid, opt.threads);
    auto peaks = extract_peaks(map, opt.peak_min, opt.peak_separation);
    const Json report = {{"peaks", peaks_to_json(peaks)},
                         {"predicted", predictions_to_json(predicted_peaks(e.scene, e.wave))},
                         {"residual", nullptr},
                         {"grid", grid_to_json(opt.grid)}};
    add_map_files(outputs, paths, map);
    outputs.add(paths.report, dump(report));
    return {std::move(map), std::move(peaks)};
}

inline void cmd_synthesize(const RunOptions& opt, std::ostream& log = std::cerr) {
    const Experiment e = resolve_experiment(opt);
    warn_validation(e, log);
    OutputSet outputs(opt.out, opt.force);
    const auto paths = reserve_synthesis(outputs);
    stage_synthesis(e, opt, outputs, paths);
    outputs.flush();
}

inline void cmd_image(const RunOptions& opt, std::ostream& /*log*/ = std::cerr) {
    const fs::path input = opt.data.value_or(opt.out / "farfield.csv");
    if (!fs::exists(input)) throw IoError("far-field data not found: " + input.string());
    const LoadedFarField loaded = load_far_field(input);
    OutputSet outputs(opt.out, opt.force);
    const auto paths = reserve_map(outputs, "dsm_map", "dsm_peaks.json");
    stage_image(loaded.data, loaded.scene, loaded.wave, opt, outputs, paths);
    outputs.flush();
}

inline void cmd_predict(const RunOptions& opt, std::ostream& log = std::cerr) {
    const Experiment e = resolve_experiment(opt);
    warn_validation(e, log);
    OutputSet outputs(opt.out, opt.force);
    const auto paths = reserve_map(outputs, "analytic_map", "predicted_peaks.json");
    stage_predict(e, opt, outputs, paths);
    outputs.flush();
}

/// Everything the `example` command computes, for callers that want more than the files.
struct ExampleRun {
    Experiment experiment;
    FarFieldData data;
    ImagingResult measured;
    ImagingResult analytic;
    double residual = 0.0;
    Json report;
};

inline ExampleRun cmd_example(ReferenceExample which, const RunOptions& opt, std::ostream& log = std::cerr) {
    const SceneConfig config = reference_config(which);
    const Experiment e(config.scene, opt.wavelength.value_or(*config.wavelength),
                       opt.incident_degrees.value_or(*config.incident_degrees),
                       opt.num_directions.value_or(config.num_directions));
    warn_validation(e, log);

    OutputSet outputs(opt.out, opt.force);
    const fs::path scene_path = outputs.reserve("scene.json");
    const auto synthesis_paths = reserve_synthesis(outputs);
    const auto image_paths = reserve_map(outputs, "dsm_map", "dsm_peaks.json");
    const auto predict_paths = reserve_map(outputs, "analytic_map", "predicted_peaks.json");
    const fs::path report_path = outputs.reserve("report.json");

    SceneConfig written = config;
    written.wavelength = e.wave.wavelength();
    written.incident_degrees = e.incident_degrees;
    written.num_directions = e.observations.count();
    outputs.add(scene_path, dump(config_to_json(written)));

    FarFieldData data = stage_synthesis(e, opt, outputs, synthesis_paths);
    ImagingResult analytic = stage_predict(e, opt, outputs, predict_paths);
    ImagingResult measured = stage_image(data, e.scene, e.wave, opt, outputs, image_paths, &analytic.map);
    const double residual = map_sup_distance(measured.map, analytic.map);

    Json inclusions = Json::array();
    Json contrast = Json::array();
    const double mu0 = e.scene.background_permeability();
    for (std::size_t m = 0; m < e.scene.size(); ++m) {
        const auto& inc = e.scene[m];
        const double factor = mu0 / (inc.permeability + mu0);
        contrast.push_back(factor);
        inclusions.push_back({{"index", m},
                              {"center", {inc.center.x, inc.center.y}},
                              {"radius", inc.radius},
                              {"permeability", inc.permeability},
                              {"contrast_factor", factor},
                              {"polarizability_factor", polarizability_factor(inc.permeability, mu0)},
                              {"data_map_at_center", measured.map.value_near(inc.center)},
                              {"analytic_map_at_center", analytic.map.value_near(inc.center)}});
    }
    Json report = {{"example", std::string(to_string(which))},
                   {"wavelength", e.wave.wavelength()},
                   {"wavenumber", e.wave.wavenumber()},
                   {"incident_direction_degrees", e.incident_degrees},
                   {"num_observation_directions", e.observations.count()},
                   {"grid", grid_to_json(opt.grid)},
                   {"noise", noise_to_json(opt.noise())},
                   {"inclusions", inclusions},
                   {"contrast_factors", contrast},
                   {"predicted", predictions_to_json(predicted_peaks(e.scene, e.wave))},
                   {"data_peaks", peaks_to_json(measured.peaks)},
                   {"analytic_peaks", peaks_to_json(analytic.peaks)},
                   {"residual", residual}};
    outputs.add(report_path, dump(report));
    outputs.flush();
    return {e, std::move(data), std::move(measured), std::move(analytic), residual, std::move(report)};
}

/// Runs `fn`, mapping exceptions to exit codes and printing the message.
template <typename Fn>
int run_command(Fn&& fn, std::ostream& err = std::cerr) {
    try {
        fn();
        return kExitOk;
    } catch (const DegenerateError& e) {
        err << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

} // namespace dsm
