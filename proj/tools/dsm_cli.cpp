// dsm: synthesize far-field data, image it with the direct sampling method,
// and compare against the closed-form Bessel structure.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "dsm/commands.hpp"

namespace {

struct CliState {
    dsm::RunOptions options;
    std::string scene;
    std::string data;
    std::string grid;
    std::string out = ".";
    std::string example;
    double wavelength = 0.0;
    double incident_degrees = 0.0;
    std::size_t num_directions = 0;
    double snr_db = 0.0;
};

void add_common(CLI::App& cmd, CliState& s, bool with_scene_file, bool with_wave, bool with_noise) {
    if (with_scene_file) cmd.add_option("--scene", s.scene, "Scene JSON file")->check(CLI::ExistingFile);
    if (with_wave) {
        cmd.add_option("--wavelength", s.wavelength, "Wavelength (overrides the scene file)");
        cmd.add_option("--incident-deg", s.incident_degrees, "Incident direction in degrees (overrides the scene file)");
        cmd.add_option("--num-dirs", s.num_directions, "Number of observation directions N");
    }
    if (with_noise) {
        cmd.add_option("--snr-db", s.snr_db, "Add complex Gaussian noise at this SNR in dB");
        cmd.add_option("--seed", s.options.seed, "Noise seed");
    }
    cmd.add_option("--grid", s.grid, "Search grid x0,x1,y0,y1,step (default -1,1,-1,1,0.005)");
    cmd.add_option("--out", s.out, "Output directory");
    cmd.add_flag("--force", s.options.force, "Overwrite existing outputs");
    cmd.add_option("--threads", s.options.threads, "Worker threads")->check(CLI::PositiveNumber);
    cmd.add_option("--peak-min", s.options.peak_min, "Smallest normalized value reported as a peak");
    cmd.add_option("--peak-sep", s.options.peak_separation, "Minimum distance between reported peaks");
}

bool given(CLI::App& cmd, const std::string& name) {
    const CLI::Option* opt = cmd.get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

void finalize(CLI::App& cmd, CliState& s) {
    auto& o = s.options;
    if (!s.scene.empty()) o.scene = s.scene;
    if (!s.data.empty()) o.data = s.data;
    if (!s.grid.empty()) o.grid = dsm::parse_grid(s.grid);
    o.out = s.out;
    if (given(cmd, "--wavelength")) o.wavelength = s.wavelength;
    if (given(cmd, "--incident-deg")) o.incident_degrees = s.incident_degrees;
    if (given(cmd, "--num-dirs")) {
        if (s.num_directions == 0) throw dsm::InvalidArgument("--num-dirs must be at least 1");
        o.num_directions = s.num_directions;
    }
    if (given(cmd, "--snr-db")) o.snr_db = s.snr_db;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Direct sampling imaging of small permeability inclusions"};
    app.require_subcommand(1);
    CliState s;

    auto* synthesize = app.add_subcommand("synthesize", "Write far-field samples (farfield.csv + farfield.json)");
    add_common(*synthesize, s, true, true, true);

    auto* image = app.add_subcommand("image", "Image far-field data (dsm_map.csv/.pgm, dsm_peaks.json)");
    image->add_option("--data", s.data, "Far-field CSV (default <out>/farfield.csv)");
    add_common(*image, s, false, false, false);

    auto* predict = app.add_subcommand("predict", "Closed-form map and predicted peaks (analytic_map.*)");
    add_common(*predict, s, true, true, false);

    auto* example = app.add_subcommand("example", "Run a reference example end to end");
    example->add_option("which", s.example, "ex1, ex2 or ex3")->required()->check(CLI::IsMember({"ex1", "ex2", "ex3"}));
    add_common(*example, s, false, true, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : dsm::kExitConfig;
    }

    CLI::App* active = app.get_subcommands().front();
    return dsm::run_command([&] {
        finalize(*active, s);
        if (active == synthesize) dsm::cmd_synthesize(s.options);
        else if (active == image) dsm::cmd_image(s.options);
        else if (active == predict) dsm::cmd_predict(s.options);
        else dsm::cmd_example(dsm::parse_reference_example(s.example), s.options);
    });
}
