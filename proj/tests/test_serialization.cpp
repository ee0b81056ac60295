#include <filesystem>

#include <gtest/gtest.h>

#include "dsm/presets.hpp"
#include "dsm/serialization.hpp"

using namespace dsm;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("dsm_serialization_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST(SceneConfig, ParsesFullDocument) {
    const auto j = Json::parse(R"({
        "background_permeability": 2.0,
        "inclusions": [{"center": [0.7, 0.5], "radius": 0.1, "permeability": 5},
                       {"center": [-0.7, 0.0], "radius": 0.05, "permeability": 3}],
        "wavelength": 0.4,
        "incident_direction_degrees": 45,
        "num_observation_directions": 128})");
    const auto config = config_from_json(j);
    EXPECT_EQ(config.scene.background_permeability(), 2.0);
    ASSERT_EQ(config.scene.size(), 2u);
    EXPECT_EQ(config.scene[1].center, (Vec2{-0.7, 0.0}));
    EXPECT_EQ(config.scene[1].radius, 0.05);
    EXPECT_EQ(*config.wavelength, 0.4);
    EXPECT_EQ(*config.incident_degrees, 45.0);
    EXPECT_EQ(config.num_directions, 128u);
}

TEST(SceneConfig, Defaults) {
    const auto config = config_from_json(Json::parse(R"({"inclusions": [{"center": [0, 0], "radius": 0.1, "permeability": 5}]})"));
    EXPECT_EQ(config.scene.background_permeability(), 1.0);
    EXPECT_FALSE(config.wavelength.has_value());
    EXPECT_FALSE(config.incident_degrees.has_value());
    EXPECT_EQ(config.num_directions, kDefaultObservationCount);
}

TEST(SceneConfig, RejectsMalformed) {
    EXPECT_THROW(config_from_json(Json::parse("[]")), InvalidArgument);
    EXPECT_THROW(config_from_json(Json::parse(R"({"inclusions": {}})")), InvalidArgument);
    EXPECT_THROW(config_from_json(Json::parse(R"({"inclusions": [{"radius": 0.1, "permeability": 5}]})")), InvalidArgument);
    EXPECT_THROW(config_from_json(Json::parse(R"({"inclusions": [{"center": [0], "radius": 0.1, "permeability": 5}]})")),
                 InvalidArgument);
    EXPECT_THROW(config_from_json(Json::parse(R"({"inclusions": [{"center": [0, 0], "radius": "big", "permeability": 5}]})")),
                 InvalidArgument);
    EXPECT_THROW(config_from_json(Json::parse(R"({"inclusions": [{"center": [0, 0], "radius": -1, "permeability": 5}]})")),
                 InvalidArgument);
    EXPECT_THROW(config_from_json(Json::parse(
                     R"({"inclusions": [{"center": [0, 0], "radius": 1, "permeability": 5}], "num_observation_directions": 0})")),
                 InvalidArgument);
}

TEST(SceneConfig, FileRoundTrip) {
    const auto dir = scratch_dir("config");
    const auto config = reference_config(ReferenceExample::ex3);
    write_file(dir / "scene.json", config_to_json(config).dump(2));
    const auto loaded = load_scene_config(dir / "scene.json");
    EXPECT_EQ(config_to_json(loaded), config_to_json(config));
    EXPECT_THROW(load_scene_config(dir / "missing.json"), IoError);
    write_file(dir / "broken.json", "{ not json");
    EXPECT_THROW(load_scene_config(dir / "broken.json"), InvalidArgument);
}

TEST(FarFieldFiles, LosslessRoundTrip) {
    const auto dir = scratch_dir("farfield");
    const auto e = reference_experiment(ReferenceExample::ex3);
    const NoiseSpec noise{15.0, 99};
    const auto data = add_noise(synthesize_far_field(e.scene, e.wave, e.observations), noise);
    write_file(dir / "ff.csv", far_field_to_csv(data));
    write_file(dir / "ff.json", far_field_sidecar(e, noise).dump(2));

    const auto loaded = load_far_field(dir / "ff.csv");
    EXPECT_EQ(loaded.data.samples(), data.samples());
    EXPECT_EQ(loaded.data.incident_direction(), data.incident_direction());
    EXPECT_EQ(loaded.wave.wavenumber(), e.wave.wavenumber());
    EXPECT_EQ(loaded.noise.snr_db, 15.0);
    EXPECT_EQ(loaded.noise.seed, 99u);
    EXPECT_EQ(scene_to_json(loaded.scene), scene_to_json(e.scene));

    const auto text = read_file(dir / "ff.csv");
    EXPECT_EQ(text.substr(0, 24), "n,theta_x,theta_y,re,im\n");
    EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')), e.observations.count() + 1);
}

TEST(FarFieldFiles, NoiselessSidecarUsesNull) {
    const auto e = reference_experiment(ReferenceExample::ex1);
    const auto meta = far_field_sidecar(e, NoiseSpec::none());
    EXPECT_TRUE(meta["noise"]["snr_db"].is_null());
    EXPECT_FALSE(noise_from_json(meta["noise"]).enabled());
}

TEST(FarFieldFiles, RejectsCorruptedRows) {
    const auto dir = scratch_dir("corrupt");
    const auto e = reference_experiment(ReferenceExample::ex1);
    const auto data = synthesize_far_field(e.scene, e.wave, make_observation_set(4));
    const Experiment small(e.scene, 0.4, 45.0, 4);
    write_file(dir / "ff.json", far_field_sidecar(small, NoiseSpec::none()).dump());

    std::string csv = far_field_to_csv(data);
    write_file(dir / "ff.csv", csv.substr(0, csv.rfind('\n', csv.size() - 2) + 1));  // drop last row
    EXPECT_THROW(load_far_field(dir / "ff.csv"), IoError);

    write_file(dir / "ff.csv", "n,theta_x,theta_y,re,im\n1,0,1,0.1,0.2\n2,0.5,0.5,0,0\n3,0,-1,0,0\n4,1,0,0,0\n");
    EXPECT_THROW(load_far_field(dir / "ff.csv"), IoError);

    write_file(dir / "ff.csv", "wrong header\n");
    EXPECT_THROW(load_far_field(dir / "ff.csv"), IoError);

    fs::remove(dir / "ff.json");
    EXPECT_THROW(load_far_field(dir / "ff.csv"), IoError);
}

TEST(ShippedScenes, MatchBuiltInPresets) {
    for (auto which : {ReferenceExample::ex1, ReferenceExample::ex2, ReferenceExample::ex3}) {
        const fs::path path = fs::path(DSM_SCENES_DIR) / (std::string(to_string(which)) + ".json");
        EXPECT_EQ(config_to_json(load_scene_config(path)), config_to_json(reference_config(which))) << path;
    }
}
