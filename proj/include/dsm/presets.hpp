#pragma once
/**
 * @file presets.hpp
 * @brief The three reference scenes: one, then three disks of radius 0.1 at
 * (0.7, 0.5), (-0.7, 0.0), (0.2, -0.5); wavelength 0.4; incidence at 45 degrees.
 */

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsm/errors.hpp"
#include "dsm/serialization.hpp"

namespace dsm {

enum class ReferenceExample { ex1, ex2, ex3 };

inline constexpr double kReferenceWavelength = 0.4;
inline constexpr double kReferenceIncidentDegrees = 45.0;
inline constexpr double kReferenceRadius = 0.1;
inline constexpr Vec2 kReferenceCenters[3] = {{0.7, 0.5}, {-0.7, 0.0}, {0.2, -0.5}};

inline std::string_view to_string(ReferenceExample which) {
    switch (which) {
    case ReferenceExample::ex1: return "ex1";
    case ReferenceExample::ex2: return "ex2";
    case ReferenceExample::ex3: return "ex3";
    }
    return "?";
}

inline ReferenceExample parse_reference_example(std::string_view name) {
    if (name == "ex1") return ReferenceExample::ex1;
    if (name == "ex2") return ReferenceExample::ex2;
    if (name == "ex3") return ReferenceExample::ex3;
    throw InvalidArgument("unknown example '" + std::string(name) + "' (expected ex1, ex2 or ex3)");
}

inline std::vector<double> reference_permeabilities(ReferenceExample which) {
    switch (which) {
    case ReferenceExample::ex1: return {5.0};
    case ReferenceExample::ex2: return {5.0, 5.0, 5.0};
    case ReferenceExample::ex3: return {10.0, 6.0, 2.0};
    }
    return {};
}

inline SceneConfig reference_config(ReferenceExample which) {
    std::vector<Inhomogeneity> inclusions;
    const auto mu = reference_permeabilities(which);
    for (std::size_t m = 0; m < mu.size(); ++m) inclusions.push_back({kReferenceCenters[m], kReferenceRadius, mu[m]});
    return {Scene(1.0, std::move(inclusions)), kReferenceWavelength, kReferenceIncidentDegrees,
            kDefaultObservationCount};
}

inline Experiment reference_experiment(ReferenceExample which) {
    auto config = reference_config(which);
    return Experiment(config.scene, *config.wavelength, *config.incident_degrees, config.num_directions);
}

} // namespace dsm
