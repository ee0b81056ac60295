#pragma once
/**
 * @file model.hpp
 * @brief Scene, wave and observation geometry for 2D permeability-contrast imaging.
 *
 * A scene is a homogeneous background of permeability mu_0 containing M small
 * disks Sigma_m = x_m + r_m * B, B the unit disk (area pi). The probing wave
 * is a plane wave exp(i k d.x) with k = 2 pi / lambda. Far-field data is
 * observed on N equispaced directions theta_n = (cos 2 pi n / N, sin 2 pi n / N),
 * n = 1..N.
 *
 * All types validate on construction and are immutable afterwards.
 */

#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "dsm/errors.hpp"
#include "dsm/vec2.hpp"

namespace dsm {

/// Separation threshold for k |x_m - x_m'|; ten times the nominal 0.75.
inline constexpr double kDefaultSeparationThreshold = 7.5;

/// Tolerance on |d| = 1 and |theta_n| = 1.
inline constexpr double kUnitTolerance = 1e-12;

struct Inhomogeneity {
    Vec2 center;
    double radius = 0.0;
    double permeability = 1.0;
};

inline void validate(const Inhomogeneity& inc) {
    if (!is_finite(inc.center))
        throw InvalidArgument("inclusion center must be finite");
    if (!(inc.radius > 0.0) || !std::isfinite(inc.radius))
        throw InvalidArgument("inclusion radius must be positive and finite");
    if (!(inc.permeability > 0.0) || !std::isfinite(inc.permeability))
        throw InvalidArgument("inclusion permeability must be positive and finite");
}

class Scene {
public:
    Scene(double background_permeability, std::vector<Inhomogeneity> inclusions)
        : background_permeability_(background_permeability), inclusions_(std::move(inclusions)) {
        if (!(background_permeability_ > 0.0) || !std::isfinite(background_permeability_))
            throw InvalidArgument("background permeability must be positive and finite");
        if (inclusions_.empty())
            throw InvalidArgument("scene needs at least one inclusion");
        for (const auto& inc : inclusions_) validate(inc);
        for (std::size_t i = 0; i < inclusions_.size(); ++i)
            for (std::size_t j = i + 1; j < inclusions_.size(); ++j)
                if (inclusions_[i].center == inclusions_[j].center)
                    throw InvalidArgument("inclusions " + std::to_string(i) + " and " + std::to_string(j) +
                                          " share a center (zero separation)");
    }

    double background_permeability() const noexcept { return background_permeability_; }
    const std::vector<Inhomogeneity>& inclusions() const noexcept { return inclusions_; }
    std::size_t size() const noexcept { return inclusions_.size(); }
    const Inhomogeneity& operator[](std::size_t m) const { return inclusions_.at(m); }

    /// Same scene with every radius multiplied by `factor`.
    Scene with_scaled_radii(double factor) const {
        auto copy = inclusions_;
        for (auto& inc : copy) inc.radius *= factor;
        return Scene(background_permeability_, std::move(copy));
    }

private:
    double background_permeability_;
    std::vector<Inhomogeneity> inclusions_;
};

inline double wavenumber_from_wavelength(double wavelength) {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength))
        throw InvalidArgument("wavelength must be positive and finite");
    return 2.0 * std::numbers::pi / wavelength;
}

inline double wavelength_from_wavenumber(double wavenumber) {
    if (!(wavenumber > 0.0) || !std::isfinite(wavenumber))
        throw InvalidArgument("wavenumber must be positive and finite");
    return 2.0 * std::numbers::pi / wavenumber;
}

class WaveContext {
public:
    WaveContext(double wavelength, Vec2 incident_direction)
        : wavelength_(wavelength),
          wavenumber_(wavenumber_from_wavelength(wavelength)),
          direction_(incident_direction) {
        if (!is_finite(direction_) || std::abs(norm(direction_) - 1.0) > kUnitTolerance)
            throw InvalidArgument("incident direction must be a unit vector");
    }

    static WaveContext from_degrees(double wavelength, double incident_degrees) {
        if (!std::isfinite(incident_degrees))
            throw InvalidArgument("incident angle must be finite");
        return WaveContext(wavelength, unit_from_angle(incident_degrees * std::numbers::pi / 180.0));
    }

    /// Wave with a prescribed wavenumber; the wavelength is derived from it.
    static WaveContext from_wavenumber(double wavenumber, Vec2 incident_direction) {
        return WaveContext(wavelength_from_wavenumber(wavenumber), incident_direction);
    }

    double wavelength() const noexcept { return wavelength_; }
    double wavenumber() const noexcept { return wavenumber_; }
    Vec2 direction() const noexcept { return direction_; }

private:
    double wavelength_;
    double wavenumber_;
    Vec2 direction_;
};

class ObservationSet {
public:
    explicit ObservationSet(std::size_t count) : directions_(count) {
        if (count == 0) throw InvalidArgument("observation count must be at least 1");
        for (std::size_t i = 0; i < count; ++i) directions_[i] = angle_direction(i + 1, count);
    }

    std::size_t count() const noexcept { return directions_.size(); }
    const std::vector<Vec2>& directions() const& noexcept { return directions_; }
    std::vector<Vec2> directions() && noexcept { return std::move(directions_); }

    /// theta_n for any integer n; indices wrap modulo N, so theta_{n+N} == theta_n.
    Vec2 direction(long long n) const noexcept {
        const auto count = static_cast<long long>(directions_.size());
        long long r = n % count;
        if (r <= 0) r += count;
        return directions_[static_cast<std::size_t>(r - 1)];
    }

private:
    static Vec2 angle_direction(std::size_t n, std::size_t count) noexcept {
        // n == N reduces to angle 0 so theta_N is exactly (1, 0).
        const std::size_t reduced = n % count;
        return unit_from_angle(2.0 * std::numbers::pi * static_cast<double>(reduced) / static_cast<double>(count));
    }

    std::vector<Vec2> directions_;
};

inline ObservationSet make_observation_set(std::size_t count) { return ObservationSet(count); }

struct ValidationWarning {
    enum class Kind { separation, radius };
    Kind kind;
    std::size_t first = 0;   ///< inclusion index
    std::size_t second = 0;  ///< partner index (separation only)
    double value = 0.0;      ///< k |x_m - x_m'| or r_m
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationWarning> warnings;
    bool passed() const noexcept { return warnings.empty(); }
};

/// Checks the standing assumptions: well-separated inclusions and r_m << lambda
/// (enforced as r_m <= lambda / 2). Warnings only; imaging may proceed regardless.
inline ValidationReport validate_scene(const Scene& scene, const WaveContext& wave,
                                       double threshold = kDefaultSeparationThreshold) {
    if (!(threshold > 0.0)) throw InvalidArgument("separation threshold must be positive");
    ValidationReport report;
    const auto& inc = scene.inclusions();
    const double k = wave.wavenumber();
    for (std::size_t i = 0; i < inc.size(); ++i) {
        for (std::size_t j = i + 1; j < inc.size(); ++j) {
            const double kd = k * distance(inc[i].center, inc[j].center);
            if (kd < threshold)
                report.warnings.push_back({ValidationWarning::Kind::separation, i, j, kd,
                                           "inclusions " + std::to_string(i) + " and " + std::to_string(j) +
                                               " are not well separated: k*dist = " + std::to_string(kd)});
        }
        if (inc[i].radius > wave.wavelength() / 2.0)
            report.warnings.push_back({ValidationWarning::Kind::radius, i, i, inc[i].radius,
                                       "inclusion " + std::to_string(i) + " radius " + std::to_string(inc[i].radius) +
                                           " exceeds half a wavelength"});
    }
    return report;
}

} // namespace dsm
