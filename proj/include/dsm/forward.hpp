#pragma once
/**
 * @file forward.hpp
 * @brief Far-field data from the small-inclusion asymptotic expansion, plus seeded noise.
 *
 * For a plane wave with direction d and wavenumber k, each disk contributes
 *
 *   psi_inf(d, theta) ~ -k^2 (1 + i) / (4 sqrt(k pi))
 *                       * sum_m r_m^2 |B| (d . M_m . theta) exp(i k d.x_m) exp(-i k theta.x_m)
 *
 * with |B| = pi and M_m = 2 mu_0 / (mu_m + mu_0) * I. Multiple scattering
 * between inclusions is not modelled.
 */

#include <complex>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "dsm/errors.hpp"
#include "dsm/model.hpp"
#include "dsm/parallel.hpp"

namespace dsm {

using Complex = std::complex<double>;

class FarFieldData {
public:
    FarFieldData(ObservationSet observations, Vec2 incident_direction, std::vector<Complex> samples)
        : observations_(std::move(observations)),
          incident_direction_(incident_direction),
          samples_(std::move(samples)) {
        if (samples_.size() != observations_.count())
            throw InvalidArgument("far-field sample count does not match observation count");
        for (const auto& s : samples_)
            if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
                throw InvalidArgument("far-field samples must be finite");
    }

    const ObservationSet& observations() const noexcept { return observations_; }
    Vec2 incident_direction() const noexcept { return incident_direction_; }
    const std::vector<Complex>& samples() const noexcept { return samples_; }
    std::size_t size() const noexcept { return samples_.size(); }

    /// Same directions, every sample multiplied by `factor`.
    FarFieldData scaled(Complex factor) const {
        auto copy = samples_;
        for (auto& s : copy) s *= factor;
        return FarFieldData(observations_, incident_direction_, std::move(copy));
    }

private:
    ObservationSet observations_;
    Vec2 incident_direction_;
    std::vector<Complex> samples_;
};

/// Additive noise calibrated to an exact signal-to-noise ratio. snr_db = +inf disables noise.
struct NoiseSpec {
    double snr_db = std::numeric_limits<double>::infinity();
    std::uint64_t seed = 0;

    static NoiseSpec none() { return {}; }
    bool enabled() const noexcept { return !(std::isinf(snr_db) && snr_db > 0.0); }
};

/// Diagonal entry 2 mu_0 / (mu_m + mu_0) of the polarization tensor of a disk.
inline double polarizability_factor(double inclusion_permeability, double background_permeability) {
    if (!(inclusion_permeability > 0.0) || !(background_permeability > 0.0))
        throw InvalidArgument("permeabilities must be positive");
    return 2.0 * background_permeability / (inclusion_permeability + background_permeability);
}

/// -k^2 (1 + i) / (4 sqrt(k pi))
inline Complex far_field_prefactor(double k) {
    return -k * k * Complex(1.0, 1.0) / (4.0 * std::sqrt(k * std::numbers::pi));
}

inline Complex far_field_asymptotic(const Scene& scene, const WaveContext& wave, Vec2 theta) {
    if (std::abs(norm(theta) - 1.0) > kUnitTolerance)
        throw InvalidArgument("observation direction must be a unit vector");
    const double k = wave.wavenumber();
    const Vec2 d = wave.direction();
    const double angular = dot(d, theta);
    Complex sum{0.0, 0.0};
    for (const auto& inc : scene.inclusions()) {
        const double strength = inc.radius * inc.radius * std::numbers::pi *
                                polarizability_factor(inc.permeability, scene.background_permeability());
        const double phase = k * (dot(d, inc.center) - dot(theta, inc.center));
        sum += strength * angular * std::polar(1.0, phase);
    }
    return far_field_prefactor(k) * sum;
}

inline FarFieldData synthesize_far_field(const Scene& scene, const WaveContext& wave, const ObservationSet& obs,
                                         unsigned threads = 1) {
    std::vector<Complex> samples(obs.count());
    const auto& dirs = obs.directions();
    parallel_for(obs.count(), threads, [&](std::size_t n) { samples[n] = far_field_asymptotic(scene, wave, dirs[n]); });
    return FarFieldData(obs, wave.direction(), std::move(samples));
}

/**
 * Standard normal deviates from a seeded 64-bit Mersenne Twister.
 *
 * std::mt19937_64 is bit-exact across conforming implementations; the
 * standard's distributions are not, so the Gaussian transform is done here
 * with the Box-Muller formula on 53-bit uniforms in (0, 1].
 */
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_open_closed();
        const double u2 = uniform_open_closed();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    double uniform_open_closed() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline double squared_norm(const std::vector<Complex>& v) noexcept {
    double sum = 0.0;
    for (const auto& z : v) sum += std::norm(z);
    return sum;
}

/**
 * Returns data + eta with eta i.i.d. circular complex Gaussian, drawn in index
 * order (real part, then imaginary part) and rescaled so that
 * 10 log10(|data|^2 / |eta|^2) equals spec.snr_db.
 */
inline FarFieldData add_noise(const FarFieldData& data, const NoiseSpec& spec) {
    if (!spec.enabled()) return data;
    if (!std::isfinite(spec.snr_db)) throw InvalidArgument("snr_db must be finite or +inf");
    const double signal = squared_norm(data.samples());
    if (!(signal > 0.0)) throw DegenerateError("SNR is undefined for all-zero far-field data");

    NormalStream normal(spec.seed);
    std::vector<Complex> noise(data.size());
    for (auto& z : noise) {
        const double re = normal();
        const double im = normal();
        z = Complex(re, im);
    }
    const double scale = std::sqrt(signal / (squared_norm(noise) * std::pow(10.0, spec.snr_db / 10.0)));
    std::vector<Complex> noisy(data.samples());
    for (std::size_t n = 0; n < noisy.size(); ++n) noisy[n] += scale * noise[n];
    return FarFieldData(data.observations(), data.incident_direction(), std::move(noisy));
}

} // namespace dsm
