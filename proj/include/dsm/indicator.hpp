#pragma once
/**
 * @file indicator.hpp
 * @brief Direct sampling indicator from data, and its closed-form Bessel structure.
 *
 * Data-based indicator at a search point x_s:
 *
 *   F(x_s) = |<psi, t(x_s)>| / (|psi| |t(x_s)|),   t_n(x_s) = exp(-i k theta_n . x_s),
 *   <f, g> = sum_n f_n conj(g_n),                 |f| = sqrt(<f, f>).
 *
 * For large N the direction sum turns into a J1 kernel and F is proportional to
 * |Psi(x_s)| with
 *
 *   Psi(x_s) = sum_m r_m^2 mu_0 / (mu_m + mu_0) exp(i k d.x_m)
 *              ((x_m - x_s) / |x_m - x_s| . d) J1(k |x_m - x_s|).
 *
 * The phase exp(i k d.x_m) has unit modulus but differs between inclusions, so
 * it matters whenever M > 1; PsiForm::phaseless drops it for comparison.
 */

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "dsm/errors.hpp"
#include "dsm/forward.hpp"
#include "dsm/model.hpp"
#include "dsm/specfun.hpp"

namespace dsm {

inline Complex inner_product(std::span<const Complex> f, std::span<const Complex> g) {
    if (f.size() != g.size()) throw InvalidArgument("inner product of vectors with different lengths");
    Complex sum{0.0, 0.0};
    for (std::size_t n = 0; n < f.size(); ++n) sum += f[n] * std::conj(g[n]);
    return sum;
}

inline std::vector<Complex> test_vector(const ObservationSet& obs, double k, Vec2 sampling_point) {
    if (!(k > 0.0)) throw InvalidArgument("wavenumber must be positive");
    std::vector<Complex> t(obs.count());
    const auto& dirs = obs.directions();
    for (std::size_t n = 0; n < t.size(); ++n) t[n] = std::polar(1.0, -k * dot(dirs[n], sampling_point));
    return t;
}

/// Data-based indicator with the data norm computed once, for sweeping many points.
class DsmIndicator {
public:
    DsmIndicator(const FarFieldData& data, double k) : data_(data), k_(k) {
        if (!(k > 0.0)) throw InvalidArgument("wavenumber must be positive");
        if (data.size() == 0) throw InvalidArgument("far-field data is empty");
        data_norm_ = std::sqrt(squared_norm(data.samples()));
        if (!(data_norm_ > 0.0)) throw DegenerateError("far-field data is identically zero");
        test_norm_ = std::sqrt(static_cast<double>(data.size()));
    }

    /// Value in [0, 1]; the Cauchy-Schwarz bound is enforced against rounding.
    double operator()(Vec2 sampling_point) const {
        const auto& dirs = data_.observations().directions();
        const auto& samples = data_.samples();
        // <psi, t> = sum psi_n conj(exp(-i k theta_n . x_s)) = sum psi_n exp(i k theta_n . x_s)
        Complex sum{0.0, 0.0};
        for (std::size_t n = 0; n < samples.size(); ++n)
            sum += samples[n] * std::polar(1.0, k_ * dot(dirs[n], sampling_point));
        return std::min(1.0, std::abs(sum) / (data_norm_ * test_norm_));
    }

private:
    FarFieldData data_;
    double k_;
    double data_norm_ = 0.0;
    double test_norm_ = 0.0;
};

inline double dsm_indicator_raw(const FarFieldData& data, double k, Vec2 sampling_point) {
    return DsmIndicator(data, k)(sampling_point);
}

enum class PsiForm {
    coherent,   ///< keeps exp(i k d.x_m); matches the data-based indicator for any M
    phaseless,  ///< drops it; exact only for a single inclusion
};

/// Complex Psi(x_s). A term with x_s == x_m is zero (J1(0) = 0 removes the undefined direction).
inline Complex analytic_psi_complex(const Scene& scene, const WaveContext& wave, Vec2 sampling_point,
                                    PsiForm form = PsiForm::coherent) {
    const double k = wave.wavenumber();
    const Vec2 d = wave.direction();
    Complex sum{0.0, 0.0};
    for (const auto& inc : scene.inclusions()) {
        const Vec2 offset = inc.center - sampling_point;
        const double dist = norm(offset);
        if (dist == 0.0) continue;
        const double contrast = scene.background_permeability() / (inc.permeability + scene.background_permeability());
        const double term = inc.radius * inc.radius * contrast * (dot(offset, d) / dist) * bessel_j1(k * dist);
        if (form == PsiForm::coherent)
            sum += term * std::polar(1.0, k * dot(d, inc.center));
        else
            sum += term;
    }
    return sum;
}

inline double analytic_psi(const Scene& scene, const WaveContext& wave, Vec2 sampling_point,
                           PsiForm form = PsiForm::coherent) {
    return std::abs(analytic_psi_complex(scene, wave, sampling_point, form));
}

struct PeakPrediction {
    std::size_t inclusion_index = 0;
    std::array<Vec2, 2> positions{};  ///< x_m - rho d, x_m + rho d
    double offset_radius = 0.0;       ///< rho = 1.8412 / k
};

/// The two points on the line x_m + t d where k |x_m - x_s| hits the J1 peak argument.
inline std::vector<PeakPrediction> predicted_peaks(const Scene& scene, const WaveContext& wave) {
    const double rho = kJ1PeakArgument / wave.wavenumber();
    const Vec2 d = wave.direction();
    std::vector<PeakPrediction> out;
    out.reserve(scene.size());
    for (std::size_t m = 0; m < scene.size(); ++m) {
        const Vec2 c = scene[m].center;
        out.push_back({m, {c - rho * d, c + rho * d}, rho});
    }
    return out;
}

/// sum_n (vartheta . theta_n) exp(-i k theta_n . x)
inline Complex direction_sum(const ObservationSet& obs, double k, Vec2 vartheta, Vec2 x) {
    Complex sum{0.0, 0.0};
    for (const auto& theta : obs.directions()) sum += dot(vartheta, theta) * std::polar(1.0, -k * dot(theta, x));
    return sum;
}

/**
 * Sup-norm distance between the grid-max-normalized data-based indicator and the
 * grid-max-normalized |Psi| over the given points.
 */
inline double theorem_residual(const FarFieldData& data, const Scene& scene, const WaveContext& wave,
                               std::span<const Vec2> grid, PsiForm form = PsiForm::coherent) {
    if (grid.empty()) throw InvalidArgument("residual needs at least one sampling point");
    const DsmIndicator indicator(data, wave.wavenumber());
    std::vector<double> measured(grid.size());
    std::vector<double> predicted(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        measured[i] = indicator(grid[i]);
        predicted[i] = analytic_psi(scene, wave, grid[i], form);
    }
    const double measured_max = *std::max_element(measured.begin(), measured.end());
    const double predicted_max = *std::max_element(predicted.begin(), predicted.end());
    if (!(measured_max > 0.0) || !(predicted_max > 0.0))
        throw DegenerateError("indicator map is identically zero on the grid");
    double residual = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i)
        residual = std::max(residual, std::abs(measured[i] / measured_max - predicted[i] / predicted_max));
    return residual;
}

} // namespace dsm
