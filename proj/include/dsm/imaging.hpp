#pragma once
/**
 * @file imaging.hpp
 * @brief Search grids, indicator maps, peak extraction and map export.
 *
 * Maps are stored row-major with row j at y = y_min + j * step and column i at
 * x = x_min + i * step. Every node is evaluated independently and the map is
 * normalized in a second pass, so results do not depend on the thread count.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dsm/errors.hpp"
#include "dsm/forward.hpp"
#include "dsm/indicator.hpp"
#include "dsm/parallel.hpp"
#include "dsm/vec2.hpp"

namespace dsm {

class SearchGrid {
public:
    SearchGrid(double x_min, double x_max, double y_min, double y_max, double step)
        : x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), step_(step) {
        if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) || !std::isfinite(y_max))
            throw InvalidArgument("grid bounds must be finite");
        if (!(x_min < x_max) || !(y_min < y_max)) throw InvalidArgument("grid bounds must satisfy min < max");
        if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("grid step must be positive");
        nx_ = node_count(x_max - x_min, step);
        ny_ = node_count(y_max - y_min, step);
        if (nx_ < 2 || ny_ < 2) throw InvalidArgument("grid needs at least two nodes per axis");
    }

    /// [-1, 1]^2 at step 0.005, 401 x 401 nodes.
    static SearchGrid default_grid() { return SearchGrid(-1.0, 1.0, -1.0, 1.0, 0.005); }

    double x_min() const noexcept { return x_min_; }
    double x_max() const noexcept { return x_max_; }
    double y_min() const noexcept { return y_min_; }
    double y_max() const noexcept { return y_max_; }
    double step() const noexcept { return step_; }
    std::size_t nx() const noexcept { return nx_; }
    std::size_t ny() const noexcept { return ny_; }
    std::size_t size() const noexcept { return nx_ * ny_; }

    Vec2 node(std::size_t row, std::size_t col) const noexcept {
        return {x_min_ + static_cast<double>(col) * step_, y_min_ + static_cast<double>(row) * step_};
    }
    Vec2 node(std::size_t index) const noexcept { return node(index / nx_, index % nx_); }

    /// Row-major list of all nodes.
    std::vector<Vec2> nodes() const {
        std::vector<Vec2> out(size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = node(i);
        return out;
    }

    /// Row-major index of the node closest to p (clamped to the grid).
    std::size_t nearest_index(Vec2 p) const noexcept {
        auto clamp_round = [](double v, std::size_t n) {
            const double r = std::round(v);
            if (r <= 0.0) return std::size_t{0};
            return std::min(n - 1, static_cast<std::size_t>(r));
        };
        const std::size_t col = clamp_round((p.x - x_min_) / step_, nx_);
        const std::size_t row = clamp_round((p.y - y_min_) / step_, ny_);
        return row * nx_ + col;
    }

private:
    static std::size_t node_count(double extent, double step) {
        return static_cast<std::size_t>(std::floor(extent / step + 1e-9)) + 1;
    }

    double x_min_, x_max_, y_min_, y_max_, step_;
    std::size_t nx_ = 0, ny_ = 0;
};

enum class MapNormalization { grid_max, raw };

class IndicatorMap {
public:
    IndicatorMap(SearchGrid grid, std::vector<double> values, MapNormalization normalization)
        : grid_(std::move(grid)), values_(std::move(values)), normalization_(normalization) {
        if (values_.size() != grid_.size()) throw InvalidArgument("map size does not match grid");
    }

    const SearchGrid& grid() const noexcept { return grid_; }
    const std::vector<double>& values() const noexcept { return values_; }
    MapNormalization normalization() const noexcept { return normalization_; }

    double at(std::size_t row, std::size_t col) const { return values_.at(row * grid_.nx() + col); }
    double value_near(Vec2 p) const { return values_[grid_.nearest_index(p)]; }

private:
    SearchGrid grid_;
    std::vector<double> values_;
    MapNormalization normalization_;
};

/// Evaluates fn at every node of the grid in parallel, without normalization.
template <typename Fn>
IndicatorMap evaluate_raw_map(const SearchGrid& grid, Fn&& fn, unsigned threads = 1) {
    std::vector<double> values(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) { values[i] = fn(grid.node(i)); });
    return IndicatorMap(grid, std::move(values), MapNormalization::raw);
}

/// Divides by the grid maximum. Throws DegenerateError for an all-zero or non-finite map.
inline IndicatorMap normalize_grid_max(const IndicatorMap& map) {
    const auto& v = map.values();
    double peak = 0.0;
    for (double x : v) {
        if (!std::isfinite(x)) throw DegenerateError("indicator map has non-finite values");
        peak = std::max(peak, x);
    }
    if (!(peak > 0.0)) throw DegenerateError("indicator map is identically zero");
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / peak;
    return IndicatorMap(map.grid(), std::move(out), MapNormalization::grid_max);
}

/// Data-based DSM map, grid-max normalized.
inline IndicatorMap compute_map(const FarFieldData& data, double k, const SearchGrid& grid, unsigned threads = 1) {
    const DsmIndicator indicator(data, k);
    return normalize_grid_max(evaluate_raw_map(grid, [&](Vec2 p) { return indicator(p); }, threads));
}

/// Analytic |Psi| map, grid-max normalized.
inline IndicatorMap compute_map(const Scene& scene, const WaveContext& wave, const SearchGrid& grid,
                                unsigned threads = 1, PsiForm form = PsiForm::coherent) {
    return normalize_grid_max(
        evaluate_raw_map(grid, [&](Vec2 p) { return analytic_psi(scene, wave, p, form); }, threads));
}

struct Peak {
    Vec2 position;
    double value = 0.0;
    std::size_t row = 0;
    std::size_t col = 0;
};

/**
 * Local maxima over the 8-neighbourhood of interior nodes, thinned greedily.
 *
 * A node qualifies when no neighbour is larger and every neighbour of equal
 * value comes later in raster (row, col) order, so a tie between adjacent nodes
 * yields exactly one peak at the first of them. Candidates below min_value are
 * dropped; the rest are visited by descending value (ties by row, col) and kept
 * if at least min_separation away from every peak already kept.
 */
inline std::vector<Peak> extract_peaks(const IndicatorMap& map, double min_value, double min_separation) {
    const auto& g = map.grid();
    const std::size_t nx = g.nx();
    const std::size_t ny = g.ny();
    std::vector<Peak> candidates;
    for (std::size_t row = 1; row + 1 < ny; ++row) {
        for (std::size_t col = 1; col + 1 < nx; ++col) {
            const double v = map.at(row, col);
            if (v < min_value) continue;
            bool is_peak = true;
            for (int dr = -1; dr <= 1 && is_peak; ++dr) {
                for (int dc = -1; dc <= 1; ++dc) {
                    if (dr == 0 && dc == 0) continue;
                    const double w = map.at(row + dr, col + dc);
                    const bool earlier = dr < 0 || (dr == 0 && dc < 0);
                    if (w > v || (w == v && earlier)) {
                        is_peak = false;
                        break;
                    }
                }
            }
            if (is_peak) candidates.push_back({g.node(row, col), v, row, col});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Peak& a, const Peak& b) {
        if (a.value != b.value) return a.value > b.value;
        if (a.row != b.row) return a.row < b.row;
        return a.col < b.col;
    });
    std::vector<Peak> kept;
    for (const auto& c : candidates) {
        const bool far_enough = std::all_of(kept.begin(), kept.end(), [&](const Peak& k) {
            return distance(k.position, c.position) >= min_separation;
        });
        if (far_enough) kept.push_back(c);
    }
    return kept;
}

enum class MapFormat { csv, pgm };

/// %.17g, enough digits to round-trip any double.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string map_to_csv(const IndicatorMap& map) {
    std::string out = "x,y,value\n";
    const auto& g = map.grid();
    out.reserve(out.size() + g.size() * 64);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec2 p = g.node(i);
        out += format_double(p.x);
        out += ',';
        out += format_double(p.y);
        out += ',';
        out += format_double(map.values()[i]);
        out += '\n';
    }
    return out;
}

/// Binary P5, maxval 65535, big-endian samples of round(65535 v); first image row is y_max.
inline std::string map_to_pgm(const IndicatorMap& map) {
    const auto& g = map.grid();
    std::string out = "P5\n" + std::to_string(g.nx()) + " " + std::to_string(g.ny()) + "\n65535\n";
    out.reserve(out.size() + 2 * g.size());
    for (std::size_t r = 0; r < g.ny(); ++r) {
        const std::size_t row = g.ny() - 1 - r;
        for (std::size_t col = 0; col < g.nx(); ++col) {
            const double v = std::clamp(map.at(row, col), 0.0, 1.0);
            const auto q = static_cast<std::uint16_t>(std::lround(65535.0 * v));
            out += static_cast<char>(q >> 8);
            out += static_cast<char>(q & 0xFF);
        }
    }
    return out;
}

inline void write_file(const std::filesystem::path& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw IoError("cannot open " + path.string() + " for writing");
    os.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!os) throw IoError("failed writing " + path.string());
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

inline void export_map(const IndicatorMap& map, const std::filesystem::path& path, MapFormat format) {
    write_file(path, format == MapFormat::csv ? map_to_csv(map) : map_to_pgm(map));
}

/// Node values from a CSV written by map_to_csv, checked against `grid`.
inline IndicatorMap load_map_csv(const std::filesystem::path& path, const SearchGrid& grid,
                                 MapNormalization normalization = MapNormalization::grid_max) {
    std::istringstream is(read_file(path));
    std::string line;
    if (!std::getline(is, line) || line != "x,y,value") throw IoError(path.string() + ": missing map CSV header");
    std::vector<double> values;
    values.reserve(grid.size());
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double x = 0.0, y = 0.0, v = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &y, &v) != 3)
            throw IoError(path.string() + ": malformed map CSV row '" + line + "'");
        values.push_back(v);
    }
    if (values.size() != grid.size())
        throw IoError(path.string() + ": expected " + std::to_string(grid.size()) + " nodes, found " +
                      std::to_string(values.size()));
    return IndicatorMap(grid, std::move(values), normalization);
}

} // namespace dsm
