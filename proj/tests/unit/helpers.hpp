#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>

#include "stml/grid.hpp"

namespace testing {

inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(STML_FIXTURES) / name; }

inline double rel_diff(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline stml::GridSpec cube_spec(std::size_t n, double h = 1.0, stml::Vec3 origin = {}) {
    stml::GridSpec s;
    s.origin = origin;
    s.spacing = {h, h, h};
    s.dims = {n, n, n};
    return s;
}

/// Uniform noise in [-1, 1] with the mean removed, so the total charge is zero to rounding.
inline stml::ScalarGrid3D random_neutral(const stml::GridSpec& spec, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(spec.size());
    double mean = 0.0;
    for (auto& x : v) mean += (x = u(rng));
    mean /= static_cast<double>(v.size());
    for (auto& x : v) x -= mean;
    return stml::ScalarGrid3D(spec, std::move(v));
}

/// Noise confined to the central half of the box (zero margin around it).
inline stml::ScalarGrid3D random_neutral_blob(const stml::GridSpec& spec, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const auto& d = spec.dims;
    std::vector<double> v(spec.size(), 0.0);
    std::vector<std::size_t> inside;
    for (std::size_t i = 0; i < d[0]; ++i)
        for (std::size_t j = 0; j < d[1]; ++j)
            for (std::size_t k = 0; k < d[2]; ++k)
                if (4 * i >= d[0] && 4 * i < 3 * d[0] && 4 * j >= d[1] && 4 * j < 3 * d[1] && 4 * k >= d[2] &&
                    4 * k < 3 * d[2])
                    inside.push_back((i * d[1] + j) * d[2] + k);
    double mean = 0.0;
    for (auto n : inside) mean += (v[n] = u(rng));
    mean /= static_cast<double>(inside.size());
    for (auto n : inside) v[n] -= mean;
    return stml::ScalarGrid3D(spec, std::move(v));
}

}  // namespace testing
