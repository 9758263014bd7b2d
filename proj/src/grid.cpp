#include "stml/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "stml/error.hpp"

namespace stml {

namespace {

double axis_spacing(const Vec3& v, int axis) { return axis == 0 ? v.x : axis == 1 ? v.y : v.z; }

// Whole-cell offset of `b` relative to `a` along one axis; nullopt-like flag via ok.
long cell_offset(double a, double b, double h, double rel_tol, bool& ok) {
    const double cells = (b - a) / h;
    const double rounded = std::round(cells);
    ok = std::abs(cells - rounded) <= rel_tol * std::max(1.0, std::abs(cells)) + 1e-9;
    return static_cast<long>(rounded);
}

}  // namespace

void GridSpec::validate() const {
    for (int a = 0; a < 3; ++a) {
        const double h = axis_spacing(spacing, a);
        if (!(h > 0.0) || !std::isfinite(h))
            throw ConfigError("grid spacing must be strictly positive on every axis");
        if (dims[static_cast<std::size_t>(a)] < 2)
            throw ConfigError("grid needs at least 2 points per axis");
    }
    if (!all_finite(origin)) throw ConfigError("grid origin must be finite");
}

ScalarGrid3D::ScalarGrid3D(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
    spec_.validate();
    if (values_.size() != spec_.size())
        throw ConfigError("grid value count " + std::to_string(values_.size()) +
                          " does not match dims product " + std::to_string(spec_.size()));
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }))
        throw ConfigError("grid values must be finite");
}

ScalarGrid3D ScalarGrid3D::zeros(GridSpec spec) {
    return ScalarGrid3D(spec, std::vector<double>(spec.size(), 0.0));
}

double ScalarGrid3D::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

ScalarGrid3D ScalarGrid3D::scaled(double c) const {
    std::vector<double> v(values_);
    for (double& x : v) x *= c;
    return ScalarGrid3D(spec_, std::move(v));
}

bool commensurate(const GridSpec& a, const GridSpec& b, double rel_tol) {
    for (int ax = 0; ax < 3; ++ax) {
        const double ha = axis_spacing(a.spacing, ax);
        const double hb = axis_spacing(b.spacing, ax);
        if (std::abs(ha - hb) > rel_tol * ha) return false;
        bool ok = false;
        cell_offset(axis_spacing(a.origin, ax), axis_spacing(b.origin, ax), ha, 1e-6, ok);
        if (!ok) return false;
    }
    return true;
}

GridSpec bounding_spec(const GridSpec& a, const GridSpec& b) {
    if (!commensurate(a, b)) throw ConfigError("grids are incommensurate (spacing or origin offset)");
    GridSpec out = a;
    double origin[3];
    for (int ax = 0; ax < 3; ++ax) {
        const auto u = static_cast<std::size_t>(ax);
        const double h = axis_spacing(a.spacing, ax);
        bool ok = false;
        const long off = cell_offset(axis_spacing(a.origin, ax), axis_spacing(b.origin, ax), h, 1e-6, ok);
        const long lo = std::min(0L, off);
        const long hi = std::max(static_cast<long>(a.dims[u]), off + static_cast<long>(b.dims[u]));
        origin[ax] = axis_spacing(a.origin, ax) + static_cast<double>(lo) * h;
        out.dims[u] = static_cast<std::size_t>(hi - lo);
    }
    out.origin = {origin[0], origin[1], origin[2]};
    return out;
}

ScalarGrid3D embed(const ScalarGrid3D& grid, const GridSpec& target) {
    if (!commensurate(grid.spec(), target))
        throw ConfigError("cannot embed grid: lattices are incommensurate");
    long off[3];
    for (int ax = 0; ax < 3; ++ax) {
        const auto u = static_cast<std::size_t>(ax);
        bool ok = false;
        off[ax] = cell_offset(axis_spacing(target.origin, ax), axis_spacing(grid.origin(), ax),
                              axis_spacing(target.spacing, ax), 1e-6, ok);
        if (off[ax] < 0 || off[ax] + static_cast<long>(grid.dims()[u]) > static_cast<long>(target.dims[u]))
            throw ConfigError("cannot embed grid: source extends beyond target lattice");
    }
    std::vector<double> v(target.size(), 0.0);
    const auto& d = grid.dims();
    for (std::size_t i = 0; i < d[0]; ++i)
        for (std::size_t j = 0; j < d[1]; ++j) {
            const std::size_t ti = i + static_cast<std::size_t>(off[0]);
            const std::size_t tj = j + static_cast<std::size_t>(off[1]);
            const std::size_t base = (ti * target.dims[1] + tj) * target.dims[2] + static_cast<std::size_t>(off[2]);
            for (std::size_t k = 0; k < d[2]; ++k) v[base + k] = grid.at(i, j, k);
        }
    return ScalarGrid3D(target, std::move(v));
}

bool is_transform_size(std::size_t n) {
    if (n == 0) return false;
    for (std::size_t p : {2u, 3u, 5u, 7u})
        while (n % p == 0) n /= p;
    return n == 1;
}

std::size_t next_transform_size(std::size_t n) {
    if (n <= 1) return 1;
    while (!is_transform_size(n)) ++n;
    return n;
}

ScalarGrid3D pad_to_transform_size(const ScalarGrid3D& grid) {
    GridSpec spec = grid.spec();
    for (auto& n : spec.dims) n = next_transform_size(n);
    if (spec.dims == grid.dims()) return grid;
    return embed(grid, spec);
}

ScalarGrid3D rotate_quarter_turn(const ScalarGrid3D& grid) {
    const auto& s = grid.spec();
    const std::size_t n = s.dims[0];
    const double h = s.spacing.x;
    const double centred = -0.5 * static_cast<double>(n - 1) * h;
    const double tol = 1e-9 * h;
    if (s.dims[1] != n || std::abs(s.spacing.y - h) > tol || std::abs(s.origin.x - centred) > 1e-6 * h ||
        std::abs(s.origin.y - centred) > 1e-6 * h)
        throw ConfigError("quarter-turn rotation needs a square lateral lattice centred on x = y = 0");
    std::vector<double> v(grid.size());
    const std::size_t nz = s.dims[2];
    // new(x_i, y_j) = old(y_j, -x_i) -> old index (j, n-1-i)
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < nz; ++k) v[grid.index(i, j, k)] = grid.at(j, n - 1 - i, k);
    return ScalarGrid3D(s, std::move(v));
}

ScalarGrid3D coarsen(const ScalarGrid3D& grid, std::size_t factor) {
    if (factor == 0) throw ConfigError("coarsening factor must be >= 1");
    if (factor == 1) return grid;
    const auto& s = grid.spec();
    GridSpec out;
    out.spacing = static_cast<double>(factor) * s.spacing;
    out.origin = s.origin + (0.5 * static_cast<double>(factor - 1)) * s.spacing;
    for (std::size_t a = 0; a < 3; ++a) out.dims[a] = (s.dims[a] + factor - 1) / factor;
    for (auto n : out.dims)
        if (n < 2) throw ConfigError("coarsening factor leaves fewer than 2 points on an axis");
    std::vector<double> v(out.size(), 0.0);
    const double inv = 1.0 / static_cast<double>(factor * factor * factor);
    for (std::size_t i = 0; i < s.dims[0]; ++i)
        for (std::size_t j = 0; j < s.dims[1]; ++j)
            for (std::size_t k = 0; k < s.dims[2]; ++k) {
                const std::size_t o = ((i / factor) * out.dims[1] + j / factor) * out.dims[2] + k / factor;
                v[o] += grid.at(i, j, k) * inv;
            }
    return ScalarGrid3D(out, std::move(v));
}

}  // namespace stml
