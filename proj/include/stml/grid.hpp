#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "stml/vec.hpp"

namespace stml {

using Dims = std::array<std::size_t, 3>;

/// Geometry of a uniform, axis-aligned 3D lattice (Bohr). Node (i, j, k) sits
/// at origin + (i*dx, j*dy, k*dz).
struct GridSpec {
    Vec3 origin;
    Vec3 spacing;
    Dims dims{};

    std::size_t size() const { return dims[0] * dims[1] * dims[2]; }
    double cell_volume() const { return spacing.x * spacing.y * spacing.z; }
    Vec3 node(std::size_t i, std::size_t j, std::size_t k) const {
        return {origin.x + static_cast<double>(i) * spacing.x,
                origin.y + static_cast<double>(j) * spacing.y,
                origin.z + static_cast<double>(k) * spacing.z};
    }
    Vec3 upper() const { return node(dims[0] - 1, dims[1] - 1, dims[2] - 1); }

    /// Throws ConfigError unless spacing > 0 and dims >= 2 on every axis.
    void validate() const;
};

/// Immutable real scalar field on a GridSpec. Storage order matches the cube
/// format: z fastest, then y, then x.
class ScalarGrid3D {
public:
    ScalarGrid3D(GridSpec spec, std::vector<double> values);

    static ScalarGrid3D zeros(GridSpec spec);

    template <class F>
    static ScalarGrid3D sample(const GridSpec& spec, F&& f) {
        spec.validate();
        std::vector<double> v(spec.size());
        std::size_t n = 0;
        for (std::size_t i = 0; i < spec.dims[0]; ++i)
            for (std::size_t j = 0; j < spec.dims[1]; ++j)
                for (std::size_t k = 0; k < spec.dims[2]; ++k) v[n++] = f(spec.node(i, j, k));
        return ScalarGrid3D(spec, std::move(v));
    }

    const GridSpec& spec() const { return spec_; }
    const Dims& dims() const { return spec_.dims; }
    const Vec3& origin() const { return spec_.origin; }
    const Vec3& spacing() const { return spec_.spacing; }
    double cell_volume() const { return spec_.cell_volume(); }
    std::size_t size() const { return values_.size(); }

    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
        return (i * spec_.dims[1] + j) * spec_.dims[2] + k;
    }
    double at(std::size_t i, std::size_t j, std::size_t k) const { return values_[index(i, j, k)]; }
    Vec3 node(std::size_t i, std::size_t j, std::size_t k) const { return spec_.node(i, j, k); }
    std::span<const double> values() const { return values_; }

    double max_abs() const;
    ScalarGrid3D scaled(double c) const;

private:
    GridSpec spec_;
    std::vector<double> values_;
};

/// True when both lattices share spacing and their origins differ by whole cells.
bool commensurate(const GridSpec& a, const GridSpec& b, double rel_tol = 1e-9);

/// Smallest lattice commensurate with both inputs that contains both.
GridSpec bounding_spec(const GridSpec& a, const GridSpec& b);

/// Copies `grid` into the commensurate lattice `target` (zeros elsewhere).
/// Throws ConfigError if the lattices are incommensurate or `grid` sticks out.
ScalarGrid3D embed(const ScalarGrid3D& grid, const GridSpec& target);

/// Axis lengths accepted by the transform: products of 2, 3, 5 and 7.
bool is_transform_size(std::size_t n);
std::size_t next_transform_size(std::size_t n);

/// Zero-extends each axis at its upper end to the next transform size.
ScalarGrid3D pad_to_transform_size(const ScalarGrid3D& grid);

/// Rotates the field by +90 degrees about the z axis through the lateral
/// origin: new(x, y) = old(y, -x). Requires a square lattice centred on x = y = 0.
ScalarGrid3D rotate_quarter_turn(const ScalarGrid3D& grid);

/// Averages factor^3 blocks (charge conserving). Trailing partial blocks are
/// zero-filled before averaging.
ScalarGrid3D coarsen(const ScalarGrid3D& grid, std::size_t factor);

}  // namespace stml
