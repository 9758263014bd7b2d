#pragma once

#include <span>
#include <string>
#include <vector>

#include "stml/current.hpp"
#include "stml/diagnostics.hpp"

namespace stml {

enum class Normalization { Raw, Linear, Log10 };

inline constexpr double default_log10_floor = -12.0;

/// Constant-height raster of inelastic current. Axes in Bohr; values stored
/// row-major with y rows and x columns: values[iy * nx + ix].
struct CurrentMap2D {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> values;
    double bias_volts = 0.0;
    std::vector<std::string> channels;
    double tip_height = 0.0;
    Normalization mode = Normalization::Raw;
    double log10_floor = default_log10_floor;

    std::size_t nx() const { return x.size(); }
    std::size_t ny() const { return y.size(); }
    double at(std::size_t ix, std::size_t iy) const { return values[iy * x.size() + ix]; }
};

/// n points from lo to hi inclusive; symmetric ranges give exactly mirrored values.
std::vector<double> uniform_axis(double lo, double hi, std::size_t n);

/// Total inelastic current with the tip over every (x_i, y_j). Pixels are
/// independent work items over `threads` workers (0 = hardware concurrency);
/// the result is bitwise independent of the thread count.
CurrentMap2D scan_map(std::span<const TransitionChannel> channels, const ElectrodeModel& model, Bias bias,
                      const std::vector<double>& x_axis, const std::vector<double>& y_axis,
                      int n_energy = default_energy_nodes, unsigned threads = 1);

/// Linear: divide by the maximum. Log10: log10(value / max), non-positive
/// pixels and anything below `floor` clamped to `floor`.
/// Throws NumericalError when no pixel is strictly positive.
CurrentMap2D normalize_map(const CurrentMap2D& map, Normalization mode, double floor = default_log10_floor);

/// Pixelwise sum of raw maps on identical axes.
CurrentMap2D sum_maps(std::span<const CurrentMap2D> maps);

/// Map rotated by +90 degrees about the origin: new(x, y) = old(y, -x).
/// Needs square axes symmetric about zero.
CurrentMap2D rotate_quarter_turn(const CurrentMap2D& map);

/// The density's z = 0 plane sampled on the map axes (analytic: exact
/// evaluation; gridded: nearest node of the plane closest to z = 0).
CurrentMap2D density_plane_map(const TransitionDensity& density, const std::vector<double>& x_axis,
                               const std::vector<double>& y_axis);

enum class CutAxis { X, Y };

struct ProfileCut {
    std::vector<double> coordinate;  // Bohr, along the cut
    std::vector<double> value;       // normalized to max |value| along the cut
    double offset = 0.0;             // actual offset of the sampled grid line
};

/// Cut along x at y = offset (CutAxis::X) or along y at x = offset. Offsets
/// off the grid snap to the nearest line with a diagnostic.
ProfileCut profile_cut(const CurrentMap2D& map, CutAxis axis, double offset, Diagnostics* diag = nullptr);

}  // namespace stml
