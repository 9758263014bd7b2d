#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "stml/density.hpp"
#include "stml/grid.hpp"

namespace stml {

/// Reads a Gaussian cube volumetric file. Geometry stays in Bohr (the
/// library's internal length unit); values are kept exactly as stored.
/// Axis step vectors must be axis aligned. Throws ParseError with the line
/// number on malformed input, truncated value streams or non-positive counts.
ScalarGrid3D read_cube(std::istream& in);
ScalarGrid3D read_cube(const std::filesystem::path& path);

/// read_cube followed by TransitionDensity::gridded.
TransitionDensity load_cube(const std::filesystem::path& path, double energy_gap, std::string label = {},
                            double neutrality_tol = default_neutrality_tolerance);

/// Writes a cube with zero atoms, six values per line in %.5E format.
void write_cube(std::ostream& out, const ScalarGrid3D& grid, const std::string& comment = "stml");
void write_cube(const std::filesystem::path& path, const ScalarGrid3D& grid, const std::string& comment = "stml");

}  // namespace stml
