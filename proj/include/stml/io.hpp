#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "stml/current.hpp"
#include "stml/kinetics.hpp"
#include "stml/scan.hpp"

namespace stml {

inline constexpr const char* version = "0.1.0";

/// Provenance line written first in every output file:
///   "# stml <version> config=<16 hex digits>"
struct OutputHeader {
    std::string config_hash;
    std::string line() const;
};

/// 64-bit FNV-1a of `text`, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view text);

/// "%.15g"
std::string format_value(double v);

/// "# x_nm: ..." and "# y_nm: ..." lines, then ny rows of nx comma-separated values.
void write_map_csv(std::ostream& out, const CurrentMap2D& map, const OutputHeader& header);
/// Reads a file written by write_map_csv; values come back in Normalization::Raw.
CurrentMap2D read_map_csv(std::istream& in);

/// Plain PGM (P2, maxval 255) of a normalized map, highest y row first.
void write_pgm(std::ostream& out, const CurrentMap2D& normalized);

/// "# bias_V,current_rel" then one row per bias.
void write_curve_csv(std::ostream& out, const BiasCurve& curve, const OutputHeader& header);

/// "# t_s,p0,p3,p17" then one row per stored step.
void write_trajectory_csv(std::ostream& out, const std::vector<kinetics::TrajectoryPoint>& trajectory,
                          const OutputHeader& header);

}  // namespace stml
