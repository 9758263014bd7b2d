#include "stml/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "stml/error.hpp"
#include "stml/units.hpp"

namespace stml {

std::string OutputHeader::line() const { return std::string("# stml ") + version + " config=" + config_hash; }

std::string fnv1a_hex(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string format_value(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.15g", v == 0.0 ? 0.0 : v);  // no "-0"
    return buf;
}

namespace {

void write_axis(std::ostream& out, const char* name, const std::vector<double>& axis) {
    out << "# " << name << ": ";
    for (std::size_t i = 0; i < axis.size(); ++i) out << (i ? "," : "") << format_value(units::bohr_to_nm(axis[i]));
    out << "\n";
}

std::vector<double> parse_list(const std::string& text, std::size_t line) {
    std::vector<double> v;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ',');) {
        const auto b = tok.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        char* end = nullptr;
        const double x = std::strtod(tok.c_str() + b, &end);
        if (end == tok.c_str() + b) throw ParseError("non-numeric map entry '" + tok + "'", line);
        v.push_back(x);
    }
    return v;
}

}  // namespace

void write_map_csv(std::ostream& out, const CurrentMap2D& map, const OutputHeader& header) {
    out << header.line() << "\n";
    write_axis(out, "x_nm", map.x);
    write_axis(out, "y_nm", map.y);
    for (std::size_t j = 0; j < map.ny(); ++j) {
        for (std::size_t i = 0; i < map.nx(); ++i) out << (i ? "," : "") << format_value(map.at(i, j));
        out << "\n";
    }
}

CurrentMap2D read_map_csv(std::istream& in) {
    CurrentMap2D map;
    std::string line;
    std::size_t n = 0;
    bool have_x = false, have_y = false;
    while (std::getline(in, line)) {
        ++n;
        if (line.empty()) continue;
        if (line.rfind("# x_nm:", 0) == 0) {
            for (double v : parse_list(line.substr(7), n)) map.x.push_back(units::nm_to_bohr(v));
            have_x = true;
        } else if (line.rfind("# y_nm:", 0) == 0) {
            for (double v : parse_list(line.substr(7), n)) map.y.push_back(units::nm_to_bohr(v));
            have_y = true;
        } else if (line[0] == '#') {
            continue;
        } else {
            if (!have_x || !have_y) throw ParseError("map rows before axis header lines", n);
            auto row = parse_list(line, n);
            if (row.size() != map.x.size())
                throw ParseError("map row has " + std::to_string(row.size()) + " values, expected " +
                                     std::to_string(map.x.size()),
                                 n);
            map.values.insert(map.values.end(), row.begin(), row.end());
        }
    }
    if (!have_x || !have_y) throw ParseError("map file lacks '# x_nm:' / '# y_nm:' header lines", n);
    if (map.values.size() != map.x.size() * map.y.size())
        throw ParseError("map holds " + std::to_string(map.values.size() / std::max<std::size_t>(map.x.size(), 1)) +
                             " rows, expected " + std::to_string(map.y.size()),
                         n);
    return map;
}

void write_pgm(std::ostream& out, const CurrentMap2D& map) {
    if (map.mode == Normalization::Raw) throw ConfigError("write_pgm needs a normalized map");
    out << "P2\n" << map.nx() << " " << map.ny() << "\n255\n";
    for (std::size_t jj = 0; jj < map.ny(); ++jj) {
        const std::size_t j = map.ny() - 1 - jj;
        for (std::size_t i = 0; i < map.nx(); ++i) {
            double v = map.at(i, j);
            if (map.mode == Normalization::Log10) v = (v - map.log10_floor) / -map.log10_floor;
            const int level = static_cast<int>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
            out << (i ? " " : "") << level;
        }
        out << "\n";
    }
}

void write_curve_csv(std::ostream& out, const BiasCurve& curve, const OutputHeader& header) {
    out << header.line() << "\n# bias_V,current_rel\n";
    double peak = 0.0;
    for (double c : curve.current) peak = std::max(peak, c);
    for (std::size_t i = 0; i < curve.bias_volts.size(); ++i)
        out << format_value(curve.bias_volts[i]) << "," << format_value(peak > 0.0 ? curve.current[i] / peak : 0.0)
            << "\n";
}

void write_trajectory_csv(std::ostream& out, const std::vector<kinetics::TrajectoryPoint>& trajectory,
                          const OutputHeader& header) {
    out << header.line() << "\n# t_s,p0,p3,p17\n";
    for (const auto& pt : trajectory)
        out << format_value(pt.t) << "," << format_value(pt.p.p0) << "," << format_value(pt.p.p3) << ","
            << format_value(pt.p.p17) << "\n";
}

}  // namespace stml
