#include "stml/scan.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "parallel.hpp"
#include "stml/error.hpp"
#include "stml/units.hpp"

namespace stml {

namespace {

void check_axis(const std::vector<double>& a, const char* name) {
    if (a.empty()) throw ConfigError(std::string("scan axis ") + name + " is empty");
    for (double v : a)
        if (!std::isfinite(v)) throw ConfigError(std::string("scan axis ") + name + " has non-finite values");
    if (a.size() < 2) return;
    const double step = (a.back() - a.front()) / static_cast<double>(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) {
        if (!(a[i] > a[i - 1])) throw ConfigError(std::string("scan axis ") + name + " must be strictly increasing");
        if (std::abs((a[i] - a[i - 1]) - step) > 1e-6 * step)
            throw ConfigError(std::string("scan axis ") + name + " must be uniform");
    }
}

[[noreturn]] void rethrow_at_pixel(double x, double y) {
    std::ostringstream os;
    os << " [pixel at x = " << units::bohr_to_nm(x) << " nm, y = " << units::bohr_to_nm(y) << " nm]";
    try {
        throw;
    } catch (const ConfigError& e) {
        throw ConfigError(e.what() + os.str());
    } catch (const DomainError& e) {
        throw DomainError(e.what() + os.str());
    } catch (const std::exception& e) {
        throw NumericalError(e.what() + os.str());
    }
}

bool same_axis(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > 1e-12 * std::max(1.0, std::abs(a[i]))) return false;
    return true;
}

std::size_t nearest(const std::vector<double>& axis, double v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < axis.size(); ++i)
        if (std::abs(axis[i] - v) < std::abs(axis[best] - v)) best = i;
    return best;
}

}  // namespace

std::vector<double> uniform_axis(double lo, double hi, std::size_t n) {
    if (n == 0) throw ConfigError("axis needs at least one point");
    if (n == 1) return {lo};
    if (!(hi > lo)) throw ConfigError("axis upper bound must exceed lower bound");
    std::vector<double> a(n);
    const auto m = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const auto t = static_cast<double>(i);
        a[i] = (lo * (m - t) + hi * t) / m;
    }
    return a;
}

CurrentMap2D scan_map(std::span<const TransitionChannel> channels, const ElectrodeModel& model, Bias bias,
                      const std::vector<double>& x_axis, const std::vector<double>& y_axis, int n_energy,
                      unsigned threads) {
    if (channels.empty()) throw ConfigError("at least one transition channel is required");
    check_axis(x_axis, "x");
    check_axis(y_axis, "y");
    CurrentMap2D map;
    map.x = x_axis;
    map.y = y_axis;
    map.values.assign(x_axis.size() * y_axis.size(), 0.0);
    map.bias_volts = bias.volts;
    map.tip_height = model.tip_height;
    for (const auto& c : channels) map.channels.push_back(c.label());

    const std::size_t nx = x_axis.size();
    detail::parallel_for(map.values.size(), threads, [&](std::size_t p) {
        const double x = x_axis[p % nx];
        const double y = y_axis[p / nx];
        try {
            map.values[p] = total_inelastic_current(channels, model, bias, {x, y}, n_energy).total;
        } catch (...) {
            rethrow_at_pixel(x, y);
        }
    });
    return map;
}

CurrentMap2D normalize_map(const CurrentMap2D& map, Normalization mode, double floor) {
    if (map.mode == Normalization::Log10) throw ConfigError("map is already log-normalized");
    if (map.values.empty()) throw ConfigError("cannot normalize an empty map");
    const double peak = *std::max_element(map.values.begin(), map.values.end());
    if (!(peak > 0.0)) throw NumericalError("cannot normalize a map without a strictly positive pixel");
    CurrentMap2D out = map;
    out.log10_floor = floor;
    switch (mode) {
        case Normalization::Raw:
            out.mode = map.mode;
            return out;
        case Normalization::Linear:
            for (double& v : out.values) v /= peak;
            out.mode = Normalization::Linear;
            return out;
        case Normalization::Log10:
            for (double& v : out.values) v = v > 0.0 ? std::max(floor, std::log10(v / peak)) : floor;
            out.mode = Normalization::Log10;
            return out;
    }
    return out;
}

CurrentMap2D sum_maps(std::span<const CurrentMap2D> maps) {
    if (maps.empty()) throw ConfigError("sum_maps needs at least one map");
    CurrentMap2D out = maps.front();
    if (out.mode != Normalization::Raw) throw ConfigError("sum_maps needs raw (unnormalized) maps");
    for (std::size_t m = 1; m < maps.size(); ++m) {
        const auto& other = maps[m];
        if (other.mode != Normalization::Raw) throw ConfigError("sum_maps needs raw (unnormalized) maps");
        if (!same_axis(out.x, other.x) || !same_axis(out.y, other.y))
            throw ConfigError("sum_maps: map axes differ");
        for (std::size_t p = 0; p < out.values.size(); ++p) out.values[p] += other.values[p];
        out.channels.insert(out.channels.end(), other.channels.begin(), other.channels.end());
    }
    return out;
}

CurrentMap2D rotate_quarter_turn(const CurrentMap2D& map) {
    const std::size_t n = map.nx();
    if (map.ny() != n || !same_axis(map.x, map.y))
        throw ConfigError("quarter-turn rotation needs identical x and y axes");
    for (std::size_t i = 0; i < n; ++i)
        if (std::abs(map.x[i] + map.x[n - 1 - i]) > 1e-12 * std::max(1.0, std::abs(map.x[i])))
            throw ConfigError("quarter-turn rotation needs axes symmetric about zero");
    CurrentMap2D out = map;
    // new(x_i, y_j) = old(y_j, -x_i) = old(ix = j, iy = n-1-i)
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) out.values[j * n + i] = map.at(j, n - 1 - i);
    return out;
}

CurrentMap2D density_plane_map(const TransitionDensity& density, const std::vector<double>& x_axis,
                               const std::vector<double>& y_axis) {
    check_axis(x_axis, "x");
    check_axis(y_axis, "y");
    CurrentMap2D map;
    map.x = x_axis;
    map.y = y_axis;
    map.channels = {density.label()};
    map.values.resize(x_axis.size() * y_axis.size());
    if (const auto* p = density.gaussian_params()) {
        for (std::size_t j = 0; j < y_axis.size(); ++j)
            for (std::size_t i = 0; i < x_axis.size(); ++i)
                map.values[j * x_axis.size() + i] = density.amplitude() * eval_gaussian_density(*p, {x_axis[i], y_axis[j], 0.0});
        return map;
    }
    const auto& g = *density.grid();
    auto index_of = [](double v, double o, double h, std::size_t n) {
        const double f = std::round((v - o) / h);
        return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(n - 1)));
    };
    const std::size_t kz = index_of(0.0, g.origin().z, g.spacing().z, g.dims()[2]);
    for (std::size_t j = 0; j < y_axis.size(); ++j)
        for (std::size_t i = 0; i < x_axis.size(); ++i)
            map.values[j * x_axis.size() + i] = g.at(index_of(x_axis[i], g.origin().x, g.spacing().x, g.dims()[0]),
                                                     index_of(y_axis[j], g.origin().y, g.spacing().y, g.dims()[1]), kz);
    return map;
}

ProfileCut profile_cut(const CurrentMap2D& map, CutAxis axis, double offset, Diagnostics* diag) {
    if (map.values.empty() || map.x.empty() || map.y.empty()) throw ConfigError("profile_cut: empty map");
    const auto& across = axis == CutAxis::X ? map.y : map.x;
    const auto& along = axis == CutAxis::X ? map.x : map.y;
    const std::size_t line = nearest(across, offset);
    const double step = across.size() > 1 ? (across.back() - across.front()) / static_cast<double>(across.size() - 1) : 1.0;
    if (std::abs(across[line] - offset) > 1e-9 * std::abs(step)) {
        std::ostringstream os;
        os << "cut offset " << units::bohr_to_nm(offset) << " nm snapped to grid line at "
           << units::bohr_to_nm(across[line]) << " nm";
        warn(diag, "profile_cut", os.str());
    }
    ProfileCut cut;
    cut.offset = across[line];
    cut.coordinate = along;
    cut.value.resize(along.size());
    for (std::size_t i = 0; i < along.size(); ++i)
        cut.value[i] = axis == CutAxis::X ? map.at(i, line) : map.at(line, i);
    double peak = 0.0;
    for (double v : cut.value) peak = std::max(peak, std::abs(v));
    if (peak > 0.0)
        for (double& v : cut.value) v /= peak;
    return cut;
}

}  // namespace stml
