#include "stml/current.hpp"

#include <algorithm>
#include <cmath>

#include "parallel.hpp"
#include "stml/error.hpp"
#include "stml/units.hpp"

namespace stml {

namespace {

// Node indices [lo, hi] of the lattice along one axis covering [a, b] plus the existing range.
void extend_axis(double origin, double h, std::size_t n, double a, double b, long& lo, long& hi) {
    lo = std::min(0L, static_cast<long>(std::floor((a - origin) / h + 1e-9)));
    hi = std::max(static_cast<long>(n) - 1, static_cast<long>(std::ceil((b - origin) / h - 1e-9)));
}

}  // namespace

GridSpec channel_domain(const TransitionDensity& density, const ElectrodeModel& model, const DomainOptions& options) {
    model.validate();
    const double lateral = options.lateral_half_extent;
    const double z_lo = model.substrate_z;
    const double z_hi = model.tip_height + model.tip_radius;
    if (!(lateral > 0.0)) throw ConfigError("lateral half extent must be positive");

    if (density.is_analytic()) {
        const double h = options.spacing;
        if (!(h > 0.0)) throw ConfigError("domain spacing must be positive");
        const auto half = static_cast<long>(std::ceil(lateral / h - 1e-9));
        const auto kz_lo = static_cast<long>(std::floor(z_lo / h + 1e-9));
        const auto kz_hi = static_cast<long>(std::ceil(z_hi / h - 1e-9));
        GridSpec s;
        s.spacing = {h, h, h};
        s.origin = {-static_cast<double>(half) * h, -static_cast<double>(half) * h, static_cast<double>(kz_lo) * h};
        s.dims = {static_cast<std::size_t>(2 * half + 1), static_cast<std::size_t>(2 * half + 1),
                  static_cast<std::size_t>(std::max(kz_hi - kz_lo + 1, 2L))};
        return s;
    }

    const GridSpec g = options.coarsen > 1 ? coarsen(*density.grid(), options.coarsen).spec() : density.grid()->spec();
    long lo[3], hi[3];
    extend_axis(g.origin.x, g.spacing.x, g.dims[0], -lateral, lateral, lo[0], hi[0]);
    extend_axis(g.origin.y, g.spacing.y, g.dims[1], -lateral, lateral, lo[1], hi[1]);
    extend_axis(g.origin.z, g.spacing.z, g.dims[2], z_lo, z_hi, lo[2], hi[2]);
    GridSpec s = g;
    s.origin = {g.origin.x + static_cast<double>(lo[0]) * g.spacing.x, g.origin.y + static_cast<double>(lo[1]) * g.spacing.y,
                g.origin.z + static_cast<double>(lo[2]) * g.spacing.z};
    for (std::size_t a = 0; a < 3; ++a) s.dims[a] = static_cast<std::size_t>(hi[a] - lo[a] + 1);
    return s;
}

namespace {
TransitionDensity prepared(const TransitionDensity& density, const DomainOptions& options) {
    if (density.is_analytic() || options.coarsen <= 1) return density;
    return TransitionDensity::gridded(coarsen(*density.grid(), options.coarsen), density.energy_gap(), density.label(),
                                      1.0);
}
}  // namespace

TransitionChannel::TransitionChannel(const TransitionDensity& density, const ElectrodeModel& model,
                                     const DomainOptions& options, Diagnostics* diag)
    : energy_gap_(density.energy_gap()),
      coupling_(std::make_shared<const ChannelCoupling>(prepared(density, options),
                                                        channel_domain(density, model, options), diag)) {}

std::vector<StateEnergies> inelastic_window(double fermi_energy, double energy_gap, Bias bias, int n) {
    const double ev = bias.energy();
    double lo = 0.0, hi = 0.0, shift = 0.0;
    if (ev < 0.0) {
        lo = fermi_energy + ev + energy_gap;
        hi = fermi_energy;
        shift = -ev - energy_gap;
        if (!(-ev - energy_gap > 0.0)) return {};
    } else if (ev > 0.0) {
        lo = fermi_energy;
        hi = fermi_energy + ev - energy_gap;
        shift = -ev + energy_gap;
        if (!(ev - energy_gap > 0.0)) return {};
    } else {
        return {};
    }
    if (n < 2) throw ConfigError("energy quadrature needs at least 2 nodes for a nonempty window");
    std::vector<StateEnergies> nodes(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        const double en = i == n - 1 ? hi : lo + (hi - lo) * t;
        nodes[static_cast<std::size_t>(i)] = {en, en + shift};
    }
    return nodes;
}

namespace {

double window_current(const TransitionChannel& channel, const ElectrodeModel& model, Bias bias, Vec2 tip, int n) {
    const auto nodes = inelastic_window(model.fermi_energy, channel.energy_gap(), bias, n);
    if (nodes.empty()) return 0.0;
    const auto elements = channel.coupling().evaluate(model, tip, nodes);
    const double step = (nodes.back().substrate - nodes.front().substrate) / static_cast<double>(n - 1);
    CompensatedSum s;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        const double w = (i == 0 || i + 1 == elements.size()) ? 0.5 : 1.0;
        s.add(w * elements[i] * elements[i]);
    }
    return 2.0 * units::pi * model.dos_substrate * model.dos_tip * step * s.value();
}

}  // namespace

double inelastic_current_negative(const TransitionChannel& channel, const ElectrodeModel& model, Bias bias, Vec2 tip,
                                  int n_energy) {
    if (!(bias.volts < 0.0)) throw ConfigError("inelastic_current_negative needs a negative bias");
    return window_current(channel, model, bias, tip, n_energy);
}

double inelastic_current_positive(const TransitionChannel& channel, const ElectrodeModel& model, Bias bias, Vec2 tip,
                                  int n_energy) {
    if (!(bias.volts > 0.0)) throw ConfigError("inelastic_current_positive needs a positive bias");
    return window_current(channel, model, bias, tip, n_energy);
}

CurrentResult total_inelastic_current(std::span<const TransitionChannel> channels, const ElectrodeModel& model,
                                      Bias bias, Vec2 tip, int n_energy) {
    if (channels.empty()) throw ConfigError("at least one transition channel is required");
    if (!std::isfinite(bias.volts)) throw ConfigError("bias must be finite");
    CurrentResult r;
    r.bias = bias;
    r.tip = tip;
    r.n_energy = n_energy;
    r.per_channel.reserve(channels.size());
    CompensatedSum total;
    for (const auto& ch : channels) {
        const double i = bias.volts == 0.0 ? 0.0 : window_current(ch, model, bias, tip, n_energy);
        r.per_channel.push_back(i);
        total.add(i);
    }
    r.total = total.value();
    return r;
}

BiasCurve bias_sweep(std::span<const TransitionChannel> channels, const ElectrodeModel& model,
                     std::span<const double> biases_volts, Vec2 tip, int n_energy, unsigned threads) {
    if (channels.empty()) throw ConfigError("at least one transition channel is required");
    BiasCurve curve;
    curve.bias_volts.assign(biases_volts.begin(), biases_volts.end());
    curve.current.assign(biases_volts.size(), 0.0);
    for (double v : curve.bias_volts)
        if (!std::isfinite(v)) throw ConfigError("bias values must be finite");
    detail::parallel_for(biases_volts.size(), threads, [&](std::size_t i) {
        curve.current[i] = total_inelastic_current(channels, model, Bias{biases_volts[i]}, tip, n_energy).total;
    });
    return curve;
}

std::vector<double> bias_range(double start, double stop, double step) {
    if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start)
        throw ConfigError("bias range needs finite start <= stop and a positive step");
    const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-6));
    std::vector<double> v;
    v.reserve(static_cast<std::size_t>(n + 1));
    for (long i = 0; i <= n; ++i) v.push_back(std::round((start + static_cast<double>(i) * step) * 1e9) / 1e9);
    return v;
}

}  // namespace stml
