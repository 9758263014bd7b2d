#include "stml/electrodes.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stml/error.hpp"
#include "stml/units.hpp"

namespace stml {

ElectrodeModel ElectrodeModel::defaults() { return from_ev_nm(-4.64, 0.5, 1.0, -0.3); }

ElectrodeModel ElectrodeModel::from_ev_nm(double fermi_ev, double tip_radius_nm, double tip_height_nm,
                                          double substrate_z_nm, double dos_tip, double dos_substrate) {
    ElectrodeModel m{units::ev_to_hartree(fermi_ev), units::nm_to_bohr(tip_radius_nm), units::nm_to_bohr(tip_height_nm),
                     units::nm_to_bohr(substrate_z_nm), dos_tip, dos_substrate};
    m.validate();
    return m;
}

void ElectrodeModel::validate() const {
    auto fin = [](double v) { return std::isfinite(v); };
    if (!fin(fermi_energy) || !(fermi_energy < 0.0))
        throw ConfigError("electrode Fermi energy must be negative (bound states below vacuum)");
    if (!fin(tip_radius) || !(tip_radius > 0.0)) throw ConfigError("tip radius must be positive");
    if (!fin(tip_height) || !(tip_height > 0.0)) throw ConfigError("tip height must be positive");
    if (!fin(substrate_z) || substrate_z > 0.0) throw ConfigError("substrate plane must satisfy z_s <= 0");
    if (!fin(dos_tip) || !(dos_tip > 0.0) || !fin(dos_substrate) || !(dos_substrate > 0.0))
        throw ConfigError("densities of states must be positive");
}

double Bias::energy() const { return units::ev_to_hartree(volts); }

double decay_constant(double energy) {
    if (!(energy < 0.0) || !std::isfinite(energy)) {
        std::ostringstream os;
        os << "decay constant needs a bound energy below vacuum, got " << units::hartree_to_ev(energy) << " eV";
        throw DomainError(os.str());
    }
    return std::sqrt(-2.0 * energy);
}

Amplitude tip_wavefunction(const ElectrodeModel& model, double state_energy, Vec2 tip, const Vec3& point) {
    const double kappa = decay_constant(state_energy);
    const double s = norm(point - model.tip_center(tip));
    if (inside_tip(s, model.tip_radius)) return {1.0, true};
    const double r = std::max(s, model.tip_radius);
    return {std::exp(-kappa * (r - model.tip_radius)) * model.tip_radius / r, false};
}

Amplitude substrate_wavefunction(const ElectrodeModel& model, double state_energy, const Vec3& point) {
    const double kappa = decay_constant(state_energy);
    if (below_substrate(point.z, model.substrate_z)) return {1.0, true};
    return {std::exp(-kappa * std::max(point.z - model.substrate_z, 0.0)), false};
}

PairDensity pair_density(const ElectrodeModel& model, double substrate_energy, double tip_energy, Vec2 tip,
                         const GridSpec& spec, Diagnostics* diag) {
    model.validate();
    spec.validate();
    const double kt = decay_constant(tip_energy);
    const double ks = decay_constant(substrate_energy);
    const Vec3 c = model.tip_center(tip);
    std::size_t excluded = 0;
    auto grid = ScalarGrid3D::sample(spec, [&](const Vec3& r) {
        const double s = norm(r - c);
        if (inside_tip(s, model.tip_radius) || below_substrate(r.z, model.substrate_z)) {
            ++excluded;
            return 0.0;
        }
        const double so = std::max(s, model.tip_radius);
        const double h = std::max(r.z - model.substrate_z, 0.0);
        return std::exp(-kt * (so - model.tip_radius) - ks * h) * model.tip_radius / so;
    });
    if (excluded) {
        std::ostringstream os;
        os << excluded << " grid points inside the electrodes were excluded from the pair density";
        warn(diag, "pair_density", os.str());
    }
    return {std::move(grid), substrate_energy, tip_energy, tip};
}

}  // namespace stml
