#pragma once

#include "stml/diagnostics.hpp"
#include "stml/grid.hpp"
#include "stml/vec.hpp"

namespace stml {

/// Tip/substrate geometry and electronic constants, in atomic units.
///
/// The tip is a sphere of radius `tip_radius` whose apex sits `tip_height`
/// above the molecular plane z = 0 (centre at z = tip_height + tip_radius).
/// The substrate surface is the plane z = `substrate_z` <= 0. Energies are
/// measured from the vacuum level.
struct ElectrodeModel {
    double fermi_energy = 0.0;
    double tip_radius = 0.0;
    double tip_height = 0.0;
    double substrate_z = 0.0;
    double dos_tip = 1.0;
    double dos_substrate = 1.0;

    /// Silver electrodes, mu0 = -4.64 eV, R = 0.5 nm, d = 1 nm, z_s = -0.3 nm.
    static ElectrodeModel defaults();
    static ElectrodeModel from_ev_nm(double fermi_ev, double tip_radius_nm, double tip_height_nm,
                                     double substrate_z_nm, double dos_tip = 1.0, double dos_substrate = 1.0);

    void validate() const;
    Vec3 tip_center(Vec2 tip) const { return {tip.x, tip.y, tip_height + tip_radius}; }
};

/// Applied bias in volts. Electrons carry charge e = 1, so the tip levels
/// shift by `volts / 27.211386` Hartree.
struct Bias {
    double volts = 0.0;
    double energy() const;
};

/// Lattice nodes that sit on an electrode surface in exact arithmetic must not
/// be sorted in or out by rounding, or mirror-image tip positions would see
/// different point sets. Surfaces therefore carry a small tolerance.
inline constexpr double surface_tolerance = 1e-9;

/// Strictly inside the tip sphere (distance s from its centre, radius R).
inline bool inside_tip(double s, double radius) { return s < radius * (1.0 - surface_tolerance); }
/// Strictly below the substrate plane.
inline bool below_substrate(double z, double substrate_z) { return z < substrate_z - surface_tolerance; }

/// Vacuum decay constant sqrt(2|E|) (Bohr^-1) for a bound energy E < 0 (Hartree).
/// Throws DomainError for E >= 0.
double decay_constant(double energy);

struct Amplitude {
    double value = 0.0;
    bool clamped = false;  // point was inside the electrode; surface value returned
};

/// s-wave tip state e^{-kappa (s - R)} R / s, s = distance to the sphere centre.
Amplitude tip_wavefunction(const ElectrodeModel& model, double state_energy, Vec2 tip, const Vec3& point);

/// Laterally uniform evanescent substrate state e^{-kappa (z - z_s)}.
Amplitude substrate_wavefunction(const ElectrodeModel& model, double state_energy, const Vec3& point);

/// phi_k(r) phi_n(r) for one substrate state E_n, one tip state xi_k and one
/// tip position; zero inside the tip sphere and below the substrate surface.
struct PairDensity {
    ScalarGrid3D grid;
    double substrate_energy = 0.0;
    double tip_energy = 0.0;
    Vec2 tip;
};

PairDensity pair_density(const ElectrodeModel& model, double substrate_energy, double tip_energy, Vec2 tip,
                         const GridSpec& spec, Diagnostics* diag = nullptr);

}  // namespace stml
