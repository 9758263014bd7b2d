#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "stml/density.hpp"
#include "stml/diagnostics.hpp"
#include "stml/electrodes.hpp"
#include "stml/grid.hpp"

namespace stml {

/// Average of 1/|r| over one lattice cell centred at the origin (Bohr^-1).
/// This is the diagonal (self-cell) entry of the discrete Coulomb kernel.
double cell_coulomb_average(const Vec3& spacing);

/// Electrostatic potential (Hartree per unit charge) of `source` on its own grid:
///   phi(r) = dV sum_{r'} K(r - r') rho(r'),  K = 1/|r| off-diagonal, cell average on it.
/// Evaluated spectrally on a zero-padded lattice of at least twice the grid
/// extent per axis, so the convolution is free-space (no periodic images).
/// Warns when the source is not charge neutral within `neutrality_tol`.
ScalarGrid3D coulomb_potential(const ScalarGrid3D& source, Diagnostics* diag = nullptr,
                               double neutrality_tol = default_neutrality_tolerance);

/// Electron-molecule transition matrix element (Hartree, e^2 = 1).
struct MatrixElement {
    double value = 0.0;
    double imag_residue = 0.0;  // |Im| of the spectral sum; zero for real-space routes
    std::string transition;
    double substrate_energy = 0.0;
    double tip_energy = 0.0;
    Vec2 tip;
};

/// Spectral route: N = sum_q dVq rho_T(q) rho_pair(-q) K(q), where K(q) is the
/// transform of the discrete Coulomb kernel (the lattice form of 4 pi / q^2).
/// Grids must share spacing and be offset by whole cells.
MatrixElement matrix_element(const TransitionDensity& transition, const PairDensity& pair,
                             Diagnostics* diag = nullptr);

/// Same sum for two plain grids (exchange symmetric).
double coulomb_interaction(const ScalarGrid3D& a, const ScalarGrid3D& b);

inline constexpr std::size_t default_direct_point_cap = 40 * 40 * 40;

/// Brute-force oracle: dV^2 sum_{r, r'} rho_T(r) K(r - r') rho_pair(r'), with
/// 1/|r - r'| evaluated pointwise. Refuses grids with more than `max_points` nodes.
MatrixElement matrix_element_direct(const TransitionDensity& transition, const PairDensity& pair,
                                    std::size_t max_points = default_direct_point_cap);
double coulomb_interaction_direct(const ScalarGrid3D& a, const ScalarGrid3D& b,
                                  std::size_t max_points = default_direct_point_cap);

/// dV sum_r phi(r) rho(r) for fields on the same lattice.
double potential_overlap(const ScalarGrid3D& potential, const ScalarGrid3D& density);

/// One pair of electrode state energies (Hartree) entering a matrix element.
struct StateEnergies {
    double substrate = 0.0;
    double tip = 0.0;
};

/// Matrix elements of one transition density on a fixed simulation lattice.
/// The transition potential is computed once at construction; each
/// evaluation streams the analytic pair density through it without
/// materialising the pair grid. Immutable and safe to share across threads.
class ChannelCoupling {
public:
    ChannelCoupling(const TransitionDensity& transition, const GridSpec& domain, Diagnostics* diag = nullptr);

    /// Matrix elements for every entry of `energies` at one tip position, in order.
    std::vector<double> evaluate(const ElectrodeModel& model, Vec2 tip, std::span<const StateEnergies> energies) const;
    double evaluate(const ElectrodeModel& model, Vec2 tip, StateEnergies energies) const;

    const GridSpec& domain() const { return potential_.spec(); }
    const ScalarGrid3D& potential() const { return potential_; }
    const ScalarGrid3D& density() const { return density_; }
    const std::string& label() const { return label_; }

    /// Throws ConfigError unless the lattice spans the electrode gap
    /// [z_s, d + R] and contains the tip's lateral position.
    void check_coverage(const ElectrodeModel& model, Vec2 tip) const;

private:
    std::string label_;
    ScalarGrid3D density_;
    ScalarGrid3D potential_;
};

}  // namespace stml
