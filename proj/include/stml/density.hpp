#pragma once

#include <string>
#include <variant>

#include "stml/diagnostics.hpp"
#include "stml/grid.hpp"
#include "stml/vec.hpp"

namespace stml {

/// Widths (Bohr) of the planar dark-state model density
///   rho(x, y) = 1/(2 pi s) [ e^{-x^2/2s1^2}/s1 - e^{-x^2/2s2^2}/s2 ] e^{-y^2/2s^2} delta(z).
struct GaussianDensityParams {
    double sigma = 0.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;

    static GaussianDensityParams from_nm(double sigma_nm, double sigma1_nm, double sigma2_nm);
    /// Throws ConfigError unless all widths are positive and sigma1 != sigma2.
    void validate() const;
};

/// In-plane factor of the model density at (x, y); the delta(z) factor is
/// carried separately, so z is ignored. Units: Bohr^-2.
double eval_gaussian_density(const GaussianDensityParams& params, const Vec3& point);

inline constexpr double default_neutrality_tolerance = 1e-6;

/// Transition density of one molecular transition, analytic or gridded, with
/// its energy gap (Hartree).
class TransitionDensity {
public:
    static TransitionDensity gaussian(const GaussianDensityParams& params, double energy_gap,
                                      std::string label = "gaussian");
    /// Throws DomainError if the grid is not charge neutral within `neutrality_tol`
    /// (relative to max|rho| x cell volume x point count).
    static TransitionDensity gridded(ScalarGrid3D grid, double energy_gap, std::string label = "grid",
                                     double neutrality_tol = default_neutrality_tolerance);

    bool is_analytic() const { return std::holds_alternative<GaussianDensityParams>(form_); }
    const GaussianDensityParams* gaussian_params() const { return std::get_if<GaussianDensityParams>(&form_); }
    const ScalarGrid3D* grid() const { return std::get_if<ScalarGrid3D>(&form_); }

    double energy_gap() const { return energy_gap_; }
    const std::string& label() const { return label_; }
    double amplitude() const { return amplitude_; }

    /// Same transition with the density multiplied by c.
    TransitionDensity scaled(double c) const;

private:
    TransitionDensity(std::variant<GaussianDensityParams, ScalarGrid3D> form, double gap, std::string label,
                      double amplitude);

    std::variant<GaussianDensityParams, ScalarGrid3D> form_;
    double energy_gap_;
    std::string label_;
    double amplitude_ = 1.0;  // analytic form only; gridded values are scaled in place
};

/// Samples the density on `spec`. The analytic planar delta is deposited on the
/// grid plane nearest z = 0 with weight 1/dz; a misalignment over half a
/// spacing (z = 0 outside the lattice) is a ConfigError, smaller offsets warn.
/// Gridded densities are embedded into a commensurate `spec`.
ScalarGrid3D rasterize(const TransitionDensity& density, const GridSpec& spec, Diagnostics* diag = nullptr);

/// First moment (e*Bohr). Closed form for the analytic model, midpoint sum otherwise.
Vec3 transition_dipole(const TransitionDensity& density);
Vec3 transition_dipole(const ScalarGrid3D& grid);

double total_charge(const TransitionDensity& density);
double total_charge(const ScalarGrid3D& grid);

/// |Q| <= tol * max|rho| * dV * N
bool is_neutral(const ScalarGrid3D& grid, double tol = default_neutrality_tolerance);

}  // namespace stml
