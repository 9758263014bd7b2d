#include "stml/density.hpp"

#include <cmath>
#include <sstream>

#include "stml/error.hpp"
#include "stml/units.hpp"

namespace stml {

GaussianDensityParams GaussianDensityParams::from_nm(double sigma_nm, double sigma1_nm, double sigma2_nm) {
    GaussianDensityParams p{units::nm_to_bohr(sigma_nm), units::nm_to_bohr(sigma1_nm), units::nm_to_bohr(sigma2_nm)};
    p.validate();
    return p;
}

void GaussianDensityParams::validate() const {
    if (!(sigma > 0.0 && sigma1 > 0.0 && sigma2 > 0.0) || !std::isfinite(sigma) || !std::isfinite(sigma1) ||
        !std::isfinite(sigma2))
        throw ConfigError("gaussian density widths must be finite and strictly positive");
    if (sigma1 == sigma2) throw ConfigError("gaussian density with sigma1 == sigma2 vanishes identically");
}

double eval_gaussian_density(const GaussianDensityParams& p, const Vec3& point) {
    if (!all_finite(point)) throw DomainError("density evaluation point must be finite");
    const double x2 = point.x * point.x;
    const double lobes = std::exp(-x2 / (2.0 * p.sigma1 * p.sigma1)) / p.sigma1 -
                         std::exp(-x2 / (2.0 * p.sigma2 * p.sigma2)) / p.sigma2;
    return lobes * std::exp(-point.y * point.y / (2.0 * p.sigma * p.sigma)) / (2.0 * units::pi * p.sigma);
}

TransitionDensity::TransitionDensity(std::variant<GaussianDensityParams, ScalarGrid3D> form, double gap,
                                     std::string label, double amplitude)
    : form_(std::move(form)), energy_gap_(gap), label_(std::move(label)), amplitude_(amplitude) {
    if (!(energy_gap_ > 0.0) || !std::isfinite(energy_gap_))
        throw ConfigError("transition energy gap must be positive");
}

TransitionDensity TransitionDensity::gaussian(const GaussianDensityParams& params, double energy_gap,
                                              std::string label) {
    params.validate();
    return TransitionDensity(params, energy_gap, std::move(label), 1.0);
}

TransitionDensity TransitionDensity::gridded(ScalarGrid3D grid, double energy_gap, std::string label,
                                             double neutrality_tol) {
    if (!is_neutral(grid, neutrality_tol)) {
        std::ostringstream os;
        os << "transition density '" << label << "' is not charge neutral: total charge " << total_charge(grid)
           << " exceeds tolerance " << neutrality_tol << " (relative)";
        throw DomainError(os.str());
    }
    return TransitionDensity(std::move(grid), energy_gap, std::move(label), 1.0);
}

TransitionDensity TransitionDensity::scaled(double c) const {
    if (const auto* g = grid()) return TransitionDensity(g->scaled(c), energy_gap_, label_, 1.0);
    return TransitionDensity(form_, energy_gap_, label_, amplitude_ * c);
}

ScalarGrid3D rasterize(const TransitionDensity& density, const GridSpec& spec, Diagnostics* diag) {
    spec.validate();
    if (const auto* g = density.grid()) return embed(*g, spec);

    const auto& p = *density.gaussian_params();
    const double dz = spec.spacing.z;
    const double kf = -spec.origin.z / dz;
    const double kr = std::round(kf);
    if (kr < 0.0 || kr > static_cast<double>(spec.dims[2] - 1) || std::abs(kf - kr) > 0.5)
        throw ConfigError("rasterize: the z = 0 molecular plane lies outside the grid by more than half a spacing");
    const double offset = (kf - kr) * dz;
    if (std::abs(offset) > 1e-9 * dz) {
        std::ostringstream os;
        os << "molecular plane deposited on grid plane at z = " << -offset << " Bohr (not aligned with z = 0)";
        warn(diag, "rasterize:" + density.label(), os.str());
    }
    const auto kplane = static_cast<std::size_t>(kr);
    const double weight = density.amplitude() / dz;
    std::vector<double> v(spec.size(), 0.0);
    for (std::size_t i = 0; i < spec.dims[0]; ++i)
        for (std::size_t j = 0; j < spec.dims[1]; ++j) {
            const Vec3 r = spec.node(i, j, kplane);
            v[(i * spec.dims[1] + j) * spec.dims[2] + kplane] = weight * eval_gaussian_density(p, {r.x, r.y, 0.0});
        }
    return ScalarGrid3D(spec, std::move(v));
}

Vec3 transition_dipole(const ScalarGrid3D& grid) {
    CompensatedSum sx, sy, sz;
    const auto& d = grid.dims();
    for (std::size_t i = 0; i < d[0]; ++i)
        for (std::size_t j = 0; j < d[1]; ++j)
            for (std::size_t k = 0; k < d[2]; ++k) {
                const double v = grid.at(i, j, k);
                if (v == 0.0) continue;
                const Vec3 r = grid.node(i, j, k);
                sx.add(v * r.x);
                sy.add(v * r.y);
                sz.add(v * r.z);
            }
    const double dv = grid.cell_volume();
    return {sx.value() * dv, sy.value() * dv, sz.value() * dv};
}

Vec3 transition_dipole(const TransitionDensity& density) {
    if (const auto* g = density.grid()) return transition_dipole(*g);
    // Even in x and y, confined to z = 0: every first moment vanishes.
    return {0.0, 0.0, 0.0};
}

double total_charge(const ScalarGrid3D& grid) {
    CompensatedSum s;
    for (double v : grid.values()) s.add(v);
    return s.value() * grid.cell_volume();
}

double total_charge(const TransitionDensity& density) {
    if (const auto* g = density.grid()) return total_charge(*g);
    // Both x-lobes carry unit weight: sqrt(2 pi) s_i / s_i each.
    return 0.0;
}

bool is_neutral(const ScalarGrid3D& grid, double tol) {
    const double bound = tol * grid.max_abs() * grid.cell_volume() * static_cast<double>(grid.size());
    return std::abs(total_charge(grid)) <= bound;
}

}  // namespace stml
