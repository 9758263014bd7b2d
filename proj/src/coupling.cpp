#include "stml/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "fft.hpp"
#include "stml/error.hpp"
#include "stml/spectral.hpp"

namespace stml {

namespace {

// Integral of 1/r over the box [0,a] x [0,b] x [0,c].
double corner_box_integral(double a, double b, double c) {
    const double r = std::sqrt(a * a + b * b + c * c);
    return b * c * std::log((a + r) / std::hypot(b, c)) + a * c * std::log((b + r) / std::hypot(a, c)) +
           a * b * std::log((c + r) / std::hypot(a, b)) - 0.5 * a * a * std::atan(b * c / (a * r)) -
           0.5 * b * b * std::atan(a * c / (b * r)) - 0.5 * c * c * std::atan(a * b / (c * r));
}

Dims padded_dims(const Dims& support) {
    Dims m{};
    for (std::size_t a = 0; a < 3; ++a) m[a] = next_transform_size(2 * support[a]);
    return m;
}

// Signed lattice offset represented by index m of a cyclic axis of length
// `period` whose convolution support has length `support`; unused slots give 0
// and are flagged through `used`.
long kernel_offset(std::size_t m, std::size_t support, std::size_t period, bool& used) {
    used = true;
    if (m < support) return static_cast<long>(m);
    if (m > period - support) return static_cast<long>(m) - static_cast<long>(period);
    used = false;
    return 0;
}

// Unnormalized DFT of the discrete Coulomb kernel on the padded lattice.
std::vector<std::complex<double>> kernel_spectrum_raw(const Dims& padded, const Dims& support, const Vec3& h) {
    std::vector<std::complex<double>> k(padded[0] * padded[1] * padded[2], 0.0);
    const double self = cell_coulomb_average(h);
    for (std::size_t i = 0; i < padded[0]; ++i) {
        bool ui = false;
        const double dx = static_cast<double>(kernel_offset(i, support[0], padded[0], ui)) * h.x;
        if (!ui) continue;
        for (std::size_t j = 0; j < padded[1]; ++j) {
            bool uj = false;
            const double dy = static_cast<double>(kernel_offset(j, support[1], padded[1], uj)) * h.y;
            if (!uj) continue;
            for (std::size_t l = 0; l < padded[2]; ++l) {
                bool ul = false;
                const double dz = static_cast<double>(kernel_offset(l, support[2], padded[2], ul)) * h.z;
                if (!ul) continue;
                const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
                k[(i * padded[1] + j) * padded[2] + l] = (i == 0 && j == 0 && l == 0) ? self : 1.0 / r;
            }
        }
    }
    detail::fft3d(k, padded, detail::FftSign::Positive);
    return k;
}

void check_neutral(const ScalarGrid3D& source, double tol, Diagnostics* diag, const std::string& who) {
    if (!is_neutral(source, tol)) {
        std::ostringstream os;
        os << "source is not charge neutral (total charge " << total_charge(source)
           << "); the monopole term dominates the far field";
        warn(diag, who, os.str());
    }
}

}  // namespace

double cell_coulomb_average(const Vec3& h) {
    if (!(h.x > 0.0 && h.y > 0.0 && h.z > 0.0)) throw ConfigError("cell spacing must be positive");
    return 8.0 * corner_box_integral(0.5 * h.x, 0.5 * h.y, 0.5 * h.z) / (h.x * h.y * h.z);
}

ScalarGrid3D coulomb_potential(const ScalarGrid3D& source, Diagnostics* diag, double neutrality_tol) {
    check_neutral(source, neutrality_tol, diag, "coulomb_potential");
    const Dims& n = source.dims();
    const Dims m = padded_dims(n);
    GridSpec padded = source.spec();
    padded.dims = m;

    std::vector<std::complex<double>> rho(padded.size(), 0.0);
    for (std::size_t i = 0; i < n[0]; ++i)
        for (std::size_t j = 0; j < n[1]; ++j)
            for (std::size_t k = 0; k < n[2]; ++k) rho[(i * m[1] + j) * m[2] + k] = source.at(i, j, k);
    detail::fft3d(rho, m, detail::FftSign::Positive);
    const auto kern = kernel_spectrum_raw(m, n, source.spacing());
    for (std::size_t q = 0; q < rho.size(); ++q) rho[q] *= kern[q];
    detail::fft3d(rho, m, detail::FftSign::Negative);

    const double scale = source.cell_volume() / static_cast<double>(padded.size());
    std::vector<double> phi(source.size());
    for (std::size_t i = 0; i < n[0]; ++i)
        for (std::size_t j = 0; j < n[1]; ++j)
            for (std::size_t k = 0; k < n[2]; ++k)
                phi[source.index(i, j, k)] = rho[(i * m[1] + j) * m[2] + k].real() * scale;
    return ScalarGrid3D(source.spec(), std::move(phi));
}

namespace {

std::complex<double> spectral_sum(const ScalarGrid3D& a, const ScalarGrid3D& b) {
    const GridSpec frame = bounding_spec(a.spec(), b.spec());
    GridSpec padded = frame;
    padded.dims = padded_dims(frame.dims);
    const SpectralField fa = fourier_transform(embed(a, padded));
    const SpectralField fb = fourier_transform(embed(b, padded));
    // Lattice analogue of 4 pi / q^2: dV * DFT(K).
    auto kern = kernel_spectrum_raw(padded.dims, frame.dims, frame.spacing);
    const double dv = frame.cell_volume();

    CompensatedSum re, im;
    const auto& d = padded.dims;
    for (std::size_t i = 0; i < d[0]; ++i)
        for (std::size_t j = 0; j < d[1]; ++j)
            for (std::size_t k = 0; k < d[2]; ++k) {
                const std::size_t q = fa.index(i, j, k);
                const auto term = fa.values[q] * fb.values[fa.negated_index(i, j, k)] * (kern[q].real() * dv);
                re.add(term.real());
                im.add(term.imag());
            }
    const double dvq = fa.dvq();
    return {re.value() * dvq, im.value() * dvq};
}

ScalarGrid3D transition_on_lattice(const TransitionDensity& t, const GridSpec& lattice, Diagnostics* diag) {
    if (const auto* g = t.grid()) {
        if (!commensurate(g->spec(), lattice))
            throw ConfigError("transition density and pair density grids are incommensurate");
        return *g;
    }
    return rasterize(t, lattice, diag);
}

}  // namespace

double coulomb_interaction(const ScalarGrid3D& a, const ScalarGrid3D& b) {
    if (!commensurate(a.spec(), b.spec())) throw ConfigError("coulomb_interaction: incommensurate grids");
    return spectral_sum(a, b).real();
}

MatrixElement matrix_element(const TransitionDensity& transition, const PairDensity& pair, Diagnostics* diag) {
    const ScalarGrid3D rho_t = transition_on_lattice(transition, pair.grid.spec(), diag);
    check_neutral(rho_t, default_neutrality_tolerance, diag, "matrix_element:" + transition.label());
    const auto n = spectral_sum(rho_t, pair.grid);
    return {n.real(), std::abs(n.imag()), transition.label(), pair.substrate_energy, pair.tip_energy, pair.tip};
}

double coulomb_interaction_direct(const ScalarGrid3D& a, const ScalarGrid3D& b, std::size_t max_points) {
    if (a.size() > max_points || b.size() > max_points) {
        std::ostringstream os;
        os << "direct Coulomb sum refused: grids hold " << a.size() << " and " << b.size()
           << " points, cap is " << max_points;
        throw ConfigError(os.str());
    }
    if (!commensurate(a.spec(), b.spec())) throw ConfigError("direct Coulomb sum: incommensurate grids");
    const double self = cell_coulomb_average(a.spacing());
    const double same = 1e-6 * std::min({a.spacing().x, a.spacing().y, a.spacing().z});

    struct Charge {
        Vec3 r;
        double q;
    };
    auto nonzero = [](const ScalarGrid3D& g) {
        std::vector<Charge> out;
        const auto& d = g.dims();
        for (std::size_t i = 0; i < d[0]; ++i)
            for (std::size_t j = 0; j < d[1]; ++j)
                for (std::size_t k = 0; k < d[2]; ++k)
                    if (const double v = g.at(i, j, k); v != 0.0) out.push_back({g.node(i, j, k), v});
        return out;
    };
    const auto ca = nonzero(a);
    const auto cb = nonzero(b);

    CompensatedSum total;
    for (const auto& p : ca) {
        double inner = 0.0;
        for (const auto& s : cb) {
            const double dx = p.r.x - s.r.x, dy = p.r.y - s.r.y, dz = p.r.z - s.r.z;
            const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
            inner += s.q * (dist < same ? self : 1.0 / dist);
        }
        total.add(p.q * inner);
    }
    const double dv = a.cell_volume();
    return total.value() * dv * dv;
}

MatrixElement matrix_element_direct(const TransitionDensity& transition, const PairDensity& pair,
                                    std::size_t max_points) {
    const ScalarGrid3D rho_t = transition_on_lattice(transition, pair.grid.spec(), nullptr);
    const double n = coulomb_interaction_direct(rho_t, pair.grid, max_points);
    return {n, 0.0, transition.label(), pair.substrate_energy, pair.tip_energy, pair.tip};
}

double potential_overlap(const ScalarGrid3D& potential, const ScalarGrid3D& density) {
    const auto& a = potential.spec();
    const auto& b = density.spec();
    if (a.dims != b.dims || !commensurate(a, b) || norm(a.origin - b.origin) > 1e-9 * norm(a.spacing))
        throw ConfigError("potential_overlap: fields must share one lattice");
    CompensatedSum s;
    const auto pv = potential.values();
    const auto dv = density.values();
    for (std::size_t n = 0; n < pv.size(); ++n) s.add(pv[n] * dv[n]);
    return s.value() * potential.cell_volume();
}

ChannelCoupling::ChannelCoupling(const TransitionDensity& transition, const GridSpec& domain, Diagnostics* diag)
    : label_(transition.label()),
      density_(rasterize(transition, domain, diag)),
      potential_(coulomb_potential(density_, diag)) {}

void ChannelCoupling::check_coverage(const ElectrodeModel& model, Vec2 tip) const {
    const auto& s = potential_.spec();
    const Vec3 hi = s.upper();
    const double hz = s.spacing.z;
    if (s.origin.z > model.substrate_z + 0.5 * hz || hi.z < model.tip_height + model.tip_radius - 0.5 * hz)
        throw ConfigError("simulation lattice does not span the electrode gap [z_s, d + R]");
    if (tip.x < s.origin.x || tip.x > hi.x || tip.y < s.origin.y || tip.y > hi.y)
        throw ConfigError("tip position lies outside the simulation lattice");
}

std::vector<double> ChannelCoupling::evaluate(const ElectrodeModel& model, Vec2 tip,
                                              std::span<const StateEnergies> energies) const {
    model.validate();
    check_coverage(model, tip);
    const std::size_t ne = energies.size();
    std::vector<double> kt(ne), ks(ne);
    for (std::size_t e = 0; e < ne; ++e) {
        kt[e] = decay_constant(energies[e].tip);
        ks[e] = decay_constant(energies[e].substrate);
    }
    std::vector<CompensatedSum> acc(ne);
    const Vec3 c = model.tip_center(tip);
    const double radius = model.tip_radius;
    const auto& d = potential_.dims();
    for (std::size_t i = 0; i < d[0]; ++i)
        for (std::size_t j = 0; j < d[1]; ++j)
            for (std::size_t k = 0; k < d[2]; ++k) {
                const Vec3 r = potential_.node(i, j, k);
                if (below_substrate(r.z, model.substrate_z)) continue;
                const double h = std::max(r.z - model.substrate_z, 0.0);
                const double s0 = norm(r - c);
                if (inside_tip(s0, radius)) continue;
                const double s = std::max(s0, radius);
                const double g = potential_.at(i, j, k) * radius / s;
                const double a = s - radius;
                for (std::size_t e = 0; e < ne; ++e) acc[e].add(g * std::exp(-kt[e] * a - ks[e] * h));
            }
    std::vector<double> out(ne);
    const double dv = potential_.cell_volume();
    for (std::size_t e = 0; e < ne; ++e) out[e] = acc[e].value() * dv;
    return out;
}

double ChannelCoupling::evaluate(const ElectrodeModel& model, Vec2 tip, StateEnergies energies) const {
    return evaluate(model, tip, std::span<const StateEnergies>(&energies, 1)).front();
}

}  // namespace stml
