#include "stml/spectral.hpp"

#include <cmath>

#include "fft.hpp"
#include "stml/error.hpp"
#include "stml/units.hpp"

namespace stml {

namespace {
double frequency(std::size_t m, std::size_t n) {
    const auto mm = static_cast<double>(m);
    return m < (n + 1) / 2 ? mm : mm - static_cast<double>(n);
}
}  // namespace

Vec3 SpectralField::dq() const {
    const auto& s = real_space;
    const double two_pi = 2.0 * units::pi;
    return {two_pi / (static_cast<double>(s.dims[0]) * s.spacing.x),
            two_pi / (static_cast<double>(s.dims[1]) * s.spacing.y),
            two_pi / (static_cast<double>(s.dims[2]) * s.spacing.z)};
}

double SpectralField::dvq() const {
    const Vec3 d = dq();
    return d.x * d.y * d.z;
}

Vec3 SpectralField::wavevector(std::size_t i, std::size_t j, std::size_t k) const {
    const Vec3 d = dq();
    const auto& n = real_space.dims;
    return {d.x * frequency(i, n[0]), d.y * frequency(j, n[1]), d.z * frequency(k, n[2])};
}

std::size_t SpectralField::negated_index(std::size_t i, std::size_t j, std::size_t k) const {
    const auto& n = real_space.dims;
    return index((n[0] - i) % n[0], (n[1] - j) % n[1], (n[2] - k) % n[2]);
}

SpectralField fourier_transform(const ScalarGrid3D& grid) {
    for (auto n : grid.dims())
        if (!is_transform_size(n))
            throw ConfigError("fourier_transform: axis length " + std::to_string(n) +
                              " is not a product of 2, 3, 5 and 7; pad the grid first");
    SpectralField out{grid.spec(), {}};
    out.values.assign(grid.values().begin(), grid.values().end());
    detail::fft3d(out.values, grid.dims(), detail::FftSign::Positive);
    const double scale = grid.cell_volume() / std::pow(2.0 * units::pi, 1.5);
    for (auto& v : out.values) v *= scale;
    return out;
}

namespace {
std::vector<std::complex<double>> inverse_raw(const SpectralField& field) {
    std::vector<std::complex<double>> buf(field.values);
    detail::fft3d(buf, field.dims(), detail::FftSign::Negative);
    const double scale = std::pow(2.0 * units::pi, 1.5) /
                         (field.real_space.cell_volume() * static_cast<double>(field.real_space.size()));
    for (auto& v : buf) v *= scale;
    return buf;
}
}  // namespace

ScalarGrid3D inverse_fourier(const SpectralField& field) {
    const auto buf = inverse_raw(field);
    std::vector<double> v(buf.size());
    for (std::size_t n = 0; n < buf.size(); ++n) v[n] = buf[n].real();
    return ScalarGrid3D(field.real_space, std::move(v));
}

double inverse_imaginary_residue(const SpectralField& field) {
    const auto buf = inverse_raw(field);
    double re = 0.0, im = 0.0;
    for (const auto& v : buf) {
        re = std::max(re, std::abs(v.real()));
        im = std::max(im, std::abs(v.imag()));
    }
    return re > 0.0 ? im / re : im;
}

}  // namespace stml
