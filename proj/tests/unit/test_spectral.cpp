#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "stml/error.hpp"
#include "stml/spectral.hpp"
#include "stml/units.hpp"

using namespace stml;

TEST_CASE("Fourier round trip") {
    GridSpec s = testing::cube_spec(12, 0.4, {-2, 1, 0.5});
    s.dims = {12, 10, 14};
    const auto g = testing::random_neutral(s, 11);
    const auto f = fourier_transform(g);
    const auto back = inverse_fourier(f);
    double worst = 0.0;
    for (std::size_t n = 0; n < g.size(); ++n) worst = std::max(worst, std::abs(back.values()[n] - g.values()[n]));
    CHECK(worst <= 1e-12 * g.max_abs());
    CHECK(inverse_imaginary_residue(f) <= 1e-12);
}

TEST_CASE("Parseval identity") {
    const auto g = testing::random_neutral(testing::cube_spec(16, 0.3), 5);
    const auto f = fourier_transform(g);
    double lhs = 0.0, rhs = 0.0;
    for (const auto& c : f.values) lhs += std::norm(c);
    lhs *= f.dvq();
    for (double v : g.values()) rhs += v * v;
    rhs *= g.cell_volume();
    CHECK(testing::rel_diff(lhs, rhs) <= 1e-10);
}

TEST_CASE("real fields have conjugate-symmetric spectra") {
    GridSpec s = testing::cube_spec(6);
    s.dims = {6, 5, 8};
    const auto f = fourier_transform(testing::random_neutral(s, 2));
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 5; ++j)
            for (std::size_t k = 0; k < 8; ++k) {
                const auto a = f.at(i, j, k);
                const auto b = f.values[f.negated_index(i, j, k)];
                CHECK(std::abs(a - std::conj(b)) <= 1e-12);
            }
}

TEST_CASE("transform of a sampled Gaussian approaches the continuum result") {
    // rho = exp(-r^2 / 2) / (2 pi)^{3/2}  ->  F(q) = exp(-q^2 / 2) / (2 pi)^{3/2}
    const std::size_t n = 32;
    const double h = 0.5;
    const GridSpec s = testing::cube_spec(n, h, {-8, -8, -8});
    const double c = std::pow(2 * units::pi, -1.5);
    const auto g = ScalarGrid3D::sample(s, [c](Vec3 r) { return c * std::exp(-0.5 * (r.x * r.x + r.y * r.y + r.z * r.z)); });
    const auto f = fourier_transform(g);
    for (std::size_t m : {0u, 1u, 3u}) {
        const Vec3 q = f.wavevector(m, 0, 0);
        // Phase of the origin reference: e^{i q . origin} multiplies the centred result.
        const auto centred = f.at(m, 0, 0) * std::exp(std::complex<double>(0, q.x * s.origin.x));
        CHECK(centred.real() == doctest::Approx(c * std::exp(-0.5 * q.x * q.x)).epsilon(1e-8));
        CHECK(std::abs(centred.imag()) < 1e-10);
    }
}

TEST_CASE("transform sizes are enforced") {
    CHECK_THROWS_AS(fourier_transform(ScalarGrid3D::zeros(testing::cube_spec(11))), ConfigError);
}
