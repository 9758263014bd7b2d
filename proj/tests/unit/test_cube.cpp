#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "stml/cube.hpp"
#include "stml/density.hpp"
#include "stml/error.hpp"
#include "stml/units.hpp"

using namespace stml;
using testing::fixture;

TEST_CASE("2x2x2 fixture reproduces values 1..8 in z-fastest order") {
    const auto g = read_cube(fixture("tiny_2x2x2.cube"));
    CHECK(g.dims() == Dims{2, 2, 2});
    CHECK(g.spacing() == Vec3{1, 1, 1});
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k) CHECK(g.at(i, j, k) == static_cast<double>(1 + k + 2 * j + 4 * i));
}

TEST_CASE("independently generated model cube matches analytic evaluation") {
    const auto g = read_cube(fixture("gaussian.cube"));
    const auto p = GaussianDensityParams::from_nm(1.0, 0.5, 1.0);
    CHECK(g.dims() == Dims{31, 31, 3});
    const double dz = g.spacing().z;
    double worst = 0.0;
    for (std::size_t i = 0; i < 31; ++i)
        for (std::size_t j = 0; j < 31; ++j) {
            const double expect = eval_gaussian_density(p, g.node(i, j, 1));
            worst = std::max(worst, testing::rel_diff(g.at(i, j, 1) * dz, expect));
            CHECK(g.at(i, j, 0) == 0.0);
        }
    CHECK(worst <= 1e-12);
}

TEST_CASE("truncated value stream is a parse error with a line number") {
    try {
        read_cube(fixture("truncated.cube"));
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("truncated value stream: expected 27 values, received 20") != std::string::npos);
        CHECK(msg.find("truncated.cube") != std::string::npos);
        CHECK(e.line() == 10);
    }
}

TEST_CASE("malformed cubes") {
    try {
        read_cube(fixture("bad_token.cube"));
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("non-numeric token 'x'") != std::string::npos);
        CHECK(e.line() == 7);
    }
    std::istringstream neg("a\nb\n0 0 0 0\n0 1 0 0\n2 0 1 0\n2 0 0 1\n1 2 3 4 5 6 7 8\n");
    CHECK_THROWS_AS(read_cube(neg), ParseError);
    std::istringstream skew("a\nb\n0 0 0 0\n2 1 0.5 0\n2 0 1 0\n2 0 0 1\n1 2 3 4 5 6 7 8\n");
    CHECK_THROWS_AS(read_cube(skew), ParseError);
    std::istringstream extra("a\nb\n0 0 0 0\n2 1 0 0\n2 0 1 0\n2 0 0 1\n1 2 3 4 5 6 7 8 9\n");
    CHECK_THROWS_AS(read_cube(extra), ParseError);
    std::istringstream head("a\nb\n");
    CHECK_THROWS_AS(read_cube(head), ParseError);
    CHECK_THROWS_AS(read_cube(fixture("does_not_exist.cube")), IoError);
}

TEST_CASE("atoms and the orbital line of negative NAtoms are skipped") {
    std::istringstream in(
        "a\nb\n-2 0 0 0\n2 1 0 0\n2 0 1 0\n2 0 0 1\n"
        "6 6.0 0 0 0\n1 1.0 1 1 1\n1 7\n"
        "1 2 3 4 5 6 7 8\n");
    const auto g = read_cube(in);
    CHECK(g.at(1, 1, 1) == 8.0);
}

TEST_CASE("write_cube round trip") {
    const auto g = testing::random_neutral(testing::cube_spec(4, 0.7, {-1, 0, 2}), 3);
    std::stringstream ss;
    write_cube(ss, g);
    const auto r = read_cube(ss);
    CHECK(r.dims() == g.dims());
    CHECK(r.origin().x == doctest::Approx(-1.0));
    CHECK(r.spacing().z == doctest::Approx(0.7));
    for (std::size_t n = 0; n < g.size(); ++n) CHECK(r.values()[n] == doctest::Approx(g.values()[n]).epsilon(1e-5));
}

TEST_CASE("dipole fixture") {
    const auto d = load_cube(fixture("dipole.cube"), 1.0);
    CHECK(d.label() == "dipole");
    const Vec3 mu = transition_dipole(d);
    CHECK(mu.x == 0.0);
    CHECK(mu.y == 0.0);
    CHECK(mu.z == doctest::Approx(1.0));
    CHECK(total_charge(d) == 0.0);
}
