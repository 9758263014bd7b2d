#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "stml/error.hpp"
#include "stml/io.hpp"
#include "stml/units.hpp"

using namespace stml;

namespace {
CurrentMap2D sample_map() {
    CurrentMap2D m;
    m.x = uniform_axis(units::nm_to_bohr(-1.0), units::nm_to_bohr(1.0), 3);
    m.y = uniform_axis(units::nm_to_bohr(-0.5), units::nm_to_bohr(0.5), 2);
    m.values = {1e-11, 2.5e-11, 1e-11, 0.0, 3.25e-12, 7.0e-13};
    return m;
}
}  // namespace

TEST_CASE("fnv1a and value formatting") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(format_value(-0.0) == "0");
    CHECK(format_value(0.1) == "0.1");
    CHECK(format_value(1.0 / 3.0) == "0.333333333333333");
    CHECK(OutputHeader{"0123"}.line() == std::string("# stml ") + version + " config=0123");
}

TEST_CASE("map CSV round trip") {
    const auto m = sample_map();
    std::stringstream ss;
    write_map_csv(ss, m, {"abc"});
    const std::string text = ss.str();
    CHECK(text.rfind("# stml", 0) == 0);
    CHECK(text.find("# x_nm: -1,0,1\n") != std::string::npos);
    CHECK(text.find("# y_nm: -0.5,0.5\n") != std::string::npos);
    CHECK(text.find("\n1e-11,2.5e-11,1e-11\n0,3.25e-12,7e-13\n") != std::string::npos);
    const auto r = read_map_csv(ss);
    CHECK(r.values == m.values);
    REQUIRE(r.x.size() == 3);
    CHECK(r.x[0] == doctest::Approx(m.x[0]).epsilon(1e-14));
}

TEST_CASE("malformed map CSV") {
    std::istringstream rows_first("1,2\n# x_nm: 0,1\n# y_nm: 0\n");
    CHECK_THROWS_AS(read_map_csv(rows_first), ParseError);
    std::istringstream short_row("# x_nm: 0,1\n# y_nm: 0,1\n1,2\n3\n");
    CHECK_THROWS_AS(read_map_csv(short_row), ParseError);
    std::istringstream missing_row("# x_nm: 0,1\n# y_nm: 0,1\n1,2\n");
    CHECK_THROWS_AS(read_map_csv(missing_row), ParseError);
    std::istringstream junk("# x_nm: 0,1\n# y_nm: 0\n1,abc\n");
    try {
        read_map_csv(junk);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("PGM quick-look") {
    const auto lin = normalize_map(sample_map(), Normalization::Linear);
    std::stringstream ss;
    write_pgm(ss, lin);
    std::string magic;
    int w = 0, h = 0, maxval = 0;
    ss >> magic >> w >> h >> maxval;
    CHECK(magic == "P2");
    CHECK(w == 3);
    CHECK(h == 2);
    CHECK(maxval == 255);
    int first = -1;
    ss >> first;
    CHECK(first == 0);  // highest y row first: value 0
    CHECK_THROWS_AS(write_pgm(ss, sample_map()), ConfigError);

    const auto lg = normalize_map(sample_map(), Normalization::Log10, -4.0);
    std::stringstream sl;
    write_pgm(sl, lg);
    CHECK(sl.str().find("255") != std::string::npos);
}

TEST_CASE("curve and trajectory CSV") {
    BiasCurve c{{-1.0, 0.0, 1.0}, {2.0, 0.0, 4.0}};
    std::stringstream ss;
    write_curve_csv(ss, c, {"h"});
    CHECK(ss.str().find("# bias_V,current_rel\n-1,0.5\n0,0\n1,1\n") != std::string::npos);

    std::vector<kinetics::TrajectoryPoint> t{{0.0, {1, 0, 0}}, {1e-3, {0.5, 0.25, 0.25}}};
    std::stringstream st;
    write_trajectory_csv(st, t, {"h"});
    CHECK(st.str().find("# t_s,p0,p3,p17\n0,1,0,0\n0.001,0.5,0.25,0.25\n") != std::string::npos);
}
