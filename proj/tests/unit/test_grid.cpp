#include <doctest.h>

#include "helpers.hpp"
#include "stml/error.hpp"
#include "stml/grid.hpp"

using namespace stml;
using testing::cube_spec;

TEST_CASE("grid spec validation") {
    GridSpec s = cube_spec(4);
    CHECK_NOTHROW(s.validate());
    s.spacing.y = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = cube_spec(4);
    s.dims[2] = 1;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    CHECK_THROWS_AS(ScalarGrid3D(cube_spec(2), std::vector<double>(7, 0.0)), ConfigError);
    CHECK_THROWS_AS(ScalarGrid3D(cube_spec(2), std::vector<double>(8, NAN)), ConfigError);
}

TEST_CASE("storage order is z fastest, then y, then x") {
    const auto g = ScalarGrid3D::sample(cube_spec(3, 0.5, {1, 2, 3}),
                                        [](Vec3 r) { return 100 * r.x + 10 * r.y + r.z; });
    CHECK(g.index(0, 0, 1) == 1);
    CHECK(g.index(0, 1, 0) == 3);
    CHECK(g.index(1, 0, 0) == 9);
    CHECK(g.at(2, 1, 0) == doctest::Approx(100 * 2.0 + 10 * 2.5 + 3.0));
    CHECK(g.cell_volume() == doctest::Approx(0.125));
}

TEST_CASE("commensurate lattices and embedding") {
    const GridSpec a = cube_spec(4, 0.5);
    GridSpec b = cube_spec(8, 0.5, {-1.0, -1.0, -1.0});
    CHECK(commensurate(a, b));
    GridSpec c = b;
    c.origin.x += 0.2;
    CHECK_FALSE(commensurate(a, c));

    const auto g = testing::random_neutral(a, 1);
    const auto e = embed(g, b);
    // (0,0,0) of a is node (2,2,2) of b.
    CHECK(e.at(2, 2, 2) == g.at(0, 0, 0));
    CHECK(e.at(5, 5, 5) == g.at(3, 3, 3));
    CHECK(e.at(0, 0, 0) == 0.0);
    CHECK_THROWS_AS(embed(g, c), ConfigError);
    CHECK_THROWS_AS(embed(e, a), ConfigError);  // does not fit

    const GridSpec u = bounding_spec(a, cube_spec(2, 0.5, {3.0, 3.0, 3.0}));
    CHECK(u.origin == Vec3{0, 0, 0});
    CHECK(u.dims == Dims{8, 8, 8});
}

TEST_CASE("transform sizes") {
    CHECK(is_transform_size(1));
    CHECK(is_transform_size(210));
    CHECK_FALSE(is_transform_size(11));
    CHECK(next_transform_size(11) == 12);
    CHECK(next_transform_size(13) == 14);
    CHECK(next_transform_size(17) == 18);
    CHECK(next_transform_size(97) == 98);
    const auto p = pad_to_transform_size(ScalarGrid3D::zeros(cube_spec(11)));
    CHECK(p.dims() == Dims{12, 12, 12});
}

TEST_CASE("quarter-turn rotation") {
    GridSpec s = cube_spec(5, 1.0, {-2, -2, 0});
    s.dims[2] = 2;
    const auto g = ScalarGrid3D::sample(s, [](Vec3 r) { return 3 * r.x + r.y * r.y * r.y + 0.1 * r.z; });
    const auto r = rotate_quarter_turn(g);
    // new(x, y) = old(y, -x)
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            const Vec3 p = s.node(i, j, 1);
            CHECK(r.at(i, j, 1) == doctest::Approx(3 * p.y + (-p.x) * (-p.x) * (-p.x) + 0.1));
        }
    auto back = r;
    for (int t = 0; t < 3; ++t) back = rotate_quarter_turn(back);
    for (std::size_t n = 0; n < g.size(); ++n) CHECK(back.values()[n] == g.values()[n]);

    CHECK_THROWS_AS(rotate_quarter_turn(ScalarGrid3D::zeros(cube_spec(4))), ConfigError);  // off-centre
}

TEST_CASE("coarsening conserves charge") {
    const GridSpec s = cube_spec(6, 0.5);
    const auto g = ScalarGrid3D::sample(s, [](Vec3 r) { return 1.0 + r.x * r.y - r.z; });
    double q = 0.0;
    for (double v : g.values()) q += v * g.cell_volume();
    const auto c = coarsen(g, 2);
    CHECK(c.dims() == Dims{3, 3, 3});
    CHECK(c.spacing().x == doctest::Approx(1.0));
    double qc = 0.0;
    for (double v : c.values()) qc += v * c.cell_volume();
    CHECK(qc == doctest::Approx(q).epsilon(1e-12));
    CHECK_THROWS_AS(coarsen(g, 0), ConfigError);
    CHECK(coarsen(g, 4).dims() == Dims{2, 2, 2});
    CHECK_THROWS_AS(coarsen(g, 6), ConfigError);
}
