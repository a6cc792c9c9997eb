#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

#include "oracles.hpp"
#include "rgg/tessellation.hpp"

using namespace rgg;

namespace {

const double kPi = 4.0 * std::atan(1.0);

using oracle::grid_fixture;

long long sq(const Tessellation& t, int ix, int iy) { return t.grid.flat({ix, iy}); }

}  // namespace

TEST_CASE("tessellate: paper grid from the planar critical radius") {
    const BoxSpec box(std::exp(kPi), 2);  // r0 = 1
    const PointSet ps = sample_poisson(box, 3);
    ConstructionParams params;
    params.c = 4;
    params.fullness_m = 2;
    const Tessellation t = tessellate(ps, params);
    REQUIRE(t.s == Catch::Approx(0.25));
    REQUIRE(t.calibration_radius == Catch::Approx(1.0));
    REQUIRE(t.grid.dims[0] == static_cast<int>(std::ceil(box.side() / 0.25)));
}

TEST_CASE("tessellate with explicit radius calibration") {
    const PointSet ps = sample_poisson(BoxSpec(100.0, 2), 4);
    ConstructionParams params;
    params.c = 5;
    const Tessellation t = tessellate(ps, params, 2.5);
    REQUIRE(t.s == Catch::Approx(0.5));
    REQUIRE(t.calibration_radius == 2.5);
}

TEST_CASE("tessellation counts") {
    SECTION("all points in one corner occupy one square") {
        const PointSet ps = oracle::make_points(
            {{0.1, 0.1}, {0.2, 0.3}, {0.05, 0.6}, {0.7, 0.2}}, 4.0);
        const Tessellation t = tessellate_with_side(ps, 1.0, 4, 4.0);
        long long nonzero = 0;
        for (long long c : t.counts)
            if (c > 0) ++nonzero;
        REQUIRE(nonzero == 1);
        REQUIRE(t.counts[sq(t, 0, 0)] == 4);
    }
    SECTION("counts partition the point set") {
        const PointSet ps = sample_poisson(BoxSpec(150.0, 2), 6);
        const Tessellation t = tessellate_with_side(ps, 0.9, 4, 3.6);
        long long total = 0;
        for (long long c : t.counts) total += c;
        REQUIRE(total == ps.count());
        for (int p = 0; p < ps.count(); ++p) {
            std::vector<int> coords;
            t.grid.coords(t.square_of_point[p], coords);
            for (int axis = 0; axis < 2; ++axis) {
                REQUIRE(ps.point(p)[axis] >= coords[axis] * t.s - 1e-12);
                REQUIRE(ps.point(p)[axis] <= (coords[axis] + 1) * t.s + 1e-12);
            }
        }
    }
    SECTION("degenerate grid rejected") {
        const PointSet ps = sample_poisson(BoxSpec(9.0, 2), 1);
        REQUIRE_THROWS_AS(tessellate_with_side(ps, 100.0, 3, 300.0), std::invalid_argument);
    }
}

TEST_CASE("classify: all squares full") {
    const PointSet ps = grid_fixture(4, 1.0, [](int, int) { return 3; });
    const Tessellation t = tessellate_with_side(ps, 1.0, 3, 3.0);
    const SeaDecomposition dec = classify_and_decompose(t, 2, SquareRules::gilbert(3, 2));
    REQUIRE(dec.sea.size() == 16);
    REQUIRE(dec.components.empty());
    REQUIRE(check_structural_lemmas(dec, ConstructionParams{3, 2}, t).empty());
}

TEST_CASE("classify: one isolated non-full square") {
    const PointSet ps =
        grid_fixture(4, 1.0, [](int ix, int iy) { return (ix == 1 && iy == 1) ? 1 : 3; });
    const Tessellation t = tessellate_with_side(ps, 1.0, 3, 3.0);
    const SeaDecomposition dec = classify_and_decompose(t, 2, SquareRules::gilbert(3, 2));
    REQUIRE(dec.components.size() == 1);
    REQUIRE(dec.components[0] == std::vector<long long>{sq(t, 1, 1)});
    REQUIRE(dec.sea.size() == 15);
    const ComponentView& view = dec.views[0];
    REQUIRE(view.cutoff == std::vector<long long>{sq(t, 1, 1)});
    REQUIRE(view.close_squares == std::vector<long long>{sq(t, 1, 1)});
    REQUIRE(view.far_squares.empty());
}

TEST_CASE("classify: ring of non-full squares encloses a far square") {
    // 5x5; the centre square is full but cut off by an empty ring.
    const PointSet ps = grid_fixture(5, 1.0, [](int ix, int iy) {
        const int dx = std::abs(ix - 2), dy = std::abs(iy - 2);
        const int cheb = std::max(dx, dy);
        if (cheb == 0) return 2;  // enclosed full square
        if (cheb == 1) return 0;  // empty ring
        return 2;
    });
    const Tessellation t = tessellate_with_side(ps, 1.0, 3, 3.0);
    const SeaDecomposition dec = classify_and_decompose(t, 2, SquareRules::gilbert(3, 2));

    REQUIRE(dec.components.size() == 1);
    REQUIRE(dec.components[0].size() == 8);
    REQUIRE(dec.sea.size() == 16);
    const ComponentView& view = dec.views[0];
    REQUIRE(view.far_squares == std::vector<long long>{sq(t, 2, 2)});
    REQUIRE(view.cutoff.size() == 9);  // ring + enclosed
    std::vector<long long> expected_close;
    for (int ix = 1; ix <= 3; ++ix)
        for (int iy = 1; iy <= 3; ++iy)
            if (ix != 2 || iy != 2) expected_close.push_back(sq(t, ix, iy));
    std::sort(expected_close.begin(), expected_close.end());
    REQUIRE(view.close_squares == expected_close);

    // The blow-up at 2c = 6 covers the whole 5x5 grid.
    REQUIRE(view.blowup.size() == 25);

    const auto checks = check_structural_lemmas(dec, ConstructionParams{3, 2}, t);
    for (const auto& chk : checks) {
        if (chk.name == "far_diameter" || chk.name == "far_complete")
            REQUIRE_FALSE(chk.applicable);  // a single far square
        else if (chk.applicable)
            REQUIRE(chk.held);
    }
}

TEST_CASE("structural checks: far-diameter violation is isolated") {
    // Two enclosed full squares far apart inside one non-full component.
    const PointSet ps = grid_fixture(7, 1.0, [](int ix, int iy) {
        auto ring_of = [&](int cx, int cy) {
            return std::max(std::abs(ix - cx), std::abs(iy - cy)) == 1;
        };
        if (ring_of(1, 1) || ring_of(5, 5)) return 0;
        return 2;
    });
    const Tessellation t = tessellate_with_side(ps, 1.0, 3, 3.0);
    const SeaDecomposition dec = classify_and_decompose(t, 2, SquareRules::gilbert(3, 2));
    REQUIRE(dec.components.size() == 1);
    const auto checks = check_structural_lemmas(dec, ConstructionParams{3, 2}, t);
    bool saw_far_diameter = false, saw_boundary = false;
    for (const auto& chk : checks) {
        if (chk.name == "far_diameter") {
            saw_far_diameter = true;
            REQUIRE(chk.applicable);
            REQUIRE_FALSE(chk.held);
        }
        if (chk.name == "boundary_connected") {
            saw_boundary = true;
            REQUIRE(chk.held);
        }
    }
    REQUIRE(saw_far_diameter);
    REQUIRE(saw_boundary);
}

TEST_CASE("non-full component bound U") {
    REQUIRE(nonfull_component_bound_u(10) == 453);
    REQUIRE(nonfull_component_bound_u(4) == 114);
}

TEST_CASE("diagonal boundary check") {
    GridGeom grid;
    grid.init(2, {5, 5});
    SECTION("single interior square") {
        REQUIRE(diagonal_boundary_check({grid.flat({2, 2})}, grid));
    }
    SECTION("2x2 block has a diagonally connected 8-ring boundary") {
        REQUIRE(diagonal_boundary_check(
            {grid.flat({1, 1}), grid.flat({1, 2}), grid.flat({2, 1}), grid.flat({2, 2})}, grid));
    }
    SECTION("preconditions") {
        REQUIRE_THROWS_AS(diagonal_boundary_check({}, grid), std::invalid_argument);
        std::vector<long long> all;
        for (long long i = 0; i < grid.total; ++i) all.push_back(i);
        REQUIRE_THROWS_AS(diagonal_boundary_check(all, grid), std::invalid_argument);
    }
}

TEST_CASE("knn rules decomposition and isoperimetric check") {
    // Same ring fixture under the 8-neighbour square graph.
    const PointSet ps = grid_fixture(5, 1.0, [](int ix, int iy) {
        const int cheb = std::max(std::abs(ix - 2), std::abs(iy - 2));
        if (cheb == 0) return 7;
        if (cheb == 1) return 0;
        return 7;
    });
    const Tessellation t = tessellate_with_side(ps, 1.0, 0, 1.0);
    const SeaDecomposition dec = classify_and_decompose(t, 6, SquareRules::knn(3));
    REQUIRE(dec.components.size() == 1);
    const ComponentView& view = dec.views[0];
    // u = 8 ring squares; A^c \ N = the enclosed square only.
    REQUIRE(view.squares.size() == 8);
    REQUIRE(view.cutoff.size() == 9);
    const auto checks = check_knn_structure(dec, 7000);
    for (const auto& chk : checks)
        if (chk.applicable) REQUIRE(chk.held);
}
