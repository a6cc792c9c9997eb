#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "oracles.hpp"
#include "rgg/graph.hpp"

using namespace rgg;

TEST_CASE("gilbert on collinear points") {
    const PointSet ps = oracle::make_points({{0.0, 0.0}, {1.0, 0.0}, {3.0, 0.0}}, 5.0);
    const Norm e2 = Norm::euclidean();
    const GeometricGraph g1 = build_gilbert(ps, 1.0, e2);
    REQUIRE(g1.adj[0] == std::vector<int>{1});
    REQUIRE(g1.adj[1] == std::vector<int>{0});
    REQUIRE(g1.adj[2].empty());
    const GeometricGraph g2 = build_gilbert(ps, 2.0, e2);
    REQUIRE(g2.adj[0] == std::vector<int>{1});
    REQUIRE(g2.adj[1] == (std::vector<int>{0, 2}));
    REQUIRE(g2.adj[2] == std::vector<int>{1});
}

TEST_CASE("gilbert bucket grid equals brute force") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        const PointSet ps = sample_poisson(BoxSpec(200.0, 2), seed);
        for (double p : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
            const Norm norm(p);
            for (double r : {0.5, 1.4, 3.0, 20.0}) {
                const GeometricGraph fast = build_gilbert(ps, r, norm);
                const GeometricGraph slow = oracle::brute_gilbert(ps, r, norm);
                REQUIRE(fast.adj == slow.adj);
            }
        }
    }
}

TEST_CASE("gilbert 3d bucket grid equals brute force") {
    const PointSet ps = sample_poisson(BoxSpec(300.0, 3), 11);
    const Norm e2 = Norm::euclidean();
    REQUIRE(build_gilbert(ps, 1.3, e2).adj == oracle::brute_gilbert(ps, 1.3, e2).adj);
}

TEST_CASE("gilbert is monotone in r") {
    const PointSet ps = sample_poisson(BoxSpec(150.0, 2), 17);
    const GeometricGraph a = build_gilbert(ps, 1.0, Norm::euclidean());
    const GeometricGraph b = build_gilbert(ps, 1.7, Norm::euclidean());
    for (int v = 0; v < a.n; ++v)
        for (int w : a.adj[v]) REQUIRE(b.adjacent(v, w));
}

TEST_CASE("knn: three points, k=1") {
    const PointSet ps = oracle::make_points({{0.0, 0.0}, {1.0, 0.0}, {5.0, 0.0}}, 8.0);
    const DirectedKnnGraph g = build_knn_directed(ps, 1, Norm::euclidean());
    REQUIRE(g.out[0] == std::vector<int>{1});
    REQUIRE(g.out[1] == std::vector<int>{0});
    REQUIRE(g.out[2] == std::vector<int>{1});
}

TEST_CASE("knn: unit square corners, k=2 excludes the diagonal") {
    const PointSet ps =
        oracle::make_points({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}, 2.0);
    const DirectedKnnGraph g = build_knn_directed(ps, 2, Norm::euclidean());
    REQUIRE(g.out[0] == (std::vector<int>{1, 2}));
    REQUIRE(g.out[1] == (std::vector<int>{0, 3}));
    REQUIRE(g.out[2] == (std::vector<int>{0, 3}));
    REQUIRE(g.out[3] == (std::vector<int>{1, 2}));
}

TEST_CASE("knn grid search equals brute force, ties included") {
    for (std::uint64_t seed : {4ull, 5ull}) {
        const PointSet ps = sample_poisson(BoxSpec(200.0, 2), seed);
        for (int k : {1, 3, 7, 25}) {
            const DirectedKnnGraph fast = build_knn_directed(ps, k, Norm::euclidean());
            REQUIRE(fast.out == oracle::brute_knn(ps, k, Norm::euclidean()));
        }
    }
    // Exact distance ties on a lattice, sup norm.
    const PointSet lattice = oracle::make_points(
        {{1.0, 1.0}, {2.0, 1.0}, {1.0, 2.0}, {2.0, 2.0}, {3.0, 1.0}, {3.0, 2.0}}, 4.0);
    for (int k : {1, 2, 3, 5}) {
        REQUIRE(build_knn_directed(lattice, k, Norm::linf()).out ==
                oracle::brute_knn(lattice, k, Norm::linf()));
    }
}

TEST_CASE("knn out-lists are complete when k >= n-1") {
    const PointSet ps = sample_poisson(BoxSpec(30.0, 2), 6);
    const DirectedKnnGraph g = build_knn_directed(ps, ps.count() + 5, Norm::euclidean());
    for (int v = 0; v < g.n; ++v)
        REQUIRE(static_cast<int>(g.out[v].size()) == g.n - 1);
}

TEST_CASE("undirect") {
    SECTION("mutual and one-way edges collapse to simple edges") {
        const PointSet ps = oracle::make_points({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}, 4.0);
        const DirectedKnnGraph g = build_knn_directed(ps, 1, Norm::euclidean());
        // 0->1, 1->0 (tie toward index 0), 2->1: mutual pair and a one-way edge.
        const GeometricGraph u = undirect(g);
        REQUIRE(u.adj[0] == std::vector<int>{1});
        REQUIRE(u.adj[1] == (std::vector<int>{0, 2}));
        REQUIRE(u.adj[2] == std::vector<int>{1});
    }
    SECTION("empty graph") {
        DirectedKnnGraph g;
        g.n = 0;
        g.k = 3;
        const GeometricGraph u = undirect(g);
        REQUIRE(u.n == 0);
        REQUIRE(u.adj.empty());
    }
}

TEST_CASE("min_in_degree") {
    {
        const PointSet ps = oracle::make_points({{0.0, 0.0}, {1.0, 0.0}}, 3.0);
        REQUIRE(min_in_degree(build_knn_directed(ps, 1, Norm::euclidean())) == 1);
    }
    {
        // Collinear 0,1,2: both endpoints choose the middle; an endpoint has
        // in-degree 0.
        const PointSet ps = oracle::make_points({{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}}, 4.0);
        REQUIRE(min_in_degree(build_knn_directed(ps, 1, Norm::euclidean())) == 0);
    }
    {
        const PointSet ps = sample_poisson(BoxSpec(150.0, 2), 12);
        const DirectedKnnGraph g = build_knn_directed(ps, 3, Norm::euclidean());
        std::vector<int> in(g.n, 0);
        for (const auto& outs : g.out)
            for (int w : outs) ++in[w];
        REQUIRE(min_in_degree(g) == *std::min_element(in.begin(), in.end()));
    }
}

TEST_CASE("undirected knn degree bounds") {
    const PointSet ps = sample_poisson(BoxSpec(500.0, 2), 21);
    for (int k : {2, 4}) {
        const GeometricGraph u = undirect(build_knn_directed(ps, k, Norm::euclidean()));
        int dmin = u.n, dmax = 0;
        for (int v = 0; v < u.n; ++v) {
            dmin = std::min(dmin, u.degree(v));
            dmax = std::max(dmax, u.degree(v));
        }
        REQUIRE(dmin >= std::min(k, u.n - 1));
        REQUIRE(dmax <= 6 * k);
    }
}

TEST_CASE("graph file round trip") {
    const PointSet ps = sample_poisson(BoxSpec(80.0, 2), 30);
    const GeometricGraph g = build_gilbert(ps, 1.25, Norm::euclidean());
    std::stringstream ss;
    write_graph(ss, g);
    const GeometricGraph back = read_graph(ss);
    REQUIRE(back.n == g.n);
    REQUIRE(back.adj == g.adj);
    REQUIRE(back.model == GraphModel::gilbert);
    REQUIRE(back.param_r == g.param_r);

    const GeometricGraph ug = undirect(build_knn_directed(ps, 4, Norm::euclidean()));
    std::stringstream s2;
    write_graph(s2, ug);
    const GeometricGraph back2 = read_graph(s2);
    REQUIRE(back2.adj == ug.adj);
    REQUIRE(back2.model == GraphModel::knn);
    REQUIRE(back2.param_k == 4);
}
