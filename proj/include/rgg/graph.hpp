// Gilbert and k-nearest-neighbour graph construction over point sets.
//
// Neighbor search uses a bucket grid so construction is near-linear in the
// expected case; outputs are defined to match the brute-force O(N^2)
// definitions exactly.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rgg/geometry.hpp"

namespace rgg {

enum class GraphModel { gilbert, knn };

/// Undirected simple graph over point indices. Neighbor lists are sorted
/// ascending and symmetric.
struct GeometricGraph {
    int n = 0;
    std::vector<std::vector<int>> adj;
    GraphModel model = GraphModel::gilbert;
    double param_r = 0.0;  // gilbert radius
    int param_k = 0;       // knn parameter

    bool adjacent(int u, int v) const {
        if (u == v) return false;
        const auto& a = adj[u].size() <= adj[v].size() ? adj[u] : adj[v];
        const int w = adj[u].size() <= adj[v].size() ? v : u;
        return std::binary_search(a.begin(), a.end(), w);
    }
    int degree(int v) const { return static_cast<int>(adj[v].size()); }
    std::size_t edge_count() const {
        std::size_t s = 0;
        for (const auto& a : adj) s += a.size();
        return s / 2;
    }
};

/// Out-neighbour lists of the directed k-nearest-neighbour graph; every
/// vertex has out-degree min(k, n-1). Lists are sorted ascending.
struct DirectedKnnGraph {
    int n = 0;
    int k = 0;
    std::vector<std::vector<int>> out;
};

/// Uniform bucket grid over the box; cell size is at least `target` (clamped
/// to one cell per axis when target exceeds the side).
class BucketGrid {
public:
    BucketGrid(const PointSet& ps, double target) : ps_(&ps), d_(ps.box.dimension_d) {
        const double side = ps.box.side();
        dims_.assign(d_, 1);
        if (target > 0.0) {
            const int per_axis = std::max(1, static_cast<int>(std::floor(side / target)));
            dims_.assign(d_, per_axis);
        }
        cell_.assign(d_, 0.0);
        std::size_t total = 1;
        for (int i = 0; i < d_; ++i) {
            cell_[i] = side / dims_[i];
            total *= static_cast<std::size_t>(dims_[i]);
        }
        starts_.assign(total + 1, 0);
        const int n = ps.count();
        cell_of_.resize(n);
        for (int p = 0; p < n; ++p) {
            cell_of_[p] = cell_index(ps.point(p));
            ++starts_[cell_of_[p] + 1];
        }
        for (std::size_t i = 1; i < starts_.size(); ++i) starts_[i] += starts_[i - 1];
        order_.resize(n);
        std::vector<std::size_t> cursor(starts_.begin(), starts_.end() - 1);
        for (int p = 0; p < n; ++p) order_[cursor[cell_of_[p]]++] = p;
    }

    int dim(int axis) const { return dims_[axis]; }
    std::size_t cells() const { return starts_.size() - 1; }
    std::size_t cell_of(int point) const { return cell_of_[point]; }

    std::size_t cell_index(const double* x) const {
        std::size_t idx = 0;
        for (int i = 0; i < d_; ++i) {
            int c = static_cast<int>(x[i] / cell_[i]);
            c = std::min(std::max(c, 0), dims_[i] - 1);
            idx = idx * dims_[i] + static_cast<std::size_t>(c);
        }
        return idx;
    }

    void cell_coords(std::size_t idx, std::vector<int>& out) const {
        out.assign(d_, 0);
        for (int i = d_ - 1; i >= 0; --i) {
            out[i] = static_cast<int>(idx % dims_[i]);
            idx /= dims_[i];
        }
    }

    std::size_t flat(const std::vector<int>& coords) const {
        std::size_t idx = 0;
        for (int i = 0; i < d_; ++i) idx = idx * dims_[i] + static_cast<std::size_t>(coords[i]);
        return idx;
    }

    /// Points in one cell, as a contiguous index range of order().
    std::pair<const int*, const int*> cell_points(std::size_t idx) const {
        return {order_.data() + starts_[idx], order_.data() + starts_[idx + 1]};
    }

    /// Invoke fn(cell_flat_index) for every cell whose coordinates differ from
    /// `center` by at most `radius` per axis.
    template <typename Fn>
    void for_cells_within(const std::vector<int>& center, int radius, Fn&& fn) const {
        std::vector<int> lo(d_), span(d_), it(d_);
        for (int i = 0; i < d_; ++i) {
            lo[i] = std::max(0, center[i] - radius);
            const int hi = std::min(dims_[i] - 1, center[i] + radius);
            span[i] = hi - lo[i] + 1;
            it[i] = 0;
        }
        std::vector<int> coords(d_);
        for (;;) {
            for (int i = 0; i < d_; ++i) coords[i] = lo[i] + it[i];
            fn(flat(coords));
            int axis = 0;
            while (axis < d_ && ++it[axis] == span[axis]) it[axis++] = 0;
            if (axis == d_) break;
        }
    }

    double min_cell() const { return *std::min_element(cell_.begin(), cell_.end()); }

private:
    const PointSet* ps_;
    int d_;
    std::vector<int> dims_;
    std::vector<double> cell_;
    std::vector<std::size_t> starts_;
    std::vector<int> order_;
    std::vector<std::size_t> cell_of_;
};

/// Gilbert graph: edge uv iff distance(u, v) <= r.
inline GeometricGraph build_gilbert(const PointSet& ps, double r, const Norm& norm) {
    if (!(r > 0.0)) throw std::invalid_argument("build_gilbert: r must be positive");
    GeometricGraph g;
    g.n = ps.count();
    g.model = GraphModel::gilbert;
    g.param_r = r;
    g.adj.assign(g.n, {});
    if (g.n < 2) return g;

    // Cell size >= r, so candidate pairs live in adjacent cells only. The
    // p-norm distance dominates per-axis differences for every p >= 1, which
    // keeps the 1-ring sound for all supported norms.
    BucketGrid grid(ps, r);
    const int d = ps.box.dimension_d;
    std::vector<int> center(d);
    for (std::size_t c = 0; c < grid.cells(); ++c) {
        auto [pb, pe] = grid.cell_points(c);
        if (pb == pe) continue;
        grid.cell_coords(c, center);
        grid.for_cells_within(center, 1, [&](std::size_t nc) {
            if (nc < c) return;
            auto [qb, qe] = grid.cell_points(nc);
            for (const int* p = pb; p != pe; ++p) {
                for (const int* q = qb; q != qe; ++q) {
                    if (nc == c && *q <= *p) continue;
                    if (ps.dist(*p, *q, norm) <= r) {
                        g.adj[*p].push_back(*q);
                        g.adj[*q].push_back(*p);
                    }
                }
            }
        });
    }
    for (auto& a : g.adj) std::sort(a.begin(), a.end());
    return g;
}

/// Directed k-nearest-neighbour graph. Distance ties break toward the
/// smaller vertex index, so construction is deterministic and out-lists are
/// nested as k grows.
inline DirectedKnnGraph build_knn_directed(const PointSet& ps, int k, const Norm& norm) {
    if (k < 1) throw std::invalid_argument("build_knn_directed: k must be >= 1");
    DirectedKnnGraph g;
    g.n = ps.count();
    g.k = k;
    g.out.assign(g.n, {});
    if (g.n < 2) return g;
    const int want = std::min(k, g.n - 1);
    const int d = ps.box.dimension_d;

    // Aim for about k+1 points per cell.
    const double side = ps.box.side();
    const double target = side / std::max(1.0, std::floor(std::pow(
                                     static_cast<double>(g.n) / (k + 1), 1.0 / d)));
    BucketGrid grid(ps, target);
    const double cell = grid.min_cell();

    std::vector<int> center(d);
    std::vector<std::pair<double, int>> cand;
    for (int p = 0; p < g.n; ++p) {
        cand.clear();
        grid.cell_coords(grid.cell_of(p), center);
        int ring = 1;
        int max_ring = 0;
        for (int i = 0; i < d; ++i) max_ring = std::max(max_ring, grid.dim(i));
        for (;;) {
            cand.clear();
            grid.for_cells_within(center, ring, [&](std::size_t nc) {
                auto [qb, qe] = grid.cell_points(nc);
                for (const int* q = qb; q != qe; ++q)
                    if (*q != p) cand.emplace_back(ps.dist(p, *q, norm), *q);
            });
            if (static_cast<int>(cand.size()) >= want) {
                std::nth_element(cand.begin(), cand.begin() + (want - 1), cand.end());
                // Points outside the scanned ring are at least (ring*cell)
                // away in every p-norm.
                if (cand[want - 1].first <= ring * cell || ring >= max_ring) break;
            } else if (ring >= max_ring) {
                break;
            }
            ++ring;
        }
        std::sort(cand.begin(), cand.end());
        g.out[p].reserve(want);
        for (int i = 0; i < want; ++i) g.out[p].push_back(cand[i].second);
        std::sort(g.out[p].begin(), g.out[p].end());
    }
    return g;
}

/// Undirected k-NN graph: edge uv iff u->v or v->u.
inline GeometricGraph undirect(const DirectedKnnGraph& g) {
    GeometricGraph u;
    u.n = g.n;
    u.model = GraphModel::knn;
    u.param_k = g.k;
    u.adj.assign(g.n, {});
    for (int v = 0; v < g.n; ++v)
        for (int w : g.out[v]) {
            u.adj[v].push_back(w);
            u.adj[w].push_back(v);
        }
    for (auto& a : u.adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return u;
}

inline int min_in_degree(const DirectedKnnGraph& g) {
    std::vector<int> in(g.n, 0);
    for (const auto& outs : g.out)
        for (int w : outs) ++in[w];
    return g.n == 0 ? 0 : *std::min_element(in.begin(), in.end());
}

// ---------------------------------------------------------------------------
// Graph file format:
//   # vertices=<int> model=<gilbert|knn> param=<r or k>
//   u v                (one undirected edge per line, u < v)
// ---------------------------------------------------------------------------

inline void write_graph(std::ostream& os, const GeometricGraph& g) {
    os << "# vertices=" << g.n << " model=" << (g.model == GraphModel::gilbert ? "gilbert" : "knn")
       << " param="
       << (g.model == GraphModel::gilbert ? format_double(g.param_r) : std::to_string(g.param_k))
       << "\n";
    for (int u = 0; u < g.n; ++u)
        for (int v : g.adj[u])
            if (u < v) os << u << " " << v << "\n";
}

inline void write_graph(const std::string& path, const GeometricGraph& g) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_graph(os, g);
}

inline GeometricGraph read_graph(std::istream& is) {
    std::string header;
    if (!std::getline(is, header) || header.rfind("# vertices=", 0) != 0)
        throw std::runtime_error("graph file: bad header");
    int n = 0;
    char model[16] = {0};
    char param[64] = {0};
    if (std::sscanf(header.c_str(), "# vertices=%d model=%15s param=%63s", &n, model, param) != 3)
        throw std::runtime_error("graph file: unparsable header");
    GeometricGraph g;
    g.n = n;
    g.adj.assign(n, {});
    const std::string model_s(model);
    if (model_s == "gilbert") {
        g.model = GraphModel::gilbert;
        g.param_r = std::stod(param);
    } else if (model_s == "knn") {
        g.model = GraphModel::knn;
        g.param_k = std::stoi(param);
    } else {
        throw std::runtime_error("graph file: unknown model " + model_s);
    }
    int u, v;
    while (is >> u >> v) {
        if (u < 0 || v < 0 || u >= n || v >= n || u == v)
            throw std::runtime_error("graph file: bad edge");
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
    }
    for (auto& a : g.adj) std::sort(a.begin(), a.end());
    return g;
}

inline GeometricGraph read_graph(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open: " + path);
    return read_graph(is);
}

}  // namespace rgg
