// Tessellation of the box into small squares and the full/non-full,
// sea/cutoff/close/far decomposition that drives the constructive
// Hamilton-cycle builder. All square-level distances are measured between
// grid indices (equivalently, centres in units of the square side).

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "rgg/geometry.hpp"

namespace rgg {

/// Tessellation fineness and fullness threshold. Paper-scale defaults are
/// c = 1000 and M = 10^7; desk-scale experiments override both.
struct ConstructionParams {
    int c = 1000;
    long long fullness_m = 10'000'000;

    void validate() const {
        if (c < 3) throw std::invalid_argument("ConstructionParams: c must be >= 3");
        if (fullness_m < 1) throw std::invalid_argument("ConstructionParams: M must be >= 1");
    }
};

/// ceil(pi (c+2)^2): the planar bound on the size of a non-full component.
inline long long nonfull_component_bound_u(int c) {
    const double pi = 4.0 * std::atan(1.0);
    return static_cast<long long>(std::ceil(pi * (c + 2.0) * (c + 2.0)));
}

/// Grid index arithmetic shared by the tessellation and the square graphs.
struct GridGeom {
    int d = 0;
    std::vector<int> dims;
    std::vector<long long> strides;
    long long total = 0;

    void init(int d_, const std::vector<int>& dims_) {
        d = d_;
        dims = dims_;
        strides.assign(d, 1);
        for (int i = d - 2; i >= 0; --i) strides[i] = strides[i + 1] * dims[i + 1];
        total = strides.empty() ? 0 : strides[0] * dims[0];
    }
    void coords(long long flat, std::vector<int>& out) const {
        out.assign(d, 0);
        for (int i = 0; i < d; ++i) {
            out[i] = static_cast<int>(flat / strides[i]);
            flat %= strides[i];
        }
    }
    long long flat(const std::vector<int>& c) const {
        long long f = 0;
        for (int i = 0; i < d; ++i) f += c[i] * strides[i];
        return f;
    }
    bool in_bounds(const std::vector<int>& c) const {
        for (int i = 0; i < d; ++i)
            if (c[i] < 0 || c[i] >= dims[i]) return false;
        return true;
    }
    static int linf(const std::vector<int>& a, const std::vector<int>& b) {
        int m = 0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
        return m;
    }
    static long long euclid2(const std::vector<int>& a, const std::vector<int>& b) {
        long long s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const long long t = a[i] - b[i];
            s += t * t;
        }
        return s;
    }
};

/// Grid of squares of side s with per-square point tallies. The last cell on
/// each axis is clipped when side/s is not an integer; the fullness
/// threshold applies to clipped cells unchanged.
struct Tessellation {
    BoxSpec box;
    double s = 0.0;
    double calibration_radius = 0.0;  // the radius the grid is calibrated to (c * s)
    int c = 0;
    GridGeom grid;
    std::vector<long long> counts;
    std::vector<long long> square_of_point;
    // CSR layout of point indices by square
    std::vector<long long> sq_start;
    std::vector<int> sq_points;

    int points_in(long long sq) const { return static_cast<int>(sq_start[sq + 1] - sq_start[sq]); }
    const int* points_begin(long long sq) const { return sq_points.data() + sq_start[sq]; }
    const int* points_end(long long sq) const { return sq_points.data() + sq_start[sq + 1]; }

    /// Actual centre coordinate of a (possibly clipped) cell on one axis.
    double center(const std::vector<int>& coords, int axis) const {
        const double side = box.side();
        const double lo = coords[axis] * s;
        const double hi = std::min(side, lo + s);
        return 0.5 * (lo + hi);
    }
};

inline constexpr long long kMaxTessellationSquares = 50'000'000;

/// Tessellate with an explicit square side.
inline Tessellation tessellate_with_side(const PointSet& ps, double s, int c,
                                         double calibration_radius) {
    if (!(s > 0.0)) throw std::invalid_argument("tessellate: square side must be positive");
    const double side = ps.box.side();
    if (side / s < 1.0) throw std::invalid_argument("tessellate: side/s must be >= 1");
    const int d = ps.box.dimension_d;
    const int per_axis = static_cast<int>(std::ceil(side / s));
    double total = 1.0;
    for (int i = 0; i < d; ++i) total *= per_axis;
    if (total > static_cast<double>(kMaxTessellationSquares))
        throw std::invalid_argument("tessellate: grid would exceed the square budget (" +
                                    std::to_string(per_axis) + " per axis); coarsen c or M");

    Tessellation t;
    t.box = ps.box;
    t.s = s;
    t.c = c;
    t.calibration_radius = calibration_radius;
    t.grid.init(d, std::vector<int>(d, per_axis));
    t.counts.assign(t.grid.total, 0);
    const int n = ps.count();
    t.square_of_point.resize(n);
    for (int p = 0; p < n; ++p) {
        long long f = 0;
        const double* x = ps.point(p);
        for (int i = 0; i < d; ++i) {
            int cidx = static_cast<int>(x[i] / s);
            cidx = std::min(std::max(cidx, 0), per_axis - 1);
            f += cidx * t.grid.strides[i];
        }
        t.square_of_point[p] = f;
        ++t.counts[f];
    }
    t.sq_start.assign(t.grid.total + 1, 0);
    for (int p = 0; p < n; ++p) ++t.sq_start[t.square_of_point[p] + 1];
    for (long long i = 1; i <= t.grid.total; ++i) t.sq_start[i] += t.sq_start[i - 1];
    t.sq_points.resize(n);
    std::vector<long long> cursor(t.sq_start.begin(), t.sq_start.end() - 1);
    for (int p = 0; p < n; ++p) t.sq_points[cursor[t.square_of_point[p]]++] = p;
    return t;
}

/// Paper tessellation: s = r0/c with r0 the critical radius (planar closed
/// form in two dimensions, the E(r0)=1 solution otherwise). An explicit
/// radius may be supplied to calibrate the grid to the operative graph
/// radius instead.
inline Tessellation tessellate(const PointSet& ps, const ConstructionParams& params,
                               double radius = 0.0) {
    params.validate();
    double r0 = radius;
    if (!(r0 > 0.0)) {
        if (ps.box.dimension_d == 2) {
            r0 = r0_planar(ps.box.intensity_n);
        } else {
            R0Options opt;
            opt.axis_cells = 12;
            opt.ball_resolution = 32;
            r0 = r0_general(ps.box, Norm::euclidean(), 0.02, opt);
        }
    }
    return tessellate_with_side(ps, r0 / params.c, params.c, r0);
}

// ---------------------------------------------------------------------------
// Square graphs and the sea decomposition
// ---------------------------------------------------------------------------

/// Adjacency rules for the graphs on squares. For the Gilbert pipeline
/// squares are joined within Euclidean index distance c-d, non-full squares
/// within l_inf 4c-1, with blow-ups at l_inf 2c. The k-NN pipeline uses the
/// 8-neighbour square graph, l_inf 2D-1 and blow-up D.
struct SquareRules {
    long long ghat_euclid2 = 0;  // squared Euclidean threshold; 0 means "use linf"
    int ghat_linf = 1;           // enumeration box (and threshold when euclid2 == 0)
    int nonfull_linf = 1;
    int blowup_dist = 1;

    static SquareRules gilbert(int c, int d) {
        if (c - d < 1)
            throw std::invalid_argument("SquareRules: need c >= d+1 for the square graph");
        SquareRules r;
        r.ghat_euclid2 = static_cast<long long>(c - d) * (c - d);
        r.ghat_linf = c - d;
        r.nonfull_linf = 4 * c - 1;
        r.blowup_dist = 2 * c;
        return r;
    }
    static SquareRules knn(int big_d) {
        if (big_d < 1) throw std::invalid_argument("SquareRules: D must be >= 1");
        SquareRules r;
        r.ghat_euclid2 = 0;
        r.ghat_linf = 1;
        r.nonfull_linf = 2 * big_d - 1;
        r.blowup_dist = big_d;
        return r;
    }
};

namespace detail {

/// Offsets (excluding the origin) within the rule's neighbourhood.
inline std::vector<std::vector<int>> make_offsets(int d, int linf_radius, long long euclid2) {
    std::vector<std::vector<int>> offsets;
    std::vector<int> it(d, -linf_radius);
    for (;;) {
        long long e2 = 0;
        bool zero = true;
        for (int i = 0; i < d; ++i) {
            e2 += static_cast<long long>(it[i]) * it[i];
            if (it[i] != 0) zero = false;
        }
        if (!zero && (euclid2 == 0 || e2 <= euclid2)) offsets.push_back(it);
        int axis = 0;
        while (axis < d && ++it[axis] > linf_radius) it[axis++] = -linf_radius;
        if (axis == d) break;
    }
    return offsets;
}

template <typename Fn>
inline void for_neighbors(const GridGeom& g, long long sq, const std::vector<std::vector<int>>& offsets,
                          std::vector<int>& scratch_center, std::vector<int>& scratch_nb, Fn&& fn) {
    g.coords(sq, scratch_center);
    for (const auto& off : offsets) {
        bool ok = true;
        for (int i = 0; i < g.d; ++i) {
            scratch_nb[i] = scratch_center[i] + off[i];
            if (scratch_nb[i] < 0 || scratch_nb[i] >= g.dims[i]) {
                ok = false;
                break;
            }
        }
        if (ok) fn(g.flat(scratch_nb));
    }
}

}  // namespace detail

/// Per-non-full-component view: the component N, its blow-up N_m, the giant
/// component A(N) of the square graph minus N, and the cutoff split.
struct ComponentView {
    std::vector<long long> squares;       // N, sorted
    std::vector<long long> blowup;        // N_m, sorted
    std::vector<char> in_blowup;          // mask over squares
    std::vector<char> in_a;               // mask: A(N)
    std::vector<long long> cutoff;        // complement of A, sorted (includes N)
    std::vector<long long> close_squares; // cutoff with a Ghat-neighbour in A
    std::vector<long long> far_squares;   // the rest of the cutoff
};

struct SeaDecomposition {
    GridGeom grid;
    SquareRules rules;
    std::vector<char> non_full;                 // N0 mask
    std::vector<std::vector<long long>> components;
    std::vector<char> in_sea;                   // sea mask (largest Ghat component of full squares)
    std::vector<long long> sea;                 // sorted
    std::vector<ComponentView> views;           // parallel to components
    std::vector<std::vector<int>> ghat_offsets; // cached for reuse downstream
    std::vector<std::vector<int>> lattice_offsets;

    bool sea_empty() const { return sea.empty(); }

    template <typename Fn>
    void for_ghat_neighbors(long long sq, Fn&& fn) const {
        std::vector<int> a(grid.d), b(grid.d);
        detail::for_neighbors(grid, sq, ghat_offsets, a, b, fn);
    }
};

/// Classify squares and decompose: non-full squares, their components under
/// the l_inf rule, the sea (largest component of the square graph minus all
/// non-full squares), and per component N the sets A(N), cutoff, close, far
/// and the blow-up N_m.
inline SeaDecomposition classify_and_decompose(const Tessellation& t, long long fullness_m,
                                               const SquareRules& rules) {
    SeaDecomposition dec;
    dec.grid = t.grid;
    dec.rules = rules;
    const long long total = t.grid.total;
    const int d = t.grid.d;
    dec.ghat_offsets = detail::make_offsets(d, rules.ghat_linf, rules.ghat_euclid2);
    dec.lattice_offsets = detail::make_offsets(d, 1, 1);  // the 2d lattice neighbours

    dec.non_full.assign(total, 0);
    std::vector<long long> nonfull_list;
    for (long long sq = 0; sq < total; ++sq)
        if (t.counts[sq] < fullness_m) {
            dec.non_full[sq] = 1;
            nonfull_list.push_back(sq);
        }

    std::vector<int> ca(d), cb(d);

    // Components of non-full squares under the l_inf <= nonfull_linf rule.
    // BFS over a box neighbourhood; at desk scales the box is small.
    {
        const auto nf_offsets = detail::make_offsets(d, rules.nonfull_linf, 0);
        std::vector<char> seen(total, 0);
        for (long long s0 : nonfull_list) {
            if (seen[s0]) continue;
            std::vector<long long> comp;
            std::vector<long long> stack{s0};
            seen[s0] = 1;
            while (!stack.empty()) {
                const long long v = stack.back();
                stack.pop_back();
                comp.push_back(v);
                detail::for_neighbors(dec.grid, v, nf_offsets, ca, cb, [&](long long w) {
                    if (dec.non_full[w] && !seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
                });
            }
            std::sort(comp.begin(), comp.end());
            dec.components.push_back(std::move(comp));
        }
        std::sort(dec.components.begin(), dec.components.end());
    }

    // The sea: largest Ghat component among full squares.
    auto largest_component = [&](const std::vector<char>& excluded, std::vector<char>& mask_out) {
        mask_out.assign(total, 0);
        std::vector<char> seen(total, 0);
        std::vector<long long> best;
        for (long long s0 = 0; s0 < total; ++s0) {
            if (excluded[s0] || seen[s0]) continue;
            std::vector<long long> comp;
            std::vector<long long> stack{s0};
            seen[s0] = 1;
            while (!stack.empty()) {
                const long long v = stack.back();
                stack.pop_back();
                comp.push_back(v);
                detail::for_neighbors(dec.grid, v, dec.ghat_offsets, ca, cb, [&](long long w) {
                    if (!excluded[w] && !seen[w]) {
                        seen[w] = 1;
                        stack.push_back(w);
                    }
                });
            }
            if (comp.size() > best.size()) best = std::move(comp);
        }
        std::sort(best.begin(), best.end());
        for (long long sq : best) mask_out[sq] = 1;
        return best;
    };

    dec.sea = largest_component(dec.non_full, dec.in_sea);

    // Per-component views.
    for (const auto& comp : dec.components) {
        ComponentView view;
        view.squares = comp;

        // Blow-up N_m: box-stamp each component square.
        view.in_blowup.assign(total, 0);
        const auto blow_offsets = detail::make_offsets(d, rules.blowup_dist, 0);
        for (long long sq : comp) {
            if (!view.in_blowup[sq]) view.in_blowup[sq] = 1;
            detail::for_neighbors(dec.grid, sq, blow_offsets, ca, cb,
                                  [&](long long w) { view.in_blowup[w] = 1; });
        }
        for (long long sq = 0; sq < total; ++sq)
            if (view.in_blowup[sq]) view.blowup.push_back(sq);

        // A(N): largest Ghat component of everything except N.
        std::vector<char> excluded(total, 0);
        for (long long sq : comp) excluded[sq] = 1;
        largest_component(excluded, view.in_a);

        for (long long sq = 0; sq < total; ++sq)
            if (!view.in_a[sq]) view.cutoff.push_back(sq);
        for (long long sq : view.cutoff) {
            bool close = false;
            detail::for_neighbors(dec.grid, sq, dec.ghat_offsets, ca, cb, [&](long long w) {
                if (view.in_a[w]) close = true;
            });
            (close ? view.close_squares : view.far_squares).push_back(sq);
        }
        dec.views.push_back(std::move(view));
    }
    return dec;
}

// ---------------------------------------------------------------------------
// Structural checks
// ---------------------------------------------------------------------------

struct LemmaCheck {
    std::string name;
    int component = -1;  // -1: global
    bool applicable = true;
    bool held = true;
};

/// Boundary of E in the square lattice: the squares outside E with a lattice
/// neighbour in E. Reports whether that boundary is diagonally connected
/// (connected once +-1 diagonal steps are allowed). E and its complement
/// must be nonempty.
inline bool diagonal_boundary_check(const std::vector<long long>& e_squares, const GridGeom& grid) {
    if (e_squares.empty()) throw std::invalid_argument("diagonal_boundary_check: E empty");
    std::vector<char> in_e(grid.total, 0);
    for (long long sq : e_squares) {
        if (sq < 0 || sq >= grid.total)
            throw std::invalid_argument("diagonal_boundary_check: square out of range");
        in_e[sq] = 1;
    }
    if (static_cast<long long>(e_squares.size()) >= grid.total)
        throw std::invalid_argument("diagonal_boundary_check: complement empty");

    const auto lattice = detail::make_offsets(grid.d, 1, 1);
    std::vector<int> ca(grid.d), cb(grid.d);
    std::vector<long long> boundary;
    std::vector<char> in_boundary(grid.total, 0);
    for (long long sq = 0; sq < grid.total; ++sq) {
        if (in_e[sq]) continue;
        bool touches = false;
        detail::for_neighbors(grid, sq, lattice, ca, cb, [&](long long w) {
            if (in_e[w]) touches = true;
        });
        if (touches) {
            boundary.push_back(sq);
            in_boundary[sq] = 1;
        }
    }
    if (boundary.empty()) return true;

    // Diagonal adjacency: lattice steps plus index distance sqrt(2) moves
    // (exactly two coordinates changing by one).
    const auto diag = detail::make_offsets(grid.d, 1, 2);
    std::vector<long long> stack{boundary.front()};
    std::vector<char> seen(grid.total, 0);
    seen[boundary.front()] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const long long v = stack.back();
        stack.pop_back();
        detail::for_neighbors(grid, v, diag, ca, cb, [&](long long w) {
            if (in_boundary[w] && !seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        });
    }
    return reached == boundary.size();
}

namespace detail {

inline bool connected_in_offsets(const GridGeom& grid, const std::vector<char>& mask,
                                 const std::vector<std::vector<int>>& offsets) {
    std::vector<int> ca(grid.d), cb(grid.d);
    long long first = -1, count = 0;
    for (long long sq = 0; sq < grid.total; ++sq)
        if (mask[sq]) {
            if (first < 0) first = sq;
            ++count;
        }
    if (count <= 1) return true;
    std::vector<char> seen(grid.total, 0);
    std::vector<long long> stack{first};
    seen[first] = 1;
    long long reached = 1;
    while (!stack.empty()) {
        const long long v = stack.back();
        stack.pop_back();
        for_neighbors(grid, v, offsets, ca, cb, [&](long long w) {
            if (mask[w] && !seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        });
    }
    return reached == count;
}

}  // namespace detail

/// Evaluate the structural lemmas of the Gilbert construction on a computed
/// decomposition, per non-full component, without aborting:
///   non_full_size      |N| <= U (planar)  /  the dimension-d bad-component
///                      threshold (1+1/c)|Q_r0|/s^d evaluated by quadrature
///   far_diameter       far squares within l_inf c/10 of each other
///   far_complete       the square graph restricted to far squares is complete
///   cutoff_containment Ghat-neighbourhood of the cutoff lies in N_2c
///   boundary_connected N_2c intersect A is Ghat-connected
///   sea_identity       sea intersect N_2c equals A(N) intersect N_2c
///   diag_boundary      boundary of N_2c is diagonally connected (when its
///                      hypothesis, N_2c and complement connected, applies)
inline std::vector<LemmaCheck> check_structural_lemmas(const SeaDecomposition& dec,
                                                       const ConstructionParams& params,
                                                       const Tessellation& t,
                                                       const Norm& norm = Norm::euclidean()) {
    std::vector<LemmaCheck> checks;
    const int d = dec.grid.d;

    for (std::size_t ci = 0; ci < dec.views.size(); ++ci) {
        const ComponentView& view = dec.views[ci];
        const int comp = static_cast<int>(ci);
        const long long u = static_cast<long long>(view.squares.size());

        {
            LemmaCheck chk{"non_full_size", comp};
            if (d == 2) {
                chk.held = u <= nonfull_component_bound_u(params.c);
            } else {
                // (1+1/c) |Q_r0| / s^d with |Q_r0| taken at the square centre.
                double min_vol = std::numeric_limits<double>::infinity();
                std::vector<int> coords(d);
                std::vector<double> center(d);
                for (long long sq : view.squares) {
                    dec.grid.coords(sq, coords);
                    for (int i = 0; i < d; ++i) center[i] = t.center(coords, i);
                    min_vol = std::min(min_vol, ball_box_volume(center, t.calibration_radius,
                                                                t.box, norm, 64));
                }
                const double bound =
                    (1.0 + 1.0 / params.c) * min_vol / std::pow(t.s, d);
                chk.held = static_cast<double>(u) < bound;
            }
            checks.push_back(chk);
        }

        {
            LemmaCheck chk{"far_diameter", comp};
            int diam = 0;
            std::vector<int> fa(d), fb(d);
            for (std::size_t i = 0; i < view.far_squares.size(); ++i)
                for (std::size_t j = i + 1; j < view.far_squares.size(); ++j) {
                    dec.grid.coords(view.far_squares[i], fa);
                    dec.grid.coords(view.far_squares[j], fb);
                    diam = std::max(diam, GridGeom::linf(fa, fb));
                }
            chk.applicable = view.far_squares.size() >= 2;
            chk.held = diam <= params.c / 10.0;
            checks.push_back(chk);
        }

        {
            LemmaCheck chk{"far_complete", comp};
            chk.applicable = view.far_squares.size() >= 2;
            bool complete = true;
            std::vector<int> fa(d), fb(d);
            for (std::size_t i = 0; i < view.far_squares.size() && complete; ++i)
                for (std::size_t j = i + 1; j < view.far_squares.size(); ++j) {
                    dec.grid.coords(view.far_squares[i], fa);
                    dec.grid.coords(view.far_squares[j], fb);
                    const long long e2 = GridGeom::euclid2(fa, fb);
                    const bool joined = dec.rules.ghat_euclid2 > 0
                                            ? e2 <= dec.rules.ghat_euclid2
                                            : GridGeom::linf(fa, fb) <= dec.rules.ghat_linf;
                    if (!joined) {
                        complete = false;
                        break;
                    }
                }
            chk.held = complete;
            checks.push_back(chk);
        }

        {
            LemmaCheck chk{"cutoff_containment", comp};
            bool ok = true;
            for (long long sq : view.cutoff) {
                if (!view.in_blowup[sq]) ok = false;
                dec.for_ghat_neighbors(sq, [&](long long w) {
                    if (!view.in_blowup[w]) ok = false;
                });
                if (!ok) break;
            }
            chk.held = ok;
            checks.push_back(chk);
        }

        {
            LemmaCheck chk{"boundary_connected", comp};
            std::vector<char> mask(dec.grid.total, 0);
            for (long long sq : view.blowup)
                if (view.in_a[sq]) mask[sq] = 1;
            chk.held = detail::connected_in_offsets(dec.grid, mask, dec.ghat_offsets);
            checks.push_back(chk);
        }

        {
            LemmaCheck chk{"sea_identity", comp};
            bool ok = true;
            for (long long sq : view.blowup)
                if (dec.in_sea[sq] != view.in_a[sq]) {
                    ok = false;
                    break;
                }
            chk.held = ok;
            checks.push_back(chk);
        }

        {
            LemmaCheck chk{"diag_boundary", comp};
            std::vector<char> mask(dec.grid.total, 0);
            for (long long sq : view.blowup) mask[sq] = 1;
            std::vector<char> co_mask(dec.grid.total, 1);
            for (long long sq : view.blowup) co_mask[sq] = 0;
            const bool e_conn = detail::connected_in_offsets(dec.grid, mask, dec.lattice_offsets);
            const bool co_conn = detail::connected_in_offsets(dec.grid, co_mask, dec.lattice_offsets);
            const bool co_nonempty =
                static_cast<long long>(view.blowup.size()) < dec.grid.total;
            chk.applicable = e_conn && co_conn && co_nonempty && !view.blowup.empty();
            chk.held = !chk.applicable || diagonal_boundary_check(view.blowup, dec.grid);
            checks.push_back(chk);
        }
    }
    return checks;
}

/// The k-NN analogue set of checks on a decomposition built with
/// SquareRules::knn.
inline std::vector<LemmaCheck> check_knn_structure(const SeaDecomposition& dec,
                                                   long long component_bound) {
    std::vector<LemmaCheck> checks;
    for (std::size_t ci = 0; ci < dec.views.size(); ++ci) {
        const ComponentView& view = dec.views[ci];
        const int comp = static_cast<int>(ci);
        const long long u = static_cast<long long>(view.squares.size());

        checks.push_back({"component_size_bound", comp, true, u < component_bound});

        {
            LemmaCheck chk{"cutoff_in_blowup", comp};
            bool ok = true;
            for (long long sq : view.cutoff)
                if (!view.in_blowup[sq]) {
                    ok = false;
                    break;
                }
            chk.held = ok;
            checks.push_back(chk);
        }

        {
            LemmaCheck chk{"boundary_connected", comp};
            std::vector<char> mask(dec.grid.total, 0);
            for (long long sq : view.blowup)
                if (view.in_a[sq]) mask[sq] = 1;
            chk.held = detail::connected_in_offsets(dec.grid, mask, dec.ghat_offsets);
            checks.push_back(chk);
        }

        {
            // |A^c \ N| <= u^2 / 2 (vertex isoperimetry in the square).
            LemmaCheck chk{"isoperimetric", comp};
            const long long outside = static_cast<long long>(view.cutoff.size()) - u;
            chk.held = outside <= u * u / 2;
            checks.push_back(chk);
        }

        {
            LemmaCheck chk{"sea_identity", comp};
            bool ok = true;
            for (long long sq : view.blowup)
                if (dec.in_sea[sq] != view.in_a[sq]) {
                    ok = false;
                    break;
                }
            chk.held = ok;
            checks.push_back(chk);
        }
    }
    return checks;
}

}  // namespace rgg
