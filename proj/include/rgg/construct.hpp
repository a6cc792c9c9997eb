// The five-stage constructive Hamilton-cycle builder: tessellate, classify
// the difficult squares, check the structural lemmas, stitch the cutoff
// regions into sea-anchored walks, and close everything with a spanning-tree
// cycle of the sea.
//
// Square-level adjacency is planning-only. Every edge placed on the final
// cycle is validated against the real graph and any miss fails the stage, so
// the builder is sound at any parameter scale; the lemma checks report how
// far a run is from the regime where success is guaranteed.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgg/algorithms.hpp"
#include "rgg/flow.hpp"
#include "rgg/graph.hpp"
#include "rgg/tessellation.hpp"

namespace rgg {

inline const std::array<const char*, 5>& stage_names() {
    static const std::array<const char*, 5> names = {
        "stage1_tessellation", "stage2_classification", "stage3_structure",
        "stage4_stitching", "stage5_tree_cycle"};
    return names;
}

/// k-NN pipeline constants (defaults are the proof's values; desk-scale runs
/// override them, every one is configurable).
struct KnnConstructionParams {
    double rminus_coeff = 0.035;  // r- = coeff * sqrt(log n)
    double rplus_coeff = 2.3;     // r+ = coeff * sqrt(log n)
    int big_d = 10'000;           // D: square-centre distance beyond which no edge exists
    long long fullness_m = 1'000'000'000;
    long long kappa = 50'000'000;
    long long component_bound = 7'000;

    void validate() const {
        if (rminus_coeff <= 0.0 || rplus_coeff <= 0.0)
            throw std::invalid_argument("KnnConstructionParams: radius coefficients must be positive");
        if (big_d < 2) throw std::invalid_argument("KnnConstructionParams: D must be >= 2");
        if (fullness_m < 1) throw std::invalid_argument("KnnConstructionParams: M must be >= 1");
    }
};

/// A stage-4 product: an open path whose both endpoints lie in the anchor
/// (sea) square; stage 5 splices it there.
struct StitchWalk {
    long long anchor_square = -1;
    std::vector<int> vertices;
};

struct ComponentStat {
    long long n_size = 0;
    long long cutoff_size = 0;
    long long far_squares = 0;
    long long close_squares = 0;
    int far_points = 0;
    int walks = 0;
};

struct StageLog {
    // stage 1
    double square_side = 0.0;
    double calibration_radius = 0.0;
    std::vector<int> grid_dims;
    // stage 2
    long long full_squares = 0;
    long long nonfull_squares = 0;
    long long sea_size = 0;
    std::vector<ComponentStat> components;
    // stage 4
    int walk_count = 0;
    long long max_consumed_per_square = 0;
    bool stage4_budget_ok = true;   // consumption <= 2U+2 per sea square
    bool touched_disjoint = true;   // touched-square sets of components are disjoint
    // stage 5
    long long tree_squares = 0;
    int tree_max_degree = 0;
    long long tree_visits = 0;
    int cycle_length = 0;
};

struct ConstructionReport {
    std::string model;  // "gilbert" or "knn"
    double radius = 0.0;
    int k = 0;
    bool success = false;
    std::string failed_stage;
    std::string failure_reason;
    HamiltonCycle cycle;
    std::vector<LemmaCheck> checks;
    std::vector<std::string> warnings;
    StageLog log;

    bool all_checks_held() const {
        for (const auto& c : checks)
            if (c.applicable && !c.held) return false;
        return true;
    }
};

inline nlohmann::json to_json(const ConstructionReport& r) {
    nlohmann::json j;
    j["model"] = r.model;
    if (r.model == "gilbert") j["radius"] = r.radius;
    if (r.model == "knn") j["k"] = r.k;
    j["outcome"] = r.success ? "cycle" : "failed";
    if (!r.success) {
        j["failed_stage"] = r.failed_stage;
        j["reason"] = r.failure_reason;
    } else {
        std::string cyc;
        for (std::size_t i = 0; i < r.cycle.order.size(); ++i) {
            if (i) cyc += ' ';
            cyc += std::to_string(r.cycle.order[i]);
        }
        j["cycle"] = cyc;
    }
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"component", c.component},
                          {"applicable", c.applicable},
                          {"held", c.held}});
    j["assumption_checks"] = checks;
    j["warnings"] = r.warnings;
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : r.log.components)
        comps.push_back({{"size", c.n_size},
                         {"cutoff", c.cutoff_size},
                         {"far_squares", c.far_squares},
                         {"close_squares", c.close_squares},
                         {"far_points", c.far_points},
                         {"walks", c.walks}});
    j["stage_log"] = {{"square_side", r.log.square_side},
                      {"calibration_radius", r.log.calibration_radius},
                      {"grid_dims", r.log.grid_dims},
                      {"full_squares", r.log.full_squares},
                      {"nonfull_squares", r.log.nonfull_squares},
                      {"sea_size", r.log.sea_size},
                      {"components", comps},
                      {"walk_count", r.log.walk_count},
                      {"max_consumed_per_square", r.log.max_consumed_per_square},
                      {"stage4_budget_ok", r.log.stage4_budget_ok},
                      {"touched_disjoint", r.log.touched_disjoint},
                      {"tree_squares", r.log.tree_squares},
                      {"tree_max_degree", r.log.tree_max_degree},
                      {"tree_visits", r.log.tree_visits},
                      {"cycle_length", r.log.cycle_length}};
    return j;
}

// ---------------------------------------------------------------------------
// Vertex bookkeeping
// ---------------------------------------------------------------------------

/// Tracks which points are already on the cycle under construction and hands
/// out fresh vertices per square (ascending point index, deterministic).
class VertexLedger {
public:
    VertexLedger(const Tessellation& t) : t_(&t), used_(t.square_of_point.size(), 0) {
        consumed_.assign(t.grid.total, 0);
    }

    bool is_used(int p) const { return used_[p] != 0; }
    void mark_used(int p, bool count_against_square = true) {
        if (used_[p]) return;
        used_[p] = 1;
        if (count_against_square) ++consumed_[t_->square_of_point[p]];
    }

    std::optional<int> take_fresh(long long sq) {
        for (const int* it = t_->points_begin(sq); it != t_->points_end(sq); ++it)
            if (!used_[*it]) {
                mark_used(*it);
                return *it;
            }
        return std::nullopt;
    }

    int fresh_count(long long sq) const {
        int c = 0;
        for (const int* it = t_->points_begin(sq); it != t_->points_end(sq); ++it)
            if (!used_[*it]) ++c;
        return c;
    }

    std::vector<int> take_all_fresh(long long sq) {
        std::vector<int> out;
        for (const int* it = t_->points_begin(sq); it != t_->points_end(sq); ++it)
            if (!used_[*it]) {
                mark_used(*it);
                out.push_back(*it);
            }
        return out;
    }

    long long consumed(long long sq) const { return consumed_[sq]; }
    long long max_consumed() const {
        long long m = 0;
        for (long long c : consumed_) m = std::max(m, c);
        return m;
    }

private:
    const Tessellation* t_;
    std::vector<char> used_;
    std::vector<long long> consumed_;
};

namespace detail {

struct StitchError {
    std::string reason;
};

using StitchResult = std::optional<StitchError>;  // nullopt = ok

inline bool edge_ok(const GeometricGraph& g, int u, int v) { return g.adjacent(u, v); }

inline StitchResult validate_walk_edges(const GeometricGraph& g, const std::vector<int>& w,
                                        const char* what) {
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (!edge_ok(g, w[i], w[i + 1]))
            return StitchError{std::string(what) + ": edge " + std::to_string(w[i]) + "-" +
                               std::to_string(w[i + 1]) + " missing from the graph"};
    return std::nullopt;
}

/// Lift a square path from `from_sq` to `to_sq` through the squares of
/// `allowed` (blow-up intersect A), one fresh vertex per square after the
/// first. Squares with no unused vertex are excluded from routing, which is
/// the reroute rule: a second search simply never enters a dry square.
inline StitchResult lift_square_walk(const GeometricGraph& g, const SeaDecomposition& dec,
                                     VertexLedger& ledger, const std::vector<char>& allowed,
                                     long long from_sq, long long to_sq, int from_vertex,
                                     std::vector<int>& out_vertices,
                                     std::vector<long long>& touched) {
    std::vector<long long> parent(dec.grid.total, -2);
    std::vector<long long> queue{from_sq};
    parent[from_sq] = -1;
    std::size_t qi = 0;
    while (qi < queue.size() && parent[to_sq] == -2) {
        const long long v = queue[qi++];
        dec.for_ghat_neighbors(v, [&](long long w) {
            if (parent[w] == -2 && allowed[w] && ledger.fresh_count(w) > 0) {
                parent[w] = v;
                queue.push_back(w);
            }
        });
    }
    if (parent[to_sq] == -2)
        return StitchError{
            "no square walk from the meeting square to the anchor with vertex budget"};
    std::vector<long long> squares;
    for (long long v = to_sq; v != -1; v = parent[v]) squares.push_back(v);
    std::reverse(squares.begin(), squares.end());  // from_sq ... to_sq

    std::vector<int> walk{from_vertex};
    for (std::size_t i = 1; i < squares.size(); ++i) {
        walk.push_back(*ledger.take_fresh(squares[i]));
        touched.push_back(squares[i]);
    }
    if (auto err = validate_walk_edges(g, walk, "square walk")) return err;
    out_vertices.assign(walk.begin() + 1, walk.end());
    return std::nullopt;
}

}  // namespace detail

struct StitchOutput {
    std::vector<StitchWalk> walks;
    std::vector<long long> touched;  // squares where this component consumed vertices
    int far_points = 0;
};

/// Stage 4 for one non-full component of the Gilbert pipeline: route the far
/// region onto a sea-anchored walk via two vertex-disjoint escape paths, then
/// attach every close square to a sea neighbour.
inline detail::StitchResult stitch_component(const GeometricGraph& g, const SeaDecomposition& dec,
                                             const Tessellation& t, const ComponentView& view,
                                             VertexLedger& ledger, StitchOutput& out) {
    std::vector<char> allowed(dec.grid.total, 0);
    for (long long sq : view.blowup)
        if (view.in_a[sq]) allowed[sq] = 1;

    auto note_touched = [&](const std::vector<int>& vertices) {
        for (int v : vertices) out.touched.push_back(t.square_of_point[v]);
    };

    // Far region: no points - nothing to do; one point - two disjoint paths
    // from it; several - paths from two chosen points with the rest toured in
    // between (far points are pairwise adjacent when the far-complete check
    // holds; every edge is validated regardless).
    std::vector<int> far_pts;
    for (long long sq : view.far_squares)
        for (const int* it = t.points_begin(sq); it != t.points_end(sq); ++it)
            if (!ledger.is_used(*it)) far_pts.push_back(*it);
    out.far_points = static_cast<int>(far_pts.size());

    if (!far_pts.empty()) {
        const int w1 = far_pts.front();
        const int w2 = far_pts.size() >= 2 ? far_pts.back() : w1;
        UnitVertexFlow flow(g);
        for (int p = 0; p < g.n; ++p)
            if (ledger.is_used(p)) flow.block_through(p);
        flow.block_through(w1);
        if (w2 != w1) flow.block_through(w2);
        if (w1 == w2) {
            flow.add_source(w1, 2);
        } else {
            flow.add_source(w1, 1);
            flow.add_source(w2, 1);
        }
        int sinks = 0;
        for (int p = 0; p < g.n; ++p) {
            if (ledger.is_used(p) || p == w1 || p == w2) continue;
            if (view.in_a[t.square_of_point[p]]) {
                flow.add_sink(p);
                flow.block_through(p);
                ++sinks;
            }
        }
        if (sinks == 0) return detail::StitchError{"far region: no unused vertices in A to reach"};
        if (flow.max_flow(2) < 2)
            return detail::StitchError{
                "far region: two vertex-disjoint escape paths not found (max-flow < 2)"};
        auto paths = flow.extract_paths();
        if (paths.size() != 2)
            return detail::StitchError{"far region: flow decomposition did not yield two paths"};
        if (paths[0].front() != w1) std::swap(paths[0], paths[1]);
        for (const auto& path : paths)
            for (int v : path) ledger.mark_used(v);

        const int p1 = paths[0].back();
        const int p2 = paths[1].back();
        const long long q1 = t.square_of_point[p1];
        const long long q2 = t.square_of_point[p2];
        if (!(view.in_blowup[q1] && view.in_a[q1] && view.in_blowup[q2] && view.in_a[q2]))
            return detail::StitchError{"far region: meeting square outside N_2c intersect A"};
        if (!dec.in_sea[q1])
            return detail::StitchError{"far region: anchor square not in the sea"};

        std::vector<int> walk(paths[0].rbegin(), paths[0].rend());  // p1 ... w1
        for (int p : far_pts)
            if (!ledger.is_used(p)) {
                ledger.mark_used(p);
                walk.push_back(p);
            }
        walk.insert(walk.end(), paths[1].begin() + (w1 == w2 ? 1 : 0), paths[1].end());
        if (auto err = detail::validate_walk_edges(g, walk, "far walk")) return err;
        note_touched(walk);
        if (q2 != q1) {
            std::vector<int> lift;
            if (auto err = detail::lift_square_walk(g, dec, ledger, allowed, q2, q1, walk.back(),
                                                    lift, out.touched))
                return err;
            walk.insert(walk.end(), lift.begin(), lift.end());
        }
        out.walks.push_back({q1, std::move(walk)});
    }

    // Close squares: attach to a sea neighbour with two fresh vertices,
    // covering 0, 1 and >=2 point cases.
    for (long long sq : view.close_squares) {
        std::vector<int> pts;
        for (const int* it = t.points_begin(sq); it != t.points_end(sq); ++it)
            if (!ledger.is_used(*it)) pts.push_back(*it);
        if (pts.empty()) continue;

        long long anchor = -1;
        dec.for_ghat_neighbors(sq, [&](long long w) {
            if (view.in_a[w] && dec.in_sea[w] && ledger.fresh_count(w) >= 2)
                if (anchor == -1 || w < anchor) anchor = w;
        });
        if (anchor == -1)
            return detail::StitchError{
                "close square " + std::to_string(sq) +
                ": no sea neighbour with two fresh vertices"};
        const int u = *ledger.take_fresh(anchor);
        std::vector<int> walk{u};
        if (pts.size() == 1) {
            walk.push_back(pts[0]);
        } else {
            walk.push_back(pts.front());
            for (std::size_t i = 1; i + 1 < pts.size(); ++i) walk.push_back(pts[i]);
            walk.push_back(pts.back());
        }
        for (int p : pts) ledger.mark_used(p);
        walk.push_back(*ledger.take_fresh(anchor));
        if (auto err = detail::validate_walk_edges(g, walk, "close walk")) return err;
        note_touched(walk);
        out.walks.push_back({anchor, std::move(walk)});
    }
    return std::nullopt;
}

/// Stage 4 for one component of the k-NN pipeline: pick up to two vertices
/// per cutoff square (a single vertex with multiplicity two), find
/// simultaneous vertex-disjoint paths to A for all picks with one max-flow,
/// and turn each cutoff square into a sea-anchored walk through its meeting
/// points.
inline detail::StitchResult stitch_component_knn(const GeometricGraph& g,
                                                 const SeaDecomposition& dec,
                                                 const Tessellation& t, const ComponentView& view,
                                                 VertexLedger& ledger, long long kappa,
                                                 StitchOutput& out, std::vector<LemmaCheck>& checks,
                                                 int comp_index) {
    std::vector<char> allowed(dec.grid.total, 0);
    for (long long sq : view.blowup)
        if (view.in_a[sq]) allowed[sq] = 1;

    struct Pick {
        long long sq;
        int x, y;  // y == x means multiplicity two
    };
    std::vector<Pick> picks;
    int far_points = 0;
    for (long long sq : view.cutoff) {
        std::vector<int> pts;
        for (const int* it = t.points_begin(sq); it != t.points_end(sq); ++it)
            if (!ledger.is_used(*it)) pts.push_back(*it);
        far_points += static_cast<int>(pts.size());
        if (pts.empty()) continue;
        picks.push_back({sq, pts[0], pts.size() >= 2 ? pts[1] : pts[0]});
    }
    out.far_points = far_points;
    if (picks.empty()) return std::nullopt;

    const long long required = 2 * static_cast<long long>(picks.size());
    checks.push_back({"picked_within_kappa", comp_index, true, required <= kappa});

    UnitVertexFlow flow(g);
    for (int p = 0; p < g.n; ++p)
        if (ledger.is_used(p)) flow.block_through(p);
    std::vector<char> is_pick(g.n, 0);
    for (const Pick& pk : picks) {
        is_pick[pk.x] = is_pick[pk.y] = 1;
        flow.block_through(pk.x);
        flow.block_through(pk.y);
        if (pk.x == pk.y) {
            flow.add_source(pk.x, 2);
        } else {
            flow.add_source(pk.x, 1);
            flow.add_source(pk.y, 1);
        }
    }
    int sinks = 0;
    for (int p = 0; p < g.n; ++p) {
        if (ledger.is_used(p) || is_pick[p]) continue;
        if (view.in_a[t.square_of_point[p]]) {
            flow.add_sink(p);
            flow.block_through(p);
            ++sinks;
        }
    }
    if (sinks == 0) return detail::StitchError{"knn stitch: no unused vertices in A to reach"};
    const int pushed = flow.max_flow(static_cast<int>(required));
    if (pushed < required)
        return detail::StitchError{"knn stitch: vertex-disjoint path system infeasible (flow " +
                                   std::to_string(pushed) + " < " + std::to_string(required) + ")"};
    auto paths = flow.extract_paths();
    std::map<int, std::vector<std::vector<int>>> by_source;
    for (auto& p : paths) by_source[p.front()].push_back(std::move(p));
    for (auto& [src, lst] : by_source)
        for (auto& p : lst)
            for (int v : p) ledger.mark_used(v);

    auto note_touched = [&](const std::vector<int>& vertices) {
        for (int v : vertices) out.touched.push_back(t.square_of_point[v]);
    };

    for (const Pick& pk : picks) {
        std::vector<int> path_a, path_b;
        if (pk.x == pk.y) {
            auto& lst = by_source[pk.x];
            if (lst.size() != 2)
                return detail::StitchError{"knn stitch: expected two paths from a doubled pick"};
            path_a = lst[0];
            path_b = lst[1];
        } else {
            auto &la = by_source[pk.x], &lb = by_source[pk.y];
            if (la.size() != 1 || lb.size() != 1)
                return detail::StitchError{"knn stitch: pick/path mismatch"};
            path_a = la[0];
            path_b = lb[0];
        }
        const int m1 = path_a.back();
        const int m2 = path_b.back();
        const long long q1 = t.square_of_point[m1];
        const long long q2 = t.square_of_point[m2];
        if (!(view.in_blowup[q1] && view.in_a[q1] && view.in_blowup[q2] && view.in_a[q2]))
            return detail::StitchError{"knn stitch: meeting square outside N_D intersect A"};
        if (!dec.in_sea[q1])
            return detail::StitchError{"knn stitch: anchor square not in the sea"};

        std::vector<int> walk(path_a.rbegin(), path_a.rend());  // m1 ... x
        for (const int* it = t.points_begin(pk.sq); it != t.points_end(pk.sq); ++it)
            if (!ledger.is_used(*it) && *it != pk.y) {
                ledger.mark_used(*it);
                walk.push_back(*it);
            }
        walk.insert(walk.end(), path_b.begin() + (pk.x == pk.y ? 1 : 0), path_b.end());
        if (auto err = detail::validate_walk_edges(g, walk, "knn cutoff walk")) return err;
        note_touched(walk);
        if (q2 != q1) {
            std::vector<int> lift;
            if (auto err = detail::lift_square_walk(g, dec, ledger, allowed, q2, q1, walk.back(),
                                                    lift, out.touched))
                return err;
            walk.insert(walk.end(), lift.begin(), lift.end());
        }
        out.walks.push_back({q1, std::move(walk)});
    }
    return std::nullopt;
}

/// Stage 5: minimum spanning tree of the sea squares that still carry fresh
/// vertices or anchored walks, doubled into an Euler tour; the tour's last
/// visit to a square absorbs its leftovers and splices the walks anchored
/// there.
inline detail::StitchResult build_tree_cycle(const GeometricGraph& g, const SeaDecomposition& dec,
                                             const Tessellation& t, VertexLedger& ledger,
                                             const std::vector<StitchWalk>& walks, StageLog& log,
                                             HamiltonCycle& out) {
    std::map<long long, std::vector<std::size_t>> walks_at;
    for (std::size_t i = 0; i < walks.size(); ++i)
        walks_at[walks[i].anchor_square].push_back(i);
    for (const auto& [sq, lst] : walks_at)
        if (!dec.in_sea[sq])
            return detail::StitchError{"tree cycle: walk anchored outside the sea"};

    std::vector<long long> nodes;
    for (long long sq : dec.sea)
        if (ledger.fresh_count(sq) > 0 || walks_at.count(sq)) nodes.push_back(sq);
    if (nodes.empty()) return detail::StitchError{"tree cycle: no sea squares left to span"};

    std::map<long long, int> local;
    for (std::size_t i = 0; i < nodes.size(); ++i) local[nodes[i]] = static_cast<int>(i);
    const int m = static_cast<int>(nodes.size());
    log.tree_squares = m;

    // Prim MST over Ghat edges with real centre distances; deterministic
    // tie-break on (weight, to, from).
    const int d = dec.grid.d;
    std::vector<int> coords(d);
    auto center_of = [&](long long sq, std::vector<double>& c) {
        dec.grid.coords(sq, coords);
        c.resize(d);
        for (int i = 0; i < d; ++i) c[i] = t.center(coords, i);
    };
    std::vector<double> ca, cb;
    std::vector<int> parent(m, -1);
    std::vector<char> in_tree(m, 0);
    using HeapItem = std::tuple<double, long long, int>;  // weight, to-square, parent-local
    std::vector<HeapItem> heap;
    auto push_edges = [&](int li) {
        center_of(nodes[li], ca);
        dec.for_ghat_neighbors(nodes[li], [&](long long w) {
            auto it = local.find(w);
            if (it == local.end() || in_tree[it->second]) return;
            center_of(w, cb);
            double wgt = 0.0;
            for (int i = 0; i < d; ++i) wgt += (ca[i] - cb[i]) * (ca[i] - cb[i]);
            heap.emplace_back(std::sqrt(wgt), w, li);
            std::push_heap(heap.begin(), heap.end(), std::greater<>());
        });
    };
    in_tree[0] = 1;
    push_edges(0);
    int reached = 1;
    while (!heap.empty() && reached < m) {
        std::pop_heap(heap.begin(), heap.end(), std::greater<>());
        auto [wgt, to_sq, from_li] = heap.back();
        heap.pop_back();
        const int li = local[to_sq];
        if (in_tree[li]) continue;
        in_tree[li] = 1;
        parent[li] = from_li;
        ++reached;
        push_edges(li);
    }
    if (reached < m)
        return detail::StitchError{"tree cycle: sea residue is disconnected in the square graph"};

    std::vector<std::vector<int>> children(m);
    for (int i = 1; i < m; ++i)
        if (parent[i] >= 0) children[parent[i]].push_back(i);
    for (auto& c : children) std::sort(c.begin(), c.end());
    int max_deg = 0;
    for (int i = 0; i < m; ++i) {
        const int deg = static_cast<int>(children[i].size()) + (parent[i] >= 0 ? 1 : 0);
        max_deg = std::max(max_deg, deg);
    }
    log.tree_max_degree = max_deg;

    // Euler tour of the doubled tree, trailing return to the root dropped.
    std::vector<int> seq;
    {
        std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
        seq.push_back(0);
        while (!stack.empty()) {
            auto& [v, ci] = stack.back();
            if (ci < children[v].size()) {
                const int c = children[v][ci++];
                seq.push_back(c);
                stack.push_back({c, 0});
            } else {
                stack.pop_back();
                if (!stack.empty()) seq.push_back(stack.back().first);
            }
        }
        if (seq.size() > 1 && seq.back() == 0) seq.pop_back();
    }
    log.tree_visits = static_cast<long long>(seq.size());

    std::vector<std::size_t> last_visit(m, 0);
    for (std::size_t i = 0; i < seq.size(); ++i) last_visit[seq[i]] = i;

    std::vector<int> cycle;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const int li = seq[i];
        const long long sq = nodes[li];
        if (i != last_visit[li]) {
            auto v = ledger.take_fresh(sq);
            if (!v)
                return detail::StitchError{"tree cycle: vertex budget exhausted at square " +
                                           std::to_string(sq)};
            cycle.push_back(*v);
        } else {
            std::vector<int> fresh = ledger.take_all_fresh(sq);
            auto wit = walks_at.find(sq);
            const bool has_walks = wit != walks_at.end();
            if (fresh.empty() && !has_walks)
                return detail::StitchError{"tree cycle: final visit to square " +
                                           std::to_string(sq) + " found nothing to absorb"};
            cycle.insert(cycle.end(), fresh.begin(), fresh.end());
            if (has_walks)
                for (std::size_t wi : wit->second)
                    cycle.insert(cycle.end(), walks[wi].vertices.begin(),
                                 walks[wi].vertices.end());
        }
    }
    if (auto err = detail::validate_walk_edges(g, cycle, "tree cycle")) return err;
    if (cycle.size() >= 2 && !detail::edge_ok(g, cycle.back(), cycle.front()))
        return detail::StitchError{"tree cycle: closing edge missing from the graph"};
    out.order = std::move(cycle);
    log.cycle_length = static_cast<int>(out.order.size());
    return std::nullopt;
}

namespace detail {

inline void fail_stage(ConstructionReport& r, int stage_index, const std::string& reason) {
    r.success = false;
    r.failed_stage = stage_names()[stage_index];
    r.failure_reason = reason;
}

inline void stage2_stats(const SeaDecomposition& dec, StageLog& log) {
    long long nonfull = 0;
    for (char c : dec.non_full) nonfull += c;
    log.nonfull_squares = nonfull;
    log.full_squares = dec.grid.total - nonfull;
    log.sea_size = static_cast<long long>(dec.sea.size());
    for (const auto& view : dec.views) {
        ComponentStat cs;
        cs.n_size = static_cast<long long>(view.squares.size());
        cs.cutoff_size = static_cast<long long>(view.cutoff.size());
        cs.far_squares = static_cast<long long>(view.far_squares.size());
        cs.close_squares = static_cast<long long>(view.close_squares.size());
        log.components.push_back(cs);
    }
}

inline bool touched_sets_disjoint(std::vector<std::vector<long long>>& touched) {
    std::set<long long> seen;
    for (auto& t : touched) {
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        for (long long sq : t)
            if (!seen.insert(sq).second) return false;
    }
    return true;
}

}  // namespace detail

/// Full Gilbert pipeline. The tessellation is calibrated to the operative
/// radius r (s = r/c), which reproduces the paper grid when r sits in the
/// Stage-1 window and keeps the square-graph guarantees exact otherwise; a
/// warning records any window or budget-inequality violation.
inline ConstructionReport construct_hamilton(const PointSet& ps, double r,
                                             const ConstructionParams& params, const Norm& norm) {
    params.validate();
    if (ps.count() < 3)
        throw std::invalid_argument("construct_hamilton: need at least 3 points");
    if (!(r > 0.0)) throw std::invalid_argument("construct_hamilton: radius must be positive");
    const int d = ps.box.dimension_d;
    if (params.c < d + 1)
        throw std::invalid_argument("construct_hamilton: need c >= d+1");

    ConstructionReport report;
    report.model = "gilbert";
    report.radius = r;
    const GeometricGraph g = build_gilbert(ps, r, norm);

    // Stage 1
    Tessellation t;
    try {
        t = tessellate_with_side(ps, r / params.c, params.c, r);
    } catch (const std::exception& e) {
        detail::fail_stage(report, 0, e.what());
        return report;
    }
    report.log.square_side = t.s;
    report.log.calibration_radius = t.calibration_radius;
    report.log.grid_dims = t.grid.dims;
    if (ps.box.intensity_n > 1.0) {
        const double r0_est =
            d == 2 ? r0_planar(ps.box.intensity_n)
                   : std::pow(std::log(ps.box.intensity_n) / ball_volume_unclipped(1.0, d, norm),
                              1.0 / d);
        const double c = params.c;
        if (r <= (1.0 - 0.5 / c) * r0_est || r >= (1.0 + 0.5 / c) * r0_est)
            report.warnings.push_back("radius " + format_double(r) +
                                      " outside the Stage-1 window around r0=" +
                                      format_double(r0_est));
    }
    long long budget_u;
    if (d == 2) {
        budget_u = nonfull_component_bound_u(params.c);
    } else {
        budget_u = static_cast<long long>(
            std::ceil((1.0 + 1.0 / params.c) * ball_volume_unclipped(r, d, norm) /
                      std::pow(t.s, d)));
    }
    const double stage4_need =
        2.0 * static_cast<double>(budget_u) + 2.0 + std::pow(2.0 * params.c + 1.0, d);
    if (static_cast<double>(params.fullness_m) <= stage4_need)
        report.warnings.push_back("M=" + std::to_string(params.fullness_m) +
                                  " does not exceed 2U+2+(2c+1)^d=" + format_double(stage4_need) +
                                  "; the Stage-4 vertex budget is not guaranteed");

    // Stage 2
    const SeaDecomposition dec =
        classify_and_decompose(t, params.fullness_m, SquareRules::gilbert(params.c, d));
    detail::stage2_stats(dec, report.log);
    if (dec.sea_empty()) {
        detail::fail_stage(report, 1, "sea empty: no full squares form a square-graph component");
        return report;
    }

    // Stage 3 (diagnostics only)
    report.checks = check_structural_lemmas(dec, params, t, norm);

    // Stage 4
    VertexLedger ledger(t);
    std::vector<StitchWalk> walks;
    std::vector<std::vector<long long>> touched_by_component;
    for (std::size_t ci = 0; ci < dec.views.size(); ++ci) {
        StitchOutput so;
        auto err = stitch_component(g, dec, t, dec.views[ci], ledger, so);
        report.log.components[ci].far_points = so.far_points;
        report.log.components[ci].walks = static_cast<int>(so.walks.size());
        if (err) {
            detail::fail_stage(report, 3,
                               "component " + std::to_string(ci) + ": " + err->reason);
            return report;
        }
        for (auto& w : so.walks) walks.push_back(std::move(w));
        touched_by_component.push_back(std::move(so.touched));
    }
    report.log.walk_count = static_cast<int>(walks.size());
    report.log.max_consumed_per_square = ledger.max_consumed();
    report.log.stage4_budget_ok = report.log.max_consumed_per_square <= 2 * budget_u + 2;
    report.log.touched_disjoint = detail::touched_sets_disjoint(touched_by_component);

    // Stage 5
    HamiltonCycle cycle;
    if (auto err = build_tree_cycle(g, dec, t, ledger, walks, report.log, cycle)) {
        detail::fail_stage(report, 4, err->reason);
        return report;
    }
    if (!verify_hamilton_cycle(g, cycle)) {
        detail::fail_stage(report, 4, "assembled cycle failed verification");
        return report;
    }
    report.cycle = std::move(cycle);
    report.success = true;
    return report;
}

/// Full k-NN pipeline with the Stage-1 substitutions: s = r-/sqrt(8), the
/// 8-neighbour square graph, non-full adjacency at l_inf 2D-1 and blow-ups
/// N_D. Edge lengths vary in this model, so square-level adjacency is
/// planning-only and every edge is validated; point sets with an edge longer
/// than r+ or a non-edge shorter than r- are flagged, not discarded.
inline ConstructionReport construct_hamilton_knn(const PointSet& ps, int k,
                                                 const KnnConstructionParams& kp,
                                                 const Norm& norm) {
    kp.validate();
    if (ps.count() < 3)
        throw std::invalid_argument("construct_hamilton_knn: need at least 3 points");
    if (!(ps.box.intensity_n > 1.0))
        throw std::invalid_argument("construct_hamilton_knn: need intensity > 1");

    ConstructionReport report;
    report.model = "knn";
    report.k = k;
    const GeometricGraph g = undirect(build_knn_directed(ps, k, norm));

    const double log_n = std::log(ps.box.intensity_n);
    const double r_minus = kp.rminus_coeff * std::sqrt(log_n);
    const double r_plus = kp.rplus_coeff * std::sqrt(log_n);

    // Stage 1
    Tessellation t;
    try {
        t = tessellate_with_side(ps, r_minus / std::sqrt(8.0), 0, r_minus);
    } catch (const std::exception& e) {
        detail::fail_stage(report, 0, e.what());
        return report;
    }
    report.log.square_side = t.s;
    report.log.calibration_radius = r_minus;
    report.log.grid_dims = t.grid.dims;
    {
        long long long_edges = 0;
        for (int u = 0; u < g.n; ++u)
            for (int v : g.adj[u])
                if (u < v && ps.dist(u, v, norm) > r_plus) ++long_edges;
        if (long_edges > 0)
            report.warnings.push_back(std::to_string(long_edges) + " edges longer than r+=" +
                                      format_double(r_plus));
        long long short_nonedges = 0;
        if (g.n >= 2) {
            BucketGrid grid(ps, r_minus);
            const int d = ps.box.dimension_d;
            std::vector<int> center(d);
            for (std::size_t c = 0; c < grid.cells(); ++c) {
                auto [pb, pe] = grid.cell_points(c);
                if (pb == pe) continue;
                grid.cell_coords(c, center);
                grid.for_cells_within(center, 1, [&](std::size_t nc) {
                    if (nc < c) return;
                    auto [qb, qe] = grid.cell_points(nc);
                    for (const int* p = pb; p != pe; ++p)
                        for (const int* q = qb; q != qe; ++q) {
                            if (nc == c && *q <= *p) continue;
                            if (ps.dist(std::min(*p, *q), std::max(*p, *q), norm) < r_minus &&
                                !g.adjacent(*p, *q))
                                ++short_nonedges;
                        }
                });
            }
        }
        if (short_nonedges > 0)
            report.warnings.push_back(std::to_string(short_nonedges) +
                                      " non-edges shorter than r-=" + format_double(r_minus));
    }

    // Stage 2
    const SeaDecomposition dec =
        classify_and_decompose(t, kp.fullness_m, SquareRules::knn(kp.big_d));
    detail::stage2_stats(dec, report.log);
    if (dec.sea_empty()) {
        detail::fail_stage(report, 1, "sea empty: no full squares form a square-graph component");
        return report;
    }

    // Stage 3 (diagnostics only)
    report.checks = check_knn_structure(dec, kp.component_bound);

    // Stage 4
    VertexLedger ledger(t);
    std::vector<StitchWalk> walks;
    std::vector<std::vector<long long>> touched_by_component;
    for (std::size_t ci = 0; ci < dec.views.size(); ++ci) {
        StitchOutput so;
        auto err = stitch_component_knn(g, dec, t, dec.views[ci], ledger, kp.kappa, so,
                                        report.checks, static_cast<int>(ci));
        report.log.components[ci].far_points = so.far_points;
        report.log.components[ci].walks = static_cast<int>(so.walks.size());
        if (err) {
            detail::fail_stage(report, 3,
                               "component " + std::to_string(ci) + ": " + err->reason);
            return report;
        }
        for (auto& w : so.walks) walks.push_back(std::move(w));
        touched_by_component.push_back(std::move(so.touched));
    }
    report.log.walk_count = static_cast<int>(walks.size());
    report.log.max_consumed_per_square = ledger.max_consumed();
    report.log.touched_disjoint = detail::touched_sets_disjoint(touched_by_component);

    // Stage 5
    HamiltonCycle cycle;
    if (auto err = build_tree_cycle(g, dec, t, ledger, walks, report.log, cycle)) {
        detail::fail_stage(report, 4, err->reason);
        return report;
    }
    if (!verify_hamilton_cycle(g, cycle)) {
        detail::fail_stage(report, 4, "assembled cycle failed verification");
        return report;
    }
    report.cycle = std::move(cycle);
    report.success = true;
    return report;
}

}  // namespace rgg
