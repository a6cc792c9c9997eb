// Exact graph decision procedures: connectivity, vertex connectivity,
// MST bottleneck, Hamiltonicity search and cycle verification.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "rgg/flow.hpp"
#include "rgg/graph.hpp"

namespace rgg {

/// BFS component labels, 0-based; returns (labels, component count).
inline std::pair<std::vector<int>, int> connected_components(const GeometricGraph& g) {
    std::vector<int> label(g.n, -1);
    int comps = 0;
    std::vector<int> stack;
    for (int s = 0; s < g.n; ++s) {
        if (label[s] != -1) continue;
        label[s] = comps;
        stack.assign(1, s);
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (int w : g.adj[v])
                if (label[w] == -1) {
                    label[w] = comps;
                    stack.push_back(w);
                }
        }
        ++comps;
    }
    return {std::move(label), comps};
}

inline bool is_connected(const GeometricGraph& g) {
    return g.n <= 1 || connected_components(g).second == 1;
}

inline int min_degree(const GeometricGraph& g) {
    if (g.n == 0) return 0;
    int m = std::numeric_limits<int>::max();
    for (const auto& a : g.adj) m = std::min(m, static_cast<int>(a.size()));
    return m;
}

/// Connected, at least 3 vertices, and no articulation point (Tarjan).
inline bool is_biconnected(const GeometricGraph& g) {
    if (g.n < 3) return false;
    std::vector<int> disc(g.n, -1), low(g.n, 0), parent(g.n, -1), child_count(g.n, 0);
    std::vector<std::size_t> it(g.n, 0);
    std::vector<int> stack;
    int timer = 0;
    disc[0] = low[0] = timer++;
    stack.push_back(0);
    int seen = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        if (it[v] < g.adj[v].size()) {
            const int w = g.adj[v][it[v]++];
            if (disc[w] == -1) {
                parent[w] = v;
                ++child_count[v];
                disc[w] = low[w] = timer++;
                ++seen;
                stack.push_back(w);
            } else if (w != parent[v]) {
                low[v] = std::min(low[v], disc[w]);
            }
        } else {
            stack.pop_back();
            const int p = parent[v];
            if (p != -1) {
                low[p] = std::min(low[p], low[v]);
                if (p != 0 && low[v] >= disc[p]) return false;  // articulation at p
            }
        }
    }
    if (seen != g.n) return false;      // disconnected
    return child_count[0] < 2;          // root articulation check
}

namespace detail {

/// Max-flow between two non-adjacent vertices with unit vertex capacities,
/// stopping at `cap` units.
inline int pair_connectivity(const GeometricGraph& g, int s, int t, int cap) {
    UnitVertexFlow flow(g);
    flow.add_source(s, cap);
    flow.add_sink(t, cap);
    return flow.max_flow(cap);
}

/// Applies fn(s, t) to a set of source-sink pairs sufficient for exact
/// vertex connectivity: a minimum-degree vertex v against its non-neighbours,
/// plus non-adjacent pairs of neighbours of v. fn returns the running bound;
/// iteration stops early when the bound reaches `floor`.
template <typename Fn>
inline void for_connectivity_pairs(const GeometricGraph& g, Fn&& fn) {
    int v = 0;
    for (int u = 1; u < g.n; ++u)
        if (g.degree(u) < g.degree(v)) v = u;
    std::vector<char> is_nb(g.n, 0);
    for (int w : g.adj[v]) is_nb[w] = 1;
    for (int w = 0; w < g.n; ++w)
        if (w != v && !is_nb[w])
            if (!fn(v, w)) return;
    for (std::size_t i = 0; i < g.adj[v].size(); ++i)
        for (std::size_t j = i + 1; j < g.adj[v].size(); ++j) {
            const int x = g.adj[v][i], y = g.adj[v][j];
            if (!g.adjacent(x, y))
                if (!fn(x, y)) return;
        }
}

}  // namespace detail

/// Exact vertex connectivity; n-1 for complete graphs.
inline int vertex_connectivity(const GeometricGraph& g) {
    if (g.n < 2) throw std::invalid_argument("vertex_connectivity: need at least 2 vertices");
    int best = g.n - 1;
    detail::for_connectivity_pairs(g, [&](int s, int t) {
        best = std::min(best, detail::pair_connectivity(g, s, t, best));
        return best > 0;
    });
    return best;
}

/// Predicate form with early exit; kappa == 2 uses the articulation-point
/// routine, larger kappa runs the flow pairs capped at kappa.
inline bool is_k_connected(const GeometricGraph& g, int kappa) {
    if (kappa <= 0) return true;
    if (g.n < kappa + 1) return false;
    if (kappa == 1) return is_connected(g);
    if (kappa == 2) return is_biconnected(g);
    bool ok = true;
    detail::for_connectivity_pairs(g, [&](int s, int t) {
        if (detail::pair_connectivity(g, s, t, kappa) < kappa) ok = false;
        return ok;
    });
    return ok;
}

/// Maximum edge length of a minimum spanning tree of the complete geometric
/// graph. All-pairs Prim below 2000 points; above that, candidate edges come
/// from a bucket grid at a doubling radius until the subgraph spans.
inline double mst_bottleneck(const PointSet& ps, const Norm& norm) {
    const int n = ps.count();
    if (n < 2) throw std::invalid_argument("mst_bottleneck: need at least 2 points");
    if (n < 2000) {
        std::vector<double> best(n, std::numeric_limits<double>::infinity());
        std::vector<char> in_tree(n, 0);
        best[0] = 0.0;
        double bottleneck = 0.0;
        for (int step = 0; step < n; ++step) {
            int v = -1;
            for (int u = 0; u < n; ++u)
                if (!in_tree[u] && (v == -1 || best[u] < best[v])) v = u;
            in_tree[v] = 1;
            bottleneck = std::max(bottleneck, best[v]);
            for (int u = 0; u < n; ++u)
                if (!in_tree[u]) best[u] = std::min(best[u], ps.dist(std::min(u, v), std::max(u, v), norm));
        }
        return bottleneck;
    }
    // Grid path: grow r until the Gilbert graph spans, then Prim over it.
    double r = 2.0 * std::pow(ps.box.intensity_n / n, 1.0 / ps.box.dimension_d);
    GeometricGraph g = build_gilbert(ps, r, norm);
    while (!is_connected(g)) {
        r *= 2.0;
        g = build_gilbert(ps, r, norm);
    }
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<char> in_tree(n, 0);
    std::vector<std::pair<double, int>> heap;
    best[0] = 0.0;
    heap.emplace_back(0.0, 0);
    double bottleneck = 0.0;
    int added = 0;
    while (!heap.empty()) {
        std::pop_heap(heap.begin(), heap.end(), std::greater<>());
        auto [dv, v] = heap.back();
        heap.pop_back();
        if (in_tree[v] || dv > best[v]) continue;
        in_tree[v] = 1;
        ++added;
        bottleneck = std::max(bottleneck, dv);
        for (int u : g.adj[v]) {
            const double w = ps.dist(std::min(u, v), std::max(u, v), norm);
            if (!in_tree[u] && w < best[u]) {
                best[u] = w;
                heap.emplace_back(w, u);
                std::push_heap(heap.begin(), heap.end(), std::greater<>());
            }
        }
    }
    if (added != n) throw std::runtime_error("mst_bottleneck: grid subgraph did not span");
    return bottleneck;
}

// ---------------------------------------------------------------------------
// Hamiltonicity
// ---------------------------------------------------------------------------

/// Cyclic vertex order; valid iff it is a permutation and every consecutive
/// pair (wrapping) is an edge.
struct HamiltonCycle {
    std::vector<int> order;
};

struct SearchBudget {
    std::uint64_t max_backtrack_nodes = 10'000'000;
};

enum class HamiltonStatus { found, proven_absent, exhausted };

struct HamiltonResult {
    HamiltonStatus status = HamiltonStatus::proven_absent;
    HamiltonCycle cycle;
    std::uint64_t nodes = 0;
};

inline bool verify_hamilton_cycle(const GeometricGraph& g, const HamiltonCycle& c) {
    if (static_cast<int>(c.order.size()) != g.n || g.n < 3) return false;
    std::vector<char> seen(g.n, 0);
    for (int v : c.order) {
        if (v < 0 || v >= g.n || seen[v]) return false;
        seen[v] = 1;
    }
    for (std::size_t i = 0; i < c.order.size(); ++i) {
        const int u = c.order[i];
        const int v = c.order[(i + 1) % c.order.size()];
        if (!g.adjacent(u, v)) return false;
    }
    return true;
}

namespace detail {

/// Backtracking Hamilton-cycle search state. Pruning:
///   (a) any vertex with fewer than two available neighbours in the remaining
///       graph (unvisited plus the path endpoints) kills the branch;
///   (b) a disconnected unvisited region kills the branch (the interior of
///       the remaining path is exactly the unvisited set), and so does any
///       articulation of the remaining graph whose removal strands a part
///       that the head-to-start path could not cover;
///   (c) branching visits lowest-remaining-degree neighbours first.
/// All prunes are sound, so they only affect node counts, never the
/// found/proven_absent outcomes.
class HamiltonSearch {
public:
    HamiltonSearch(const GeometricGraph& g, std::uint64_t budget)
        : g_(g), n_(g.n), budget_(budget), words_((g.n + 63) / 64) {
        bits_.assign(static_cast<std::size_t>(n_) * words_, 0);
        for (int v = 0; v < n_; ++v)
            for (int w : g_.adj[v]) set_bit(row(v), w);
        unvis_deg_.resize(n_);
        for (int v = 0; v < n_; ++v) unvis_deg_[v] = g_.degree(v);
        unvis_mask_.assign(words_, 0);
        for (int v = 0; v < n_; ++v) set_bit(unvis_mask_.data(), v);
        visited_.assign(n_, 0);
        reach_.assign(words_, 0);
        queue_.reserve(n_);
        disc_.assign(n_, -1);
        low_.assign(n_, 0);
        size_.assign(n_, 0);
        cut_children_.assign(n_, 0);
        frames_.reserve(n_);
    }

    HamiltonResult run() {
        HamiltonResult res;
        if (n_ < 3) {
            res.status = HamiltonStatus::proven_absent;
            return res;
        }
        if (!is_connected(g_) || min_degree(g_) < 2) {
            res.status = HamiltonStatus::proven_absent;
            return res;
        }
        start_ = 0;
        for (int v = 1; v < n_; ++v)
            if (g_.degree(v) < g_.degree(start_)) start_ = v;
        path_.reserve(n_);
        visit(start_);
        const int rc = extend(start_);
        res.nodes = nodes_;
        if (rc == kFound) {
            res.status = HamiltonStatus::found;
            res.cycle.order = path_;
        } else if (rc == kExhausted) {
            res.status = HamiltonStatus::exhausted;
        } else {
            res.status = HamiltonStatus::proven_absent;
        }
        return res;
    }

private:
    static constexpr int kAbsent = 0, kFound = 1, kExhausted = 2;

    std::uint64_t* row(int v) { return bits_.data() + static_cast<std::size_t>(v) * words_; }
    const std::uint64_t* row(int v) const {
        return bits_.data() + static_cast<std::size_t>(v) * words_;
    }
    static void set_bit(std::uint64_t* w, int i) { w[i >> 6] |= 1ull << (i & 63); }
    static void clear_bit(std::uint64_t* w, int i) { w[i >> 6] &= ~(1ull << (i & 63)); }
    static bool test_bit(const std::uint64_t* w, int i) { return (w[i >> 6] >> (i & 63)) & 1; }

    void visit(int v) {
        visited_[v] = 1;
        clear_bit(unvis_mask_.data(), v);
        path_.push_back(v);
        for (int w : g_.adj[v]) --unvis_deg_[w];
    }

    void unvisit(int v) {
        for (int w : g_.adj[v]) ++unvis_deg_[w];
        path_.pop_back();
        set_bit(unvis_mask_.data(), v);
        visited_[v] = 0;
    }

    bool degree_prune_ok(int head) const {
        const int unvisited = n_ - static_cast<int>(path_.size());
        if (unvisited == 0) return true;
        if (unvis_deg_[head] < 1) return false;
        if (unvis_deg_[start_] < 1) return false;
        const std::uint64_t* head_row = row(head);
        const std::uint64_t* start_row = row(start_);
        for (int w = 0; w < n_; ++w) {
            if (visited_[w]) continue;
            int avail = unvis_deg_[w];
            if (avail >= 2) continue;
            if (test_bit(head_row, w)) ++avail;
            if (avail >= 2) continue;
            if (head != start_ && test_bit(start_row, w)) ++avail;
            if (avail < 2) return false;
        }
        return true;
    }

    bool unvisited_connected() {
        const int unvisited = n_ - static_cast<int>(path_.size());
        if (unvisited <= 1) return true;
        int seed = -1;
        for (int i = 0; i < words_; ++i)
            if (unvis_mask_[i]) {
                seed = i * 64 + std::countr_zero(unvis_mask_[i]);
                break;
            }
        std::fill(reach_.begin(), reach_.end(), 0);
        set_bit(reach_.data(), seed);
        queue_.assign(1, seed);
        int reached = 1;
        while (!queue_.empty()) {
            const int v = queue_.back();
            queue_.pop_back();
            const std::uint64_t* r = row(v);
            for (int i = 0; i < words_; ++i) {
                std::uint64_t fresh = r[i] & unvis_mask_[i] & ~reach_[i];
                reach_[i] |= fresh;
                while (fresh) {
                    const int w = i * 64 + std::countr_zero(fresh);
                    fresh &= fresh - 1;
                    queue_.push_back(w);
                    ++reached;
                }
            }
        }
        return reached == unvisited;
    }

    /// Articulation conditions on H = unvisited + {head, start} (without the
    /// direct head-start edge): the remaining Hamilton path from head to
    /// start passes any vertex once, so a cut vertex may split H into at most
    /// two parts and the part not containing the head side must hold `start`.
    bool articulation_ok(int head) {
        const int unvisited = n_ - static_cast<int>(path_.size());
        if (unvisited <= 2) return true;
        std::fill(disc_.begin(), disc_.end(), -1);
        std::fill(cut_children_.begin(), cut_children_.end(), 0);
        int timer = 0;
        int root_children = 0;

        frames_.clear();
        frames_.push_back({head, -1, 0});
        disc_[head] = low_[head] = timer++;
        size_[head] = 1;
        while (!frames_.empty()) {
            auto& [v, parent, it] = frames_.back();
            const auto& adj = g_.adj[v];
            bool descended = false;
            while (it < adj.size()) {
                const int w = adj[it++];
                if (w == parent) continue;
                const bool w_in_h = !visited_[w] || w == head || w == start_;
                if (!w_in_h) continue;
                // the path never uses a direct head-start edge
                if ((v == head && w == start_) || (v == start_ && w == head)) continue;
                if (disc_[w] == -1) {
                    disc_[w] = low_[w] = timer++;
                    size_[w] = 1;
                    frames_.push_back({w, v, 0});
                    descended = true;
                    break;
                }
                low_[v] = std::min(low_[v], disc_[w]);
            }
            if (descended) continue;
            frames_.pop_back();
            if (parent == -1) break;
            low_[parent] = std::min(low_[parent], low_[v]);
            size_[parent] += size_[v];
            if (parent == head) {
                if (++root_children >= 2) return false;  // H minus head splits
            } else if (low_[v] >= disc_[parent]) {
                if (parent == start_) return false;  // H minus start splits
                if (++cut_children_[parent] >= 2) return false;  // >= 3 parts
                // Exactly one severed subtree: it must contain start. At the
                // search root head == start, the remainder must be a cycle,
                // so any cut vertex prunes (start is never inside a subtree).
                const bool start_inside = disc_[start_] != -1 && disc_[start_] >= disc_[v] &&
                                          disc_[start_] < disc_[v] + size_[v];
                if (!start_inside) return false;
            }
        }
        return timer == unvisited + (head == start_ ? 1 : 2);  // H connected
    }

    int extend(int head) {
        if (static_cast<int>(path_.size()) == n_)
            return test_bit(row(head), start_) ? kFound : kAbsent;
        if (!degree_prune_ok(head)) return kAbsent;
        if (!unvisited_connected()) return kAbsent;
        if (!articulation_ok(head)) return kAbsent;

        // Candidates: unvisited neighbours, lowest remaining degree first.
        std::vector<std::pair<int, int>> cand;
        cand.reserve(g_.adj[head].size());
        for (int w : g_.adj[head])
            if (!visited_[w]) cand.emplace_back(unvis_deg_[w], w);
        std::sort(cand.begin(), cand.end());
        for (auto [deg, w] : cand) {
            if (++nodes_ > budget_) return kExhausted;
            visit(w);
            const int rc = extend(w);
            if (rc == kFound) return kFound;
            unvisit(w);
            if (rc == kExhausted) return kExhausted;
        }
        return kAbsent;
    }

    struct Frame {
        int v;
        int parent;
        std::size_t it;
    };

    const GeometricGraph& g_;
    int n_;
    std::uint64_t budget_;
    int words_;
    std::uint64_t nodes_ = 0;
    int start_ = 0;
    std::vector<std::uint64_t> bits_;
    std::vector<std::uint64_t> unvis_mask_;
    std::vector<std::uint64_t> reach_;
    std::vector<int> unvis_deg_;
    std::vector<char> visited_;
    std::vector<int> path_;
    std::vector<int> queue_;
    std::vector<int> disc_, low_, size_, cut_children_;
    std::vector<Frame> frames_;
};

}  // namespace detail

/// Exact three-valued Hamiltonicity decision. A `found` result always
/// verifies; `proven_absent` is sound; `exhausted` only on budget.
inline HamiltonResult find_hamilton_exact(const GeometricGraph& g, const SearchBudget& budget = {}) {
    detail::HamiltonSearch search(g, budget.max_backtrack_nodes);
    HamiltonResult res = search.run();
    if (res.status == HamiltonStatus::found && !verify_hamilton_cycle(g, res.cycle))
        throw std::logic_error("find_hamilton_exact: produced cycle failed verification");
    return res;
}

// Cycle file: one line of space-separated vertex indices in cyclic order.

inline void write_cycle(std::ostream& os, const HamiltonCycle& c) {
    for (std::size_t i = 0; i < c.order.size(); ++i) os << (i ? " " : "") << c.order[i];
    os << "\n";
}

inline HamiltonCycle read_cycle(std::istream& is) {
    HamiltonCycle c;
    int v;
    while (is >> v) c.order.push_back(v);
    return c;
}

}  // namespace rgg
