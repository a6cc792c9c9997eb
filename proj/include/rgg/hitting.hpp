// Exact hitting radii and hitting degrees for monotone graph properties:
// the smallest r (or k) at which the geometric graph on a fixed point set
// first satisfies the property.

#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <vector>

#include "rgg/algorithms.hpp"
#include "rgg/graph.hpp"

namespace rgg {

struct MonotoneProperty {
    enum class Kind { connected, min_degree, k_connected, hamiltonian };
    Kind kind = Kind::connected;
    int kappa = 1;

    static MonotoneProperty connected() { return {Kind::connected, 1}; }
    static MonotoneProperty min_degree(int kappa) { return {Kind::min_degree, kappa}; }
    static MonotoneProperty k_connected(int kappa) { return {Kind::k_connected, kappa}; }
    static MonotoneProperty hamiltonian() { return {Kind::hamiltonian, 0}; }

    const char* name() const {
        switch (kind) {
            case Kind::connected: return "connected";
            case Kind::min_degree: return "min_degree";
            case Kind::k_connected: return "k_connected";
            case Kind::hamiltonian: return "hamiltonian";
        }
        return "?";
    }
};

/// Property evaluation; `exhausted` is set when a Hamiltonicity search hits
/// its budget (the value returned is then the pessimistic "holds").
inline bool evaluate_property(const GeometricGraph& g, const MonotoneProperty& p,
                              const SearchBudget& budget, bool* exhausted = nullptr) {
    if (exhausted) *exhausted = false;
    switch (p.kind) {
        case MonotoneProperty::Kind::connected:
            return is_connected(g);
        case MonotoneProperty::Kind::min_degree:
            return min_degree(g) >= p.kappa;
        case MonotoneProperty::Kind::k_connected:
            return is_k_connected(g, p.kappa);
        case MonotoneProperty::Kind::hamiltonian: {
            const HamiltonResult res = find_hamilton_exact(g, budget);
            if (res.status == HamiltonStatus::exhausted) {
                if (exhausted) *exhausted = true;
                return true;  // pessimistically-flagged "holds"
            }
            return res.status == HamiltonStatus::found;
        }
    }
    return false;
}

/// Smallest attainable value check against the complete graph.
inline void require_attainable(int n, const MonotoneProperty& p) {
    bool ok = true;
    switch (p.kind) {
        case MonotoneProperty::Kind::connected: ok = n >= 2; break;
        case MonotoneProperty::Kind::min_degree: ok = n >= p.kappa + 1; break;
        case MonotoneProperty::Kind::k_connected: ok = n >= p.kappa + 1; break;
        case MonotoneProperty::Kind::hamiltonian: ok = n >= 3; break;
    }
    if (!ok) throw std::invalid_argument("hitting: property unattainable on this point set");
}

struct HittingResult {
    double radius = 0.0;
    bool exact = true;
    std::vector<double> unresolved_at;  // radii where the Hamilton search exhausted
};

/// Binary search over the sorted multiset of pairwise distances for the
/// smallest realized distance at which the property holds. Exhausted
/// Hamiltonicity decisions are treated as "holds" and recorded.
inline HittingResult hitting_radius(const PointSet& ps, const MonotoneProperty& p, const Norm& norm,
                                    const SearchBudget& budget = {}) {
    const int n = ps.count();
    if (n == 0) throw std::invalid_argument("hitting_radius: empty point set");
    require_attainable(n, p);

    struct Edge {
        double d;
        int u, v;
    };
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.push_back({ps.dist(i, j, norm), i, j});
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.d < b.d; });

    std::vector<double> levels;  // unique distances
    levels.reserve(edges.size());
    for (const Edge& e : edges)
        if (levels.empty() || e.d != levels.back()) levels.push_back(e.d);

    GeometricGraph g;
    g.n = n;
    auto graph_at = [&](int level) {
        g.adj.assign(n, {});
        const double r = levels[level];
        for (const Edge& e : edges) {
            if (e.d > r) break;
            g.adj[e.u].push_back(e.v);
            g.adj[e.v].push_back(e.u);
        }
        for (auto& a : g.adj) std::sort(a.begin(), a.end());
        g.param_r = r;
    };

    HittingResult result;
    std::map<int, bool> memo;
    auto holds_at = [&](int level) {
        auto it = memo.find(level);
        if (it != memo.end()) return it->second;
        graph_at(level);
        bool exhausted = false;
        const bool ok = evaluate_property(g, p, budget, &exhausted);
        if (exhausted) {
            result.exact = false;
            result.unresolved_at.push_back(levels[level]);
        }
        memo.emplace(level, ok);
        return ok;
    };

    int lo = 0, hi = static_cast<int>(levels.size()) - 1;
    if (!holds_at(hi))
        throw std::invalid_argument("hitting_radius: property fails on the complete graph");
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (holds_at(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    result.radius = levels[lo];
    std::sort(result.unresolved_at.begin(), result.unresolved_at.end());
    return result;
}

/// Smallest k at which the undirected k-NN graph satisfies the property
/// (out-lists are nested in k under the index tie-break, so the predicate is
/// monotone). Exponential bracket then binary search.
inline int hitting_k(const PointSet& ps, const MonotoneProperty& p, const Norm& norm,
                     const SearchBudget& budget = {}) {
    const int n = ps.count();
    if (n == 0) throw std::invalid_argument("hitting_k: empty point set");
    require_attainable(n, p);
    const int kmax = n - 1;
    auto holds_at = [&](int k) {
        const GeometricGraph g = undirect(build_knn_directed(ps, k, norm));
        return evaluate_property(g, p, budget);
    };
    if (!holds_at(kmax))
        throw std::invalid_argument("hitting_k: property fails at k = n-1");
    int hi = 1;
    while (hi < kmax && !holds_at(hi)) hi = std::min(kmax, hi * 2);
    int lo = hi == 1 ? 1 : hi / 2 + 1;
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (holds_at(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

}  // namespace rgg
