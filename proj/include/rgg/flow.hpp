// Unit-vertex-capacity max-flow over an undirected graph, used for exact
// vertex connectivity and for extracting vertex-disjoint paths (Menger).
//
// Every graph vertex v is split into v_in -> v_out with capacity 1; an
// undirected edge uv becomes u_out -> v_in and v_out -> u_in. Sources inject
// directly into v_out (so a source vertex can emit several paths that share
// only the source itself), sinks drain from v_in.

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "rgg/graph.hpp"

namespace rgg {

class UnitVertexFlow {
public:
    explicit UnitVertexFlow(const GeometricGraph& g) : g_(&g), n_(g.n) {
        // Node ids: v_in = 2v, v_out = 2v+1, source = 2n, sink = 2n+1.
        head_.assign(2 * n_ + 2, -1);
        for (int v = 0; v < n_; ++v) add_edge(2 * v, 2 * v + 1, 1);
        for (int u = 0; u < n_; ++u)
            for (int v : g.adj[u])
                if (u < v) {
                    add_edge(2 * u + 1, 2 * v, 1);
                    add_edge(2 * v + 1, 2 * u, 1);
                }
    }

    int source() const { return 2 * n_; }
    int sink() const { return 2 * n_ + 1; }

    /// Forbid paths from passing through v (its split edge gets capacity 0).
    void block_through(int v) { cap_[split_edge_id(v)] = 0; }

    void add_source(int v, int capacity) { add_edge(source(), 2 * v + 1, capacity); }
    void add_sink(int v, int capacity = 1) { add_edge(2 * v, sink(), capacity); }

    /// Edmonds-Karp, stopping once `limit` units have been pushed.
    int max_flow(int limit) {
        int total = 0;
        while (total < limit && augment()) ++total;
        return total;
    }

    /// Decompose the current flow into vertex paths source->...->sink,
    /// reported as original-vertex sequences (first = source-attached vertex,
    /// last = sink-attached vertex). Flow cycles, if the augmentation left
    /// any, are excised while walking.
    std::vector<std::vector<int>> extract_paths() {
        std::vector<std::vector<int>> paths;
        std::vector<int> pos(head_.size(), -1);
        for (;;) {
            std::vector<int> nodes;  // node-id walk, source excluded
            int at = source();
            bool moved = false;
            while (at != sink()) {
                long long e = head_[at];
                bool advanced = false;
                for (; e != -1; e = static_cast<long long>(next_[e])) {
                    if (flow_[e] > 0) {
                        flow_[e] -= 1;
                        at = to_[e];
                        advanced = moved = true;
                        break;
                    }
                }
                if (!advanced) break;
                if (at != sink() && pos[at] >= 0) {
                    // Closed a flow cycle: its edge flows are already
                    // decremented, drop the looped nodes.
                    for (std::size_t i = pos[at] + 1; i < nodes.size(); ++i) pos[nodes[i]] = -1;
                    nodes.resize(pos[at] + 1);
                } else if (at != sink()) {
                    pos[at] = static_cast<int>(nodes.size());
                    nodes.push_back(at);
                }
            }
            if (!moved) break;
            if (at != sink()) throw std::runtime_error("flow decomposition: dangling path");
            std::vector<int> path;
            for (int node : nodes) {
                pos[node] = -1;
                if (node < 2 * n_ && (node & 1) == 1) path.push_back(node / 2);
            }
            // A path terminates through some v_in -> sink edge; that final
            // vertex only appears as its in-node, so append it here.
            if (!nodes.empty() && nodes.back() < 2 * n_ && (nodes.back() & 1) == 0)
                path.push_back(nodes.back() / 2);
            paths.push_back(std::move(path));
        }
        return paths;
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

    void add_edge(int from, int to, int cap) {
        to_.push_back(to);
        cap_.push_back(cap);
        flow_.push_back(0);
        next_.push_back(head_[from]);
        head_[from] = static_cast<long long>(to_.size() - 1);
        // reverse edge
        to_.push_back(from);
        cap_.push_back(0);
        flow_.push_back(0);
        next_.push_back(head_[to]);
        head_[to] = static_cast<long long>(to_.size() - 1);
    }

    std::size_t split_edge_id(int v) const { return static_cast<std::size_t>(2 * v); }

    bool augment() {
        std::vector<long long> via(head_.size(), -1);
        std::queue<int> q;
        q.push(source());
        via[source()] = -2;
        while (!q.empty() && via[sink()] == -1) {
            const int at = q.front();
            q.pop();
            for (long long e = head_[at]; e != -1; e = static_cast<long long>(next_[e])) {
                const int to = to_[e];
                if (via[to] == -1 && cap_[e] - flow_[e] > 0) {
                    via[to] = e;
                    q.push(to);
                }
            }
        }
        if (via[sink()] == -1) return false;
        for (long long e = via[sink()]; e != -2; e = via[to_[e ^ 1]]) {
            flow_[e] += 1;
            flow_[e ^ 1] -= 1;
        }
        return true;
    }

    const GeometricGraph* g_;
    int n_;
    std::vector<long long> head_;
    std::vector<int> to_;
    std::vector<int> cap_;
    std::vector<int> flow_;
    std::vector<std::size_t> next_;
};

}  // namespace rgg
