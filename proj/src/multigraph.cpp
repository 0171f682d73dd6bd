#include "mei/multigraph.hpp"

#include <algorithm>
#include <cassert>

namespace mei {

Multigraph Multigraph::build(int vertex_count,
                             const std::vector<std::pair<VertexId, VertexId>>& edge_list) {
    Multigraph g;
    g.n_ = vertex_count;
    g.edges_.reserve(edge_list.size());
    g.incident_.assign(static_cast<size_t>(vertex_count), {});
    EdgeId next = 0;
    for (auto [u, v] : edge_list) {
        if (u < 0 || u >= vertex_count) throw VertexOutOfRangeError(u);
        if (v < 0 || v >= vertex_count) throw VertexOutOfRangeError(v);
        if (u == v) throw LoopEdgeError(u);
        g.edges_.push_back(EdgeRecord{next, u, v});
        g.incident_[static_cast<size_t>(u)].push_back(next);
        g.incident_[static_cast<size_t>(v)].push_back(next);
        ++next;
    }
    return g;
}

bool Multigraph::has_edge_between(VertexId u, VertexId v) const {
    const auto& inc = incident(u);
    for (EdgeId e : inc)
        if (edge(e).other(u) == v) return true;
    return false;
}

int max_degree(const Multigraph& g) {
    int best = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) best = std::max(best, g.degree(v));
    return best;
}

bool is_connected(const Multigraph& g) {
    int n = g.vertex_count();
    if (n <= 1) return true;
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<VertexId> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
        VertexId v = stack.back();
        stack.pop_back();
        for (EdgeId e : g.incident(v)) {
            VertexId w = g.edge(e).other(v);
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == n;
}

namespace {

// Iterative Tarjan block decomposition. Parallel edges to the DFS parent are
// back edges (only the tree edge itself is skipped), so a 2-vertex bunch
// forms a single block.
struct BlockDfs {
    const Multigraph& g;
    std::vector<int> num, low;
    std::vector<EdgeId> edge_stack;
    std::vector<std::vector<EdgeId>> blocks;
    std::vector<char> is_cut;
    int counter = 0;

    explicit BlockDfs(const Multigraph& gg)
        : g(gg),
          num(static_cast<size_t>(gg.vertex_count()), -1),
          low(static_cast<size_t>(gg.vertex_count()), 0),
          is_cut(static_cast<size_t>(gg.vertex_count()), 0) {}

    struct Frame {
        VertexId v;
        EdgeId via; // tree edge used to enter v, -1 at root
        size_t idx = 0;
        int root_children = 0;
    };

    void run(VertexId root) {
        std::vector<Frame> stack;
        stack.push_back({root, -1});
        num[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = counter++;
        while (!stack.empty()) {
            Frame& f = stack.back();
            const auto& inc = g.incident(f.v);
            if (f.idx < inc.size()) {
                EdgeId e = inc[f.idx++];
                if (e == f.via) continue;
                VertexId w = g.edge(e).other(f.v);
                if (num[static_cast<size_t>(w)] == -1) {
                    edge_stack.push_back(e);
                    num[static_cast<size_t>(w)] = low[static_cast<size_t>(w)] = counter++;
                    stack.push_back({w, e});
                } else if (num[static_cast<size_t>(w)] < num[static_cast<size_t>(f.v)]) {
                    edge_stack.push_back(e);
                    low[static_cast<size_t>(f.v)] =
                        std::min(low[static_cast<size_t>(f.v)], num[static_cast<size_t>(w)]);
                }
            } else {
                Frame done = f;
                stack.pop_back();
                if (stack.empty()) break;
                Frame& parent = stack.back();
                VertexId v = parent.v, w = done.v;
                low[static_cast<size_t>(v)] =
                    std::min(low[static_cast<size_t>(v)], low[static_cast<size_t>(w)]);
                if (low[static_cast<size_t>(w)] >= num[static_cast<size_t>(v)]) {
                    if (parent.via != -1)
                        is_cut[static_cast<size_t>(v)] = 1;
                    else
                        parent.root_children++;
                    std::vector<EdgeId> blk;
                    while (!edge_stack.empty()) {
                        EdgeId e = edge_stack.back();
                        edge_stack.pop_back();
                        blk.push_back(e);
                        if (e == done.via) break;
                    }
                    assert(!blk.empty() && blk.back() == done.via);
                    std::sort(blk.begin(), blk.end());
                    blocks.push_back(std::move(blk));
                }
                if (parent.via == -1 && parent.root_children >= 2)
                    is_cut[static_cast<size_t>(v)] = 1;
            }
        }
    }
};

} // namespace

BlocksAndCuts blocks_and_cuts(const Multigraph& g) {
    if (!is_connected(g)) throw DisconnectedError();
    BlocksAndCuts out;
    if (g.vertex_count() == 0) return out;
    BlockDfs dfs(g);
    dfs.run(0);
    out.blocks = std::move(dfs.blocks);
    // Deterministic block ids: order blocks by their smallest edge id.
    std::sort(out.blocks.begin(), out.blocks.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    out.block_of_edge.assign(static_cast<size_t>(g.edge_count()), -1);
    for (size_t b = 0; b < out.blocks.size(); ++b)
        for (EdgeId e : out.blocks[b]) out.block_of_edge[static_cast<size_t>(e)] = static_cast<int>(b);
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        if (dfs.is_cut[static_cast<size_t>(v)]) out.cut_vertices.push_back(v);
    return out;
}

InsertionSet InsertionSet::make(const Multigraph& g,
                                std::vector<std::pair<VertexId, VertexId>> pairs) {
    for (auto [u, v] : pairs) {
        if (u < 0 || u >= g.vertex_count()) throw VertexOutOfRangeError(u);
        if (v < 0 || v >= g.vertex_count()) throw VertexOutOfRangeError(v);
        if (u == v) throw LoopEdgeError(u);
    }
    return InsertionSet{std::move(pairs)};
}

} // namespace mei
