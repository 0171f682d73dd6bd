// Left-right planarity test with embedding extraction, after Brandes,
// "The Left-Right Planarity Test" (the algorithm behind boost and
// networkx implementations). Iterative throughout: input graphs can have
// DFS depth in the hundreds of thousands.

#include "mei/planar.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>

namespace mei {

namespace {

constexpr int kNone = -1;

struct LrState {
    int n;
    // Simplified graph: one representative edge per vertex pair.
    std::vector<std::pair<VertexId, VertexId>> sedges; // (u, v)
    std::vector<std::vector<int>> adj;                 // v -> list of sdarts out of v

    // sdart encoding: 2*se (u->v), 2*se+1 (v->u).
    VertexId stail(int sd) const {
        const auto& e = sedges[static_cast<size_t>(sd >> 1)];
        return (sd & 1) ? e.second : e.first;
    }
    VertexId shead(int sd) const { return stail(sd ^ 1); }

    std::vector<char> oriented;    // per sedge
    std::vector<int> height;       // per vertex, kNone if unvisited
    std::vector<int> parent_edge;  // per vertex, oriented sdart into it (kNone at roots)
    std::vector<int> lowpt, lowpt2, nesting_depth; // per sdart (only oriented ones used)
    std::vector<int> ref, side, lowpt_edge, stack_bottom;
    std::vector<std::vector<int>> out; // oriented out-darts per vertex (DG)
    std::vector<std::vector<int>> ordered; // out-darts sorted by nesting depth
    std::vector<VertexId> roots;

    struct Interval {
        int low = kNone, high = kNone;
        bool empty() const { return low == kNone && high == kNone; }
    };
    struct ConflictPair {
        Interval left, right;
    };
    std::vector<ConflictPair> conflict_stack;

    explicit LrState(int vertex_count) : n(vertex_count) {}

    int lowest(const ConflictPair& p) const {
        if (p.left.empty()) return lowpt[static_cast<size_t>(p.right.low)];
        if (p.right.empty()) return lowpt[static_cast<size_t>(p.left.low)];
        return std::min(lowpt[static_cast<size_t>(p.left.low)],
                        lowpt[static_cast<size_t>(p.right.low)]);
    }
    bool conflicting(const Interval& i, int b) const {
        return !i.empty() && lowpt[static_cast<size_t>(i.high)] > lowpt[static_cast<size_t>(b)];
    }

    bool dfs_orientation(VertexId root);
    bool dfs_testing(VertexId root);
    bool add_constraints(int ei, int e);
    void remove_back_edges(int e);
    int sign(int e);
};

bool LrState::dfs_orientation(VertexId root) {
    struct Frame {
        VertexId v;
        size_t i = 0;
        bool pending = false;
    };
    std::vector<Frame> stack;
    height[static_cast<size_t>(root)] = 0;
    stack.push_back({root});
    while (!stack.empty()) {
        Frame& f = stack.back();
        VertexId v = f.v;
        const int e = parent_edge[static_cast<size_t>(v)];
        bool descended = false;
        while (f.i < adj[static_cast<size_t>(v)].size()) {
            int sd = adj[static_cast<size_t>(v)][f.i];
            int se = sd >> 1;
            if (!f.pending) {
                if (oriented[static_cast<size_t>(se)]) {
                    ++f.i;
                    continue;
                }
                oriented[static_cast<size_t>(se)] = 1;
                out[static_cast<size_t>(v)].push_back(sd);
                lowpt[static_cast<size_t>(sd)] = height[static_cast<size_t>(v)];
                lowpt2[static_cast<size_t>(sd)] = height[static_cast<size_t>(v)];
                VertexId w = shead(sd);
                if (height[static_cast<size_t>(w)] == kNone) { // tree edge
                    parent_edge[static_cast<size_t>(w)] = sd;
                    height[static_cast<size_t>(w)] = height[static_cast<size_t>(v)] + 1;
                    f.pending = true;
                    stack.push_back({w});
                    descended = true;
                    break;
                }
                lowpt[static_cast<size_t>(sd)] = height[static_cast<size_t>(w)]; // back edge
            }
            f.pending = false;
            nesting_depth[static_cast<size_t>(sd)] = 2 * lowpt[static_cast<size_t>(sd)];
            if (lowpt2[static_cast<size_t>(sd)] < height[static_cast<size_t>(v)])
                ++nesting_depth[static_cast<size_t>(sd)]; // chordal
            if (e != kNone) {
                auto se_ = static_cast<size_t>(e);
                auto sd_ = static_cast<size_t>(sd);
                if (lowpt[sd_] < lowpt[se_]) {
                    lowpt2[se_] = std::min(lowpt[se_], lowpt2[sd_]);
                    lowpt[se_] = lowpt[sd_];
                } else if (lowpt[sd_] > lowpt[se_]) {
                    lowpt2[se_] = std::min(lowpt2[se_], lowpt[sd_]);
                } else {
                    lowpt2[se_] = std::min(lowpt2[se_], lowpt2[sd_]);
                }
            }
            ++f.i;
        }
        if (!descended && (f.i >= adj[static_cast<size_t>(v)].size())) stack.pop_back();
    }
    return true;
}

bool LrState::add_constraints(int ei, int e) {
    ConflictPair p;
    // Merge return edges of e_i into p.right.
    while (true) {
        ConflictPair q = conflict_stack.back();
        conflict_stack.pop_back();
        if (!q.left.empty()) std::swap(q.left, q.right);
        if (!q.left.empty()) return false; // not planar
        if (lowpt[static_cast<size_t>(q.right.low)] > lowpt[static_cast<size_t>(e)]) {
            if (p.right.empty())
                p.right.high = q.right.high;
            else
                ref[static_cast<size_t>(p.right.low)] = q.right.high;
            p.right.low = q.right.low;
        } else {
            ref[static_cast<size_t>(q.right.low)] = lowpt_edge[static_cast<size_t>(e)];
        }
        if (static_cast<int>(conflict_stack.size()) == stack_bottom[static_cast<size_t>(ei)])
            break;
    }
    // Merge conflicting return edges of e_1..e_{i-1} into p.left.
    while (!conflict_stack.empty() &&
           (conflicting(conflict_stack.back().left, ei) ||
            conflicting(conflict_stack.back().right, ei))) {
        ConflictPair q = conflict_stack.back();
        conflict_stack.pop_back();
        if (conflicting(q.right, ei)) std::swap(q.left, q.right);
        if (conflicting(q.right, ei)) return false; // not planar
        ref[static_cast<size_t>(p.right.low)] = q.right.high;
        if (q.right.low != kNone) p.right.low = q.right.low;
        if (p.left.empty())
            p.left.high = q.left.high;
        else
            ref[static_cast<size_t>(p.left.low)] = q.left.high;
        p.left.low = q.left.low;
    }
    if (!(p.left.empty() && p.right.empty())) conflict_stack.push_back(p);
    return true;
}

void LrState::remove_back_edges(int e) {
    VertexId u = stail(e);
    // Drop entire conflict pairs whose return edges all end at u.
    while (!conflict_stack.empty() && lowest(conflict_stack.back()) == height[static_cast<size_t>(u)]) {
        ConflictPair p = conflict_stack.back();
        conflict_stack.pop_back();
        if (p.left.low != kNone) side[static_cast<size_t>(p.left.low)] = -1;
    }
    if (!conflict_stack.empty()) { // one more pair to consider
        ConflictPair p = conflict_stack.back();
        conflict_stack.pop_back();
        while (p.left.high != kNone && shead(p.left.high) == u)
            p.left.high = ref[static_cast<size_t>(p.left.high)];
        if (p.left.high == kNone && p.left.low != kNone) {
            ref[static_cast<size_t>(p.left.low)] = p.right.low;
            side[static_cast<size_t>(p.left.low)] = -1;
            p.left.low = kNone;
        }
        while (p.right.high != kNone && shead(p.right.high) == u)
            p.right.high = ref[static_cast<size_t>(p.right.high)];
        if (p.right.high == kNone && p.right.low != kNone) {
            ref[static_cast<size_t>(p.right.low)] = p.left.low;
            side[static_cast<size_t>(p.right.low)] = -1;
            p.right.low = kNone;
        }
        conflict_stack.push_back(p);
    }
    // The side of e is the side of a highest return edge.
    if (lowpt[static_cast<size_t>(e)] < height[static_cast<size_t>(u)]) {
        assert(!conflict_stack.empty());
        int hl = conflict_stack.back().left.high;
        int hr = conflict_stack.back().right.high;
        if (hl != kNone &&
            (hr == kNone || lowpt[static_cast<size_t>(hl)] > lowpt[static_cast<size_t>(hr)]))
            ref[static_cast<size_t>(e)] = hl;
        else
            ref[static_cast<size_t>(e)] = hr;
    }
}

bool LrState::dfs_testing(VertexId root) {
    struct Frame {
        VertexId v;
        size_t i = 0;
        bool pending = false;
    };
    std::vector<Frame> stack;
    stack.push_back({root});
    while (!stack.empty()) {
        Frame& f = stack.back();
        VertexId v = f.v;
        const int e = parent_edge[static_cast<size_t>(v)];
        bool descended = false;
        auto& ord = ordered[static_cast<size_t>(v)];
        while (f.i < ord.size()) {
            int ei = ord[f.i];
            if (!f.pending) {
                stack_bottom[static_cast<size_t>(ei)] = static_cast<int>(conflict_stack.size());
                VertexId w = shead(ei);
                if (ei == parent_edge[static_cast<size_t>(w)]) { // tree edge
                    f.pending = true;
                    stack.push_back({w});
                    descended = true;
                    break;
                }
                lowpt_edge[static_cast<size_t>(ei)] = ei; // back edge
                conflict_stack.push_back(ConflictPair{Interval{}, Interval{ei, ei}});
            }
            f.pending = false;
            if (lowpt[static_cast<size_t>(ei)] < height[static_cast<size_t>(v)]) {
                if (f.i == 0) {
                    if (e != kNone)
                        lowpt_edge[static_cast<size_t>(e)] = lowpt_edge[static_cast<size_t>(ei)];
                } else {
                    if (!add_constraints(ei, e)) return false;
                }
            }
            ++f.i;
        }
        if (!descended && f.i >= ord.size()) {
            stack.pop_back();
            if (e != kNone) remove_back_edges(e);
        }
    }
    return true;
}

int LrState::sign(int e) {
    std::vector<int> chain;
    while (ref[static_cast<size_t>(e)] != kNone) {
        chain.push_back(e);
        e = ref[static_cast<size_t>(e)];
    }
    int s = side[static_cast<size_t>(e)];
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
        side[static_cast<size_t>(*it)] *= s;
        s = side[static_cast<size_t>(*it)];
        ref[static_cast<size_t>(*it)] = kNone;
    }
    return s;
}

// Cyclic adjacency under construction for the embedding phase.
struct CyclicAdj {
    std::vector<int> cw_next, cw_prev; // per sdart
    std::vector<int> first;            // per vertex, kNone if empty

    CyclicAdj(int darts, int n)
        : cw_next(static_cast<size_t>(darts), kNone),
          cw_prev(static_cast<size_t>(darts), kNone),
          first(static_cast<size_t>(n), kNone) {}

    void insert_only(VertexId v, int d) {
        first[static_cast<size_t>(v)] = d;
        cw_next[static_cast<size_t>(d)] = d;
        cw_prev[static_cast<size_t>(d)] = d;
    }
    // Insert d clockwise after ref_d.
    void insert_cw(int d, int ref_d) {
        int nxt = cw_next[static_cast<size_t>(ref_d)];
        cw_next[static_cast<size_t>(ref_d)] = d;
        cw_prev[static_cast<size_t>(d)] = ref_d;
        cw_next[static_cast<size_t>(d)] = nxt;
        cw_prev[static_cast<size_t>(nxt)] = d;
    }
    // Insert d counterclockwise of ref_d (i.e., just before it in cw order).
    void insert_ccw(VertexId v, int d, int ref_d) {
        insert_cw(d, cw_prev[static_cast<size_t>(ref_d)]);
        if (first[static_cast<size_t>(v)] == ref_d) first[static_cast<size_t>(v)] = d;
    }
    void insert_first(VertexId v, int d) {
        if (first[static_cast<size_t>(v)] == kNone)
            insert_only(v, d);
        else
            insert_ccw(v, d, first[static_cast<size_t>(v)]);
    }
};

} // namespace

std::optional<std::vector<std::vector<Dart>>> lr_planar_rotations(const Multigraph& g) {
    const int n = g.vertex_count();

    // Simplify: one representative edge per vertex pair, parallels bundled.
    std::map<std::pair<VertexId, VertexId>, std::vector<EdgeId>> bundles;
    for (const auto& e : g.edges()) {
        auto key = std::minmax(e.u, e.v);
        bundles[{key.first, key.second}].push_back(e.id);
    }
    LrState st(n);
    std::vector<const std::vector<EdgeId>*> bundle_of_sedge;
    st.adj.assign(static_cast<size_t>(n), {});
    for (const auto& [key, ids] : bundles) {
        int se = static_cast<int>(st.sedges.size());
        st.sedges.push_back(key);
        bundle_of_sedge.push_back(&ids);
        st.adj[static_cast<size_t>(key.first)].push_back(2 * se);
        st.adj[static_cast<size_t>(key.second)].push_back(2 * se + 1);
    }
    const int m = static_cast<int>(st.sedges.size());
    if (n > 2 && m > 3 * n - 6) return std::nullopt;

    const int sdarts = 2 * m;
    st.oriented.assign(static_cast<size_t>(m), 0);
    st.height.assign(static_cast<size_t>(n), kNone);
    st.parent_edge.assign(static_cast<size_t>(n), kNone);
    st.lowpt.assign(static_cast<size_t>(sdarts), 0);
    st.lowpt2.assign(static_cast<size_t>(sdarts), 0);
    st.nesting_depth.assign(static_cast<size_t>(sdarts), 0);
    st.ref.assign(static_cast<size_t>(sdarts), kNone);
    st.side.assign(static_cast<size_t>(sdarts), 1);
    st.lowpt_edge.assign(static_cast<size_t>(sdarts), kNone);
    st.stack_bottom.assign(static_cast<size_t>(sdarts), 0);
    st.out.assign(static_cast<size_t>(n), {});

    for (VertexId v = 0; v < n; ++v)
        if (st.height[static_cast<size_t>(v)] == kNone) {
            st.roots.push_back(v);
            st.dfs_orientation(v);
        }

    st.ordered.assign(static_cast<size_t>(n), {});
    for (VertexId v = 0; v < n; ++v) {
        st.ordered[static_cast<size_t>(v)] = st.out[static_cast<size_t>(v)];
        std::stable_sort(st.ordered[static_cast<size_t>(v)].begin(),
                         st.ordered[static_cast<size_t>(v)].end(), [&](int a, int b) {
                             return st.nesting_depth[static_cast<size_t>(a)] <
                                    st.nesting_depth[static_cast<size_t>(b)];
                         });
    }
    for (VertexId r : st.roots)
        if (!st.dfs_testing(r)) return std::nullopt;

    for (VertexId v = 0; v < n; ++v)
        for (int e : st.out[static_cast<size_t>(v)])
            st.nesting_depth[static_cast<size_t>(e)] *= st.sign(e);

    CyclicAdj emb(sdarts, n);
    for (VertexId v = 0; v < n; ++v) {
        auto& ord = st.ordered[static_cast<size_t>(v)];
        std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
            return st.nesting_depth[static_cast<size_t>(a)] <
                   st.nesting_depth[static_cast<size_t>(b)];
        });
        int prev = kNone;
        for (int d : ord) {
            if (prev == kNone)
                emb.insert_first(v, d);
            else
                emb.insert_cw(d, prev);
            prev = d;
        }
    }

    // Embedding DFS: place the reversed darts.
    std::vector<int> left_ref(static_cast<size_t>(n), kNone),
        right_ref(static_cast<size_t>(n), kNone);
    for (VertexId root : st.roots) {
        struct Frame {
            VertexId v;
            size_t i = 0;
        };
        std::vector<Frame> stack;
        stack.push_back({root});
        while (!stack.empty()) {
            Frame& f = stack.back();
            VertexId v = f.v;
            bool descended = false;
            auto& ord = st.ordered[static_cast<size_t>(v)];
            while (f.i < ord.size()) {
                int ei = ord[f.i];
                ++f.i;
                VertexId w = st.shead(ei);
                if (ei == st.parent_edge[static_cast<size_t>(w)]) { // tree edge
                    emb.insert_first(w, ei ^ 1);
                    left_ref[static_cast<size_t>(v)] = ei; // the tree dart v->w
                    right_ref[static_cast<size_t>(v)] = ei;
                    stack.push_back({w});
                    descended = true;
                    break;
                }
                // Back edge: insert dart w->v into w's rotation.
                if (st.side[static_cast<size_t>(ei)] == 1) {
                    emb.insert_cw(ei ^ 1, right_ref[static_cast<size_t>(w)]);
                } else {
                    emb.insert_ccw(w, ei ^ 1, left_ref[static_cast<size_t>(w)]);
                    left_ref[static_cast<size_t>(w)] = ei ^ 1;
                }
            }
            if (!descended && f.i >= ord.size()) stack.pop_back();
        }
    }

    // Expand back to the multigraph: each simple dart becomes the bundle of
    // parallel darts, ascending edge id on the lower endpoint's side and
    // descending on the other, so parallels nest without crossings.
    std::vector<std::vector<Dart>> rot(static_cast<size_t>(n));
    for (VertexId v = 0; v < n; ++v) {
        int start = emb.first[static_cast<size_t>(v)];
        if (start == kNone) continue;
        int d = start;
        do {
            int se = d >> 1;
            const auto& ids = *bundle_of_sedge[static_cast<size_t>(se)];
            bool ascending = v == std::min(st.sedges[static_cast<size_t>(se)].first,
                                           st.sedges[static_cast<size_t>(se)].second);
            auto emit = [&](EdgeId id) {
                rot[static_cast<size_t>(v)].push_back(g.edge(id).u == v ? forward_dart(id)
                                                                        : backward_dart(id));
            };
            if (ascending)
                for (auto it = ids.begin(); it != ids.end(); ++it) emit(*it);
            else
                for (auto it = ids.rbegin(); it != ids.rend(); ++it) emit(*it);
            d = emb.cw_next[static_cast<size_t>(d)];
        } while (d != start);
    }
    return rot;
}

PlaneEmbedding test_and_embed(const Multigraph& g) {
    if (!is_connected(g)) throw DisconnectedError();
    auto rot = lr_planar_rotations(g);
    if (!rot) throw NotPlanarError();
    return PlaneEmbedding::from_rotations(g, *rot);
}

} // namespace mei
