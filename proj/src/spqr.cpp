// Triconnected components of a biconnected multigraph, after Hopcroft &
// Tarjan (1973) with the corrections of Gutwenger & Mutzel (2001). The
// split components (triple bonds, triangles, triconnected graphs) are
// merged so that no two bonds and no two polygons are adjacent, which
// yields the unique SPR-tree.
//
// All DFS passes are iterative; input graphs can be large.

#include "mei/decompose.hpp"

#include <algorithm>
#include <cassert>
#include <list>
#include <map>
#include <numeric>
#include <cstdio>
#include <cstdlib>

namespace mei {

namespace {

constexpr int kNone = -1;

enum EdgeState : unsigned char { UNSEEN = 0, TREE = 1, FROND = 2 };

struct Tric {
    // local working graph
    int n = 0;
    std::vector<VertexId> orig_vertex;          // local -> original id
    struct WEdge {
        int src = kNone, dst = kNone; // local, oriented after DFS1
        EdgeId orig = kNone;          // original edge id, -1 for virtual
        EdgeState state = UNSEEN;
        bool start_path = false;
    };
    std::vector<WEdge> edges;

    std::vector<std::list<int>> A;                       // acceptable adjacency
    std::vector<std::list<int>::iterator> in_adj;
    std::vector<char> in_adj_valid;
    std::vector<std::list<int>> highpt;                  // per vertex, newnums
    std::vector<std::list<int>::iterator> in_high;
    std::vector<char> in_high_valid;

    std::vector<int> number, father, nd, lowpt1, lowpt2; // DFS1 (old numbers)
    std::vector<int> newnum, node_at;                    // second numbering
    std::vector<int> degree, tree_arc;
    std::vector<int> estack;
    std::vector<int> live_edges;

    struct Triple {
        int h, a, b;
    };
    std::vector<Triple> tstack;

    // components under construction
    struct Comp {
        std::vector<int> edges;
    };
    std::vector<Comp> comps;

    int other(int e, int v) const {
        return edges[static_cast<size_t>(e)].src == v ? edges[static_cast<size_t>(e)].dst
                                                      : edges[static_cast<size_t>(e)].src;
    }

    int new_virtual(int u, int v) {
        int id = static_cast<int>(edges.size());
        edges.push_back(WEdge{u, v, kNone, UNSEEN, false});
        in_adj_valid.push_back(0);
        in_adj.push_back({});
        in_high_valid.push_back(0);
        in_high.push_back({});
        return id;
    }

    void adj_delete(int e) {
        if (in_adj_valid[static_cast<size_t>(e)]) {
            A[static_cast<size_t>(edges[static_cast<size_t>(e)].src)].erase(
                in_adj[static_cast<size_t>(e)]);
            in_adj_valid[static_cast<size_t>(e)] = 0;
        }
    }

    void high_delete(int e) {
        if (in_high_valid[static_cast<size_t>(e)]) {
            highpt[static_cast<size_t>(edges[static_cast<size_t>(e)].dst)].erase(
                in_high[static_cast<size_t>(e)]);
            in_high_valid[static_cast<size_t>(e)] = 0;
        }
    }

    // Removes a live edge from the shrinking graph (into some component).
    void consume(int e) {
        adj_delete(e);
        high_delete(e);
        degree[static_cast<size_t>(edges[static_cast<size_t>(e)].src)]--;
        degree[static_cast<size_t>(edges[static_cast<size_t>(e)].dst)]--;
    }

    int high(int v) const {
        const auto& l = highpt[static_cast<size_t>(v)];
        return l.empty() ? 0 : l.front();
    }

    bool dbg = false;
    void run(const Multigraph& g, const std::vector<EdgeId>& block_edges);
    void split_multi_edges();
    void dfs1();
    void build_acceptable_adj();
    void path_finder();
    void path_search();
};

void Tric::split_multi_edges() {
    // bucket by (lo, hi); bunches become bonds behind one virtual edge
    std::vector<int> ids(edges.size());
    std::iota(ids.begin(), ids.end(), 0);
    auto key = [&](int e) {
        int lo = std::min(edges[static_cast<size_t>(e)].src, edges[static_cast<size_t>(e)].dst);
        int hi = std::max(edges[static_cast<size_t>(e)].src, edges[static_cast<size_t>(e)].dst);
        return static_cast<long long>(lo) * n + hi;
    };
    std::sort(ids.begin(), ids.end(), [&](int a, int b) {
        auto ka = key(a), kb = key(b);
        return ka != kb ? ka < kb : a < b;
    });
    std::vector<int> live;
    size_t i = 0;
    while (i < ids.size()) {
        size_t j = i;
        while (j < ids.size() && key(ids[j]) == key(ids[i])) ++j;
        if (j - i >= 2) {
            int u = edges[static_cast<size_t>(ids[i])].src, v = edges[static_cast<size_t>(ids[i])].dst;
            int ev = new_virtual(u, v);
            Comp c;
            for (size_t t = i; t < j; ++t) c.edges.push_back(ids[t]);
            c.edges.push_back(ev);
            comps.push_back(std::move(c));
            live.push_back(ev);
        } else {
            live.push_back(ids[i]);
        }
        i = j;
    }
    std::sort(live.begin(), live.end());
    live_edges = std::move(live);
}

void Tric::dfs1() {
    number.assign(static_cast<size_t>(n), 0);
    father.assign(static_cast<size_t>(n), kNone);
    nd.assign(static_cast<size_t>(n), 0);
    lowpt1.assign(static_cast<size_t>(n), 0);
    lowpt2.assign(static_cast<size_t>(n), 0);
    degree.assign(static_cast<size_t>(n), 0);
    tree_arc.assign(static_cast<size_t>(n), kNone);

    // incident lists over live edges
    std::vector<std::vector<int>> inc(static_cast<size_t>(n));
    for (int e : live_edges) {
        inc[static_cast<size_t>(edges[static_cast<size_t>(e)].src)].push_back(e);
        inc[static_cast<size_t>(edges[static_cast<size_t>(e)].dst)].push_back(e);
        degree[static_cast<size_t>(edges[static_cast<size_t>(e)].src)]++;
        degree[static_cast<size_t>(edges[static_cast<size_t>(e)].dst)]++;
    }

    int counter = 0;
    struct Frame {
        int v;
        size_t i = 0;
    };
    std::vector<Frame> st;
    number[0] = ++counter;
    st.push_back({0});
    int root_children = 0;
    while (!st.empty()) {
        Frame& f = st.back();
        int v = f.v;
        if (f.i < inc[static_cast<size_t>(v)].size()) {
            int e = inc[static_cast<size_t>(v)][f.i++];
            auto& er = edges[static_cast<size_t>(e)];
            if (er.state != UNSEEN) continue;
            int w = other(e, v);
            if (number[static_cast<size_t>(w)] == 0) {
                er.state = TREE;
                er.src = v;
                er.dst = w;
                father[static_cast<size_t>(w)] = v;
                tree_arc[static_cast<size_t>(w)] = e;
                number[static_cast<size_t>(w)] = ++counter;
                if (v == 0) ++root_children;
                st.push_back({w});
            } else if (number[static_cast<size_t>(w)] < number[static_cast<size_t>(v)]) {
                er.state = FROND;
                er.src = v;
                er.dst = w;
            }
        } else {
            // postorder: lowpoints and nd
            nd[static_cast<size_t>(v)] = 1;
            lowpt1[static_cast<size_t>(v)] = number[static_cast<size_t>(v)];
            lowpt2[static_cast<size_t>(v)] = number[static_cast<size_t>(v)];
            for (int e : inc[static_cast<size_t>(v)]) {
                const auto& er = edges[static_cast<size_t>(e)];
                if (er.state == TREE && er.src == v) {
                    int w = er.dst;
                    nd[static_cast<size_t>(v)] += nd[static_cast<size_t>(w)];
                    int l1 = lowpt1[static_cast<size_t>(w)], l2 = lowpt2[static_cast<size_t>(w)];
                    if (l1 < lowpt1[static_cast<size_t>(v)]) {
                        lowpt2[static_cast<size_t>(v)] =
                            std::min(lowpt1[static_cast<size_t>(v)], l2);
                        lowpt1[static_cast<size_t>(v)] = l1;
                    } else if (l1 == lowpt1[static_cast<size_t>(v)]) {
                        lowpt2[static_cast<size_t>(v)] =
                            std::min(lowpt2[static_cast<size_t>(v)], l2);
                    } else {
                        lowpt2[static_cast<size_t>(v)] =
                            std::min(lowpt2[static_cast<size_t>(v)], l1);
                    }
                } else if (er.state == FROND && er.src == v) {
                    int wnum = number[static_cast<size_t>(er.dst)];
                    if (wnum < lowpt1[static_cast<size_t>(v)]) {
                        lowpt2[static_cast<size_t>(v)] = lowpt1[static_cast<size_t>(v)];
                        lowpt1[static_cast<size_t>(v)] = wnum;
                    } else if (wnum > lowpt1[static_cast<size_t>(v)]) {
                        lowpt2[static_cast<size_t>(v)] =
                            std::min(lowpt2[static_cast<size_t>(v)], wnum);
                    }
                }
            }
            st.pop_back();
        }
    }
    if (counter != n) throw NotBiconnectedError();
    if (root_children != 1) throw NotBiconnectedError();
    for (int v = 0; v < n; ++v) {
        if (v == 0 || father[static_cast<size_t>(v)] == 0) continue;
        // no articulation points: each non-root tree arc (u,w) needs
        // lowpt1(w) < number(u)
    }
    for (int e : live_edges) {
        const auto& er = edges[static_cast<size_t>(e)];
        if (er.state != TREE) continue;
        if (er.src == 0) continue;
        if (lowpt1[static_cast<size_t>(er.dst)] >= number[static_cast<size_t>(er.src)])
            throw NotBiconnectedError();
    }
}

void Tric::build_acceptable_adj() {
    const int buckets_n = 3 * n + 3;
    std::vector<std::vector<int>> bucket(static_cast<size_t>(buckets_n));
    for (int e : live_edges) {
        const auto& er = edges[static_cast<size_t>(e)];
        int phi;
        if (er.state == TREE) {
            int w = er.dst;
            phi = (lowpt2[static_cast<size_t>(w)] < number[static_cast<size_t>(er.src)])
                      ? 3 * lowpt1[static_cast<size_t>(w)]
                      : 3 * lowpt1[static_cast<size_t>(w)] + 2;
        } else {
            phi = 3 * number[static_cast<size_t>(er.dst)] + 1;
        }
        bucket[static_cast<size_t>(phi)].push_back(e);
    }
    A.assign(static_cast<size_t>(n), {});
    for (auto& b : bucket)
        for (int e : b) {
            int v = edges[static_cast<size_t>(e)].src;
            A[static_cast<size_t>(v)].push_back(e);
            in_adj[static_cast<size_t>(e)] = std::prev(A[static_cast<size_t>(v)].end());
            in_adj_valid[static_cast<size_t>(e)] = 1;
        }
}

void Tric::path_finder() {
    newnum.assign(static_cast<size_t>(n), 0);
    highpt.assign(static_cast<size_t>(n), {});
    int num_count = n;
    bool new_path = true;
    struct Frame {
        int v;
        std::list<int>::iterator it;
    };
    std::vector<Frame> st;
    newnum[0] = num_count - nd[0] + 1;
    st.push_back({0, A[0].begin()});
    while (!st.empty()) {
        Frame& f = st.back();
        int v = f.v;
        if (f.it != A[static_cast<size_t>(v)].end()) {
            int e = *f.it;
            ++f.it;
            auto& er = edges[static_cast<size_t>(e)];
            if (new_path) {
                new_path = false;
                er.start_path = true;
            }
            if (er.state == TREE) {
                int w = er.dst;
                newnum[static_cast<size_t>(w)] = num_count - nd[static_cast<size_t>(w)] + 1;
                st.push_back({w, A[static_cast<size_t>(w)].begin()});
            } else {
                highpt[static_cast<size_t>(er.dst)].push_back(newnum[static_cast<size_t>(v)]);
                in_high[static_cast<size_t>(e)] =
                    std::prev(highpt[static_cast<size_t>(er.dst)].end());
                in_high_valid[static_cast<size_t>(e)] = 1;
                new_path = true; // the path ends here
            }
        } else {
            st.pop_back();
            if (!st.empty()) --num_count;
        }
    }
    // translate lowpoints into the new numbering
    std::vector<int> vertex_of_old(static_cast<size_t>(n + 1));
    for (int v = 0; v < n; ++v) vertex_of_old[static_cast<size_t>(number[static_cast<size_t>(v)])] = v;
    for (int v = 0; v < n; ++v) {
        lowpt1[static_cast<size_t>(v)] =
            newnum[static_cast<size_t>(vertex_of_old[static_cast<size_t>(lowpt1[static_cast<size_t>(v)])])];
        lowpt2[static_cast<size_t>(v)] =
            newnum[static_cast<size_t>(vertex_of_old[static_cast<size_t>(lowpt2[static_cast<size_t>(v)])])];
    }
    node_at.assign(static_cast<size_t>(n + 1), kNone);
    for (int v = 0; v < n; ++v) node_at[static_cast<size_t>(newnum[static_cast<size_t>(v)])] = v;
    if (getenv("SPQR_DEBUG")) {
        for (int v = 0; v < n; ++v)
            printf("vertex orig=%d local=%d newnum=%d lowpt1=%d lowpt2=%d nd=%d father=%d\n",
                   orig_vertex[static_cast<size_t>(v)], v, newnum[static_cast<size_t>(v)],
                   lowpt1[static_cast<size_t>(v)], lowpt2[static_cast<size_t>(v)],
                   nd[static_cast<size_t>(v)],
                   father[static_cast<size_t>(v)] == kNone ? -1 : newnum[static_cast<size_t>(father[static_cast<size_t>(v)])]);
        for (int e = 0; e < (int)edges.size(); ++e) {
            const auto& er = edges[static_cast<size_t>(e)];
            printf("edge %d: %d->%d (orig %d) %s%s\n", e, newnum[static_cast<size_t>(er.src)],
                   newnum[static_cast<size_t>(er.dst)], er.orig,
                   er.state == TREE ? "tree" : er.state == FROND ? "frond" : "?",
                   er.start_path ? " START" : "");
        }
    }
}

void Tric::path_search() {
    dbg = getenv("SPQR_DEBUG") != nullptr;
    tstack.clear();
    tstack.push_back(Triple{kNone, kNone, kNone}); // bottom end-of-stack marker
    auto eos = [&]() { return tstack.back().a == kNone; };

    struct Frame {
        int v;
        std::list<int>::iterator it;   // entry being processed
        std::list<int>::iterator next; // saved successor
        int outv;
        bool started = false; // the entry had start_path when descended
        bool resume = false;
    };
    std::vector<Frame> st;
    st.push_back({0, A[0].begin(), A[0].begin(), static_cast<int>(A[0].size()), false, false});

    while (!st.empty()) {
        Frame& f = st.back();
        int v = f.v;
        const int vnum = newnum[static_cast<size_t>(v)];
        if (!f.resume) {
            if (f.it == A[static_cast<size_t>(v)].end()) {
                st.pop_back();
                continue;
            }
            int e = *f.it;
            f.next = std::next(f.it);
            auto& er = edges[static_cast<size_t>(e)];
            if (er.state == TREE) {
                int w = er.dst;
                int wnum = newnum[static_cast<size_t>(w)];
                f.started = er.start_path;
                if (er.start_path) {
                    int y = 0;
                    if (tstack.back().a > lowpt1[static_cast<size_t>(w)]) {
                        int b = kNone;
                        do {
                            y = std::max(y, tstack.back().h);
                            b = tstack.back().b;
                            tstack.pop_back();
                        } while (tstack.back().a != kNone &&
                                 tstack.back().a > lowpt1[static_cast<size_t>(w)]);
                        tstack.push_back(Triple{std::max(y, wnum + nd[static_cast<size_t>(w)] - 1),
                                                lowpt1[static_cast<size_t>(w)], b});
                    } else {
                        tstack.push_back(Triple{wnum + nd[static_cast<size_t>(w)] - 1,
                                                lowpt1[static_cast<size_t>(w)], vnum});
                    }
                    tstack.push_back(Triple{kNone, kNone, kNone}); // EOS
                    if (dbg) printf("start-tree v=%d w=%d push (%d,%d,%d)+EOS\n", vnum, wnum, tstack[tstack.size()-2].h, tstack[tstack.size()-2].a, tstack[tstack.size()-2].b);
                }
                f.resume = true;
                st.push_back({w, A[static_cast<size_t>(w)].begin(), A[static_cast<size_t>(w)].begin(),
                              static_cast<int>(A[static_cast<size_t>(w)].size()), false, false});
                continue;
            }
            // frond
            int w = er.dst;
            int wnum = newnum[static_cast<size_t>(w)];
            if (er.start_path) {
                int y = 0;
                if (tstack.back().a > wnum) {
                    int b = kNone;
                    do {
                        y = std::max(y, tstack.back().h);
                        b = tstack.back().b;
                        tstack.pop_back();
                    } while (tstack.back().a != kNone && tstack.back().a > wnum);
                    tstack.push_back(Triple{y, wnum, b});
                } else {
                    tstack.push_back(Triple{vnum, wnum, vnum});
                }
                if (dbg) printf("start-frond v=%d w=%d push (%d,%d,%d)\n", vnum, wnum, tstack.back().h, tstack.back().a, tstack.back().b);
            }
            if (w == father[static_cast<size_t>(v)]) {
                // frond parallel to the tree arc: split off a bond
                Comp c;
                int et = tree_arc[static_cast<size_t>(v)];
                int ev = new_virtual(w, v);
                c.edges = {e, et, ev};
                comps.push_back(std::move(c));
                consume(e);
                // the tree arc keeps living as ev, in the same A slot
                assert(in_adj_valid[static_cast<size_t>(et)]);
                *in_adj[static_cast<size_t>(et)] = ev;
                in_adj[static_cast<size_t>(ev)] = in_adj[static_cast<size_t>(et)];
                in_adj_valid[static_cast<size_t>(ev)] = 1;
                in_adj_valid[static_cast<size_t>(et)] = 0;
                edges[static_cast<size_t>(ev)].state = TREE;
                edges[static_cast<size_t>(ev)].src = w;
                edges[static_cast<size_t>(ev)].dst = v;
                tree_arc[static_cast<size_t>(v)] = ev;
            } else {
                estack.push_back(e);
            }
            f.it = f.next;
            --f.outv;
            continue;
        }

        // resume after returning from the child of the tree entry *f.it
        f.resume = false;
        int e = *f.it;
        int w = edges[static_cast<size_t>(e)].dst;
        int wnum = newnum[static_cast<size_t>(w)];
        estack.push_back(e);

        // ---- type-2 pairs ----
        auto first_child_num = [&](int ww) -> int {
            const auto& l = A[static_cast<size_t>(ww)];
            if (l.empty()) return kNone;
            return newnum[static_cast<size_t>(other(l.front(), ww))];
        };
        while (vnum != 1 &&
               ((tstack.back().a == vnum) ||
                (degree[static_cast<size_t>(w)] == 2 && first_child_num(w) > wnum))) {
            int a = tstack.back().a, b = tstack.back().b;
            if (a == vnum && b != kNone &&
                father[static_cast<size_t>(node_at[static_cast<size_t>(b)])] ==
                    node_at[static_cast<size_t>(a)]) {
                tstack.pop_back();
                continue;
            }
            int eab = kNone;
            int x = kNone;
            int ev;
            if (dbg) printf("type2 trigger v=%d w=%d top=(%d,%d,%d) degw=%d fc=%d\n", vnum, wnum, tstack.back().h, tstack.back().a, tstack.back().b, degree[static_cast<size_t>(w)], first_child_num(w));
            if (degree[static_cast<size_t>(w)] == 2 && first_child_num(w) > wnum) {
                // proper type-2 pair (v, x) around the degree-2 vertex w
                assert(!estack.empty());
                int e1 = estack.back();
                estack.pop_back();
                assert(e1 == e);
                assert(!estack.empty());
                int e2 = estack.back();
                estack.pop_back();
                x = other(e2, w);
                consume(e1);
                consume(e2);
                Comp c;
                ev = new_virtual(v, x);
                c.edges = {e1, e2, ev};
                comps.push_back(std::move(c));
                if (!estack.empty()) {
                    int et = estack.back();
                    const auto& err = edges[static_cast<size_t>(et)];
                    if ((err.src == x && err.dst == v) || (err.src == v && err.dst == x)) {
                        eab = et;
                        estack.pop_back();
                        consume(eab);
                    }
                }
            } else {
                int h = tstack.back().h;
                tstack.pop_back();
                Comp c;
                while (!estack.empty()) {
                    int et = estack.back();
                    int xs = newnum[static_cast<size_t>(edges[static_cast<size_t>(et)].src)];
                    int ys = newnum[static_cast<size_t>(edges[static_cast<size_t>(et)].dst)];
                    if (!(a <= xs && xs <= h && a <= ys && ys <= h)) break;
                    if ((xs == a && ys == b) || (ys == a && xs == b)) {
                        eab = et;
                        estack.pop_back();
                        consume(eab);
                    } else {
                        estack.pop_back();
                        consume(et);
                        c.edges.push_back(et);
                    }
                }
                x = node_at[static_cast<size_t>(b)];
                ev = new_virtual(v, x);
                c.edges.push_back(ev);
                comps.push_back(std::move(c));
            }
            if (eab != kNone) {
                Comp c2;
                int ev2 = new_virtual(v, x);
                c2.edges = {eab, ev, ev2};
                comps.push_back(std::move(c2));
                ev = ev2;
            }
            estack.push_back(ev);
            // the virtual edge takes the consumed arc's place in A(v)
            A[static_cast<size_t>(v)].insert(f.next, ev);
            in_adj[static_cast<size_t>(ev)] = std::prev(f.next);
            in_adj_valid[static_cast<size_t>(ev)] = 1;
            auto& evr = edges[static_cast<size_t>(ev)];
            evr.state = TREE;
            evr.src = v;
            evr.dst = x;
            degree[static_cast<size_t>(v)]++;
            degree[static_cast<size_t>(x)]++;
            father[static_cast<size_t>(x)] = v;
            tree_arc[static_cast<size_t>(x)] = ev;
            f.it = in_adj[static_cast<size_t>(ev)];
            e = ev;
            w = x;
            wnum = newnum[static_cast<size_t>(w)];
        }

        // ---- type-1 pair ----
        if (dbg) printf("after-type2 v=%d w=%d lowpt1=%d lowpt2=%d outv=%d\n", vnum, wnum, lowpt1[static_cast<size_t>(w)], lowpt2[static_cast<size_t>(w)], f.outv);
        if (lowpt2[static_cast<size_t>(w)] >= vnum && lowpt1[static_cast<size_t>(w)] < vnum &&
            (father[static_cast<size_t>(v)] != 0 || f.outv >= 2)) {
            int anode = node_at[static_cast<size_t>(lowpt1[static_cast<size_t>(w)])];
            Comp c;
            std::vector<int> fronds_into_anode; // highpt entries deferred
            while (!estack.empty()) {
                int et = estack.back();
                int xs = newnum[static_cast<size_t>(edges[static_cast<size_t>(et)].src)];
                int ys = newnum[static_cast<size_t>(edges[static_cast<size_t>(et)].dst)];
                bool xin = wnum <= xs && xs < wnum + nd[static_cast<size_t>(w)];
                bool yin = wnum <= ys && ys < wnum + nd[static_cast<size_t>(w)];
                if (!xin && !yin) break;
                estack.pop_back();
                if (in_high_valid[static_cast<size_t>(et)] &&
                    edges[static_cast<size_t>(et)].dst == anode) {
                    adj_delete(et);
                    degree[static_cast<size_t>(edges[static_cast<size_t>(et)].src)]--;
                    degree[static_cast<size_t>(edges[static_cast<size_t>(et)].dst)]--;
                    fronds_into_anode.push_back(et);
                } else {
                    consume(et);
                }
                c.edges.push_back(et);
            }
            int ev = new_virtual(v, anode);
            c.edges.push_back(ev);
            comps.push_back(std::move(c));
            // The virtual frond (v, anode) inherits the earliest highpt
            // position among the consumed fronds into anode.
            if (!fronds_into_anode.empty()) {
                auto& hl = highpt[static_cast<size_t>(anode)];
                auto pos = hl.end();
                for (auto it = hl.begin(); it != hl.end() && pos == hl.end(); ++it)
                    for (int et : fronds_into_anode)
                        if (in_high[static_cast<size_t>(et)] == it) {
                            pos = it;
                            break;
                        }
                assert(pos != hl.end());
                in_high[static_cast<size_t>(ev)] = hl.insert(pos, vnum);
                in_high_valid[static_cast<size_t>(ev)] = 1;
                for (int et : fronds_into_anode) high_delete(et);
            }
            if (!estack.empty()) {
                const auto& err = edges[static_cast<size_t>(estack.back())];
                if ((err.src == v && err.dst == anode) || (err.src == anode && err.dst == v)) {
                    int eab = estack.back();
                    estack.pop_back();
                    consume(eab);
                    Comp c2;
                    int ev2 = new_virtual(v, anode);
                    c2.edges = {eab, ev, ev2};
                    comps.push_back(std::move(c2));
                    if (in_high_valid[static_cast<size_t>(ev)]) {
                        // the replacement frond inherits ev's highpt slot
                        in_high[static_cast<size_t>(ev2)] = in_high[static_cast<size_t>(ev)];
                        in_high_valid[static_cast<size_t>(ev2)] = 1;
                        in_high_valid[static_cast<size_t>(ev)] = 0;
                    }
                    ev = ev2;
                }
            }
            if (anode != father[static_cast<size_t>(v)]) {
                estack.push_back(ev);
                A[static_cast<size_t>(v)].insert(f.next, ev);
                in_adj[static_cast<size_t>(ev)] = std::prev(f.next);
                in_adj_valid[static_cast<size_t>(ev)] = 1;
                auto& evr = edges[static_cast<size_t>(ev)];
                evr.state = FROND;
                evr.src = v;
                evr.dst = anode;
                degree[static_cast<size_t>(v)]++;
                degree[static_cast<size_t>(anode)]++;
            } else {
                // parallel to v's own tree arc: bond with it
                Comp c3;
                int et = tree_arc[static_cast<size_t>(v)];
                int ev2 = new_virtual(anode, v);
                c3.edges = {ev, et, ev2};
                comps.push_back(std::move(c3));
                assert(in_adj_valid[static_cast<size_t>(et)]);
                *in_adj[static_cast<size_t>(et)] = ev2;
                in_adj[static_cast<size_t>(ev2)] = in_adj[static_cast<size_t>(et)];
                in_adj_valid[static_cast<size_t>(ev2)] = 1;
                in_adj_valid[static_cast<size_t>(et)] = 0;
                auto& evr = edges[static_cast<size_t>(ev2)];
                evr.state = TREE;
                evr.src = anode;
                evr.dst = v;
                tree_arc[static_cast<size_t>(v)] = ev2;
                high_delete(et);
                high_delete(ev);
            }
        }

        if (f.started) {
            // pop the current path's triples, including the EOS marker
            while (!eos()) tstack.pop_back();
            tstack.pop_back();
        }
        while (!eos() && tstack.back().a != vnum && tstack.back().b != vnum &&
               high(v) > tstack.back().h)
            tstack.pop_back();

        f.it = f.next;
        --f.outv;
    }
}

void Tric::run(const Multigraph& g, const std::vector<EdgeId>& block_edges) {
    // local vertex ids
    std::vector<VertexId> verts;
    for (EdgeId e : block_edges) {
        verts.push_back(g.edge(e).u);
        verts.push_back(g.edge(e).v);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    n = static_cast<int>(verts.size());
    if (n < 3) throw TooSmallError();
    orig_vertex = verts;
    std::vector<int> local(static_cast<size_t>(g.vertex_count()), kNone);
    for (int i = 0; i < n; ++i) local[static_cast<size_t>(verts[static_cast<size_t>(i)])] = i;

    for (EdgeId e : block_edges) {
        WEdge we;
        we.src = local[static_cast<size_t>(g.edge(e).u)];
        we.dst = local[static_cast<size_t>(g.edge(e).v)];
        we.orig = e;
        edges.push_back(we);
        in_adj_valid.push_back(0);
        in_adj.push_back({});
        in_high_valid.push_back(0);
        in_high.push_back({});
    }

    split_multi_edges();
    dfs1();
    build_acceptable_adj();
    path_finder();
    path_search();

    if (!estack.empty()) {
        Comp c;
        c.edges = estack;
        comps.push_back(std::move(c));
        estack.clear();
    }
}

// --- classification and assembly ---

enum class CompClass { Bond, Polygon, Tric };

CompClass classify(const Tric& t, const std::vector<int>& comp_edges) {
    assert(comp_edges.size() >= 2);
    // bond: all edges share the same endpoints
    auto lo0 = std::minmax(t.edges[static_cast<size_t>(comp_edges[0])].src,
                           t.edges[static_cast<size_t>(comp_edges[0])].dst);
    bool bond = true;
    for (int e : comp_edges) {
        auto lo = std::minmax(t.edges[static_cast<size_t>(e)].src,
                              t.edges[static_cast<size_t>(e)].dst);
        if (lo != lo0) {
            bond = false;
            break;
        }
    }
    if (bond) return CompClass::Bond;
    // polygon: every vertex has degree exactly 2 and edges form one cycle
    std::map<int, int> deg;
    for (int e : comp_edges) {
        deg[t.edges[static_cast<size_t>(e)].src]++;
        deg[t.edges[static_cast<size_t>(e)].dst]++;
    }
    for (auto& [v, d] : deg)
        if (d != 2) return CompClass::Tric;
    return comp_edges.size() == deg.size() ? CompClass::Polygon : CompClass::Tric;
}

struct Dsu {
    std::vector<int> p;
    explicit Dsu(int m) : p(static_cast<size_t>(m)) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[static_cast<size_t>(x)] != x) {
            p[static_cast<size_t>(x)] = p[static_cast<size_t>(p[static_cast<size_t>(x)])];
            x = p[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) { p[static_cast<size_t>(find(a))] = find(b); }
};

} // namespace

std::vector<int> SsprTree::neighbors(int node) const {
    std::vector<int> out;
    for (const auto& e : skel[static_cast<size_t>(node)].edges)
        if (e.is_virtual()) out.push_back(e.twin_node);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool SsprTree::serialized() const {
    for (int v = 0; v < node_count(); ++v)
        for (const auto& e : skel[static_cast<size_t>(v)].edges)
            if (e.is_virtual()) {
                bool s1 = type[static_cast<size_t>(v)] == NodeType::S;
                bool s2 = type[static_cast<size_t>(e.twin_node)] == NodeType::S;
                if (s1 == s2) return false;
            }
    return true;
}

SsprTree spr_tree(const Multigraph& g, const std::vector<EdgeId>& block_edges) {
    Tric t;
    t.run(g, block_edges);

    const int m = static_cast<int>(t.comps.size());
    std::vector<CompClass> cls(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) cls[static_cast<size_t>(i)] = classify(t, t.comps[static_cast<size_t>(i)].edges);

    // locate the two components of each virtual edge
    std::vector<std::pair<int, int>> holder(t.edges.size(), {kNone, kNone});
    for (int i = 0; i < m; ++i)
        for (int e : t.comps[static_cast<size_t>(i)].edges) {
            auto& h = holder[static_cast<size_t>(e)];
            (h.first == kNone ? h.first : h.second) = i;
        }

    Dsu dsu(m);
    std::vector<char> absorbed(t.edges.size(), 0);
    for (size_t e = 0; e < t.edges.size(); ++e) {
        if (t.edges[e].orig != kNone) continue;
        auto [c1, c2] = holder[e];
        assert(c1 != kNone && c2 != kNone && c1 != c2);
        if (cls[static_cast<size_t>(c1)] == cls[static_cast<size_t>(c2)] &&
            cls[static_cast<size_t>(c1)] != CompClass::Tric) {
            if (dsu.find(c1) != dsu.find(c2)) {
                dsu.unite(c1, c2);
                absorbed[e] = 1;
            }
        }
    }

    // final nodes: union classes, numbered by smallest member component
    std::vector<int> root_of(static_cast<size_t>(m));
    std::vector<int> order;
    for (int i = 0; i < m; ++i) root_of[static_cast<size_t>(i)] = dsu.find(i);
    for (int i = 0; i < m; ++i)
        if (root_of[static_cast<size_t>(i)] == i) order.push_back(i);
    // keep creation order of the representative's smallest member
    std::vector<int> first_member(static_cast<size_t>(m), kNone);
    for (int i = 0; i < m; ++i) {
        int r = root_of[static_cast<size_t>(i)];
        if (first_member[static_cast<size_t>(r)] == kNone) first_member[static_cast<size_t>(r)] = i;
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return first_member[static_cast<size_t>(a)] < first_member[static_cast<size_t>(b)];
    });
    std::vector<int> node_of_root(static_cast<size_t>(m), kNone);
    for (size_t i = 0; i < order.size(); ++i) node_of_root[static_cast<size_t>(order[i])] = static_cast<int>(i);

    SsprTree out;
    out.type.resize(order.size());
    out.skel.resize(order.size());
    // collect per final node its working edges (skip absorbed twins)
    std::vector<std::vector<int>> final_edges(order.size());
    for (int i = 0; i < m; ++i) {
        int nid = node_of_root[static_cast<size_t>(root_of[static_cast<size_t>(i)])];
        for (int e : t.comps[static_cast<size_t>(i)].edges)
            if (!absorbed[static_cast<size_t>(e)])
                final_edges[static_cast<size_t>(nid)].push_back(e);
    }
    // each surviving virtual edge sits in two final nodes; give the slots
    std::vector<std::pair<int, int>> vslot(t.edges.size(), {kNone, kNone}); // (node, index)
    for (size_t nid = 0; nid < order.size(); ++nid) {
        auto& fe = final_edges[nid];
        std::sort(fe.begin(), fe.end(), [&](int a, int b) {
            const auto& ea = t.edges[static_cast<size_t>(a)];
            const auto& eb = t.edges[static_cast<size_t>(b)];
            bool va = ea.orig == kNone, vb = eb.orig == kNone;
            if (va != vb) return !va; // real edges first
            if (!va) return ea.orig < eb.orig;
            return a < b;
        });
        Skeleton& sk = out.skel[nid];
        for (int e : fe) {
            const auto& er = t.edges[static_cast<size_t>(e)];
            SkelEdge se;
            se.u = t.orig_vertex[static_cast<size_t>(er.src)];
            se.v = t.orig_vertex[static_cast<size_t>(er.dst)];
            se.real_edge = er.orig;
            int idx = static_cast<int>(sk.edges.size());
            if (er.orig == kNone) {
                auto& slot = vslot[static_cast<size_t>(e)];
                if (slot.first == kNone) {
                    slot = {static_cast<int>(nid), idx};
                } else {
                    se.twin_node = slot.first;
                    se.twin_edge = slot.second;
                    SkelEdge& other = out.skel[static_cast<size_t>(slot.first)]
                                          .edges[static_cast<size_t>(slot.second)];
                    other.twin_node = static_cast<int>(nid);
                    other.twin_edge = idx;
                }
            }
            sk.edges.push_back(se);
            sk.vertices.push_back(se.u);
            sk.vertices.push_back(se.v);
        }
        std::sort(sk.vertices.begin(), sk.vertices.end());
        sk.vertices.erase(std::unique(sk.vertices.begin(), sk.vertices.end()), sk.vertices.end());
        CompClass cc = cls[static_cast<size_t>(order[nid])];
        out.type[nid] = cc == CompClass::Bond ? NodeType::P
                        : cc == CompClass::Polygon ? NodeType::S
                                                   : NodeType::R;
    }
    return out;
}

SsprTree spr_tree(const Multigraph& block) {
    std::vector<EdgeId> all(static_cast<size_t>(block.edge_count()));
    std::iota(all.begin(), all.end(), 0);
    return spr_tree(block, all);
}

void serialize_sspr(SsprTree& t) {
    const int orig_nodes = t.node_count();
    for (int v = 0; v < orig_nodes; ++v) {
        if (t.type[static_cast<size_t>(v)] == NodeType::S) continue;
        for (size_t i = 0; i < t.skel[static_cast<size_t>(v)].edges.size(); ++i) {
            SkelEdge e = t.skel[static_cast<size_t>(v)].edges[i];
            if (!e.is_virtual()) continue;
            if (t.type[static_cast<size_t>(e.twin_node)] == NodeType::S) continue;
            if (e.twin_node < v) continue; // handled from the other side
            // subdivide the tree edge v -- twin_node with a 2-cycle S-node
            int mid = t.node_count();
            t.type.push_back(NodeType::S);
            t.skel.emplace_back(); // may reallocate; re-fetch references below
            Skeleton& sk = t.skel.back();
            sk.vertices = {std::min(e.u, e.v), std::max(e.u, e.v)};
            SkelEdge a; // twin of (v, i)
            a.u = e.u;
            a.v = e.v;
            a.twin_node = v;
            a.twin_edge = static_cast<int>(i);
            SkelEdge b; // twin of the far side
            SkelEdge& other = t.skel[static_cast<size_t>(e.twin_node)]
                                  .edges[static_cast<size_t>(e.twin_edge)];
            b.u = other.u;
            b.v = other.v;
            b.twin_node = e.twin_node;
            b.twin_edge = e.twin_edge;
            sk.edges = {a, b};
            t.skel[static_cast<size_t>(v)].edges[i].twin_node = mid;
            t.skel[static_cast<size_t>(v)].edges[i].twin_edge = 0;
            other.twin_node = mid;
            other.twin_edge = 1;
        }
    }
}

char node_type_letter(NodeType t) {
    switch (t) {
        case NodeType::S: return 'S';
        case NodeType::P: return 'P';
        case NodeType::R: return 'R';
        case NodeType::D: return 'D';
        case NodeType::C: return 'C';
    }
    return '?';
}

} // namespace mei
