#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mei/decompose.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

using namespace mei;

namespace {

// ---- structural validation of an SPR / sSPR tree ----
//
// The SPR-tree is the unique decomposition into bonds (P), polygons (S)
// and triconnected graphs (R) linked by twin pairs such that no two P-
// and no two S-nodes are adjacent (Tutte). Checking those properties plus
// exact reconstruction of the block therefore proves correctness.

bool brute_triconnected(const Skeleton& sk) {
    int nv = static_cast<int>(sk.vertices.size());
    if (nv < 4) return false;
    std::map<VertexId, int> loc;
    for (int i = 0; i < nv; ++i) loc[sk.vertices[static_cast<size_t>(i)]] = i;
    // simplicity
    std::set<std::pair<int, int>> seen;
    for (const auto& e : sk.edges) {
        auto key = std::minmax(loc[e.u], loc[e.v]);
        if (!seen.insert({key.first, key.second}).second) return false;
    }
    for (int a = 0; a < nv; ++a)
        for (int b = a + 1; b < nv; ++b) {
            // connectivity of skeleton minus {a, b}
            std::vector<std::vector<int>> adj(static_cast<size_t>(nv));
            for (const auto& e : sk.edges) {
                int x = loc[e.u], y = loc[e.v];
                if (x == a || x == b || y == a || y == b) continue;
                adj[static_cast<size_t>(x)].push_back(y);
                adj[static_cast<size_t>(y)].push_back(x);
            }
            int start = -1, expect = 0;
            for (int v = 0; v < nv; ++v)
                if (v != a && v != b) {
                    if (start == -1) start = v;
                    ++expect;
                }
            if (start == -1) continue;
            std::vector<char> vis(static_cast<size_t>(nv), 0);
            std::vector<int> st{start};
            vis[static_cast<size_t>(start)] = 1;
            int got = 1;
            while (!st.empty()) {
                int v = st.back();
                st.pop_back();
                for (int w : adj[static_cast<size_t>(v)])
                    if (!vis[static_cast<size_t>(w)]) {
                        vis[static_cast<size_t>(w)] = 1;
                        ++got;
                        st.push_back(w);
                    }
            }
            if (got != expect) return false;
        }
    return true;
}

bool is_cycle(const Skeleton& sk) {
    if (sk.edges.size() < 2 || sk.edges.size() != sk.vertices.size()) return false;
    std::map<VertexId, int> deg;
    for (const auto& e : sk.edges) {
        deg[e.u]++;
        deg[e.v]++;
    }
    for (auto& [v, d] : deg)
        if (d != 2) return false;
    // connected single cycle
    std::map<VertexId, std::vector<VertexId>> adj;
    for (const auto& e : sk.edges) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    std::set<VertexId> vis;
    std::vector<VertexId> st{sk.vertices[0]};
    vis.insert(sk.vertices[0]);
    while (!st.empty()) {
        VertexId v = st.back();
        st.pop_back();
        for (VertexId w : adj[v])
            if (!vis.count(w)) {
                vis.insert(w);
                st.push_back(w);
            }
    }
    return vis.size() == sk.vertices.size();
}

bool is_bond(const Skeleton& sk) {
    if (sk.edges.size() < 3 || sk.vertices.size() != 2) return false;
    for (const auto& e : sk.edges) {
        auto k = std::minmax(e.u, e.v);
        if (k.first != sk.vertices[0] || k.second != sk.vertices[1]) return false;
    }
    return true;
}

void validate_spr(const Multigraph& g, const std::vector<EdgeId>& block,
                  const SsprTree& t, bool pre_serialization) {
    // every real edge exactly once; the reconstruction is exactly the block
    std::vector<EdgeId> reals;
    for (int v = 0; v < t.node_count(); ++v)
        for (const auto& e : t.skel[static_cast<size_t>(v)].edges)
            if (!e.is_virtual()) {
                reals.push_back(e.real_edge);
                auto k1 = std::minmax(e.u, e.v);
                auto k2 = std::minmax(g.edge(e.real_edge).u, g.edge(e.real_edge).v);
                CHECK(k1 == k2);
            }
    std::sort(reals.begin(), reals.end());
    std::vector<EdgeId> expect = block;
    std::sort(expect.begin(), expect.end());
    CHECK(reals == expect);

    // twin link consistency and the tree property
    int twin_pairs = 0;
    for (int v = 0; v < t.node_count(); ++v)
        for (size_t i = 0; i < t.skel[static_cast<size_t>(v)].edges.size(); ++i) {
            const auto& e = t.skel[static_cast<size_t>(v)].edges[i];
            if (!e.is_virtual()) continue;
            REQUIRE(e.twin_node >= 0);
            REQUIRE(e.twin_node < t.node_count());
            const auto& o = t.skel[static_cast<size_t>(e.twin_node)]
                                .edges[static_cast<size_t>(e.twin_edge)];
            CHECK(o.twin_node == v);
            CHECK(o.twin_edge == static_cast<int>(i));
            CHECK(std::minmax(e.u, e.v) == std::minmax(o.u, o.v));
            if (e.twin_node > v) ++twin_pairs;
        }
    CHECK(twin_pairs == t.node_count() - 1);
    // connectivity of the tree
    std::vector<char> vis(static_cast<size_t>(t.node_count()), 0);
    std::vector<int> st{0};
    vis[0] = 1;
    int got = 1;
    while (!st.empty()) {
        int v = st.back();
        st.pop_back();
        for (int w : t.neighbors(v))
            if (!vis[static_cast<size_t>(w)]) {
                vis[static_cast<size_t>(w)] = 1;
                ++got;
                st.push_back(w);
            }
    }
    CHECK(got == t.node_count());

    // skeleton typing
    for (int v = 0; v < t.node_count(); ++v) {
        const auto& sk = t.skel[static_cast<size_t>(v)];
        switch (t.type[static_cast<size_t>(v)]) {
            case NodeType::P:
                CHECK(is_bond(sk));
                break;
            case NodeType::S:
                CHECK(is_cycle(sk));
                if (pre_serialization) CHECK(sk.edges.size() >= 3);
                break;
            case NodeType::R:
                if (sk.vertices.size() <= 60) CHECK(brute_triconnected(sk));
                break;
            default:
                CHECK(false);
        }
    }

    // adjacency constraints
    for (int v = 0; v < t.node_count(); ++v)
        for (const auto& e : t.skel[static_cast<size_t>(v)].edges)
            if (e.is_virtual()) {
                NodeType a = t.type[static_cast<size_t>(v)];
                NodeType b = t.type[static_cast<size_t>(e.twin_node)];
                if (pre_serialization) {
                    CHECK_FALSE((a == NodeType::P && b == NodeType::P));
                    CHECK_FALSE((a == NodeType::S && b == NodeType::S));
                } else {
                    CHECK(((a == NodeType::S) ^ (b == NodeType::S)));
                }
            }
}

Multigraph random_biconnected(std::mt19937& rng, int target_ops) {
    // ear-decomposition style generator over multigraphs
    int k = 3 + static_cast<int>(rng() % 4);
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int i = 0; i < k; ++i) edges.push_back({i, (i + 1) % k});
    int n = k;
    for (int op = 0; op < target_ops; ++op) {
        if (rng() % 2 == 0) {
            // add an edge between two distinct existing vertices
            int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
            if (a == b) continue;
            edges.push_back({a, b});
        } else {
            // subdivide a random edge
            size_t ei = rng() % edges.size();
            auto [a, b] = edges[ei];
            edges[ei] = {a, n};
            edges.push_back({n, b});
            ++n;
        }
    }
    return Multigraph::build(n, edges);
}

std::vector<EdgeId> all_edges(const Multigraph& g) {
    std::vector<EdgeId> v(static_cast<size_t>(g.edge_count()));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

Multigraph theta() {
    // u=0, v=1 joined by three length-2 paths through 2, 3, 4
    return Multigraph::build(5, {{{0, 2}, {2, 1}, {0, 3}, {3, 1}, {0, 4}, {4, 1}}});
}

} // namespace

TEST_CASE("C4 is a single S node") {
    auto g = Multigraph::build(4, {{{0, 1}, {1, 2}, {2, 3}, {3, 0}}});
    auto t = spr_tree(g);
    REQUIRE(t.node_count() == 1);
    CHECK(t.type[0] == NodeType::S);
    validate_spr(g, all_edges(g), t, true);
}

TEST_CASE("K4 is a single R node") {
    auto g = Multigraph::build(4, {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}});
    auto t = spr_tree(g);
    REQUIRE(t.node_count() == 1);
    CHECK(t.type[0] == NodeType::R);
    validate_spr(g, all_edges(g), t, true);
}

TEST_CASE("theta graph is P plus three S") {
    auto g = theta();
    auto t = spr_tree(g);
    REQUIRE(t.node_count() == 4);
    int p = 0, s = 0;
    for (auto ty : t.type) {
        if (ty == NodeType::P) ++p;
        if (ty == NodeType::S) ++s;
    }
    CHECK(p == 1);
    CHECK(s == 3);
    validate_spr(g, all_edges(g), t, true);
}

TEST_CASE("parallel bunch with paths") {
    // 2 vertices joined by 2 parallel edges and one length-2 path
    auto g = Multigraph::build(3, {{{0, 1}, {0, 1}, {0, 2}, {2, 1}}});
    auto t = spr_tree(g);
    validate_spr(g, all_edges(g), t, true);
    int p = 0, s = 0;
    for (auto ty : t.type) {
        if (ty == NodeType::P) ++p;
        if (ty == NodeType::S) ++s;
    }
    CHECK(p == 1);
    CHECK(s == 1);
}

TEST_CASE("two wheels sharing a nonadjacent rim pair give R-R") {
    // wheel W4: hub h, rim r1..r4; chordless pair (r1, r3) shared
    std::vector<std::pair<VertexId, VertexId>> e;
    // wheel A: hub 0, rim 1,2,3,4 (1 and 3 shared with wheel B)
    e.insert(e.end(), {{1, 2}, {2, 3}, {3, 4}, {4, 1}, {0, 1}, {0, 2}, {0, 3}, {0, 4}});
    // wheel B: hub 5, rim 1,6,3,7
    e.insert(e.end(), {{1, 6}, {6, 3}, {3, 7}, {7, 1}, {5, 1}, {5, 6}, {5, 3}, {5, 7}});
    auto g = Multigraph::build(8, e);
    auto t = spr_tree(g);
    REQUIRE(t.node_count() == 2);
    CHECK(t.type[0] == NodeType::R);
    CHECK(t.type[1] == NodeType::R);
    validate_spr(g, all_edges(g), t, true);
    serialize_sspr(t);
    REQUIRE(t.node_count() == 3);
    CHECK(t.type[2] == NodeType::S);
    CHECK(t.skel[2].edges.size() == 2);
    CHECK(t.serialized());
    validate_spr(g, all_edges(g), t, false);
}

TEST_CASE("serialization leaves a lone R node unchanged") {
    auto g = Multigraph::build(4, {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}});
    auto t = spr_tree(g);
    serialize_sspr(t);
    CHECK(t.node_count() == 1);
    CHECK(t.serialized());
}

TEST_CASE("P adjacent to R gets a 2-cycle S between them") {
    // K4 with one edge doubled: P-node for the bunch, R for K4
    auto g = Multigraph::build(4, {{{0, 1}, {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}});
    auto t = spr_tree(g);
    validate_spr(g, all_edges(g), t, true);
    bool has_p = false, has_r = false;
    for (auto ty : t.type) {
        has_p |= ty == NodeType::P;
        has_r |= ty == NodeType::R;
    }
    CHECK(has_p);
    CHECK(has_r);
    serialize_sspr(t);
    CHECK(t.serialized());
    validate_spr(g, all_edges(g), t, false);
}

TEST_CASE("errors") {
    auto small = Multigraph::build(2, {{{0, 1}, {0, 1}, {0, 1}}});
    CHECK_THROWS_AS(spr_tree(small), TooSmallError);
    auto path = Multigraph::build(3, {{{0, 1}, {1, 2}}});
    CHECK_THROWS_AS(spr_tree(path), NotBiconnectedError);
    auto discon = Multigraph::build(4, {{{0, 1}, {0, 1}, {2, 3}, {2, 3}}});
    CHECK_THROWS_AS(spr_tree(discon), NotBiconnectedError);
}

TEST_CASE("fuzz: random biconnected multigraphs") {
    std::mt19937 rng(12345);
    for (int trial = 0; trial < 600; ++trial) {
        auto g = random_biconnected(rng, 3 + static_cast<int>(rng() % 40));
        if (g.vertex_count() < 3) continue;
        auto t = spr_tree(g);
        validate_spr(g, all_edges(g), t, true);
        serialize_sspr(t);
        CHECK(t.serialized());
        validate_spr(g, all_edges(g), t, false);
    }
}

TEST_CASE("fuzz: grid-like and wheel graphs") {
    // 5x5 grid is biconnected
    int W = 5, H = 5;
    auto id = [&](int x, int y) { return y * W + x; };
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            if (x + 1 < W) edges.push_back({id(x, y), id(x + 1, y)});
            if (y + 1 < H) edges.push_back({id(x, y), id(x, y + 1)});
        }
    auto g = Multigraph::build(W * H, edges);
    auto t = spr_tree(g);
    validate_spr(g, all_edges(g), t, true);
    // the interior of the grid is rigid: expect at least one R node
    bool has_r = false;
    for (auto ty : t.type) has_r |= ty == NodeType::R;
    CHECK(has_r);
}

TEST_CASE("determinism of spr_tree") {
    std::mt19937 rng(5);
    auto g = random_biconnected(rng, 25);
    auto t1 = spr_tree(g);
    auto t2 = spr_tree(g);
    REQUIRE(t1.node_count() == t2.node_count());
    for (int v = 0; v < t1.node_count(); ++v) {
        CHECK(t1.type[static_cast<size_t>(v)] == t2.type[static_cast<size_t>(v)]);
        CHECK(t1.skel[static_cast<size_t>(v)].vertices == t2.skel[static_cast<size_t>(v)].vertices);
    }
}

// ---------- BC-tree, con-tree, decomposition graph, con-paths ----------

TEST_CASE("bc_tree shapes") {
    auto path = Multigraph::build(3, {{{0, 1}, {1, 2}}});
    auto t = bc_tree(path);
    CHECK(t.block_count() == 2);
    CHECK(t.bc.cut_vertices == std::vector<VertexId>{1});
    CHECK(t.adj[0].size() == 1); // B - C - B
    CHECK(t.adj[2].size() == 2);

    auto k4 = Multigraph::build(4, {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}});
    auto tk = bc_tree(k4);
    CHECK(tk.block_count() == 1);
    CHECK(tk.bc.cut_vertices.empty());

    auto star = Multigraph::build(4, {{{0, 1}, {0, 2}, {0, 3}}});
    auto ts = bc_tree(star);
    CHECK(ts.block_count() == 3);
    CHECK(ts.bc.cut_vertices == std::vector<VertexId>{0});
    CHECK(ts.adj[3].size() == 3);
}

TEST_CASE("con_tree of a single edge is one D node") {
    auto g = Multigraph::build(2, {{{0, 1}}});
    auto c = ConTree::build(g);
    REQUIRE(c.node_count() == 1);
    CHECK(c.node(0).type == NodeType::D);
}

TEST_CASE("con_tree of two triangles sharing a vertex") {
    auto g = Multigraph::build(5, {{{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 2}}});
    auto c = ConTree::build(g);
    // two S nodes and one C node
    int s = 0, cn = 0;
    for (int i = 0; i < c.node_count(); ++i) {
        if (c.node(i).type == NodeType::S) ++s;
        if (c.node(i).type == NodeType::C) ++cn;
    }
    CHECK(s == 2);
    CHECK(cn == 1);
    auto d = decomposition_graph(c);
    int cnode = c.c_node(2);
    REQUIRE(cnode >= 0);
    CHECK(d.adj[static_cast<size_t>(cnode)].size() == 2);
    for (int m : d.adj[static_cast<size_t>(cnode)]) CHECK(c.node(m).type == NodeType::S);
}

TEST_CASE("con_tree of K4 with a pendant edge") {
    auto g = Multigraph::build(5, {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}}});
    auto c = ConTree::build(g);
    bool has_r = false, has_c = false, has_d = false;
    for (int i = 0; i < c.node_count(); ++i) {
        has_r |= c.node(i).type == NodeType::R;
        has_c |= c.node(i).type == NodeType::C;
        has_d |= c.node(i).type == NodeType::D;
    }
    CHECK(has_r);
    CHECK(has_c);
    CHECK(has_d);
    auto d = decomposition_graph(c);
    int cn = c.c_node(3);
    REQUIRE(cn >= 0);
    std::vector<NodeType> mates;
    for (int m : d.adj[static_cast<size_t>(cn)]) mates.push_back(c.node(m).type);
    std::sort(mates.begin(), mates.end());
    REQUIRE(mates.size() == 2);
    CHECK(mates[0] == NodeType::R);
    CHECK(mates[1] == NodeType::D);
}

TEST_CASE("C node adjacency skips P mates") {
    // theta on {0,1} + pendant triangle attached at 0
    auto g = Multigraph::build(7, {{{0, 2}, {2, 1}, {0, 3}, {3, 1}, {0, 4}, {4, 1},
                                    {0, 5}, {5, 6}, {6, 0}}});
    auto c = ConTree::build(g);
    auto d = decomposition_graph(c);
    int cn = c.c_node(0);
    REQUIRE(cn >= 0);
    for (int m : d.adj[static_cast<size_t>(cn)]) CHECK(c.node(m).type != NodeType::P);
    // 0 is in the P-skeleton's split pair of the theta block, so the
    // non-P mates there are the three (serialized five) S-nodes
    int s_mates = 0;
    for (int m : d.adj[static_cast<size_t>(cn)])
        if (c.node(m).type == NodeType::S && c.node(m).block == 0) ++s_mates;
    CHECK(s_mates >= 3);
}

TEST_CASE("con_path basics") {
    // triangle: single S node
    auto tri = Multigraph::build(3, {{{0, 1}, {1, 2}, {2, 0}}});
    auto ct = ConTree::build(tri);
    auto p = con_path(ct, 0, 2);
    REQUIRE(p.length() == 1);
    CHECK(ct.node(p.nodes[0]).type == NodeType::S);
    CHECK(p.enter_vertex[0] == 0);
    CHECK(p.exit_vertex[0] == 2);

    // two leaf blocks of a path: D, C, D
    auto path = Multigraph::build(3, {{{0, 1}, {1, 2}}});
    auto cp = ConTree::build(path);
    auto pp = con_path(cp, 0, 2);
    REQUIRE(pp.length() == 3);
    CHECK(cp.node(pp.nodes[0]).type == NodeType::D);
    CHECK(cp.node(pp.nodes[1]).type == NodeType::C);
    CHECK(cp.node(pp.nodes[2]).type == NodeType::D);

    // theta interior vertices: S, P, S
    auto theta_g = Multigraph::build(5, {{{0, 2}, {2, 1}, {0, 3}, {3, 1}, {0, 4}, {4, 1}}});
    auto cth = ConTree::build(theta_g);
    auto pt = con_path(cth, 2, 3);
    REQUIRE(pt.length() == 3);
    CHECK(cth.node(pt.nodes[0]).type == NodeType::S);
    CHECK(cth.node(pt.nodes[1]).type == NodeType::P);
    CHECK(cth.node(pt.nodes[2]).type == NodeType::S);
}

TEST_CASE("con_path endpoints and P placement invariants") {
    std::mt19937 rng(777);
    for (int trial = 0; trial < 120; ++trial) {
        int n = 4 + static_cast<int>(rng() % 20);
        std::vector<std::pair<VertexId, VertexId>> edges;
        for (int v = 1; v < n; ++v) edges.push_back({static_cast<int>(rng() % v), v});
        for (int t = 0; t < 10; ++t) {
            int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
            if (a == b) continue;
            edges.push_back({a, b});
        }
        auto g = Multigraph::build(n, edges);
        auto c = ConTree::build(g);
        auto d = decomposition_graph(c);
        // con-tree size is linear
        CHECK(c.node_count() <= 4 * (g.vertex_count() + g.edge_count()));
        for (int rep = 0; rep < 20; ++rep) {
            VertexId a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
            if (a == b) continue;
            auto p = con_path(c, a, b);
            REQUIRE(p.length() >= 1);
            CHECK(c.node(p.nodes.front()).type != NodeType::C);
            CHECK(c.node(p.nodes.back()).type != NodeType::C);
            for (int i = 0; i < p.length(); ++i) {
                if (c.node(p.nodes[static_cast<size_t>(i)]).type == NodeType::P) {
                    REQUIRE(i > 0);
                    REQUIRE(i + 1 < p.length());
                    CHECK(c.node(p.nodes[static_cast<size_t>(i - 1)]).type == NodeType::S);
                    CHECK(c.node(p.nodes[static_cast<size_t>(i + 1)]).type == NodeType::S);
                }
            }
            // the node sequence is a path in the decomposition graph
            for (int i = 0; i + 1 < p.length(); ++i) {
                const auto& nb = d.adj[static_cast<size_t>(p.nodes[static_cast<size_t>(i)])];
                CHECK(std::find(nb.begin(), nb.end(), p.nodes[static_cast<size_t>(i + 1)]) !=
                      nb.end());
            }
        }
    }
}

TEST_CASE("con_path intersections are contiguous") {
    std::mt19937 rng(4242);
    int checked = 0;
    for (int trial = 0; trial < 400 && checked < 10500; ++trial) {
        int n = 5 + static_cast<int>(rng() % 45);
        std::vector<std::pair<VertexId, VertexId>> edges;
        for (int v = 1; v < n; ++v) edges.push_back({static_cast<int>(rng() % v), v});
        for (int t = 0; t < 14; ++t) {
            int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
            if (a == b) continue;
            edges.push_back({a, b});
        }
        auto g = Multigraph::build(n, edges);
        auto c = ConTree::build(g);
        std::vector<ConPath> paths;
        for (int rep = 0; rep < 12; ++rep) {
            VertexId a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
            if (a == b) continue;
            paths.push_back(con_path(c, a, b));
        }
        for (size_t i = 0; i < paths.size(); ++i)
            for (size_t j = i + 1; j < paths.size(); ++j) {
                CHECK_NOTHROW(con_path_intersection(paths[i], paths[j]));
                ++checked;
            }
    }
    CHECK(checked >= 10000);
}

TEST_CASE("intersection special cases") {
    auto k4p = Multigraph::build(8, {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
                                      {0, 4}, {1, 5}, {2, 6}, {3, 7}}});
    auto c = ConTree::build(k4p);
    auto p1 = con_path(c, 4, 6); // through the K4 R node
    auto p2 = con_path(c, 5, 7);
    auto shared = con_path_intersection(p1, p2);
    REQUIRE(shared.size() == 1);
    CHECK(c.node(shared[0]).type == NodeType::R);
    auto whole = con_path_intersection(p1, p1);
    CHECK(whole.size() == static_cast<size_t>(p1.length()));
    // disjoint paths
    auto p3 = con_path(c, 4, 0);
    auto p4 = con_path(c, 5, 1);
    CHECK(con_path_intersection(p3, p4).empty());
}
