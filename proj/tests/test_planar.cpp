#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mei/planar.hpp"

#include <random>
#include <set>

using namespace mei;

namespace {

Multigraph k4() {
    return Multigraph::build(4, {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}});
}

Multigraph k5() {
    std::vector<std::pair<VertexId, VertexId>> e;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) e.push_back({i, j});
    return Multigraph::build(5, e);
}

Multigraph cube() {
    return Multigraph::build(8, {{{0, 1}, {1, 2}, {2, 3}, {3, 0}, {4, 5}, {5, 6}, {6, 7}, {7, 4},
                                  {0, 4}, {1, 5}, {2, 6}, {3, 7}}});
}

Multigraph k33() {
    std::vector<std::pair<VertexId, VertexId>> e;
    for (int i = 0; i < 3; ++i)
        for (int j = 3; j < 6; ++j) e.push_back({i, j});
    return Multigraph::build(6, e);
}

int euler_faces(const Multigraph& g) { return 2 - g.vertex_count() + g.edge_count(); }

void check_valid(const PlaneEmbedding& e) {
    const Multigraph& g = e.graph();
    CHECK(g.vertex_count() - g.edge_count() + e.face_count() == 2);
    // every dart in exactly one rotation and one face
    std::set<Dart> seen;
    for (VertexId v = 0; v < g.vertex_count(); ++v)
        for (Dart d : e.rotation(v)) {
            CHECK(e.tail(d) == v);
            CHECK(seen.insert(d).second);
        }
    CHECK(static_cast<int>(seen.size()) == e.dart_count());
    int walk_total = 0;
    for (FaceId f = 0; f < e.face_count(); ++f) walk_total += e.face_size(f);
    CHECK(walk_total == e.dart_count());
}

} // namespace

TEST_CASE("K4 embeds with 4 faces") {
    auto g = k4();
    auto e = test_and_embed(g);
    check_valid(e);
    CHECK(e.face_count() == euler_faces(g));
    CHECK(e.face_count() == 4);
}

TEST_CASE("cube embeds with 6 faces") {
    auto g = cube();
    auto e = test_and_embed(g);
    check_valid(e);
    CHECK(e.face_count() == 6);
}

TEST_CASE("K5 and K3,3 are not planar") {
    auto g = k5();
    CHECK_THROWS_AS(test_and_embed(g), NotPlanarError);
    auto h = k33();
    CHECK_THROWS_AS(test_and_embed(h), NotPlanarError);
}

TEST_CASE("triangle has 2 faces, parallel pair 2 faces, path 1 face") {
    auto tri = Multigraph::build(3, {{{0, 1}, {1, 2}, {2, 0}}});
    CHECK(test_and_embed(tri).face_count() == 2);
    auto par = Multigraph::build(2, {{{0, 1}, {0, 1}}});
    CHECK(test_and_embed(par).face_count() == 2);
    auto path = Multigraph::build(3, {{{0, 1}, {1, 2}}});
    CHECK(test_and_embed(path).face_count() == 1);
}

TEST_CASE("disconnected input rejected") {
    auto g = Multigraph::build(4, {{{0, 1}, {2, 3}}});
    CHECK_THROWS_AS(test_and_embed(g), DisconnectedError);
}

TEST_CASE("determinism") {
    auto g = cube();
    auto e1 = test_and_embed(g);
    auto e2 = test_and_embed(g);
    CHECK(e1 == e2);
}

TEST_CASE("mirror keeps face count") {
    auto g = k4();
    auto e = test_and_embed(g);
    auto m = e.mirrored();
    check_valid(m);
    CHECK(m.face_count() == e.face_count());
    CHECK_FALSE(m == e);
}

TEST_CASE("dual of K4 is K4") {
    auto g = k4();
    auto e = test_and_embed(g);
    auto d = dual_graph(e);
    REQUIRE(d.face_count == 4);
    // each pair of faces joined by exactly one dual edge
    std::set<std::pair<FaceId, FaceId>> pairs;
    for (auto [a, b] : d.dual_ends) {
        CHECK(a != b);
        pairs.insert({std::min(a, b), std::max(a, b)});
    }
    CHECK(pairs.size() == 6);
}

TEST_CASE("dual of triangle is a 3-fold bond; tree dual is loops") {
    auto tri = Multigraph::build(3, {{{0, 1}, {1, 2}, {2, 0}}});
    auto d = dual_graph(test_and_embed(tri));
    CHECK(d.face_count == 2);
    for (auto [a, b] : d.dual_ends) CHECK(a != b);
    auto path = Multigraph::build(3, {{{0, 1}, {1, 2}}});
    auto dp = dual_graph(test_and_embed(path));
    CHECK(dp.face_count == 1);
    for (auto [a, b] : dp.dual_ends) CHECK(a == b);
}

TEST_CASE("insertion walk: shared face gives length 0") {
    auto g = k4();
    auto e = test_and_embed(g);
    auto w = insertion_walk(e, 0, 3);
    CHECK(w.length() == 0);
    CHECK(w.start_face == w.end_face);
}

TEST_CASE("insertion walk across the cube") {
    auto g = cube();
    auto e = test_and_embed(g);
    // opposite corners of a cube share no face but are one crossing apart
    for (VertexId v = 0; v < 8; ++v)
        for (VertexId w = v + 1; w < 8; ++w) {
            auto iw = insertion_walk(e, v, w);
            CHECK(iw.length() <= 1);
        }
    CHECK(insertion_walk(e, 0, 6).length() == 1);
    CHECK(insertion_walk(e, 1, 7).length() == 1);
}

TEST_CASE("insertion walk equals plain dual BFS distance") {
    // random planar-ish graphs: take random trees plus a few extra planar edges
    std::mt19937 rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        int n = 4 + static_cast<int>(rng() % 9);
        std::vector<std::pair<VertexId, VertexId>> edges;
        for (int v = 1; v < n; ++v) edges.push_back({static_cast<int>(rng() % v), v});
        Multigraph g = Multigraph::build(n, edges);
        // try to add a few random edges keeping planarity
        for (int t = 0; t < 6; ++t) {
            int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
            if (a == b) continue;
            auto trial_edges = edges;
            trial_edges.push_back({a, b});
            auto h = Multigraph::build(n, trial_edges);
            if (lr_planar_rotations(h)) {
                edges = trial_edges;
                g = h;
            }
        }
        auto e = test_and_embed(g);
        check_valid(e);
        // brute-force dual BFS via the explicit dual
        auto d = dual_graph(e);
        auto dist = [&](VertexId v1, VertexId v2) {
            std::vector<int> dd(static_cast<size_t>(d.face_count), -1);
            std::vector<FaceId> q;
            for (FaceId f : e.faces_at(v1)) {
                if (dd[static_cast<size_t>(f)] == -1) {
                    dd[static_cast<size_t>(f)] = 0;
                    q.push_back(f);
                }
            }
            for (size_t h = 0; h < q.size(); ++h) {
                FaceId f = q[h];
                for (EdgeId ed = 0; ed < e.graph().edge_count(); ++ed) {
                    auto [a, b] = d.dual_ends[static_cast<size_t>(ed)];
                    FaceId o = -1;
                    if (a == f) o = b;
                    else if (b == f) o = a;
                    if (o != -1 && dd[static_cast<size_t>(o)] == -1) {
                        dd[static_cast<size_t>(o)] = dd[static_cast<size_t>(f)] + 1;
                        q.push_back(o);
                    }
                }
            }
            int best = -1;
            for (FaceId f : e.faces_at(v2))
                if (dd[static_cast<size_t>(f)] != -1 && (best == -1 || dd[static_cast<size_t>(f)] < best))
                    best = dd[static_cast<size_t>(f)];
            return best;
        };
        for (VertexId a = 0; a < n; ++a)
            for (VertexId b = a + 1; b < n; ++b) {
                auto w = insertion_walk(e, a, b);
                CHECK(w.length() == dist(a, b));
                // walk lengths are mirror invariant
                CHECK(insertion_walk(e.mirrored(), a, b).length() == w.length());
            }
    }
}

TEST_CASE("insert_edges_fixed: trivial cases") {
    auto g = k4();
    auto e = test_and_embed(g);
    auto r = insert_edges_fixed(e, InsertionSet::make(g, {{0, 1}, {2, 3}}));
    CHECK(r.crossings_with_graph == 0);
    CHECK(r.walks.size() == 2);

    // single edge: tally = (dual distance, 0)
    auto c = cube();
    auto ec = test_and_embed(c);
    auto rc = insert_edges_fixed(c.has_edge_between(0, 6) ? ec : ec, InsertionSet::make(c, {{0, 6}}));
    CHECK(rc.crossings_with_graph == 1);
    CHECK(rc.crossings_between_inserted == 0);
}

TEST_CASE("insert_edges_fixed: interleaved chords in one face cross once") {
    // 4-cycle with 4 leaves, all sharing the outer face
    auto g = Multigraph::build(8, {{{0, 1}, {1, 2}, {2, 3}, {3, 0}, {0, 4}, {1, 5}, {2, 6}, {3, 7}}});
    auto e = test_and_embed(g);
    auto r = insert_edges_fixed(e, InsertionSet::make(g, {{4, 6}, {5, 7}}));
    CHECK(r.walks[0].length() + r.walks[1].length() + r.crossings_between_inserted >= 1);
    CHECK(r.pair_crossings[0][1] <= 1);
}

TEST_CASE("planarize output is planar") {
    auto c = cube();
    auto e = test_and_embed(c);
    InsertionSet F = InsertionSet::make(c, {{0, 6}, {1, 7}});
    auto r = insert_edges_fixed(e, F);
    auto p = planarize(e, r.walks);
    CHECK(p.dummy_count == r.total());
    CHECK(p.graph.vertex_count() == c.vertex_count() + p.dummy_count);
    auto pe = test_and_embed(p.graph); // throws if not planar
    CHECK(pe.face_count() == 2 - p.graph.vertex_count() + p.graph.edge_count());
    // degree-4 dummies
    for (VertexId v = c.vertex_count(); v < p.graph.vertex_count(); ++v)
        CHECK(p.graph.degree(v) == 4);
}

TEST_CASE("planarize with no crossings") {
    auto g = k4();
    auto e = test_and_embed(g);
    InsertionSet F = InsertionSet::make(g, {{0, 1}});
    auto r = insert_edges_fixed(e, F);
    auto p = planarize(e, r.walks);
    CHECK(p.dummy_count == 0);
    CHECK(p.graph.vertex_count() == 4);
    CHECK(p.graph.edge_count() == 7);
}

TEST_CASE("one crossing planarize arithmetic") {
    auto c = cube();
    auto e = test_and_embed(c);
    InsertionSet F = InsertionSet::make(c, {{0, 6}});
    auto r = insert_edges_fixed(e, F);
    REQUIRE(r.crossings_with_graph == 1);
    auto p = planarize(e, r.walks);
    CHECK(p.graph.vertex_count() == c.vertex_count() + 1);
    CHECK(p.graph.edge_count() == c.edge_count() + 1 + 2);
}

TEST_CASE("large random planar graphs embed fast") {
    std::mt19937 rng(99);
    // grid graph 60x60
    int W = 60, H = 60;
    auto id = [&](int x, int y) { return y * W + x; };
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int y = 0; y < H; ++y)
        for (int x = 0; x < W; ++x) {
            if (x + 1 < W) edges.push_back({id(x, y), id(x + 1, y)});
            if (y + 1 < H) edges.push_back({id(x, y), id(x, y + 1)});
        }
    auto g = Multigraph::build(W * H, edges);
    auto e = test_and_embed(g);
    CHECK(e.face_count() == 2 - g.vertex_count() + g.edge_count());
    (void)rng;
}

TEST_CASE("hexagonal wall: subdivision vertices at small separations") {
    // brick-wall hex grid; two subdivision vertices on mid-column
    // horizontal edges `sep` hexagon rows apart
    auto make = [&](int sep, VertexId& a, VertexId& b) {
        const int rows = 8, cols = 9;
        auto id = [&](int i, int j) { return i * (cols + 1) + j; };
        int base = (rows + 1) * (cols + 1);
        std::vector<std::pair<VertexId, VertexId>> edges;
        int mid_j = cols / 2, i_a = rows / 2 - (sep + 1) / 2, i_b = i_a + sep;
        a = base;
        b = base + 1;
        for (int i = 0; i <= rows; ++i)
            for (int j = 0; j < cols; ++j) {
                if (i == i_a && j == mid_j) {
                    edges.push_back({id(i, j), a});
                    edges.push_back({a, id(i, j + 1)});
                } else if (i == i_b && j == mid_j) {
                    edges.push_back({id(i, j), b});
                    edges.push_back({b, id(i, j + 1)});
                } else {
                    edges.push_back({id(i, j), id(i, j + 1)});
                }
            }
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j <= cols; ++j)
                if ((i + j) % 2 == 0) edges.push_back({id(i, j), id(i + 1, j)});
        return Multigraph::build(base + 2, edges);
    };
    VertexId a, b;
    auto g1 = make(1, a, b);
    CHECK(insertion_walk(test_and_embed(g1), a, b).length() == 0); // common hexagon
    auto g2 = make(2, a, b);
    // adjacent hexagons, no common face: exactly one crossing
    CHECK(insertion_walk(test_and_embed(g2), a, b).length() == 1);
}
