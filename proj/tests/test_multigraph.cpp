#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mei/multigraph.hpp"

using namespace mei;

TEST_CASE("build basics") {
    auto path3 = Multigraph::build(3, {{{0, 1}, {1, 2}}});
    CHECK(path3.vertex_count() == 3);
    CHECK(path3.edge_count() == 2);
    CHECK(max_degree(path3) == 2);

    auto bunch = Multigraph::build(2, {{{0, 1}, {0, 1}, {0, 1}}});
    CHECK(bunch.edge_count() == 3);
    CHECK(max_degree(bunch) == 3);

    CHECK_THROWS_AS(Multigraph::build(1, {{{0, 0}}}), LoopEdgeError);
    CHECK_THROWS_AS(Multigraph::build(2, {{{0, 5}}}), VertexOutOfRangeError);
}

static Multigraph k4() {
    return Multigraph::build(4, {{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}});
}

TEST_CASE("max degree on K4") { CHECK(max_degree(k4()) == 3); }

TEST_CASE("degree sum identity") {
    auto g = Multigraph::build(5, {{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {0, 2}, {0, 2}}});
    int sum = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) sum += g.degree(v);
    CHECK(sum == 2 * g.edge_count());
}

TEST_CASE("connectivity") {
    CHECK(is_connected(k4()));
    CHECK_FALSE(is_connected(Multigraph::build(2, std::vector<std::pair<VertexId, VertexId>>{})));
    CHECK(is_connected(Multigraph::build(0, std::vector<std::pair<VertexId, VertexId>>{})));
    CHECK(is_connected(Multigraph::build(1, std::vector<std::pair<VertexId, VertexId>>{})));
}

TEST_CASE("blocks of a path") {
    auto g = Multigraph::build(3, {{{0, 1}, {1, 2}}});
    auto bc = blocks_and_cuts(g);
    REQUIRE(bc.blocks.size() == 2);
    CHECK(bc.blocks[0] == std::vector<EdgeId>{0});
    CHECK(bc.blocks[1] == std::vector<EdgeId>{1});
    CHECK(bc.cut_vertices == std::vector<VertexId>{1});
}

TEST_CASE("K4 is one block") {
    auto bc = blocks_and_cuts(k4());
    REQUIRE(bc.blocks.size() == 1);
    CHECK(bc.blocks[0].size() == 6);
    CHECK(bc.cut_vertices.empty());
}

TEST_CASE("two triangles sharing a vertex") {
    auto g = Multigraph::build(5, {{{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 2}}});
    auto bc = blocks_and_cuts(g);
    CHECK(bc.blocks.size() == 2);
    CHECK(bc.cut_vertices == std::vector<VertexId>{2});
}

TEST_CASE("parallel bunch forms a single block") {
    // bunch of 3 between 1 and 2, plus pendant edges on both sides
    auto g = Multigraph::build(4, {{{0, 1}, {1, 2}, {1, 2}, {1, 2}, {2, 3}}});
    auto bc = blocks_and_cuts(g);
    CHECK(bc.blocks.size() == 3);
    CHECK(bc.cut_vertices == std::vector<VertexId>{1, 2});
    // each edge in exactly one block
    std::vector<int> seen(static_cast<size_t>(g.edge_count()), 0);
    for (const auto& b : bc.blocks)
        for (EdgeId e : b) seen[static_cast<size_t>(e)]++;
    for (int c : seen) CHECK(c == 1);
}

TEST_CASE("cut vertices disconnect") {
    auto g = Multigraph::build(7, {{{0, 1}, {1, 2}, {2, 0}, {2, 3}, {3, 4}, {4, 5}, {5, 3}, {5, 6}}});
    auto bc = blocks_and_cuts(g);
    for (VertexId c : bc.cut_vertices) {
        // rebuild without c
        std::vector<std::pair<VertexId, VertexId>> kept;
        for (const auto& e : g.edges())
            if (e.u != c && e.v != c) kept.push_back({e.u, e.v});
        auto h = Multigraph::build(g.vertex_count(), kept);
        // count reachable pieces among the non-c vertices
        std::vector<char> vis(static_cast<size_t>(h.vertex_count()), 0);
        int comps = 0;
        for (VertexId s = 0; s < h.vertex_count(); ++s) {
            if (s == c || vis[static_cast<size_t>(s)]) continue;
            ++comps;
            std::vector<VertexId> st{s};
            vis[static_cast<size_t>(s)] = 1;
            while (!st.empty()) {
                VertexId v = st.back();
                st.pop_back();
                for (EdgeId ed : h.incident(v)) {
                    VertexId w = h.edge(ed).other(v);
                    if (!vis[static_cast<size_t>(w)]) {
                        vis[static_cast<size_t>(w)] = 1;
                        st.push_back(w);
                    }
                }
            }
        }
        CHECK(comps >= 2);
    }
}

TEST_CASE("insertion set validation") {
    auto g = k4();
    CHECK_THROWS_AS(InsertionSet::make(g, {{0, 0}}), LoopEdgeError);
    CHECK_THROWS_AS(InsertionSet::make(g, {{0, 9}}), VertexOutOfRangeError);
    auto f = InsertionSet::make(g, {{0, 1}}); // parallel to an existing edge is fine
    CHECK(f.size() == 1);
}

TEST_CASE("disconnected blocks_and_cuts throws") {
    auto g = Multigraph::build(4, {{{0, 1}, {2, 3}}});
    CHECK_THROWS_AS(blocks_and_cuts(g), DisconnectedError);
}
