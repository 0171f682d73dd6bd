#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mei/generators.hpp"
#include "mei/mei.hpp"
#include "mei/oracle.hpp"

using namespace mei;

TEST_CASE("construction I: hex grid with far-apart subdivision pair") {
    for (int r = 1; r <= 2; ++r) {
        auto inst = gen_construction_I(r);
        CHECK(is_connected(inst.graph));
        auto e = test_and_embed(inst.graph);
        CHECK(e.face_count() == 2 - inst.graph.vertex_count() + inst.graph.edge_count());
        REQUIRE(inst.pairs.size() == 1);
        auto [a, b] = inst.pairs.pairs[0];
        // degree condition of Prop. 3.20(I)
        CHECK(max_degree(inst.graph) == 3);
        CHECK(inst.graph.degree(a) == 2);
        CHECK(inst.graph.degree(b) == 2);
        // the grid embeds essentially uniquely, so the fixed-embedding
        // distance certifies ins >= r; the oracle confirms on small r
        int ins = exact_ins_single(inst.graph, a, b, 500000);
        CHECK(ins >= r);
        auto rep = run_mei(inst.graph, inst.pairs, Mode::Strong);
        CHECK(rep.total == ins);
    }
}

TEST_CASE("construction II: interleaved chords on a deep prism") {
    for (int l = 2; l <= 4; ++l) {
        auto inst = gen_construction_II(l);
        CHECK(is_connected(inst.graph));
        CHECK(max_degree(inst.graph) <= 4);
        test_and_embed(inst.graph);
        REQUIRE(inst.pairs.size() == l);
        ConTree con = ConTree::build(inst.graph);
        EmbedBase base(inst.graph, con);
        for (auto [s, t] : inst.pairs.pairs)
            CHECK(optimal_single_insertion(base, s, t).ins_value == 0);
        auto rep = run_mei(inst.graph, inst.pairs, Mode::Strong);
        CHECK(rep.ins_sigma == 0);
        CHECK(rep.total == l * (l - 1) / 2);
    }
}

TEST_CASE("construction III: bolt instance with certified lower bound") {
    auto inst = gen_construction_III(2, 4);
    CHECK(inst.certified_lower_bound == 4); // delta*m*d/2 = 4*2*1/2
    CHECK(is_connected(inst.graph));
    test_and_embed(inst.graph);
    CHECK(max_degree(inst.graph) <= 4);
    REQUIRE(inst.pairs.size() == 2);
    ConTree con = ConTree::build(inst.graph);
    EmbedBase base(inst.graph, con);
    for (auto [s, t] : inst.pairs.pairs) {
        CHECK(inst.graph.degree(s) == 2); // delta/2
        CHECK(inst.graph.degree(t) == 2);
        CHECK(optimal_single_insertion(base, s, t).ins_value == 0);
    }
    auto rep = run_mei(inst.graph, inst.pairs, Mode::Strong);
    CHECK(rep.total >= inst.certified_lower_bound);
    CHECK_THROWS_AS(gen_construction_III(3, 4), BadParamsError);
    CHECK_THROWS_AS(gen_construction_III(2, 6), BadParamsError);
}

TEST_CASE("ziegler reduction arithmetic") {
    auto inst = gen_ziegler({{0, 2}, {1, 3}}, 4, 1);
    // n + 4 = 8 bunches of |E|^2 = 4 edges each... n=4: 3 path + 5 frame = 8
    CHECK(inst.graph.vertex_count() == 6);
    CHECK(inst.graph.edge_count() == 8 * 4);
    CHECK(inst.budget == 1);
    test_and_embed(inst.graph);
    // spec arithmetic: n=3, |E|=2 -> 7 bunches, 28 edges
    auto inst3 = gen_ziegler({{0, 2}}, 3, 0);
    CHECK(inst3.graph.edge_count() == (3 + 4) * 1);
    auto inst32 = gen_ziegler({{0, 2}, {0, 2}}, 3, 0);
    CHECK(inst32.graph.edge_count() == 7 * 4);
    CHECK_THROWS_AS(gen_ziegler({{0, 1}}, 3, 0), BadInstanceError);
    CHECK_THROWS_AS(gen_ziegler({{0, 0}}, 3, 0), BadInstanceError);
}

TEST_CASE("ziegler instances answer FLCN questions") {
    // two chords nesting on one side: drawable with 0 crossings
    auto yes = gen_ziegler({{0, 2}, {0, 3}}, 4, 0);
    auto rep = run_mei(yes.graph, yes.pairs, Mode::Strong);
    CHECK(rep.total == 0);
    // two interleaving chords: at least one crossing whatever the sides
    auto no = gen_ziegler({{0, 2}, {1, 3}}, 4, 0);
    int exact = exact_ins_prime(no.graph, no.pairs, 200000);
    auto rep2 = run_mei(no.graph, no.pairs, Mode::Strong);
    CHECK(exact + rep2.crossings_between_inserted > 0);
    CHECK(rep2.total > 0);
}

TEST_CASE("random planar generator") {
    auto a = gen_random_planar(50, 6, 42);
    auto b = gen_random_planar(50, 6, 42);
    CHECK(a.graph.edge_count() == b.graph.edge_count());
    for (int i = 0; i < a.graph.edge_count(); ++i) {
        CHECK(a.graph.edge(i).u == b.graph.edge(i).u);
        CHECK(a.graph.edge(i).v == b.graph.edge(i).v);
    }
    CHECK(a.pairs.pairs == b.pairs.pairs);
    CHECK(is_connected(a.graph));
    test_and_embed(a.graph);
    CHECK(a.pairs.size() == 6);
    auto c = gen_random_planar(3, 0, 7);
    CHECK(c.pairs.size() == 0);
    CHECK(is_connected(c.graph));
    // a couple of sizes end-to-end
    for (int n : {10, 100, 400}) {
        auto inst = gen_random_planar(n, 4, 1234 + n);
        test_and_embed(inst.graph);
        auto rep = run_mei(inst.graph, inst.pairs, Mode::Strong);
        CHECK(rep.total <= rep.guarantee_strong);
    }
}

TEST_CASE("construction I: frozen insertion values") {
    // values computed once by the exact oracle (r <= 2) and by the
    // dual BFS in the essentially unique embedding (r = 3)
    const int expect[] = {0, 3, 5, 7};
    for (int r = 1; r <= 3; ++r) {
        auto inst = gen_construction_I(r);
        auto e = test_and_embed(inst.graph);
        auto [a, b] = inst.pairs.pairs[0];
        CHECK(insertion_walk(e, a, b).length() == expect[r]);
        CHECK(insertion_walk(e.mirrored(), a, b).length() == expect[r]);
    }
    CHECK(exact_ins_single(gen_construction_I(1).graph, gen_construction_I(1).pairs.pairs[0].first,
                           gen_construction_I(1).pairs.pairs[0].second, 500000) == 3);
}
