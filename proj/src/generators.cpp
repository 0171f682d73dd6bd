#include "mei/generators.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <random>

namespace mei {

GeneratedInstance gen_construction_I(int r) {
    if (r < 1) throw BadParamsError("r >= 1");
    // brick-wall hexagonal grid: vertices (i, j), horizontal edges always,
    // vertical edges where i + j is even
    const int rows = 4 * r + 5, cols = 8 * r + 9;
    auto id = [&](int i, int j) { return i * (cols + 1) + j; };
    int base = (rows + 1) * (cols + 1);
    std::vector<std::pair<VertexId, VertexId>> edges;
    // a and b subdivide two horizontal mid-column edges, 2r+2 rows apart
    int mid_j = cols / 2;
    int i_a = rows / 2 - (r + 1), i_b = rows / 2 + (r + 1);
    VertexId a = base, b = base + 1;
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
    GeneratedInstance out{Multigraph::build(base + 2, edges), InsertionSet{}, -1, -1};
    out.pairs = InsertionSet::make(out.graph, {{a, b}});
    return out;
}

GeneratedInstance gen_construction_II(int l) {
    if (l < 2) throw BadParamsError("l >= 2");
    // l+1 concentric 2l-cycles joined by spokes; outer ring vertices are
    // s_1..s_l, t_1..t_l in clockwise order
    const int layers = l + 1, ring = 2 * l;
    auto id = [&](int layer, int pos) { return layer * ring + ((pos % ring) + ring) % ring; };
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (int layer = 0; layer < layers; ++layer)
        for (int pos = 0; pos < ring; ++pos) edges.push_back({id(layer, pos), id(layer, pos + 1)});
    for (int layer = 0; layer + 1 < layers; ++layer)
        for (int pos = 0; pos < ring; ++pos) edges.push_back({id(layer, pos), id(layer + 1, pos)});
    GeneratedInstance out{Multigraph::build(layers * ring, edges), InsertionSet{}, -1, -1};
    std::vector<std::pair<VertexId, VertexId>> F;
    int outer = layers - 1;
    for (int i = 0; i < l; ++i) F.push_back({id(outer, i), id(outer, l + i)});
    out.pairs = InsertionSet::make(out.graph, F);
    return out;
}

namespace {

// Gadget H^q for construction III: q marked vertices around 2m concentric
// cycles of q posts; every drawn line is a bundle of delta/4 parallel
// edges. Marked vertices have degree exactly delta/2.
struct Gadget {
    std::vector<VertexId> marked; // in active-face order
};

Gadget build_gadget(int q, int m, int delta, std::vector<std::pair<VertexId, VertexId>>& edges,
                    int& next_vertex) {
    // The marked vertices lie on the outer boundary cycle between the
    // radial posts, so their degree is exactly two arc bundles = delta/2.
    // 2m inner cycles of q posts each; radial bundles join the rings at
    // the q post positions. Every line is delta/4 parallel edges.
    const int bundle = delta / 4;
    const int rings = 2 * m;
    std::vector<std::vector<VertexId>> post(static_cast<size_t>(rings),
                                            std::vector<VertexId>(static_cast<size_t>(q)));
    for (int c = 0; c < rings; ++c)
        for (int i = 0; i < q; ++i) post[static_cast<size_t>(c)][static_cast<size_t>(i)] = next_vertex++;
    auto bundle_edge = [&](VertexId u, VertexId v) {
        for (int t = 0; t < bundle; ++t) edges.push_back({u, v});
    };
    for (int c = 0; c < rings; ++c)
        for (int i = 0; i < q; ++i)
            bundle_edge(post[static_cast<size_t>(c)][static_cast<size_t>(i)],
                        post[static_cast<size_t>(c)][static_cast<size_t>((i + 1) % q)]);
    for (int c = 0; c + 1 < rings; ++c)
        for (int i = 0; i < q; ++i)
            bundle_edge(post[static_cast<size_t>(c)][static_cast<size_t>(i)],
                        post[static_cast<size_t>(c + 1)][static_cast<size_t>(i)]);
    // outer boundary: posts Q_i alternating with marked vertices
    std::vector<VertexId> q_post(static_cast<size_t>(q));
    Gadget g;
    for (int i = 0; i < q; ++i) q_post[static_cast<size_t>(i)] = next_vertex++;
    for (int i = 0; i < q; ++i) g.marked.push_back(next_vertex++);
    for (int i = 0; i < q; ++i) {
        bundle_edge(q_post[static_cast<size_t>(i)], g.marked[static_cast<size_t>(i)]);
        bundle_edge(g.marked[static_cast<size_t>(i)], q_post[static_cast<size_t>((i + 1) % q)]);
        bundle_edge(q_post[static_cast<size_t>(i)],
                    post[static_cast<size_t>(rings - 1)][static_cast<size_t>(i)]);
    }
    return g;
}

} // namespace

GeneratedInstance gen_construction_III(int m, int delta) {
    if (delta < 4 || delta % 4 != 0) throw BadParamsError("delta divisible by 4");
    int d = 0;
    for (int t = m; t > 1; t >>= 1) {
        if (t % 2 != 0) throw BadParamsError("m must be a power of two");
        ++d;
    }
    if (d < 1) throw BadParamsError("m >= 2");

    std::vector<std::pair<VertexId, VertexId>> edges;
    int next_vertex = 0;

    // recursive build of G_level^side; returns (pole_x, pole_y, s-list)
    struct Piece {
        VertexId x, y;
        std::vector<VertexId> terminals;
    };
    // level 1: a copy of H^4 with marked x, s'', y, s' in this order
    auto base_piece = [&]() {
        Gadget g = build_gadget(4, m, delta, edges, next_vertex);
        Piece p;
        p.x = g.marked[0];
        p.y = g.marked[2];
        p.terminals = {g.marked[3], g.marked[1]}; // s', s''
        return p;
    };
    // level up: bolt H^6 with marked x, x'', y'', y, y', x' in this order
    std::function<Piece(int)> build = [&](int level) -> Piece {
        if (level == 1) return base_piece();
        Piece s = build(level - 1);
        Piece t = build(level - 1);
        Gadget bolt = build_gadget(6, m, delta, edges, next_vertex);
        VertexId x = bolt.marked[0], xpp = bolt.marked[1], ypp = bolt.marked[2];
        VertexId y = bolt.marked[3], yp = bolt.marked[4], xp = bolt.marked[5];
        // identify x', y' with the poles of s and x'', y'' with those of t
        // (identification by renaming: rewrite edges)
        std::map<VertexId, VertexId> rename{{xp, s.x}, {yp, s.y}, {xpp, t.x}, {ypp, t.y}};
        for (auto& e : edges) {
            auto it = rename.find(e.first);
            if (it != rename.end()) e.first = it->second;
            it = rename.find(e.second);
            if (it != rename.end()) e.second = it->second;
        }
        Piece out;
        out.x = x;
        out.y = y;
        out.terminals = s.terminals;
        out.terminals.insert(out.terminals.end(), t.terminals.begin(), t.terminals.end());
        return out;
    };
    Piece top = build(d + 1);

    // compact vertex ids (renaming left holes)
    std::map<VertexId, VertexId> compact;
    auto get = [&](VertexId v) {
        auto it = compact.find(v);
        if (it != compact.end()) return it->second;
        VertexId nv = static_cast<VertexId>(compact.size());
        compact[v] = nv;
        return nv;
    };
    std::vector<std::pair<VertexId, VertexId>> ce;
    for (auto [u, v] : edges) ce.push_back({get(u), get(v)});
    GeneratedInstance out{Multigraph::build(static_cast<int>(compact.size()), ce), InsertionSet{},
                          -1, -1};
    // F pairs s_i t_i: first half of terminals came from the s-side
    int half = static_cast<int>(top.terminals.size()) / 2;
    assert(half == m);
    std::vector<std::pair<VertexId, VertexId>> F;
    for (int i = 0; i < m; ++i)
        F.push_back({get(top.terminals[static_cast<size_t>(i)]),
                     get(top.terminals[static_cast<size_t>(half + i)])});
    out.pairs = InsertionSet::make(out.graph, F);
    out.certified_lower_bound = static_cast<long long>(delta) * m * d / 2;
    return out;
}

GeneratedInstance gen_ziegler(const std::vector<std::pair<int, int>>& h_edges, int n, int l) {
    if (n < 3) throw BadParamsError("n >= 3");
    for (auto [a, b] : h_edges) {
        if (a < 0 || b < 0 || a >= n || b >= n) throw BadInstanceError("H vertex out of range");
        if (a == b) throw BadInstanceError("H has a loop");
        if (std::abs(a - b) == 1) throw BadInstanceError("H contains a path edge v_i v_{i+1}");
    }
    int mult = static_cast<int>(h_edges.size()) * static_cast<int>(h_edges.size());
    if (mult == 0) mult = 1;
    VertexId wa = n, wb = n + 1;
    std::vector<std::pair<VertexId, VertexId>> frame;
    for (int i = 0; i + 1 < n; ++i) frame.push_back({i, i + 1});
    frame.push_back({0, wa});
    frame.push_back({n - 1, wa});
    frame.push_back({0, wb});
    frame.push_back({n - 1, wb});
    frame.push_back({wa, wb});
    std::vector<std::pair<VertexId, VertexId>> edges;
    for (auto [u, v] : frame)
        for (int t = 0; t < mult; ++t) edges.push_back({u, v});
    GeneratedInstance out{Multigraph::build(n + 2, edges), InsertionSet{}, -1, l};
    std::vector<std::pair<VertexId, VertexId>> F(h_edges.begin(), h_edges.end());
    out.pairs = InsertionSet::make(out.graph, F);
    return out;
}

GeneratedInstance gen_random_planar(int n, int extra_k, std::uint64_t seed) {
    if (n < 1) throw BadParamsError("n >= 1");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<VertexId, VertexId>> edges;
    int have = 0;
    if (n == 1) {
        have = 1;
    } else if (n == 2) {
        edges.push_back({0, 1});
        have = 2;
    } else {
        // stacked triangulation core on about two thirds of the vertices,
        // then subdivisions and pendant vertices for connectivity variety
        int core = std::max(3, n - n / 3);
        edges = {{0, 1}, {1, 2}, {2, 0}};
        std::vector<std::array<VertexId, 3>> faces{{0, 1, 2}, {0, 1, 2}};
        have = 3;
        while (have < core) {
            auto& f = faces[rng() % faces.size()];
            VertexId v = have++;
            edges.push_back({f[0], v});
            edges.push_back({f[1], v});
            edges.push_back({f[2], v});
            std::array<VertexId, 3> a{f[0], f[1], v}, b{f[1], f[2], v}, c{f[0], f[2], v};
            f = a;
            faces.push_back(b);
            faces.push_back(c);
        }
        int subdivisions = (n - core) / 2;
        for (int t = 0; t < subdivisions && have < n; ++t) {
            size_t ei = rng() % edges.size();
            auto [u, v] = edges[ei];
            VertexId w = have++;
            edges[ei] = {u, w};
            edges.push_back({w, v});
        }
        while (have < n) {
            VertexId host = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(have));
            edges.push_back({host, have++});
        }
    }
    GeneratedInstance out{Multigraph::build(n, edges), InsertionSet{}, -1, -1};
    std::vector<std::pair<VertexId, VertexId>> F;
    int guard = 0;
    while (static_cast<int>(F.size()) < extra_k && ++guard < 100 * (extra_k + 1)) {
        VertexId a = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
        VertexId b = static_cast<VertexId>(rng() % static_cast<std::uint64_t>(n));
        if (a == b) continue;
        if (out.graph.has_edge_between(a, b)) continue;
        F.push_back({a, b});
    }
    out.pairs = InsertionSet::make(out.graph, F);
    return out;
}

} // namespace mei
