#include "mei/decompose.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <numeric>
#include <ostream>

namespace mei {

BcTree bc_tree(const Multigraph& g) {
    BcTree t;
    t.bc = blocks_and_cuts(g);
    int nb = static_cast<int>(t.bc.blocks.size());
    int nc = static_cast<int>(t.bc.cut_vertices.size());
    t.cut_index.assign(static_cast<size_t>(g.vertex_count()), -1);
    for (int i = 0; i < nc; ++i)
        t.cut_index[static_cast<size_t>(t.bc.cut_vertices[static_cast<size_t>(i)])] = i;
    t.adj.assign(static_cast<size_t>(nb + nc), {});
    t.block_vertex_count.assign(static_cast<size_t>(nb), 0);
    for (int b = 0; b < nb; ++b) {
        std::vector<VertexId> vs;
        for (EdgeId e : t.bc.blocks[static_cast<size_t>(b)]) {
            vs.push_back(g.edge(e).u);
            vs.push_back(g.edge(e).v);
        }
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        t.block_vertex_count[static_cast<size_t>(b)] = static_cast<int>(vs.size());
        for (VertexId v : vs) {
            int ci = t.cut_index[static_cast<size_t>(v)];
            if (ci >= 0) {
                t.adj[static_cast<size_t>(b)].push_back(nb + ci);
                t.adj[static_cast<size_t>(nb + ci)].push_back(b);
            }
        }
    }
    return t;
}

namespace {

std::vector<VertexId> block_vertices(const Multigraph& g, const std::vector<EdgeId>& edges) {
    std::vector<VertexId> vs;
    for (EdgeId e : edges) {
        vs.push_back(g.edge(e).u);
        vs.push_back(g.edge(e).v);
    }
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

} // namespace

struct ConTreeBuilder {
    static ConTree build(const Multigraph& g) {
        ConTree c;
        c.g_ = &g;
        c.bc_ = bc_tree(g);
        int nb = c.bc_.block_count();
        c.block_nodes_.assign(static_cast<size_t>(nb), {});
        c.block_mates_.assign(static_cast<size_t>(nb), {});
        c.edge_owner_.assign(static_cast<size_t>(g.edge_count()), -1);

        for (int b = 0; b < nb; ++b) {
            const auto& bedges = c.bc_.bc.blocks[static_cast<size_t>(b)];
            auto vs = block_vertices(g, bedges);
            if (vs.size() <= 2) {
                // trivial block: one D-node holding the whole bunch
                ConTree::Node node;
                node.type = NodeType::D;
                node.block = b;
                node.skel.vertices = vs;
                for (EdgeId e : bedges) {
                    SkelEdge se;
                    se.u = g.edge(e).u;
                    se.v = g.edge(e).v;
                    se.real_edge = e;
                    node.skel.edges.push_back(se);
                }
                int id = static_cast<int>(c.nodes_.size());
                c.nodes_.push_back(std::move(node));
                c.block_nodes_[static_cast<size_t>(b)].push_back(id);
            } else {
                SsprTree t = spr_tree(g, bedges);
                serialize_sspr(t);
                int base = static_cast<int>(c.nodes_.size());
                for (int v = 0; v < t.node_count(); ++v) {
                    ConTree::Node node;
                    node.type = t.type[static_cast<size_t>(v)];
                    node.block = b;
                    node.skel = t.skel[static_cast<size_t>(v)];
                    c.nodes_.push_back(std::move(node));
                    c.block_nodes_[static_cast<size_t>(b)].push_back(base + v);
                }
                // relink twins to global ids and record tree adjacency
                for (int v = 0; v < t.node_count(); ++v) {
                    auto& node = c.nodes_[static_cast<size_t>(base + v)];
                    for (auto& e : node.skel.edges)
                        if (e.is_virtual()) {
                            e.twin_node += base;
                            node.tree_adj.push_back(e.twin_node);
                        }
                    std::sort(node.tree_adj.begin(), node.tree_adj.end());
                    node.tree_adj.erase(std::unique(node.tree_adj.begin(), node.tree_adj.end()),
                                        node.tree_adj.end());
                }
            }
        }
        // C-nodes after all block nodes
        int ncuts = static_cast<int>(c.bc_.bc.cut_vertices.size());
        c.cnode_of_cut_.assign(static_cast<size_t>(ncuts), -1);
        for (int i = 0; i < ncuts; ++i) {
            ConTree::Node node;
            node.type = NodeType::C;
            node.cut_vertex = c.bc_.bc.cut_vertices[static_cast<size_t>(i)];
            node.skel.vertices = {node.cut_vertex};
            c.cnode_of_cut_[static_cast<size_t>(i)] = static_cast<int>(c.nodes_.size());
            c.nodes_.push_back(std::move(node));
        }
        // edge owners and per-block mate tables
        for (int id = 0; id < c.node_count(); ++id) {
            const auto& node = c.nodes_[static_cast<size_t>(id)];
            if (node.type == NodeType::C) continue;
            for (const auto& e : node.skel.edges)
                if (!e.is_virtual()) c.edge_owner_[static_cast<size_t>(e.real_edge)] = id;
            for (VertexId v : node.skel.vertices)
                c.block_mates_[static_cast<size_t>(node.block)].push_back({v, id});
        }
        for (auto& bm : c.block_mates_) std::sort(bm.begin(), bm.end());
        return c;
    }
};

ConTree ConTree::build(const Multigraph& g) { return ConTreeBuilder::build(g); }

int ConTree::c_node(VertexId cut) const {
    int ci = bc_.cut_index[static_cast<size_t>(cut)];
    return ci < 0 ? -1 : cnode_of_cut_[static_cast<size_t>(ci)];
}

std::vector<int> ConTree::mates_in_block(int block, VertexId v) const {
    std::vector<int> out;
    const auto& bm = block_mates_[static_cast<size_t>(block)];
    auto it = std::lower_bound(bm.begin(), bm.end(), std::make_pair(v, -1));
    for (; it != bm.end() && it->first == v; ++it) out.push_back(it->second);
    return out;
}

std::vector<int> ConTree::mates(VertexId v) const {
    std::vector<int> out;
    for (int b : blocks_of_vertex(v)) {
        auto m = mates_in_block(b, v);
        out.insert(out.end(), m.begin(), m.end());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> ConTree::blocks_of_vertex(VertexId v) const {
    std::vector<int> out;
    for (EdgeId e : g_->incident(v)) out.push_back(bc_.bc.block_of_edge[static_cast<size_t>(e)]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void ConTree::dump(std::ostream& os) const {
    for (int id = 0; id < node_count(); ++id) {
        const auto& n = nodes_[static_cast<size_t>(id)];
        os << id << ' ' << node_type_letter(n.type) << " [";
        for (size_t i = 0; i < n.skel.vertices.size(); ++i)
            os << (i ? " " : "") << n.skel.vertices[i];
        os << "] [";
        bool first = true;
        for (const auto& e : n.skel.edges) {
            if (!first) os << ' ';
            first = false;
            if (e.is_virtual())
                os << "v(" << e.u << "," << e.v << ";" << e.twin_node << ")";
            else
                os << "r" << e.real_edge << "(" << e.u << "," << e.v << ")";
        }
        os << "]";
        if (n.type == NodeType::C) os << " cut=" << n.cut_vertex;
        os << '\n';
    }
}

DecompositionGraph decomposition_graph(const ConTree& c) {
    DecompositionGraph d;
    d.con = &c;
    d.adj.assign(static_cast<size_t>(c.node_count()), {});
    for (int id = 0; id < c.node_count(); ++id) {
        const auto& n = c.node(id);
        if (n.type == NodeType::C) {
            VertexId x = n.cut_vertex;
            for (int b : c.blocks_of_vertex(x))
                for (int m : c.mates_in_block(b, x))
                    if (c.node(m).type != NodeType::P) {
                        d.adj[static_cast<size_t>(id)].push_back(m);
                        d.adj[static_cast<size_t>(m)].push_back(id);
                    }
        } else {
            for (int m : n.tree_adj) d.adj[static_cast<size_t>(id)].push_back(m);
        }
    }
    for (auto& a : d.adj) {
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    return d;
}

namespace {

// Unique shortest path in the sSPR tree of one block between the mates of
// w1 and the mates of w2, oriented w1 -> w2. Both mate sets induce
// subtrees; a degenerate one-node answer is the lowest node id containing
// both.
std::vector<int> block_piece(const ConTree& c, int block, VertexId w1, VertexId w2) {
    auto m1 = c.mates_in_block(block, w1);
    auto m2 = c.mates_in_block(block, w2);
    assert(!m1.empty() && !m2.empty());
    // P-mates can be dropped: every neighbor of a P-node whose skeleton
    // contains w is an S-node containing w as well, so no shortest piece
    // needs to start or end at a P-node (Claim 2.10).
    auto drop_p = [&](std::vector<int>& m) {
        m.erase(std::remove_if(m.begin(), m.end(),
                               [&](int id) { return c.node(id).type == NodeType::P; }),
                m.end());
        assert(!m.empty());
    };
    drop_p(m1);
    drop_p(m2);
    // degenerate: a node containing both border vertices (lowest id wins)
    {
        std::vector<int> common;
        std::set_intersection(m1.begin(), m1.end(), m2.begin(), m2.end(),
                              std::back_inserter(common));
        if (!common.empty()) return {common.front()};
    }
    // BFS over the block's sSPR tree from all of m1 to the nearest of m2
    std::vector<int> sources = m1;
    std::vector<int> targets = m2;
    std::vector<char> is_target(static_cast<size_t>(c.node_count()), 0);
    for (int t : targets) is_target[static_cast<size_t>(t)] = 1;
    std::deque<int> q;
    std::vector<int> pred(static_cast<size_t>(c.node_count()), -2);
    for (int s : sources) {
        pred[static_cast<size_t>(s)] = -1;
        q.push_back(s);
    }
    int hit = -1;
    while (!q.empty() && hit == -1) {
        int v = q.front();
        q.pop_front();
        if (is_target[static_cast<size_t>(v)]) {
            hit = v;
            break;
        }
        for (int w : c.node(v).tree_adj)
            if (pred[static_cast<size_t>(w)] == -2) {
                pred[static_cast<size_t>(w)] = v;
                if (is_target[static_cast<size_t>(w)]) {
                    hit = w;
                    break;
                }
                q.push_back(w);
            }
    }
    assert(hit != -1);
    std::vector<int> path;
    for (int v = hit; v != -1; v = pred[static_cast<size_t>(v)]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace

ConPath con_path(const ConTree& c, VertexId v1, VertexId v2) {
    if (v1 == v2) throw Error("con_path: identical endpoints");
    ConPath p;
    p.v1 = v1;
    p.v2 = v2;
    const BcTree& bt = c.bc();
    int nb = bt.block_count();

    // BC-tree path between a node for v1 and one for v2
    auto node_for = [&](VertexId v) -> int {
        int ci = bt.cut_index[static_cast<size_t>(v)];
        if (ci >= 0) return nb + ci;
        return c.blocks_of_vertex(v).front(); // unique block of a non-cut vertex
    };
    int s = node_for(v1), t = node_for(v2);
    std::vector<int> bc_path;
    if (s == t) {
        bc_path = {s};
    } else {
        std::vector<int> pred(static_cast<size_t>(bt.node_count()), -2);
        std::deque<int> q{s};
        pred[static_cast<size_t>(s)] = -1;
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            if (v == t) break;
            for (int w : bt.adj[static_cast<size_t>(v)])
                if (pred[static_cast<size_t>(w)] == -2) {
                    pred[static_cast<size_t>(w)] = v;
                    q.push_back(w);
                }
        }
        for (int v = t; v != -1; v = pred[static_cast<size_t>(v)]) bc_path.push_back(v);
        std::reverse(bc_path.begin(), bc_path.end());
    }
    // Per Def 2.8 the chain runs between B-nodes containing v1 and v2;
    // leading/trailing C-nodes (v1 or v2 being cut vertices) only fix the
    // border vertex and are dropped from the node sequence.
    std::vector<size_t> bpos;
    for (size_t i = 0; i < bc_path.size(); ++i)
        if (bt.is_block_node(bc_path[i])) bpos.push_back(i);
    assert(!bpos.empty());

    for (size_t i = 0; i < bpos.size(); ++i) {
        int b = bc_path[bpos[i]];
        VertexId w1, w2;
        if (i == 0) {
            w1 = v1;
        } else {
            int cnode_id = bc_path[bpos[i] - 1];
            w1 = bt.bc.cut_vertices[static_cast<size_t>(cnode_id - nb)];
        }
        if (i + 1 == bpos.size()) {
            w2 = v2;
        } else {
            int cnode_id = bc_path[bpos[i] + 1];
            w2 = bt.bc.cut_vertices[static_cast<size_t>(cnode_id - nb)];
        }
        std::vector<int> piece = block_piece(c, b, w1, w2);
        if (i > 0) {
            int cn = c.c_node(w1);
            p.nodes.push_back(cn);
            p.enter_vertex.push_back(w1);
            p.exit_vertex.push_back(w1);
        }
        for (size_t j = 0; j < piece.size(); ++j) {
            p.nodes.push_back(piece[j]);
            p.enter_vertex.push_back(j == 0 ? w1 : -1);
            p.exit_vertex.push_back(j + 1 == piece.size() ? w2 : -1);
        }
    }
    return p;
}

std::vector<int> con_path_intersection(const ConPath& a, const ConPath& b) {
    std::vector<int> bs = b.nodes;
    std::sort(bs.begin(), bs.end());
    // positions in a of shared nodes
    std::vector<int> pos;
    for (int i = 0; i < a.length(); ++i)
        if (std::binary_search(bs.begin(), bs.end(), a.nodes[static_cast<size_t>(i)]))
            pos.push_back(i);
    if (pos.empty()) return {};
    for (size_t i = 1; i < pos.size(); ++i)
        if (pos[i] != pos[i - 1] + 1) throw NonContiguousError();
    std::vector<int> shared;
    for (int i : pos) shared.push_back(a.nodes[static_cast<size_t>(i)]);
    // verify contiguity in b as well
    std::vector<int> as = shared;
    std::sort(as.begin(), as.end());
    std::vector<int> posb;
    for (int i = 0; i < b.length(); ++i)
        if (std::binary_search(as.begin(), as.end(), b.nodes[static_cast<size_t>(i)]))
            posb.push_back(i);
    if (static_cast<int>(posb.size()) != static_cast<int>(shared.size()))
        throw NonContiguousError();
    for (size_t i = 1; i < posb.size(); ++i)
        if (posb[i] != posb[i - 1] + 1) throw NonContiguousError();
    return shared;
}

} // namespace mei
