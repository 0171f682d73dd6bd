#include "mei/embed_build.hpp"

#include <algorithm>
#include <cassert>
#include <list>
#include <map>

namespace mei {

namespace {
constexpr int kNone = -1;
}

SkeletonFaces trace_skeleton_faces(const Skeleton& sk, const SkeletonEmbedding& emb) {
    const int nd = 2 * static_cast<int>(sk.edges.size());
    // per skeleton dart: rot_next within its tail's rotation
    // skeleton dart convention: 2i points lo(e_i) -> hi(e_i), 2i+1 back
    std::vector<int> rot_next(static_cast<size_t>(nd), kNone);
    for (size_t vi = 0; vi < sk.vertices.size(); ++vi) {
        const auto& order = emb.rot[vi];
        VertexId v = sk.vertices[vi];
        std::vector<int> darts;
        for (int ei : order) {
            const SkelEdge& e = sk.edges[static_cast<size_t>(ei)];
            darts.push_back(e.lo() == v ? 2 * ei : 2 * ei + 1);
        }
        for (size_t i = 0; i < darts.size(); ++i)
            rot_next[static_cast<size_t>(darts[i])] = darts[(i + 1) % darts.size()];
    }
    SkeletonFaces f;
    f.face_of.assign(static_cast<size_t>(nd), kNone);
    for (int d0 = 0; d0 < nd; ++d0) {
        if (f.face_of[static_cast<size_t>(d0)] != kNone) continue;
        int id = f.face_count++;
        f.walks.emplace_back();
        int d = d0;
        do {
            f.face_of[static_cast<size_t>(d)] = id;
            f.walks.back().push_back(d);
            d = rot_next[static_cast<size_t>(d ^ 1)];
        } while (d != d0);
    }
    return f;
}

// ---------- ConTreeIndex ----------

ConTreeIndex::ConTreeIndex(const ConTree& c) : c_(&c) {
    int n = c.node_count();
    root_.assign(static_cast<size_t>(c.bc().block_count()), kNone);
    parent_.assign(static_cast<size_t>(n), kNone);
    tin_.assign(static_cast<size_t>(n), 0);
    tout_.assign(static_cast<size_t>(n), 0);
    toward_.assign(static_cast<size_t>(n), {});
    real_index_.assign(static_cast<size_t>(c.graph().edge_count()), kNone);
    for (int id = 0; id < n; ++id) {
        const auto& node = c.node(id);
        if (node.type == NodeType::C) continue;
        for (size_t i = 0; i < node.skel.edges.size(); ++i) {
            if (node.skel.edges[i].is_virtual())
                toward_[static_cast<size_t>(id)].push_back(
                    {node.skel.edges[i].twin_node, static_cast<int>(i)});
            else
                real_index_[static_cast<size_t>(node.skel.edges[i].real_edge)] =
                    static_cast<int>(i);
        }
        std::sort(toward_[static_cast<size_t>(id)].begin(), toward_[static_cast<size_t>(id)].end());
    }
    int timer = 0;
    for (int b = 0; b < c.bc().block_count(); ++b) {
        int r = c.block_nodes(b).front();
        root_[static_cast<size_t>(b)] = r;
        // iterative DFS over the sSPR tree
        std::vector<std::pair<int, size_t>> st{{r, 0}};
        parent_[static_cast<size_t>(r)] = kNone;
        tin_[static_cast<size_t>(r)] = timer++;
        while (!st.empty()) {
            auto& [v, i] = st.back();
            const auto& adj = c.node(v).tree_adj;
            if (i < adj.size()) {
                int w = adj[i++];
                if (w == parent_[static_cast<size_t>(v)]) continue;
                parent_[static_cast<size_t>(w)] = v;
                tin_[static_cast<size_t>(w)] = timer++;
                st.push_back({w, 0});
            } else {
                tout_[static_cast<size_t>(v)] = timer;
                st.pop_back();
            }
        }
    }
}

int ConTreeIndex::edge_toward(int node, int neighbor) const {
    const auto& tw = toward_[static_cast<size_t>(node)];
    auto it = std::lower_bound(tw.begin(), tw.end(), std::make_pair(neighbor, -1));
    assert(it != tw.end() && it->first == neighbor);
    return it->second;
}

int ConTreeIndex::skel_edge_of(int node, EdgeId e) const {
    const ConTree& c = *c_;
    int owner = c.owner_of_edge(e);
    if (owner == node) return real_index_[static_cast<size_t>(e)];
    assert(c.node(owner).block == c.node(node).block);
    if (!in_subtree(node, owner)) return edge_toward(node, parent(node));
    // find the child of node whose subtree holds the owner
    const auto& tw = toward_[static_cast<size_t>(node)];
    for (const auto& [nb, idx] : tw) {
        if (nb == parent(node)) continue;
        if (in_subtree(nb, owner)) return idx;
    }
    assert(false);
    return kNone;
}

int ConTreeIndex::local_vertex(int node, VertexId v) const {
    const auto& vs = c_->node(node).skel.vertices;
    auto it = std::lower_bound(vs.begin(), vs.end(), v);
    assert(it != vs.end() && *it == v);
    return static_cast<int>(it - vs.begin());
}

// ---------- composition ----------

SkeletonEmbedding canonical_skeleton_embedding(const Skeleton& sk, NodeType type) {
    SkeletonEmbedding emb;
    emb.rot.resize(sk.vertices.size());
    auto local = [&](VertexId v) {
        return static_cast<size_t>(
            std::lower_bound(sk.vertices.begin(), sk.vertices.end(), v) - sk.vertices.begin());
    };
    switch (type) {
        case NodeType::S: {
            // walk the cycle starting from the lowest edge, oriented from
            // its lower to its higher pole
            std::vector<std::vector<std::pair<int, VertexId>>> inc(sk.vertices.size());
            for (size_t i = 0; i < sk.edges.size(); ++i) {
                inc[local(sk.edges[i].u)].push_back({static_cast<int>(i), sk.edges[i].v});
                inc[local(sk.edges[i].v)].push_back({static_cast<int>(i), sk.edges[i].u});
            }
            VertexId at = sk.edges[0].hi();
            int via = 0;
            VertexId start = sk.edges[0].lo();
            emb.rot[local(start)] = {};
            std::vector<std::pair<VertexId, int>> order; // (vertex, incoming edge)
            order.push_back({start, kNone});
            while (at != start) {
                order.push_back({at, via});
                const auto& cands = inc[local(at)];
                int nxt = cands[0].first == via ? cands[1].first : cands[0].first;
                VertexId to = sk.edges[static_cast<size_t>(nxt)].u == at
                                  ? sk.edges[static_cast<size_t>(nxt)].v
                                  : sk.edges[static_cast<size_t>(nxt)].u;
                via = nxt;
                at = to;
            }
            // rotations: at each vertex the two incident edges in walk order;
            // `via` now holds the closing edge back into the start vertex
            for (size_t i = 0; i < order.size(); ++i) {
                auto [v, in_edge] = order[i];
                int out_edge = i + 1 < order.size() ? order[i + 1].second : via;
                if (in_edge == kNone) in_edge = via; // start vertex
                emb.rot[local(v)] = {in_edge, out_edge};
            }
            break;
        }
        case NodeType::P:
        case NodeType::D: {
            // ascending edge index at the lower pole, reversed at the other
            VertexId lo = sk.vertices[0], hi = sk.vertices.back();
            (void)hi;
            for (size_t i = 0; i < sk.edges.size(); ++i) {
                emb.rot[local(lo)].push_back(static_cast<int>(i));
                emb.rot[local(sk.edges[i].u == lo ? sk.edges[i].v : sk.edges[i].u)]
                    .insert(emb.rot[local(sk.edges[i].u == lo ? sk.edges[i].v : sk.edges[i].u)]
                                .begin(),
                            static_cast<int>(i));
            }
            break;
        }
        case NodeType::R:
        case NodeType::C:
            throw Error("canonical_skeleton_embedding: R/C need external data");
    }
    return emb;
}

BlockRotation compose_block(const ConTreeIndex& idx, int block,
                            const std::function<const SkeletonEmbedding&(int)>& skel_emb) {
    const ConTree& c = idx.con();
    struct Entry {
        Dart real = kNone;  // real dart, or
        int vnode = kNone;  // virtual: node on the other side
        int vedge = kNone;  // edge index in the CURRENT node's skeleton
        int owner = kNone;  // node whose skeleton edge this is
    };
    std::map<VertexId, std::list<Entry>> rot;
    struct Pending {
        int node;              // child to expand
        int via_edge;          // edge index in child's skeleton (twin side)
        std::list<Entry>::iterator slot_u, slot_v; // placeholder entries
        VertexId u, v;
    };
    std::vector<Pending> stack;

    auto emit_node = [&](int node, int skip_edge, std::list<Entry>::iterator slot_u,
                         std::list<Entry>::iterator slot_v, VertexId su, VertexId sv) {
        const auto& sk = c.node(node).skel;
        const SkeletonEmbedding& emb = skel_emb(node);
        for (size_t vi = 0; vi < sk.vertices.size(); ++vi) {
            VertexId v = sk.vertices[vi];
            // build this vertex's entries in rotation order
            std::list<Entry> local;
            std::list<Entry>::iterator twin_pos = local.end();
            for (int ei : emb.rot[vi]) {
                const SkelEdge& e = sk.edges[static_cast<size_t>(ei)];
                Entry en;
                if (e.is_virtual()) {
                    en.vnode = e.twin_node;
                    en.vedge = ei;
                    en.owner = node;
                } else {
                    en.real = c.graph().edge(e.real_edge).u == v ? forward_dart(e.real_edge)
                                                                 : backward_dart(e.real_edge);
                }
                local.push_back(en);
                if (ei == skip_edge) twin_pos = std::prev(local.end());
            }
            if (skip_edge >= 0 && (v == su || v == sv)) {
                assert(twin_pos != local.end());
                // splice into the parent slot: order starts after the twin
                auto& target = rot[v];
                auto slot = v == su ? slot_u : slot_v;
                target.splice(slot, local, std::next(twin_pos), local.end());
                target.splice(slot, local, local.begin(), twin_pos);
                target.erase(slot); // drop placeholder (and the twin entry dies with `local`)
            } else {
                auto& target = rot[v];
                assert(target.empty());
                target = std::move(local);
            }
        }
    };

    // The queuing of children: scan freshly inserted entries. Simpler: a
    // worklist of virtual entries found per emission.
    std::vector<std::tuple<int, int, VertexId, VertexId>> todo; // (child, child-twin-edge, u, v)
    auto collect_virtuals = [&](int node) {
        const auto& sk = c.node(node).skel;
        for (size_t i = 0; i < sk.edges.size(); ++i) {
            const SkelEdge& e = sk.edges[static_cast<size_t>(i)];
            if (!e.is_virtual()) continue;
            if (e.twin_node == idx.parent(node)) continue;
            todo.push_back({e.twin_node, e.twin_edge, e.u, e.v});
        }
    };

    int root = idx.root_of_block(block);
    emit_node(root, -1, {}, {}, -1, -1);
    collect_virtuals(root);
    // Resolve placeholder iterators lazily: find the entry (vnode == child)
    // in rot[u] / rot[v].
    while (!todo.empty()) {
        auto [child, via, u, v] = todo.back();
        todo.pop_back();
        auto find_slot = [&](VertexId at, int child_node) {
            auto& l = rot[at];
            for (auto it = l.begin(); it != l.end(); ++it)
                if (it->vnode == child_node && it->owner == idx.parent(child_node)) return it;
            assert(false);
            return l.end();
        };
        auto su = find_slot(u, child), sv = find_slot(v, child);
        emit_node(child, via, su, sv, u, v);
        collect_virtuals(child);
    }

    BlockRotation out;
    for (auto& [v, l] : rot) {
        out.vertices.push_back(v);
        std::vector<Dart> darts;
        for (const auto& en : l) {
            assert(en.real != kNone && "unexpanded virtual entry");
            darts.push_back(en.real);
        }
        out.rot.push_back(std::move(darts));
    }
    return out;
}

PlaneEmbedding assemble_embedding(const Multigraph& g, const ConTree& c,
                                  const std::vector<BlockRotation>& blocks,
                                  const std::vector<CutProgram>& programs) {
    std::vector<std::vector<Dart>> rot(static_cast<size_t>(g.vertex_count()));
    const BcTree& bt = c.bc();
    // non-cut vertices: straight from their unique block
    for (size_t b = 0; b < blocks.size(); ++b)
        for (size_t i = 0; i < blocks[b].vertices.size(); ++i) {
            VertexId v = blocks[b].vertices[i];
            if (bt.cut_index[static_cast<size_t>(v)] < 0)
                rot[static_cast<size_t>(v)] = blocks[b].rot[i];
        }
    // cut vertices: run the programs
    for (int ci = 0; ci < static_cast<int>(bt.bc.cut_vertices.size()); ++ci) {
        VertexId v = bt.bc.cut_vertices[static_cast<size_t>(ci)];
        // incident blocks ascending
        std::vector<int> bls;
        for (EdgeId e : g.incident(v)) bls.push_back(bt.bc.block_of_edge[static_cast<size_t>(e)]);
        std::sort(bls.begin(), bls.end());
        bls.erase(std::unique(bls.begin(), bls.end()), bls.end());
        const CutProgram& prog = programs[static_cast<size_t>(ci)];
        assert(prog.size() == bls.size());
        std::list<Dart> arrangement;
        std::map<Dart, std::list<Dart>::iterator> where;
        for (size_t j = 0; j < bls.size(); ++j) {
            int b = bls[j];
            const BlockRotation& br = blocks[static_cast<size_t>(b)];
            size_t vi = static_cast<size_t>(
                std::lower_bound(br.vertices.begin(), br.vertices.end(), v) - br.vertices.begin());
            assert(vi < br.vertices.size() && br.vertices[vi] == v);
            const auto& cyc = br.rot[vi];
            // linearize the cyclic order starting right after own_dart
            Dart own = prog[j].own_dart;
            size_t start = 0;
            if (own != kNone) {
                auto it = std::find(cyc.begin(), cyc.end(), own);
                assert(it != cyc.end());
                start = static_cast<size_t>(it - cyc.begin() + 1) % cyc.size();
            }
            std::list<Dart> seg;
            for (size_t t = 0; t < cyc.size(); ++t)
                seg.push_back(cyc[(start + t) % cyc.size()]);
            std::list<Dart>::iterator pos = arrangement.end();
            if (j > 0) {
                Dart host = prog[j].host_dart;
                auto hit = where.find(host);
                assert(hit != where.end());
                pos = std::next(hit->second);
            }
            for (auto it = seg.begin(); it != seg.end(); ++it) {
                auto ins = arrangement.insert(pos, *it);
                where[*it] = ins;
            }
        }
        rot[static_cast<size_t>(v)].assign(arrangement.begin(), arrangement.end());
    }
    return PlaneEmbedding::from_rotations(g, rot);
}

// ---------- extraction ----------

InducedSkeleton induce_skeleton(const PlaneEmbedding& e, const ConTreeIndex& idx, int node) {
    const ConTree& c = idx.con();
    const auto& sk = c.node(node).skel;
    int block = c.node(node).block;
    InducedSkeleton out;
    out.emb.rot.resize(sk.vertices.size());
    out.groups.resize(sk.vertices.size());
    for (size_t vi = 0; vi < sk.vertices.size(); ++vi) {
        VertexId v = sk.vertices[vi];
        // block-restricted rotation at v
        std::vector<Dart> darts;
        for (Dart d : e.rotation(v))
            if (c.bc().bc.block_of_edge[static_cast<size_t>(edge_of(d))] == block)
                darts.push_back(d);
        assert(!darts.empty());
        // classify into skeleton edges; groups must be contiguous cyclically
        std::vector<int> cls(darts.size());
        for (size_t i = 0; i < darts.size(); ++i)
            cls[i] = idx.skel_edge_of(node, edge_of(darts[i]));
        // rotate so position 0 starts a group
        size_t off = 0;
        while (off < darts.size() && cls[(off + darts.size() - 1) % darts.size()] == cls[off]) {
            ++off;
            if (off == darts.size()) break; // single group (degree-1 in skeleton? impossible)
        }
        if (off == darts.size()) off = 0;
        std::vector<int> order;
        std::vector<std::pair<Dart, Dart>> groups;
        for (size_t t = 0; t < darts.size();) {
            size_t i = (off + t) % darts.size();
            int ce = cls[i];
            Dart first = darts[i];
            Dart last = first;
            size_t len = 0;
            while (t + len < darts.size() && cls[(off + t + len) % darts.size()] == ce) {
                last = darts[(off + t + len) % darts.size()];
                ++len;
            }
            order.push_back(ce);
            groups.push_back({first, last});
            t += len;
        }
        // contiguity: each skeleton edge exactly one group
        std::vector<int> sorted = order;
        std::sort(sorted.begin(), sorted.end());
        assert(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end() &&
               "expansion darts must be contiguous");
        out.emb.rot[vi] = std::move(order);
        out.groups[vi] = std::move(groups);
    }
    return out;
}

// ---------- EmbedBase ----------

EmbedBase::EmbedBase(const Multigraph& g, const ConTree& c)
    : g_(&g), c_(&c), idx_(c), gd_(test_and_embed(g)) {
    int n = c.node_count();
    defaults_.resize(static_cast<size_t>(n));
    exp_cost_cache_.resize(static_cast<size_t>(n));
    for (int id = 0; id < n; ++id)
        exp_cost_cache_[static_cast<size_t>(id)].assign(c.node(id).skel.edges.size(), -1);
    default_faces_.resize(static_cast<size_t>(n));
    s_default_face_.assign(static_cast<size_t>(n), kNone);
    for (int id = 0; id < n; ++id) {
        const auto& node = c.node(id);
        switch (node.type) {
            case NodeType::C:
                continue;
            case NodeType::R:
                defaults_[static_cast<size_t>(id)] = induce_skeleton(gd_, idx_, id).emb;
                break;
            default:
                defaults_[static_cast<size_t>(id)] =
                    canonical_skeleton_embedding(node.skel, node.type);
        }
        default_faces_[static_cast<size_t>(id)] =
            trace_skeleton_faces(node.skel, defaults_[static_cast<size_t>(id)]);
        if (node.type == NodeType::S) {
            // the face whose walk contains dart 0 of edge 0 (lo -> hi)
            s_default_face_[static_cast<size_t>(id)] =
                default_faces_[static_cast<size_t>(id)].face_of[0];
        }
    }
}

} // namespace mei
