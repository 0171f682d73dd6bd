#include "mei/oracle.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>

namespace mei {

namespace {

constexpr int kNone = -1;

long long sat_mul(long long a, long long b, long long lim) {
    if (a > lim / b) return lim + 1;
    return a * b;
}

long long factorial_capped(int m, long long lim) {
    long long r = 1;
    for (int i = 2; i <= m; ++i) {
        r = sat_mul(r, i, lim);
        if (r > lim) return r;
    }
    return r;
}

struct CutSpace {
    VertexId vertex;
    std::vector<int> blocks; // ascending
    // per block: candidate own-cut darts (1 for bunches) and host darts
    std::vector<std::vector<Dart>> own_darts;
    std::vector<std::vector<Dart>> host_darts;
};

struct Enumerator {
    const Multigraph& g;
    ConTree con;
    EmbedBase base;
    std::vector<int> r_nodes, p_nodes;
    std::vector<CutSpace> cuts;

    explicit Enumerator(const Multigraph& gg) : g(gg), con(ConTree::build(gg)), base(gg, con) {
        for (int id = 0; id < con.node_count(); ++id) {
            if (con.node(id).type == NodeType::R) r_nodes.push_back(id);
            if (con.node(id).type == NodeType::P) p_nodes.push_back(id);
        }
    }

    // Parallel real strands are interchangeable for every distance
    // computation, so a P-node's space is: cyclic orders of its virtual
    // edges times weak compositions of the real strand count into the
    // gaps between them.
    std::vector<int> p_virtuals(int p) const {
        std::vector<int> v;
        const auto& es = con.node(p).skel.edges;
        for (size_t i = 0; i < es.size(); ++i)
            if (es[i].is_virtual()) v.push_back(static_cast<int>(i));
        return v;
    }
    long long p_space(int p, long long lim) const {
        const auto& es = con.node(p).skel.edges;
        int t = static_cast<int>(p_virtuals(p).size());
        int r = static_cast<int>(es.size()) - t;
        assert(t >= 1);
        long long orders = factorial_capped(t - 1, lim);
        // C(r + t - 1, t - 1) weak compositions
        long long comp = 1;
        for (int i = 1; i <= t - 1; ++i) {
            comp = sat_mul(comp, r + t - i, lim);
            comp /= i;
            if (comp > lim) return lim + 1;
        }
        return sat_mul(orders, comp, lim);
    }

    long long space_size(long long lim) {
        long long total = 1;
        for (size_t i = 0; i < r_nodes.size(); ++i) {
            total = sat_mul(total, 2, lim);
            if (total > lim) return total;
        }
        for (int p : p_nodes) {
            total = sat_mul(total, p_space(p, lim), lim);
            if (total > lim) return total;
        }
        for (const auto& cs : cuts) {
            long long hosts = 0;
            for (size_t j = 0; j < cs.blocks.size(); ++j) {
                if (j > 0) {
                    total = sat_mul(total, hosts, lim);
                    total = sat_mul(total, static_cast<long long>(cs.own_darts[j].size()), lim);
                    if (total > lim) return total;
                }
                hosts += static_cast<long long>(cs.host_darts[j].size());
            }
        }
        return total;
    }
};

} // namespace

void enumerate_embeddings(const Multigraph& g, long long cap,
                          const std::function<void(const PlaneEmbedding&)>& fn,
                          EnumerationStats* stats) {
    if (!is_connected(g)) throw DisconnectedError();
    Enumerator en(g);
    const ConTree& con = en.con;
    const ConTreeIndex& idx = en.base.index();
    const BcTree& bt = con.bc();

    // Block rotations depend on R flips and P orders within the block; we
    // recompose per choice vector (oracle inputs are small).
    int nblocks = bt.block_count();

    // cut spaces need per-block rotations for the dart lists; those lists
    // are choice dependent only in ORDER, not as sets, so candidate darts
    // can be taken from the default composition.
    std::vector<SkeletonEmbedding> current(static_cast<size_t>(con.node_count()));
    for (int id = 0; id < con.node_count(); ++id)
        if (con.node(id).type != NodeType::C)
            current[static_cast<size_t>(id)] = en.base.default_skel(id);
    auto compose_all = [&]() {
        std::vector<BlockRotation> blocks;
        blocks.reserve(static_cast<size_t>(nblocks));
        for (int b = 0; b < nblocks; ++b)
            blocks.push_back(compose_block(
                idx, b, [&](int node) -> const SkeletonEmbedding& {
                    return current[static_cast<size_t>(node)];
                }));
        return blocks;
    };
    std::vector<BlockRotation> default_blocks = compose_all();

    for (int ci = 0; ci < static_cast<int>(bt.bc.cut_vertices.size()); ++ci) {
        CutSpace cs;
        cs.vertex = bt.bc.cut_vertices[static_cast<size_t>(ci)];
        for (EdgeId e : g.incident(cs.vertex))
            cs.blocks.push_back(bt.bc.block_of_edge[static_cast<size_t>(e)]);
        std::sort(cs.blocks.begin(), cs.blocks.end());
        cs.blocks.erase(std::unique(cs.blocks.begin(), cs.blocks.end()), cs.blocks.end());
        for (int b : cs.blocks) {
            const BlockRotation& br = default_blocks[static_cast<size_t>(b)];
            size_t vi = static_cast<size_t>(
                std::lower_bound(br.vertices.begin(), br.vertices.end(), cs.vertex) -
                br.vertices.begin());
            const auto& cyc = br.rot[vi];
            if (bt.trivial_block(b)) {
                cs.own_darts.push_back({cyc.back()});
                cs.host_darts.push_back({cyc.back()});
            } else {
                std::vector<Dart> sorted = cyc;
                std::sort(sorted.begin(), sorted.end());
                cs.own_darts.push_back(sorted);
                cs.host_darts.push_back(sorted);
            }
        }
        en.cuts.push_back(std::move(cs));
    }

    long long size = en.space_size(cap);
    if (size > cap) throw TooManyEmbeddingsError(cap);

    // odometer over choices
    struct Digit {
        enum Kind { RFlip, POrder, CutHost, CutOwn } kind;
        int node = kNone;   // R/P node
        int cut = kNone;    // cut index
        size_t block_pos = 0;
        long long radix = 1;
        long long value = 0;
    };
    std::vector<Digit> digits;
    for (int r : en.r_nodes) digits.push_back({Digit::RFlip, r, kNone, 0, 2, 0});
    for (int p : en.p_nodes)
        digits.push_back({Digit::POrder, p, kNone, 0, en.p_space(p, cap), 0});
    for (size_t c = 0; c < en.cuts.size(); ++c) {
        const auto& cs = en.cuts[c];
        long long hosts = static_cast<long long>(cs.host_darts[0].size());
        for (size_t j = 1; j < cs.blocks.size(); ++j) {
            digits.push_back({Digit::CutHost, kNone, static_cast<int>(c), j, hosts, 0});
            digits.push_back({Digit::CutOwn, kNone, static_cast<int>(c), j,
                              static_cast<long long>(cs.own_darts[j].size()), 0});
            hosts += static_cast<long long>(cs.host_darts[j].size());
        }
    }

    std::set<std::vector<EdgeId>> seen; // face-structure fingerprints
    EnumerationStats st;

    auto permutation_from_index = [](int m, long long index) {
        // order of strands 1..m-1 (strand 0 fixed first)
        std::vector<int> items;
        for (int i = 1; i < m; ++i) items.push_back(i);
        std::vector<int> out{0};
        for (int left = m - 1; left >= 1; --left) {
            long long f = 1;
            for (int t = 2; t < left; ++t) f *= t;
            long long pick = index / f;
            index %= f;
            out.push_back(items[static_cast<size_t>(pick)]);
            items.erase(items.begin() + static_cast<long>(pick));
        }
        return out;
    };

    bool done = false;
    while (!done) {
        // materialize choices
        std::vector<CutProgram> programs(en.cuts.size());
        for (size_t c = 0; c < en.cuts.size(); ++c)
            programs[c].resize(en.cuts[c].blocks.size());
        for (const Digit& d : digits) {
            switch (d.kind) {
                case Digit::RFlip: {
                    SkeletonEmbedding emb = en.base.default_skel(d.node);
                    if (d.value) {
                        for (auto& r : emb.rot) std::reverse(r.begin(), r.end());
                    }
                    current[static_cast<size_t>(d.node)] = std::move(emb);
                    break;
                }
                case Digit::POrder: {
                    const Skeleton& sk = con.node(d.node).skel;
                    auto virtuals = en.p_virtuals(d.node);
                    std::vector<int> reals;
                    for (size_t i = 0; i < sk.edges.size(); ++i)
                        if (!sk.edges[i].is_virtual()) reals.push_back(static_cast<int>(i));
                    int t = static_cast<int>(virtuals.size());
                    int r = static_cast<int>(reals.size());
                    long long orders = 1;
                    for (int i = 2; i <= t - 1; ++i) orders *= i;
                    long long perm_idx = d.value % orders;
                    long long comp_idx = d.value / orders;
                    // cyclic order of virtuals: first fixed
                    std::vector<int> vorder{0};
                    {
                        std::vector<int> items;
                        for (int i = 1; i < t; ++i) items.push_back(i);
                        for (int left = t - 1; left >= 1; --left) {
                            long long f = 1;
                            for (int x = 2; x < left; ++x) f *= x;
                            long long pick = perm_idx / f;
                            perm_idx %= f;
                            vorder.push_back(items[static_cast<size_t>(pick)]);
                            items.erase(items.begin() + static_cast<long>(pick));
                        }
                    }
                    // weak composition of r into t parts (combinadic)
                    std::vector<int> gap(static_cast<size_t>(t), 0);
                    {
                        long long idx = comp_idx;
                        int rest = r;
                        for (int gpos = 0; gpos < t - 1; ++gpos) {
                            int take = 0;
                            while (true) {
                                // count of compositions with gap[gpos]=take
                                long long cnt = 1;
                                int rem_parts = t - gpos - 2;
                                int rem = rest - take;
                                // C(rem + rem_parts, rem_parts)
                                for (int x = 1; x <= rem_parts; ++x) {
                                    cnt = cnt * (rem + x);
                                    cnt /= x;
                                }
                                if (idx < cnt) break;
                                idx -= cnt;
                                ++take;
                            }
                            gap[static_cast<size_t>(gpos)] = take;
                            rest -= take;
                        }
                        gap[static_cast<size_t>(t - 1)] = rest;
                    }
                    SkeletonEmbedding emb;
                    emb.rot.resize(2);
                    size_t rpos = 0;
                    for (int gpos = 0; gpos < t; ++gpos) {
                        emb.rot[0].push_back(virtuals[static_cast<size_t>(vorder[static_cast<size_t>(gpos)])]);
                        for (int x = 0; x < gap[static_cast<size_t>(gpos)]; ++x)
                            emb.rot[0].push_back(reals[rpos++]);
                    }
                    emb.rot[1] = emb.rot[0];
                    std::reverse(emb.rot[1].begin(), emb.rot[1].end());
                    current[static_cast<size_t>(d.node)] = std::move(emb);
                    break;
                }
                case Digit::CutHost: {
                    const auto& cs = en.cuts[static_cast<size_t>(d.cut)];
                    long long v = d.value;
                    for (size_t j = 0;; ++j) {
                        long long cnt = static_cast<long long>(cs.host_darts[j].size());
                        if (v < cnt) {
                            programs[static_cast<size_t>(d.cut)][d.block_pos].host_dart =
                                cs.host_darts[j][static_cast<size_t>(v)];
                            break;
                        }
                        v -= cnt;
                    }
                    break;
                }
                case Digit::CutOwn:
                    programs[static_cast<size_t>(d.cut)][d.block_pos].own_dart =
                        en.cuts[static_cast<size_t>(d.cut)]
                            .own_darts[d.block_pos][static_cast<size_t>(d.value)];
                    break;
            }
        }
        // trivial-bunch own cuts are fixed even for the first block
        for (size_t c = 0; c < en.cuts.size(); ++c) {
            const auto& cs = en.cuts[c];
            for (size_t j = 0; j < cs.blocks.size(); ++j)
                if (programs[c][j].own_dart == kNone && j > 0)
                    programs[c][j].own_dart = cs.own_darts[j].front();
        }

        auto blocks = compose_all();
        PlaneEmbedding emb = assemble_embedding(g, con, blocks, programs);
        ++st.raw_specifications;

        // fingerprint: sorted list of faces, each a sorted edge multiset
        std::vector<std::vector<EdgeId>> faces;
        for (FaceId f = 0; f < emb.face_count(); ++f) {
            std::vector<EdgeId> w;
            for (Dart d : emb.face_walk(f)) w.push_back(edge_of(d));
            std::sort(w.begin(), w.end());
            faces.push_back(std::move(w));
        }
        std::sort(faces.begin(), faces.end());
        std::vector<EdgeId> flat;
        for (auto& w : faces) {
            flat.push_back(-1);
            flat.insert(flat.end(), w.begin(), w.end());
        }
        if (seen.insert(flat).second) {
            ++st.distinct;
            fn(emb);
        }

        // advance odometer
        done = true;
        for (auto& d : digits) {
            if (++d.value < d.radix) {
                done = false;
                break;
            }
            d.value = 0;
        }
        if (digits.empty()) done = true;
    }
    if (stats) *stats = st;
}

int exact_ins_single(const Multigraph& g, VertexId v1, VertexId v2, long long cap) {
    int best = -1;
    enumerate_embeddings(g, cap, [&](const PlaneEmbedding& e) {
        int d = insertion_distance(e, v1, v2);
        if (best == -1 || d < best) best = d;
    });
    assert(best >= 0);
    return best;
}

int exact_ins_prime(const Multigraph& g, const InsertionSet& F, long long cap) {
    int best = -1;
    enumerate_embeddings(g, cap, [&](const PlaneEmbedding& e) {
        int total = 0;
        for (auto [a, b] : F.pairs) total += insertion_distance(e, a, b);
        if (best == -1 || total < best) best = total;
    });
    assert(best >= 0);
    return best;
}

} // namespace mei
