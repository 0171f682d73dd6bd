// Realization of insertion walks as curves in a refined embedding: every
// crossing becomes a degree-4 dummy vertex. Walks are threaded one by one
// along their dual face sequences; inside each face the curve routes
// around or across previously inserted curves with a minimum number of
// walk/walk crossings. An exchange pass then removes double crossings
// between any two inserted edges (and any self-crossing loops that the
// exchanges create; such loops never carry graph crossings, since per-walk
// graph crossings stay at the dual distance throughout).

#include "mei/planar.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>

namespace mei {

namespace {

constexpr int kNone = -1;

struct DynEmbed {
    struct WEdge {
        VertexId u = kNone, v = kNone;
        EdgeId origin_edge = kNone; // segment of this original edge, or
        int origin_walk = kNone;    // piece of this walk's curve
        bool alive = false;
    };
    std::vector<WEdge> edges;
    std::vector<Dart> rot_next, rot_prev;
    std::vector<Dart> vfirst;
    std::vector<VertexId> vorigin; // original id, or kNone for dummies
    std::vector<char> vdead;
    std::vector<FaceId> face_of; // per dart; faces only ever split
    std::vector<FaceId> room_of; // per face: face of the base embedding
    int face_counter = 0;

    VertexId tail(Dart d) const {
        const WEdge& e = edges[static_cast<size_t>(d >> 1)];
        return (d & 1) ? e.v : e.u;
    }
    VertexId head(Dart d) const { return tail(d ^ 1); }
    Dart face_succ(Dart d) const { return rot_next[static_cast<size_t>(d ^ 1)]; }

    explicit DynEmbed(const PlaneEmbedding& base) {
        const Multigraph& g = base.graph();
        for (const auto& er : g.edges()) edges.push_back(WEdge{er.u, er.v, er.id, kNone, true});
        rot_next.assign(static_cast<size_t>(2 * g.edge_count()), kNone);
        rot_prev.assign(rot_next.size(), kNone);
        for (int d = 0; d < 2 * g.edge_count(); ++d) {
            rot_next[static_cast<size_t>(d)] = base.rot_next(d);
            rot_prev[static_cast<size_t>(d)] = base.rot_prev(d);
        }
        vfirst.assign(static_cast<size_t>(g.vertex_count()), kNone);
        vorigin.resize(static_cast<size_t>(g.vertex_count()));
        vdead.assign(static_cast<size_t>(g.vertex_count()), 0);
        for (VertexId v = 0; v < g.vertex_count(); ++v) {
            vfirst[static_cast<size_t>(v)] = base.first_dart(v);
            vorigin[static_cast<size_t>(v)] = v;
        }
        face_of.assign(rot_next.size(), kNone);
        face_counter = base.face_count();
        for (int d = 0; d < 2 * g.edge_count(); ++d) face_of[static_cast<size_t>(d)] = base.face_of(d);
        room_of.resize(static_cast<size_t>(face_counter));
        for (FaceId f = 0; f < face_counter; ++f) room_of[static_cast<size_t>(f)] = f;
    }

    int new_edge(VertexId u, VertexId v, EdgeId oe, int ow) {
        int id = static_cast<int>(edges.size());
        edges.push_back(WEdge{u, v, oe, ow, true});
        rot_next.resize(edges.size() * 2, kNone);
        rot_prev.resize(edges.size() * 2, kNone);
        face_of.resize(edges.size() * 2, kNone);
        return id;
    }

    Dart dart_at(int e, VertexId v) const {
        const WEdge& r = edges[static_cast<size_t>(e)];
        assert(r.alive);
        if (r.u == v) return 2 * e;
        assert(r.v == v);
        return 2 * e + 1;
    }

    // Replace dart x by dart y (same tail, same rotation slot).
    void replace_dart(Dart x, Dart y) {
        Dart nx = rot_next[static_cast<size_t>(x)], px = rot_prev[static_cast<size_t>(x)];
        if (nx == x) {
            rot_next[static_cast<size_t>(y)] = y;
            rot_prev[static_cast<size_t>(y)] = y;
        } else {
            rot_next[static_cast<size_t>(y)] = nx;
            rot_prev[static_cast<size_t>(nx)] = y;
            rot_prev[static_cast<size_t>(y)] = px;
            rot_next[static_cast<size_t>(px)] = y;
        }
        VertexId t = tail(y);
        if (vfirst[static_cast<size_t>(t)] == x) vfirst[static_cast<size_t>(t)] = y;
    }

    void remove_dart(Dart d) {
        Dart n = rot_next[static_cast<size_t>(d)], p = rot_prev[static_cast<size_t>(d)];
        VertexId t = tail(d);
        if (n == d) {
            vfirst[static_cast<size_t>(t)] = kNone;
        } else {
            rot_next[static_cast<size_t>(p)] = n;
            rot_prev[static_cast<size_t>(n)] = p;
            if (vfirst[static_cast<size_t>(t)] == d) vfirst[static_cast<size_t>(t)] = n;
        }
    }

    // Subdivide edge e at a fresh dummy; returns (dummy, first half (u,w),
    // second half (w,v)).
    struct Split {
        VertexId w;
        int h1, h2;
    };
    Split subdivide(int e) {
        WEdge rec = edges[static_cast<size_t>(e)];
        assert(rec.alive);
        VertexId w = static_cast<VertexId>(vorigin.size());
        vorigin.push_back(kNone);
        vdead.push_back(0);
        vfirst.push_back(kNone);
        int h1 = new_edge(rec.u, w, rec.origin_edge, rec.origin_walk);
        int h2 = new_edge(w, rec.v, rec.origin_edge, rec.origin_walk);
        replace_dart(2 * e, 2 * h1);
        replace_dart(2 * e + 1, 2 * h2 + 1);
        rot_next[static_cast<size_t>(2 * h1 + 1)] = 2 * h2;
        rot_prev[static_cast<size_t>(2 * h2)] = 2 * h1 + 1;
        rot_next[static_cast<size_t>(2 * h2)] = 2 * h1 + 1;
        rot_prev[static_cast<size_t>(2 * h1 + 1)] = 2 * h2;
        vfirst[static_cast<size_t>(w)] = 2 * h1 + 1;
        face_of[static_cast<size_t>(2 * h1)] = face_of[static_cast<size_t>(2 * e)];
        face_of[static_cast<size_t>(2 * h2)] = face_of[static_cast<size_t>(2 * e)];
        face_of[static_cast<size_t>(2 * h1 + 1)] = face_of[static_cast<size_t>(2 * e + 1)];
        face_of[static_cast<size_t>(2 * h2 + 1)] = face_of[static_cast<size_t>(2 * e + 1)];
        edges[static_cast<size_t>(e)].alive = false;
        return {w, h1, h2};
    }

    // Add a walk edge between the corners of da and db (same face; the
    // corner of a dart is the angular wedge between rot_prev(d) and d).
    // Splits that face. Returns the new edge id.
    int add_edge_in_face(Dart da, Dart db, int walk) {
        assert(face_of[static_cast<size_t>(da)] == face_of[static_cast<size_t>(db)]);
        assert(da != db);
        FaceId room = room_of[static_cast<size_t>(face_of[static_cast<size_t>(da)])];
        int e = new_edge(tail(da), tail(db), kNone, walk);
        Dart nab = 2 * e, nba = 2 * e + 1;
        Dart x = rot_prev[static_cast<size_t>(da)];
        rot_next[static_cast<size_t>(x)] = nab;
        rot_prev[static_cast<size_t>(nab)] = x;
        rot_next[static_cast<size_t>(nab)] = da;
        rot_prev[static_cast<size_t>(da)] = nab;
        Dart y = rot_prev[static_cast<size_t>(db)];
        rot_next[static_cast<size_t>(y)] = nba;
        rot_prev[static_cast<size_t>(nba)] = y;
        rot_next[static_cast<size_t>(nba)] = db;
        rot_prev[static_cast<size_t>(db)] = nba;
        for (Dart start : {nab, nba}) {
            FaceId f = face_counter++;
            room_of.push_back(room);
            Dart d = start;
            do {
                face_of[static_cast<size_t>(d)] = f;
                d = face_succ(d);
            } while (d != start);
        }
        return e;
    }

    // Fuse the edges of darts p and q (both with tail x) into one edge from
    // head(p) to head(q). Faces are not maintained; recompute afterwards.
    int fuse(Dart p, Dart q, EdgeId oe, int ow) {
        assert(tail(p) == tail(q) && (p >> 1) != (q >> 1));
        int e = new_edge(head(p), head(q), oe, ow);
        replace_dart(p ^ 1, 2 * e);
        replace_dart(q ^ 1, 2 * e + 1);
        remove_dart(p);
        remove_dart(q);
        edges[static_cast<size_t>(p >> 1)].alive = false;
        edges[static_cast<size_t>(q >> 1)].alive = false;
        return e;
    }

    void kill_vertex(VertexId v) {
        assert(vfirst[static_cast<size_t>(v)] == kNone);
        vdead[static_cast<size_t>(v)] = 1;
    }

    void kill_edge(int e) {
        remove_dart(2 * e);
        remove_dart(2 * e + 1);
        edges[static_cast<size_t>(e)].alive = false;
    }

    void recompute_faces() {
        std::fill(face_of.begin(), face_of.end(), kNone);
        face_counter = 0;
        room_of.clear();
        for (size_t e = 0; e < edges.size(); ++e) {
            if (!edges[e].alive) continue;
            for (Dart d : {static_cast<Dart>(2 * e), static_cast<Dart>(2 * e + 1)}) {
                if (face_of[static_cast<size_t>(d)] != kNone) continue;
                FaceId f = face_counter++;
                room_of.push_back(kNone);
                Dart x = d;
                do {
                    face_of[static_cast<size_t>(x)] = f;
                    x = face_succ(x);
                } while (x != d);
            }
        }
    }
};

struct CrossPoint {
    VertexId dummy;
    int other_walk; // kNone when the crossed edge belongs to the graph
};

struct Threader {
    const PlaneEmbedding& base;
    DynEmbed W;
    // Walk i visits points_[i] in order; edges_[i] has one more entry, the
    // curve pieces between consecutive points (and the two endpoints).
    std::vector<std::vector<CrossPoint>> points_;
    std::vector<std::vector<int>> edges_;
    std::vector<VertexId> src_, tgt_;
    std::vector<std::vector<int>> segments_of; // original edge -> live segments

    explicit Threader(const PlaneEmbedding& e) : base(e), W(e) {
        segments_of.resize(static_cast<size_t>(e.graph().edge_count()));
        for (EdgeId g = 0; g < e.graph().edge_count(); ++g)
            segments_of[static_cast<size_t>(g)] = {g};
    }

    VertexId from_node(int walk, size_t piece) const {
        return piece == 0 ? src_[static_cast<size_t>(walk)]
                          : points_[static_cast<size_t>(walk)][piece - 1].dummy;
    }

    struct RoomPath {
        std::vector<Dart> chords;
        Dart arrival = kNone;
    };

    RoomPath route_in_room([[maybe_unused]] FaceId room, const std::vector<Dart>& source_corners,
                           const std::vector<Dart>& target_darts) {
        std::map<FaceId, Dart> pred; // face -> chord dart crossed to reach it
        std::map<FaceId, int> dist;
        std::map<FaceId, Dart> src_corner, target_at;
        std::deque<FaceId> q;
        for (Dart d : target_darts) {
            FaceId f = W.face_of[static_cast<size_t>(d)];
            auto it = target_at.find(f);
            if (it == target_at.end() || d < it->second) target_at[f] = d;
        }
        FaceId goal = kNone;
        for (Dart d : source_corners) {
            FaceId f = W.face_of[static_cast<size_t>(d)];
            if (!dist.count(f)) {
                dist[f] = 0;
                src_corner[f] = d;
                q.push_back(f);
                if (target_at.count(f) && (goal == kNone || f < goal)) goal = f;
            }
        }
        while (goal == kNone && !q.empty()) {
            FaceId f = q.front();
            q.pop_front();
            Dart s = src_corner.count(f) ? src_corner[f] : (pred[f] ^ 1);
            Dart d = s;
            do {
                if (W.edges[static_cast<size_t>(d >> 1)].origin_walk != kNone) {
                    FaceId g = W.face_of[static_cast<size_t>(d ^ 1)];
                    assert(W.room_of[static_cast<size_t>(g)] == room);
                    if (!dist.count(g)) {
                        dist[g] = dist[f] + 1;
                        pred[g] = d;
                        if (target_at.count(g)) {
                            goal = g;
                            break;
                        }
                        q.push_back(g);
                    }
                }
                d = W.face_succ(d);
            } while (d != s);
        }
        assert(goal != kNone && "room routing must reach the exit");
        RoomPath out;
        out.arrival = target_at[goal];
        FaceId f = goal;
        while (!src_corner.count(f)) {
            Dart via = pred[f];
            out.chords.push_back(via);
            f = W.face_of[static_cast<size_t>(via)];
        }
        std::reverse(out.chords.begin(), out.chords.end());
        return out;
    }

    std::vector<Dart> corners_in_room(VertexId v, FaceId room) const {
        std::vector<Dart> out;
        Dart s = W.vfirst[static_cast<size_t>(v)];
        if (s == kNone) return out;
        Dart d = s;
        do {
            if (W.room_of[static_cast<size_t>(W.face_of[static_cast<size_t>(d)])] == room)
                out.push_back(d);
            d = W.rot_next[static_cast<size_t>(d)];
        } while (d != s);
        std::sort(out.begin(), out.end());
        return out;
    }

    std::vector<Dart> segment_darts_in_room(EdgeId g, FaceId room) const {
        std::vector<Dart> out;
        for (int e : segments_of[static_cast<size_t>(g)])
            for (Dart d : {2 * e, 2 * e + 1})
                if (W.room_of[static_cast<size_t>(W.face_of[static_cast<size_t>(d)])] == room)
                    out.push_back(d);
        std::sort(out.begin(), out.end());
        return out;
    }

    // Cross the edge under dart `hit` (whose face is the current one);
    // returns the continuation corner beyond it.
    Dart cross_edge(int walk, Dart hit, Dart& cur) {
        int e = hit >> 1;
        const auto rec = W.edges[static_cast<size_t>(e)];
        DynEmbed::Split sp = W.subdivide(e);
        if (rec.origin_edge != kNone) {
            auto& segs = segments_of[static_cast<size_t>(rec.origin_edge)];
            segs.erase(std::remove(segs.begin(), segs.end(), e), segs.end());
            segs.push_back(sp.h1);
            segs.push_back(sp.h2);
        } else {
            // A chord of another walk: splice the new point into its lists.
            int k = rec.origin_walk;
            auto& ke = edges_[static_cast<size_t>(k)];
            auto it = std::find(ke.begin(), ke.end(), e);
            assert(it != ke.end());
            size_t pos = static_cast<size_t>(it - ke.begin());
            VertexId from = from_node(k, pos);
            int first = (rec.u == from) ? sp.h1 : sp.h2;
            int second = (first == sp.h1) ? sp.h2 : sp.h1;
            ke[pos] = first;
            ke.insert(ke.begin() + static_cast<long>(pos) + 1, second);
            auto& kp = points_[static_cast<size_t>(k)];
            kp.insert(kp.begin() + static_cast<long>(pos), CrossPoint{sp.w, walk});
        }
        Dart near_side, far_side;
        if ((hit & 1) == 0) {
            near_side = 2 * sp.h2;
            far_side = 2 * sp.h1 + 1;
        } else {
            near_side = 2 * sp.h1 + 1;
            far_side = 2 * sp.h2;
        }
        assert(W.face_of[static_cast<size_t>(near_side)] == W.face_of[static_cast<size_t>(cur)]);
        int we = W.add_edge_in_face(cur, near_side, walk);
        edges_[static_cast<size_t>(walk)].push_back(we);
        points_[static_cast<size_t>(walk)].push_back(
            CrossPoint{sp.w, rec.origin_edge != kNone ? kNone : rec.origin_walk});
        return far_side;
    }

    void thread(int walk, const InsertionWalk& iw) {
        assert(static_cast<int>(points_.size()) == walk);
        points_.emplace_back();
        edges_.emplace_back();
        src_.push_back(iw.source);
        tgt_.push_back(iw.target);
        std::vector<FaceId> rooms{iw.start_face};
        {
            FaceId f = iw.start_face;
            for (EdgeId g : iw.crossed_edges) {
                FaceId a = base.face_of(forward_dart(g)), b = base.face_of(backward_dart(g));
                if (f != a && f != b) throw Error("planarize: walk does not match embedding");
                f = (f == a) ? b : a;
                rooms.push_back(f);
            }
            if (rooms.back() != iw.end_face)
                throw Error("planarize: walk end face does not match embedding");
        }
        Dart cur = kNone;
        for (size_t j = 0; j < rooms.size(); ++j) {
            std::vector<Dart> sources =
                j == 0 ? corners_in_room(iw.source, rooms[0]) : std::vector<Dart>{cur};
            std::vector<Dart> targets = j + 1 < rooms.size()
                                            ? segment_darts_in_room(iw.crossed_edges[j], rooms[j])
                                            : corners_in_room(iw.target, rooms[j]);
            assert(!sources.empty() && !targets.empty());
            RoomPath rp = route_in_room(rooms[j], sources, targets);
            if (j == 0) {
                FaceId f0 = rp.chords.empty() ? W.face_of[static_cast<size_t>(rp.arrival)]
                                              : W.face_of[static_cast<size_t>(rp.chords.front())];
                cur = kNone;
                for (Dart d : sources)
                    if (W.face_of[static_cast<size_t>(d)] == f0) {
                        cur = d;
                        break;
                    }
                assert(cur != kNone);
            }
            for (Dart chord : rp.chords) cur = cross_edge(walk, chord, cur);
            if (j + 1 < rooms.size()) {
                cur = cross_edge(walk, rp.arrival, cur);
            } else {
                int we = W.add_edge_in_face(cur, rp.arrival, walk);
                edges_[static_cast<size_t>(walk)].push_back(we);
            }
        }
    }

    // ---- exchange pass ----

    // Fuse the two given curve pieces at their shared point x and drop x.
    // Returns the fused edge id owned by `owner`.
    int fuse_at(VertexId x, int piece_a, int piece_b, int owner) {
        int f = W.fuse(W.dart_at(piece_a, x), W.dart_at(piece_b, x), kNone, owner);
        return f;
    }

    // Smooth the passage of walk k through point w (w already has only k's
    // two pieces, or a graph edge's two segment halves).
    void smooth_through(VertexId w) {
        Dart d0 = W.vfirst[static_cast<size_t>(w)];
        assert(d0 != kNone);
        Dart d1 = W.rot_next[static_cast<size_t>(d0)];
        assert(d1 != d0 && W.rot_next[static_cast<size_t>(d1)] == d0);
        const auto& ra = W.edges[static_cast<size_t>(d0 >> 1)];
        [[maybe_unused]] const auto& rb = W.edges[static_cast<size_t>(d1 >> 1)];
        int ea = d0 >> 1, eb = d1 >> 1;
        if (ra.origin_edge != kNone) {
            assert(ra.origin_edge == rb.origin_edge);
            EdgeId g = ra.origin_edge;
            int f = W.fuse(d0, d1, g, kNone);
            auto& segs = segments_of[static_cast<size_t>(g)];
            segs.erase(std::remove_if(segs.begin(), segs.end(),
                                      [&](int e) { return e == ea || e == eb; }),
                       segs.end());
            segs.push_back(f);
        } else {
            assert(ra.origin_walk == rb.origin_walk);
            int k = ra.origin_walk;
            auto& ke = edges_[static_cast<size_t>(k)];
            auto& kp = points_[static_cast<size_t>(k)];
            size_t pos = 0;
            while (pos < kp.size() && kp[pos].dummy != w) ++pos;
            assert(pos < kp.size());
            int f = fuse_at(w, ke[pos], ke[pos + 1], k);
            ke[pos] = f;
            ke.erase(ke.begin() + static_cast<long>(pos) + 1);
            kp.erase(kp.begin() + static_cast<long>(pos));
        }
        W.kill_vertex(w);
    }

    // Delete a self-crossing loop of walk i at repeated point z (positions
    // p < q in the point list). The loop carries no graph crossings.
    void delete_loop(int i, size_t p, size_t q, VertexId z) {
        auto& pe = edges_[static_cast<size_t>(i)];
        auto& pp = points_[static_cast<size_t>(i)];
        std::vector<int> loop_edges(pe.begin() + static_cast<long>(p) + 1,
                                    pe.begin() + static_cast<long>(q) + 1);
        std::vector<CrossPoint> loop_pts(pp.begin() + static_cast<long>(p) + 1,
                                         pp.begin() + static_cast<long>(q));
        int f = fuse_at(z, pe[p], pe[q + 1], i);
        // rebuild i's lists
        std::vector<int> ne(pe.begin(), pe.begin() + static_cast<long>(p));
        ne.push_back(f);
        ne.insert(ne.end(), pe.begin() + static_cast<long>(q) + 2, pe.end());
        std::vector<CrossPoint> np(pp.begin(), pp.begin() + static_cast<long>(p));
        np.insert(np.end(), pp.begin() + static_cast<long>(q) + 1, pp.end());
        pe = std::move(ne);
        pp = std::move(np);
        for (int e : loop_edges) W.kill_edge(e);
        W.kill_vertex(z);
        for (const auto& cp : loop_pts) {
            assert(cp.other_walk != kNone && "loops never carry graph crossings");
            // remove the crossing record from the other walk, then smooth
            auto& op = points_[static_cast<size_t>(cp.other_walk)];
            bool found = false;
            for (const auto& q2 : op)
                if (q2.dummy == cp.dummy) found = true;
            assert(found);
            (void)found;
            smooth_through(cp.dummy);
        }
    }

    bool fix_one_self_crossing() {
        for (size_t i = 0; i < points_.size(); ++i) {
            auto& pp = points_[i];
            for (size_t a = 0; a < pp.size(); ++a)
                for (size_t b = a + 1; b < pp.size(); ++b)
                    if (pp[a].dummy == pp[b].dummy) {
                        delete_loop(static_cast<int>(i), a, b, pp[a].dummy);
                        return true;
                    }
        }
        return false;
    }

    void exchange(int i, int j, VertexId x, VertexId y);

    int pair_count(int i, int j) const {
        int c = 0;
        for (const auto& p : points_[static_cast<size_t>(i)])
            if (p.other_walk == j) ++c;
        return c;
    }

    void uncross() {
        bool again = true;
        while (again) {
            again = false;
            if (fix_one_self_crossing()) {
                again = true;
                continue;
            }
            const int k = static_cast<int>(points_.size());
            for (int i = 0; i < k && !again; ++i)
                for (int j = i + 1; j < k && !again; ++j) {
                    if (pair_count(i, j) < 2) continue;
                    VertexId x = kNone, y = kNone;
                    for (const auto& p : points_[static_cast<size_t>(i)]) {
                        if (p.other_walk != j) continue;
                        if (x == kNone)
                            x = p.dummy;
                        else {
                            y = p.dummy;
                            break;
                        }
                    }
                    exchange(i, j, x, y);
                    again = true;
                }
        }
        W.recompute_faces();
    }

    void tally(int k, FixedInsertionResult& out) const {
        out.crossings_with_graph = 0;
        out.crossings_between_inserted = 0;
        out.pair_crossings.assign(static_cast<size_t>(k),
                                  std::vector<int>(static_cast<size_t>(k), 0));
        for (int i = 0; i < k; ++i)
            for (const auto& p : points_[static_cast<size_t>(i)]) {
                if (p.other_walk == kNone)
                    ++out.crossings_with_graph;
                else if (p.other_walk > i) {
                    ++out.crossings_between_inserted;
                    ++out.pair_crossings[static_cast<size_t>(i)][static_cast<size_t>(p.other_walk)];
                    ++out.pair_crossings[static_cast<size_t>(p.other_walk)][static_cast<size_t>(i)];
                }
            }
    }
};

void Threader::exchange(int i, int j, VertexId x, VertexId y) {
    auto& pi = points_[static_cast<size_t>(i)];
    auto& pj = points_[static_cast<size_t>(j)];
    auto& ei = edges_[static_cast<size_t>(i)];
    auto& ej = edges_[static_cast<size_t>(j)];
    auto pos_of = [](const std::vector<CrossPoint>& v, VertexId d) {
        for (size_t t = 0; t < v.size(); ++t)
            if (v[t].dummy == d) return t;
        assert(false);
        return size_t(0);
    };
    size_t xi = pos_of(pi, x), yi = pos_of(pi, y);
    assert(xi < yi);
    size_t xj = pos_of(pj, x), yj = pos_of(pj, y);
    const bool rev = xj > yj; // j traverses y before x

    // Pieces of j between the two crossings, oriented from x toward y.
    std::vector<int> jmid_e; // curve pieces, x側 first
    std::vector<CrossPoint> jmid_p;
    if (!rev) {
        jmid_e.assign(ej.begin() + static_cast<long>(xj) + 1, ej.begin() + static_cast<long>(yj) + 1);
        jmid_p.assign(pj.begin() + static_cast<long>(xj) + 1, pj.begin() + static_cast<long>(yj));
    } else {
        jmid_e.assign(ej.begin() + static_cast<long>(yj) + 1, ej.begin() + static_cast<long>(xj) + 1);
        std::reverse(jmid_e.begin(), jmid_e.end());
        jmid_p.assign(pj.begin() + static_cast<long>(yj) + 1, pj.begin() + static_cast<long>(xj));
        std::reverse(jmid_p.begin(), jmid_p.end());
    }
    std::vector<int> imid_e(ei.begin() + static_cast<long>(xi) + 1, ei.begin() + static_cast<long>(yi) + 1);
    std::vector<CrossPoint> imid_p(pi.begin() + static_cast<long>(xi) + 1,
                                   pi.begin() + static_cast<long>(yi));
    // j's outer pieces at x and y.
    int j_outer_x = rev ? ej[xj + 1] : ej[xj];
    int j_outer_y = rev ? ej[yj] : ej[yj + 1];

    // Fuse at x: i's prefix joins j's middle; j's outer joins i's middle.
    int fix_ = fuse_at(x, ei[xi], jmid_e.front(), i);
    int fjx = fuse_at(x, j_outer_x, imid_e.front(), j);
    if (jmid_e.size() == 1)
        jmid_e.back() = fix_;
    if (imid_e.size() == 1)
        imid_e.back() = fjx;
    W.kill_vertex(x);
    // Fuse at y symmetrically.
    int fiy = fuse_at(y, jmid_e.back(), ei[yi + 1], i);
    int fjy = fuse_at(y, imid_e.back(), j_outer_y, j);
    W.kill_vertex(y);

    // Transferred interior pieces change owner.
    for (int e : jmid_e)
        if (W.edges[static_cast<size_t>(e)].alive)
            W.edges[static_cast<size_t>(e)].origin_walk = i;
    for (int e : imid_e)
        if (W.edges[static_cast<size_t>(e)].alive)
            W.edges[static_cast<size_t>(e)].origin_walk = j;
    // Update counterpart labels: points formerly on j's middle now belong
    // to walk i, so the record held by the opposite walk must say i.
    for (const auto& cp : jmid_p) {
        if (cp.other_walk == kNone) continue;
        for (auto& q2 : points_[static_cast<size_t>(cp.other_walk)])
            if (q2.dummy == cp.dummy) q2.other_walk = i;
    }
    for (const auto& cp : imid_p) {
        if (cp.other_walk == kNone) continue;
        for (auto& q2 : points_[static_cast<size_t>(cp.other_walk)])
            if (q2.dummy == cp.dummy) q2.other_walk = j;
    }

    // Rebuild walk i: prefix + fused + j-middle interior + fused + suffix.
    std::vector<int> ne(ei.begin(), ei.begin() + static_cast<long>(xi));
    std::vector<CrossPoint> np(pi.begin(), pi.begin() + static_cast<long>(xi));
    if (jmid_e.size() == 1) {
        ne.push_back(fiy); // chained fusions collapsed to one edge
    } else {
        ne.push_back(fix_);
        ne.insert(ne.end(), jmid_e.begin() + 1, jmid_e.end() - 1);
        ne.push_back(fiy);
    }
    np.insert(np.end(), jmid_p.begin(), jmid_p.end());
    ne.insert(ne.end(), ei.begin() + static_cast<long>(yi) + 2, ei.end());
    np.insert(np.end(), pi.begin() + static_cast<long>(yi) + 1, pi.end());

    // Rebuild walk j: its own orientation, with i's middle spliced in.
    std::vector<int> me;
    std::vector<CrossPoint> mp;
    size_t lo = std::min(xj, yj), hi = std::max(xj, yj);
    me.assign(ej.begin(), ej.begin() + static_cast<long>(lo));
    mp.assign(pj.begin(), pj.begin() + static_cast<long>(lo));
    {
        // spliced middle oriented along j's traversal: from the crossing j
        // meets first (x if !rev else y) to the other one.
        std::vector<int> se = imid_e;
        std::vector<CrossPoint> sp = imid_p;
        int first_fused = rev ? fjy : fjx;
        int last_fused = rev ? fjx : fjy;
        if (rev) {
            std::reverse(se.begin(), se.end());
            std::reverse(sp.begin(), sp.end());
        }
        if (se.size() == 1) {
            me.push_back(last_fused);
        } else {
            me.push_back(first_fused);
            me.insert(me.end(), se.begin() + 1, se.end() - 1);
            me.push_back(last_fused);
        }
        mp.insert(mp.end(), sp.begin(), sp.end());
    }
    me.insert(me.end(), ej.begin() + static_cast<long>(hi) + 2, ej.end());
    mp.insert(mp.end(), pj.begin() + static_cast<long>(hi) + 1, pj.end());

    ei = std::move(ne);
    pi = std::move(np);
    ej = std::move(me);
    pj = std::move(mp);
}

Multigraph export_graph(const DynEmbed& W, std::vector<int>* vertex_map_out) {
    std::vector<int> vmap(W.vorigin.size(), kNone);
    int next = 0;
    for (size_t v = 0; v < W.vorigin.size(); ++v)
        if (W.vorigin[v] != kNone) vmap[v] = next++;
    for (size_t v = 0; v < W.vorigin.size(); ++v)
        if (W.vorigin[v] == kNone && !W.vdead[v]) vmap[v] = next++;
    std::vector<std::pair<VertexId, VertexId>> el;
    for (const auto& e : W.edges)
        if (e.alive)
            el.emplace_back(vmap[static_cast<size_t>(e.u)], vmap[static_cast<size_t>(e.v)]);
    if (vertex_map_out) *vertex_map_out = vmap;
    return Multigraph::build(next, el);
}

} // namespace

FixedInsertionResult insert_edges_fixed(const PlaneEmbedding& e, const InsertionSet& F) {
    FixedInsertionResult out;
    Threader th(e);
    for (int i = 0; i < F.size(); ++i) {
        auto [a, b] = F.pairs[static_cast<size_t>(i)];
        out.walks.push_back(insertion_walk(e, a, b));
        th.thread(i, out.walks.back());
    }
    th.uncross();
    th.tally(F.size(), out);
    return out;
}

PlanarizeResult planarize(const PlaneEmbedding& e, const std::vector<InsertionWalk>& walks) {
    Threader th(e);
    for (size_t i = 0; i < walks.size(); ++i) th.thread(static_cast<int>(i), walks[i]);
    th.uncross();
    FixedInsertionResult stats;
    th.tally(static_cast<int>(walks.size()), stats);
    PlanarizeResult out;
    out.graph = export_graph(th.W, nullptr);
    out.dummy_count = stats.crossings_with_graph + stats.crossings_between_inserted;
    out.walk_walk_crossings = stats.crossings_between_inserted;
    return out;
}

} // namespace mei
