#include "mei/planar.hpp"

#include <algorithm>
#include <cassert>
#include <deque>

namespace mei {

PlaneEmbedding PlaneEmbedding::from_rotations(const Multigraph& g,
                                              const std::vector<std::vector<Dart>>& rotations) {
    PlaneEmbedding e;
    e.g_ = &g;
    const int nd = 2 * g.edge_count();
    e.rot_next_.assign(static_cast<size_t>(nd), -1);
    e.rot_prev_.assign(static_cast<size_t>(nd), -1);
    e.first_dart_.assign(static_cast<size_t>(g.vertex_count()), -1);
    if (static_cast<int>(rotations.size()) != g.vertex_count())
        throw MalformedRotationError("rotation list count != vertex count");

    std::vector<char> seen(static_cast<size_t>(nd), 0);
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
        const auto& cyc = rotations[static_cast<size_t>(v)];
        if (cyc.empty()) {
            if (g.degree(v) != 0) throw MalformedRotationError("missing darts at vertex");
            continue;
        }
        Dart lowest = cyc.front();
        for (size_t i = 0; i < cyc.size(); ++i) {
            Dart d = cyc[i];
            if (d < 0 || d >= nd) throw MalformedRotationError("dart id out of range");
            if (seen[static_cast<size_t>(d)]) throw MalformedRotationError("dart repeated");
            seen[static_cast<size_t>(d)] = 1;
            if (e.tail(d) != v) throw MalformedRotationError("dart listed at wrong vertex");
            Dart nxt = cyc[(i + 1) % cyc.size()];
            e.rot_next_[static_cast<size_t>(d)] = nxt;
            e.rot_prev_[static_cast<size_t>(nxt)] = d;
            lowest = std::min(lowest, d);
        }
        if (static_cast<int>(cyc.size()) != g.degree(v))
            throw MalformedRotationError("dart count != degree");
        e.first_dart_[static_cast<size_t>(v)] = lowest;
    }
    for (int d = 0; d < nd; ++d)
        if (!seen[static_cast<size_t>(d)]) throw MalformedRotationError("dart missing");

    e.compute_faces();

    // Euler check: the rotation system must describe a sphere embedding.
    // For a connected graph V - E + F = 2; in general V - E + F = 1 + c.
    int comp = 0;
    {
        int n = g.vertex_count();
        std::vector<char> vis(static_cast<size_t>(n), 0);
        for (VertexId s = 0; s < n; ++s) {
            if (vis[static_cast<size_t>(s)]) continue;
            ++comp;
            std::vector<VertexId> stack{s};
            vis[static_cast<size_t>(s)] = 1;
            while (!stack.empty()) {
                VertexId v = stack.back();
                stack.pop_back();
                for (EdgeId ed : g.incident(v)) {
                    VertexId w = g.edge(ed).other(v);
                    if (!vis[static_cast<size_t>(w)]) {
                        vis[static_cast<size_t>(w)] = 1;
                        stack.push_back(w);
                    }
                }
            }
        }
    }
    if (g.vertex_count() - g.edge_count() + e.face_count_ != 1 + comp)
        throw MalformedRotationError("Euler check failed (not genus 0)");
    return e;
}

void PlaneEmbedding::compute_faces() {
    const int nd = dart_count();
    face_of_.assign(static_cast<size_t>(nd), -1);
    face_rep_.clear();
    face_size_.clear();
    face_count_ = 0;
    for (Dart d0 = 0; d0 < nd; ++d0) {
        if (face_of_[static_cast<size_t>(d0)] != -1) continue;
        FaceId f = face_count_++;
        face_rep_.push_back(d0);
        int sz = 0;
        Dart d = d0;
        do {
            face_of_[static_cast<size_t>(d)] = f;
            ++sz;
            d = face_succ(d);
        } while (d != d0);
        face_size_.push_back(sz);
    }
}

std::vector<Dart> PlaneEmbedding::rotation(VertexId v) const {
    std::vector<Dart> out;
    Dart s = first_dart(v);
    if (s == -1) return out;
    Dart d = s;
    do {
        out.push_back(d);
        d = rot_next(d);
    } while (d != s);
    return out;
}

std::vector<Dart> PlaneEmbedding::face_walk(FaceId f) const {
    std::vector<Dart> out;
    Dart s = face_rep(f);
    Dart d = s;
    do {
        out.push_back(d);
        d = face_succ(d);
    } while (d != s);
    return out;
}

std::vector<FaceId> PlaneEmbedding::faces_at(VertexId v) const {
    std::vector<FaceId> fs;
    for (Dart d : rotation(v)) fs.push_back(corner_face(d));
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    return fs;
}

PlaneEmbedding PlaneEmbedding::mirrored() const {
    std::vector<std::vector<Dart>> rot(static_cast<size_t>(g_->vertex_count()));
    for (VertexId v = 0; v < g_->vertex_count(); ++v) {
        rot[static_cast<size_t>(v)] = rotation(v);
        std::reverse(rot[static_cast<size_t>(v)].begin(), rot[static_cast<size_t>(v)].end());
    }
    return from_rotations(*g_, rot);
}

DualGraph dual_graph(const PlaneEmbedding& e) {
    DualGraph d;
    d.face_count = e.face_count();
    d.dual_ends.reserve(static_cast<size_t>(e.graph().edge_count()));
    d.weight.assign(static_cast<size_t>(e.graph().edge_count()), 1);
    for (EdgeId ed = 0; ed < e.graph().edge_count(); ++ed)
        d.dual_ends.emplace_back(e.face_of(forward_dart(ed)), e.face_of(backward_dart(ed)));
    return d;
}

namespace {

// Deterministic multi-source BFS over faces. dist/pred arrays are dense.
struct FaceBfs {
    std::vector<int> dist;
    std::vector<EdgeId> pred_edge; // primal edge crossed to first reach the face
    std::vector<FaceId> pred_face;

    // incidence: per face, the boundary darts give the crossable edges.
    void run(const PlaneEmbedding& e, const std::vector<FaceId>& sources) {
        dist.assign(static_cast<size_t>(e.face_count()), -1);
        pred_edge.assign(static_cast<size_t>(e.face_count()), -1);
        pred_face.assign(static_cast<size_t>(e.face_count()), -1);
        std::deque<FaceId> q;
        for (FaceId f : sources)
            if (dist[static_cast<size_t>(f)] == -1) {
                dist[static_cast<size_t>(f)] = 0;
                q.push_back(f);
            }
        while (!q.empty()) {
            FaceId f = q.front();
            q.pop_front();
            // Collect neighbor candidates in ascending edge order so the
            // predecessor choice is the smallest edge id.
            Dart s = e.face_rep(f);
            Dart d = s;
            do {
                FaceId other = e.face_of(twin(d));
                if (dist[static_cast<size_t>(other)] == -1) {
                    dist[static_cast<size_t>(other)] = dist[static_cast<size_t>(f)] + 1;
                    pred_edge[static_cast<size_t>(other)] = edge_of(d);
                    pred_face[static_cast<size_t>(other)] = f;
                    q.push_back(other);
                } else if (dist[static_cast<size_t>(other)] ==
                               dist[static_cast<size_t>(f)] + 1 &&
                           pred_face[static_cast<size_t>(other)] != -1) {
                    // Tie: prefer smaller predecessor face, then smaller edge.
                    if (f < pred_face[static_cast<size_t>(other)] ||
                        (f == pred_face[static_cast<size_t>(other)] &&
                         edge_of(d) < pred_edge[static_cast<size_t>(other)])) {
                        pred_face[static_cast<size_t>(other)] = f;
                        pred_edge[static_cast<size_t>(other)] = edge_of(d);
                    }
                }
                d = e.face_succ(d);
            } while (d != s);
        }
    }
};

} // namespace

InsertionWalk insertion_walk(const PlaneEmbedding& e, VertexId v1, VertexId v2) {
    InsertionWalk w;
    w.source = v1;
    w.target = v2;
    std::vector<FaceId> src = e.faces_at(v1);
    std::vector<FaceId> tgt = e.faces_at(v2);
    FaceBfs bfs;
    bfs.run(e, src);
    FaceId best = -1;
    for (FaceId f : tgt) {
        if (bfs.dist[static_cast<size_t>(f)] == -1) continue;
        if (best == -1 || bfs.dist[static_cast<size_t>(f)] < bfs.dist[static_cast<size_t>(best)] ||
            (bfs.dist[static_cast<size_t>(f)] == bfs.dist[static_cast<size_t>(best)] && f < best))
            best = f;
    }
    assert(best != -1); // dual of a connected embedding is connected
    w.end_face = best;
    FaceId f = best;
    while (bfs.dist[static_cast<size_t>(f)] > 0) {
        w.crossed_edges.push_back(bfs.pred_edge[static_cast<size_t>(f)]);
        f = bfs.pred_face[static_cast<size_t>(f)];
    }
    w.start_face = f;
    std::reverse(w.crossed_edges.begin(), w.crossed_edges.end());
    return w;
}

int insertion_distance(const PlaneEmbedding& e, VertexId v1, VertexId v2) {
    return insertion_walk(e, v1, v2).length();
}

} // namespace mei
