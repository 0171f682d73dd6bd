#pragma once

#include "mei/multigraph.hpp"

#include <optional>
#include <vector>

namespace mei {

class NotPlanarError : public Error {
public:
    NotPlanarError() : Error("graph is not planar") {}
};

class MalformedRotationError : public Error {
public:
    explicit MalformedRotationError(const std::string& why)
        : Error("malformed rotation system: " + why) {}
};

/// Darts (half-edges): edge e yields dart 2e (u -> v) and 2e+1 (v -> u).
using Dart = int;

inline Dart forward_dart(EdgeId e) { return 2 * e; }
inline Dart backward_dart(EdgeId e) { return 2 * e + 1; }
inline Dart twin(Dart d) { return d ^ 1; }
inline EdgeId edge_of(Dart d) { return d >> 1; }

using FaceId = int;

/// A combinatorial plane embedding: a rotation system (counterclockwise
/// cyclic dart order per vertex) whose face structure satisfies Euler's
/// formula on the sphere. Immutable once constructed.
///
/// Face convention: the face walk successor of d is rot_next(twin(d));
/// face_of(d) owns the angular corner between rot_prev(d) and d at
/// tail(d) (the walk arrives via twin(rot_prev(d)) and departs via d).
class PlaneEmbedding {
public:
    /// Builds from explicit per-vertex rotations. Throws
    /// MalformedRotationError when the dart structure is inconsistent or
    /// the rotation system is not spherical (Euler check, connected input).
    static PlaneEmbedding from_rotations(const Multigraph& g,
                                         const std::vector<std::vector<Dart>>& rotations);

    const Multigraph& graph() const { return *g_; }
    int dart_count() const { return 2 * g_->edge_count(); }

    VertexId tail(Dart d) const {
        const EdgeRecord& e = g_->edge(edge_of(d));
        return (d & 1) ? e.v : e.u;
    }
    VertexId head(Dart d) const { return tail(twin(d)); }

    Dart rot_next(Dart d) const { return rot_next_[static_cast<size_t>(d)]; }
    Dart rot_prev(Dart d) const { return rot_prev_[static_cast<size_t>(d)]; }
    /// Some dart with tail v, or -1 for an isolated vertex. Deterministic
    /// (lowest dart id at v).
    Dart first_dart(VertexId v) const { return first_dart_[static_cast<size_t>(v)]; }

    /// Darts with tail v in rotation order starting at first_dart(v).
    std::vector<Dart> rotation(VertexId v) const;

    /// Next dart along the face walk (the face left of d).
    Dart face_succ(Dart d) const { return rot_next(twin(d)); }

    int face_count() const { return face_count_; }
    FaceId face_of(Dart d) const { return face_of_[static_cast<size_t>(d)]; }
    /// Lowest dart id on the face (also its trace entry point).
    Dart face_rep(FaceId f) const { return face_rep_[static_cast<size_t>(f)]; }
    int face_size(FaceId f) const { return face_size_[static_cast<size_t>(f)]; }
    std::vector<Dart> face_walk(FaceId f) const;

    /// The face occupying the corner between rot_prev(d) and d at tail(d).
    FaceId corner_face(Dart d) const { return face_of(d); }

    /// Faces incident to v (ascending, deduplicated).
    std::vector<FaceId> faces_at(VertexId v) const;

    /// Reverses all rotations.
    PlaneEmbedding mirrored() const;

    bool operator==(const PlaneEmbedding& o) const {
        return g_ == o.g_ && rot_next_ == o.rot_next_;
    }

private:
    const Multigraph* g_ = nullptr;
    std::vector<Dart> rot_next_, rot_prev_;
    std::vector<Dart> first_dart_;
    std::vector<FaceId> face_of_;
    std::vector<Dart> face_rep_;
    std::vector<int> face_size_;
    int face_count_ = 0;

    void compute_faces();
};

/// Result of the left-right planarity test.
std::optional<std::vector<std::vector<Dart>>> lr_planar_rotations(const Multigraph& g);

/// Planarity test returning a deterministic plane embedding.
/// Throws DisconnectedError / NotPlanarError.
PlaneEmbedding test_and_embed(const Multigraph& g);

/// Explicit dual adjacency: one dual edge per primal edge.
struct DualGraph {
    int face_count = 0;
    /// dual_ends[e] = (face left of forward dart, face left of backward dart).
    std::vector<std::pair<FaceId, FaceId>> dual_ends;
    std::vector<int> weight; // crossing cost per primal edge, default 1
};

DualGraph dual_graph(const PlaneEmbedding& e);

struct InsertionWalk {
    VertexId source = -1, target = -1;
    FaceId start_face = -1, end_face = -1;
    std::vector<EdgeId> crossed_edges;

    int length() const { return static_cast<int>(crossed_edges.size()); }
};

/// Shortest dual path between the faces at v1 and the faces at v2
/// (multi-source/multi-target BFS over the dual, unit edge weights).
/// Deterministic: ties broken by smallest face id, then smallest edge id.
InsertionWalk insertion_walk(const PlaneEmbedding& e, VertexId v1, VertexId v2);

/// Just the dual distance of insertion_walk.
int insertion_distance(const PlaneEmbedding& e, VertexId v1, VertexId v2);

struct FixedInsertionResult {
    std::vector<InsertionWalk> walks;
    int crossings_with_graph = 0;
    int crossings_between_inserted = 0;
    /// Per unordered pair {i, j}: number of crossings between walk i and j.
    std::vector<std::vector<int>> pair_crossings;

    int total() const { return crossings_with_graph + crossings_between_inserted; }
};

/// Inserts every pair of F into the fixed embedding: independent shortest
/// dual walks, realized as non-self-crossing curves; a subpath-exchange
/// postprocessing pass leaves any two inserted edges crossing at most once.
FixedInsertionResult insert_edges_fixed(const PlaneEmbedding& e, const InsertionSet& F);

struct PlanarizeResult {
    Multigraph graph;
    int dummy_count = 0;
    /// Crossings between inserted walks (the rest are walk/graph crossings).
    int walk_walk_crossings = 0;
};

/// Replaces every crossing of the realized walks by a degree-4 dummy
/// vertex. Dummy ids are assigned past the original vertex ids, in walk
/// order and position order along each walk. The output is planar.
PlanarizeResult planarize(const PlaneEmbedding& e, const std::vector<InsertionWalk>& walks);

} // namespace mei
