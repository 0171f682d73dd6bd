#pragma once

#include "mei/decompose.hpp"
#include "mei/planar.hpp"

#include <functional>
#include <optional>

namespace mei {

/// Concrete rotation system of one skeleton: per skeleton vertex (indexed
/// as in Skeleton::vertices) the cyclic order of incident skeleton edge
/// indices.
struct SkeletonEmbedding {
    std::vector<std::vector<int>> rot;
};

/// Face structure of an embedded skeleton. Skeleton darts are 2*idx
/// (lo -> hi endpoint) and 2*idx+1.
struct SkeletonFaces {
    std::vector<int> face_of; // per skeleton dart
    int face_count = 0;
    std::vector<std::vector<int>> walks; // darts per face
};

SkeletonFaces trace_skeleton_faces(const Skeleton& sk, const SkeletonEmbedding& emb);

/// Precomputed per-block structure over a con-tree: rooted sSPR trees with
/// Euler intervals for subtree queries, and the owner classification of
/// graph edges into skeleton edges.
class ConTreeIndex {
public:
    explicit ConTreeIndex(const ConTree& c);

    const ConTree& con() const { return *c_; }
    int root_of_block(int b) const { return root_[static_cast<size_t>(b)]; }
    int parent(int node) const { return parent_[static_cast<size_t>(node)]; }
    /// Skeleton-edge index in node's skeleton leading toward the neighbor.
    int edge_toward(int node, int neighbor) const;
    /// Which skeleton edge of `node` the graph edge e belongs to (the real
    /// edge itself or the virtual edge whose expansion contains it).
    int skel_edge_of(int node, EdgeId e) const;
    /// True if decomposition node `inner` lies in the subtree of `node`'s
    /// block tree rooted as in this index.
    bool in_subtree(int node, int inner) const {
        return tin_[static_cast<size_t>(inner)] >= tin_[static_cast<size_t>(node)] &&
               tin_[static_cast<size_t>(inner)] < tout_[static_cast<size_t>(node)];
    }
    int local_vertex(int node, VertexId v) const; // index into skel.vertices

private:
    const ConTree* c_;
    std::vector<int> root_, parent_, tin_, tout_;
    std::vector<std::vector<std::pair<int, int>>> toward_; // per node: (neighbor, edge idx)
    std::vector<int> real_index_; // per graph edge: index inside its owner skeleton
};

/// Rotation lists of one block's subgraph.
struct BlockRotation {
    std::vector<VertexId> vertices;
    std::vector<std::vector<Dart>> rot; // aligned with vertices
};

/// Composes the block rotation from explicit skeleton embeddings, merging
/// skeletons along twin pairs (identity orientation at both poles).
BlockRotation compose_block(const ConTreeIndex& idx, int block,
                            const std::function<const SkeletonEmbedding&(int)>& skel_emb);

/// One step of a cut-vertex arrangement: insert the next block's dart
/// segment right after host_dart (a dart of an earlier block at the cut
/// vertex), cutting the block's own cyclic order right after own_dart.
struct CutInsertion {
    Dart host_dart = -1;
    Dart own_dart = -1;
};
/// Per cut vertex: one entry per incident block in ascending block id,
/// the first entry ignored (host -1; its own_dart fixes nothing).
using CutProgram = std::vector<CutInsertion>;

/// Glues block rotations into a full embedding of g; cut-vertex rotations
/// follow the given programs (indexed by cut-vertex index).
PlaneEmbedding assemble_embedding(const Multigraph& g, const ConTree& c,
                                  const std::vector<BlockRotation>& blocks,
                                  const std::vector<CutProgram>& programs);

/// Extraction: the rotation of node's skeleton induced by an embedding of
/// the graph, together with the contiguous dart groups per skeleton edge.
struct InducedSkeleton {
    SkeletonEmbedding emb;
    /// aligned with emb.rot: per vertex per position, the (first, last)
    /// graph darts of that skeleton edge's contiguous group.
    std::vector<std::vector<std::pair<Dart, Dart>>> groups;
};

InducedSkeleton induce_skeleton(const PlaneEmbedding& e, const ConTreeIndex& idx, int node);

/// Canonical skeleton embeddings: S-cycles, P- and D-bunches have a fixed
/// canonical rotation; R-node defaults must be supplied externally (from
/// the default embedding of the graph).
SkeletonEmbedding canonical_skeleton_embedding(const Skeleton& sk, NodeType type);

/// Everything fixed once per run: the default embedding G_d and the
/// per-node default skeleton embeddings derived from it.
class EmbedBase {
public:
    EmbedBase(const Multigraph& g, const ConTree& c);

    const Multigraph& graph() const { return *g_; }
    const ConTree& con() const { return *c_; }
    const ConTreeIndex& index() const { return idx_; }
    const PlaneEmbedding& gd() const { return gd_; }
    const SkeletonEmbedding& default_skel(int node) const {
        return defaults_[static_cast<size_t>(node)];
    }
    const SkeletonFaces& default_faces(int node) const {
        return default_faces_[static_cast<size_t>(node)];
    }
    /// The distinguished face of an S-node's 2-face cycle: the canonical
    /// face whose walk contains the dart of the lowest skeleton edge
    /// oriented from its lower to its higher pole.
    int default_face_of_cycle(int node) const {
        return s_default_face_[static_cast<size_t>(node)];
    }

private:
    const Multigraph* g_;
    const ConTree* c_;
    ConTreeIndex idx_;
    PlaneEmbedding gd_;
    std::vector<SkeletonEmbedding> defaults_;
    std::vector<SkeletonFaces> default_faces_;
    std::vector<int> s_default_face_;
    mutable std::vector<std::vector<int>> exp_cost_cache_;

    friend int expansion_cost(const EmbedBase&, int, int);
};

} // namespace mei
