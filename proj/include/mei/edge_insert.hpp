#pragma once

#include "mei/embed_build.hpp"

#include <map>

namespace mei {

class SameVertexError : public Error {
public:
    SameVertexError() : Error("insertion endpoints coincide") {}
};

class NotHonoredError : public Error {
public:
    NotHonoredError() : Error("embedding does not honor the preference") {}
};

class MalformedPreferenceError : public Error {
public:
    explicit MalformedPreferenceError(const std::string& w)
        : Error("malformed preference: " + w) {}
};

class NotSubpathError : public Error {
public:
    NotSubpathError() : Error("not a prefix or suffix of the con-path") {}
};

/// Per-node data of Def 2.12, extracted from a specific embedding. The
/// C-node block arrangement data stays implicit: honor checks query the
/// hosting faces straight from the embedding.
struct EmbeddingSpecification {
    std::vector<char> r_flipped;                 // R-nodes only
    std::vector<std::vector<int>> p_rotation;    // P-nodes: induced order at the lower pole
    /// Per cut vertex (by cut index): for each ordered pair of incident
    /// blocks (i, j), the dart of block i whose corner hosts block j.
    std::vector<std::vector<std::tuple<int, int, Dart>>> c_arrangement;

    bool operator==(const EmbeddingSpecification&) const = default;
};

EmbeddingSpecification specify(const EmbedBase& base, const PlaneEmbedding& e);

/// Def 2.15. A void preference has node == -1.
struct NodePreference {
    int node = -1;
    int peer1 = -1, peer2 = -1;
    bool switching = false; // S-nodes
    int face1 = -1, face2 = -1; // C-nodes with R-peers: default-embedding face ids

    bool is_void() const { return node < 0; }
    bool operator==(const NodePreference&) const = default;
};

/// An optimal embedding preference of one insertion pair, aligned with
/// its con-path.
struct ChainPreference {
    ConPath path;
    std::vector<NodePreference> prefs; // per path position; void at ends and R/D nodes
};

struct HonorReport {
    int defect = 0;
    std::vector<int> violated_nodes;
};

/// The minimum defect (Def 3.4) of e honoring the given preferences,
/// minimized over all spin assignments consistent with E1/E2.
HonorReport honors(const EmbedBase& base, const PlaneEmbedding& e,
                   const std::vector<NodePreference>& prefs);

/// Spin values forced along a chain (Claim 2.17): per twin pair, keyed by
/// the S-side (node, edge index); per CS-pair, keyed by (cut vertex, S-node).
struct SpinAssignment {
    std::map<std::pair<int, int>, int> twin_spin;     // +1 / -1
    std::map<std::pair<VertexId, int>, int> cs_spin;  // +1 / -1
};

/// Requires that e honors pref (throws NotHonoredError otherwise); spins
/// not forced by the chain default to +1.
SpinAssignment derive_spins(const EmbedBase& base, const PlaneEmbedding& e,
                            const ChainPreference& pref);

struct SingleInsertion {
    int ins_value = 0;
    ChainPreference pref;
};

/// Optimal single edge insertion (Theorem 2.19): the exact ins(G, v1 v2)
/// and an optimal embedding preference along the con-path. Deterministic;
/// coherent nodes of different pairs agree without reconciliation.
SingleInsertion optimal_single_insertion(const EmbedBase& base, VertexId v1, VertexId v2);

/// Restriction of a chain preference to a prefix or suffix of its path
/// (Claim 3.6(b)): [from, to] positions inclusive; interior preferences
/// are kept, the new endpoints become void.
ChainPreference restrict_preference(const ChainPreference& pref, int from, int to);

/// Traversal cost of the expansion graph behind the virtual edge at
/// (node, edge index): the minimum number of graph edges a curve crossing
/// the expansion must cut. Exposed for tests.
int expansion_cost(const EmbedBase& base, int node, int edge_idx);

} // namespace mei
