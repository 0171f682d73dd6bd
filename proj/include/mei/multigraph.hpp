#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mei {

using VertexId = int;
using EdgeId = int;

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class LoopEdgeError : public Error {
public:
    explicit LoopEdgeError(VertexId v)
        : Error("loop edge at vertex " + std::to_string(v)), vertex(v) {}
    VertexId vertex;
};

class VertexOutOfRangeError : public Error {
public:
    explicit VertexOutOfRangeError(VertexId v)
        : Error("vertex out of range: " + std::to_string(v)), vertex(v) {}
    VertexId vertex;
};

class DisconnectedError : public Error {
public:
    DisconnectedError() : Error("graph is not connected") {}
};

struct EdgeRecord {
    EdgeId id;
    VertexId u, v;

    VertexId other(VertexId w) const { return w == u ? v : u; }
};

/// Loopless multigraph with dense integer ids. Vertices are 0..n-1,
/// edges are numbered in insertion order. Immutable after build; safe to
/// share read-only across threads.
class Multigraph {
public:
    Multigraph() = default;

    static Multigraph build(int vertex_count,
                            const std::vector<std::pair<VertexId, VertexId>>& edge_list);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const EdgeRecord& edge(EdgeId e) const { return edges_[static_cast<size_t>(e)]; }
    const std::vector<EdgeRecord>& edges() const { return edges_; }

    /// Edge ids incident to v, ascending.
    const std::vector<EdgeId>& incident(VertexId v) const {
        return incident_[static_cast<size_t>(v)];
    }
    int degree(VertexId v) const { return static_cast<int>(incident(v).size()); }

    bool has_edge_between(VertexId u, VertexId v) const;

private:
    int n_ = 0;
    std::vector<EdgeRecord> edges_;
    std::vector<std::vector<EdgeId>> incident_;
};

int max_degree(const Multigraph& g);
bool is_connected(const Multigraph& g);

struct BlocksAndCuts {
    /// Each block is the set of edge ids it contains (ascending).
    std::vector<std::vector<EdgeId>> blocks;
    /// Cut vertices, ascending.
    std::vector<VertexId> cut_vertices;
    /// block_of_edge[e] = index into blocks.
    std::vector<int> block_of_edge;
};

/// Partition of E(G) into blocks plus the cut vertices. Requires g connected.
BlocksAndCuts blocks_and_cuts(const Multigraph& g);

/// The edges to insert: unordered vertex pairs, possibly parallel to
/// existing edges of the graph but never loops.
struct InsertionSet {
    std::vector<std::pair<VertexId, VertexId>> pairs;

    static InsertionSet make(const Multigraph& g,
                             std::vector<std::pair<VertexId, VertexId>> pairs);
    int size() const { return static_cast<int>(pairs.size()); }
};

} // namespace mei
