#pragma once

#include "mei/multigraph.hpp"

#include <iosfwd>
#include <vector>

namespace mei {

class NotBiconnectedError : public Error {
public:
    NotBiconnectedError() : Error("graph is not biconnected") {}
};

class TooSmallError : public Error {
public:
    TooSmallError() : Error("graph has fewer than three vertices") {}
};

class NonContiguousError : public Error {
public:
    NonContiguousError() : Error("con-path intersection is not contiguous") {}
};

enum class NodeType { S, P, R, D, C };

char node_type_letter(NodeType t);

/// An edge of a skeleton: either a real edge of the underlying graph or a
/// virtual edge twinned with one in the neighboring skeleton.
struct SkelEdge {
    VertexId u = -1, v = -1;    // original vertex ids
    EdgeId real_edge = -1;      // >= 0 for real edges
    int twin_node = -1;         // virtual: neighbor node id
    int twin_edge = -1;         // virtual: edge index inside that skeleton

    bool is_virtual() const { return real_edge < 0; }
    VertexId lo() const { return u < v ? u : v; }
    VertexId hi() const { return u < v ? v : u; }
};

struct Skeleton {
    std::vector<VertexId> vertices; // ascending original ids
    std::vector<SkelEdge> edges;
};

/// SPR- or sSPR-tree of one biconnected graph. Node ids are dense; tree
/// edges are implied by the twin links.
struct SsprTree {
    std::vector<NodeType> type;
    std::vector<Skeleton> skel;

    int node_count() const { return static_cast<int>(type.size()); }
    std::vector<int> neighbors(int node) const;
    bool serialized() const; // property (v): every tree edge touches an S-node
};

/// The unique SPR decomposition (triconnected components) of a biconnected
/// graph with at least three vertices. The graph is given as an edge subset
/// of g; endpoints keep g's vertex ids.
SsprTree spr_tree(const Multigraph& g, const std::vector<EdgeId>& block_edges);
SsprTree spr_tree(const Multigraph& block);

/// Subdivides every tree edge between two non-S-nodes with a 2-cycle
/// S-node, establishing sSPR property (v).
void serialize_sspr(SsprTree& t);

/// BC-tree. Node ids: block b is node b, cut vertex with index i (into
/// cut_vertices) is node block_count + i.
struct BcTree {
    BlocksAndCuts bc;
    std::vector<std::vector<int>> adj; // bipartite tree adjacency
    std::vector<int> cut_index;        // vertex -> index into cut_vertices, or -1
    std::vector<int> block_vertex_count;

    int block_count() const { return static_cast<int>(bc.blocks.size()); }
    int node_count() const { return static_cast<int>(adj.size()); }
    bool is_block_node(int id) const { return id < block_count(); }
    bool trivial_block(int b) const { // at most 2 vertices
        return block_vertex_count[static_cast<size_t>(b)] <= 2;
    }
};

BcTree bc_tree(const Multigraph& g);

/// The con-tree: BC-tree plus one sSPR tree per nontrivial block, D-nodes
/// for trivial blocks, and C-nodes for cut vertices. Decomposition node
/// ids are dense over all S/P/R/D/C nodes.
class ConTree {
public:
    struct Node {
        NodeType type;
        int block = -1;           // owning block (S/P/R/D)
        VertexId cut_vertex = -1; // C-nodes
        Skeleton skel;            // empty for C-nodes
        std::vector<int> tree_adj; // sSPR tree neighbors (within block)
    };

    static ConTree build(const Multigraph& g);

    const Multigraph& graph() const { return *g_; }
    const BcTree& bc() const { return bc_; }
    int node_count() const { return static_cast<int>(nodes_.size()); }
    const Node& node(int id) const { return nodes_[static_cast<size_t>(id)]; }
    const std::vector<int>& block_nodes(int block) const {
        return block_nodes_[static_cast<size_t>(block)];
    }
    int c_node(VertexId cut) const; // -1 if not a cut vertex
    /// Decomposition node owning this edge as a real skeleton edge.
    int owner_of_edge(EdgeId e) const { return edge_owner_[static_cast<size_t>(e)]; }
    /// Mates of vertex v within a block: nodes whose skeletons contain v.
    std::vector<int> mates_in_block(int block, VertexId v) const;
    /// All mates of v over all blocks containing it.
    std::vector<int> mates(VertexId v) const;

    /// Blocks containing vertex v (ascending).
    std::vector<int> blocks_of_vertex(VertexId v) const;

    void dump(std::ostream& os) const; // debug format, one line per node

private:
    const Multigraph* g_ = nullptr;
    BcTree bc_;
    std::vector<Node> nodes_;
    std::vector<std::vector<int>> block_nodes_;
    std::vector<int> cnode_of_cut_; // per cut-vertex index
    std::vector<int> edge_owner_;
    // per block: sorted (vertex, node) pairs for mate lookup
    std::vector<std::vector<std::pair<VertexId, int>>> block_mates_;

    friend struct ConTreeBuilder;
};

/// Flattened con-tree: union of the sSPR trees plus C-nodes adjacent to
/// all non-P mates of their cut vertex.
struct DecompositionGraph {
    const ConTree* con = nullptr;
    std::vector<std::vector<int>> adj; // per decomposition node, ascending
};

DecompositionGraph decomposition_graph(const ConTree& c);

/// Node sequence of the con-path between two vertices, together with the
/// border vertices at which consecutive skeletons meet.
struct ConPath {
    VertexId v1 = -1, v2 = -1;
    std::vector<int> nodes;
    /// enter_vertex[i] / exit_vertex[i]: the vertices through which the
    /// path enters and leaves node i's skeleton (v1/v2 at the ends, cut or
    /// border vertices between blocks; -1 between non-C neighbors, where
    /// the connection runs through a twin pair instead).
    std::vector<VertexId> enter_vertex, exit_vertex;

    int length() const { return static_cast<int>(nodes.size()); }
};

ConPath con_path(const ConTree& c, VertexId v1, VertexId v2);

/// The shared subsequence of two con-paths; throws NonContiguousError if
/// the shared nodes are not contiguous in both (impossible for valid input).
std::vector<int> con_path_intersection(const ConPath& a, const ConPath& b);

} // namespace mei
