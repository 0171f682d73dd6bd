#pragma once

#include "mei/edge_insert.hpp"

namespace mei {

enum class Mode { Weak, Strong };

/// Step (2): one optimal embedding preference per insertion pair,
/// deterministically (coherent nodes already agree).
std::vector<SingleInsertion> compute_preferences(const EmbedBase& base, const InsertionSet& F);

/// Def 3.1: true iff node is inner on the intersection of the two paths
/// and every R-node among its two intersection neighbors is inner too.
bool coherent_at(const ConTree& c, const ConPath& p1, const ConPath& p2, int node);

/// Remark 3.8 workaround: aligns preferences at coherent nodes (for i
/// ascending, earlier preferences adopt the later ones). Returns how many
/// individual preferences changed (0 with our deterministic searches).
int reconcile(const ConTree& c, std::vector<SingleInsertion>& prefs);

struct SimplicialSequence {
    /// (F-index, pivot node), in elimination order.
    std::vector<std::pair<int, int>> steps;
};

/// Lemma 3.17 iterated over the remaining paths, built on a spanning tree
/// of the decomposition graph; every step is verified directly against
/// Def 3.18(i).
SimplicialSequence good_simplicial_sequence(const DecompositionGraph& d,
                                            const std::vector<ConPath>& paths);

/// Def 3.18(ii): per decomposition node, the F-indices kept in p'.
std::vector<std::vector<int>> select_strong(const ConTree& c, const std::vector<ConPath>& paths,
                                            const SimplicialSequence& seq);
/// Weak mode: p' = p.
std::vector<std::vector<int>> select_weak(const ConTree& c, const std::vector<ConPath>& paths);

/// Step (4)a: per node the semi-majority choice over the requested
/// preferences (ties: smallest contributing F-index; empty: void).
std::vector<NodePreference> semi_majority(const ConTree& c,
                                          const std::vector<SingleInsertion>& prefs,
                                          const std::vector<std::vector<int>>& p_prime);

/// Lemma 3.14: a plane embedding honoring an arbitrary collection of
/// node preferences (one per node, possibly void), in two phases: per-block
/// leaf processing with spin bookkeeping, then block assembly at the cut
/// vertices. Linear time.
PlaneEmbedding realize(const EmbedBase& base, const std::vector<NodePreference>& merged);

struct MeiReport {
    Mode mode = Mode::Strong;
    int k = 0;
    int delta = 0;
    std::vector<int> single_values;    // ins(G, f) per pair
    long long ins_sigma = 0;
    long long crossings_with_graph = 0;
    long long crossings_between_inserted = 0;
    long long total = 0;
    long long guarantee_weak = 0;   // Eq. (6) right-hand side
    long long guarantee_strong = 0; // Eq. (7) right-hand side
    long long cr_multiplier = 0;    // Eq. (5): cr_aprx <= mult * cr + additive
    long long cr_additive = 0;
    std::vector<InsertionWalk> walks;
    std::vector<std::vector<int>> rotation_dump; // per vertex dart lists of G0
};

long long floor_log2(long long x); // x >= 1

/// Verification data for the embedding-validity acceptance criterion.
struct MeiAudit {
    bool euler_ok = false;
    int realize_defect = -1; // honors() defect of G0 against the merged preferences
};

/// Eq. (6)/(7) right-hand sides without the ins_sigma term.
long long weak_additive_term(int k, int delta);
long long strong_additive_term(int k, int delta);

MeiReport run_mei(const Multigraph& g, const InsertionSet& F, Mode mode,
                  MeiAudit* audit = nullptr);

} // namespace mei
