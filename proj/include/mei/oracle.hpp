#pragma once

#include "mei/embed_build.hpp"

#include <functional>

namespace mei {

class TooManyEmbeddingsError : public Error {
public:
    explicit TooManyEmbeddingsError(long long cap)
        : Error("embedding enumeration exceeds cap " + std::to_string(cap)) {}
};

struct EnumerationStats {
    long long raw_specifications = 0; // choice vectors visited
    long long distinct = 0;           // distinct face structures streamed
};

/// Visits every plane embedding of g at least once (every combination of
/// R-flips, P-node cyclic orders and cut-vertex block arrangements),
/// streaming one embedding per distinct face structure. Trivial parallel
/// bunches keep their strands together and their strand order fixed; no
/// block is nested between two parallel strands (such embeddings never
/// improve any insertion value).
///
/// Throws TooManyEmbeddingsError if the raw choice space exceeds cap.
void enumerate_embeddings(const Multigraph& g, long long cap,
                          const std::function<void(const PlaneEmbedding&)>& fn,
                          EnumerationStats* stats = nullptr);

/// Exact ins(G, v1 v2): minimum dual distance over all embeddings.
int exact_ins_single(const Multigraph& g, VertexId v1, VertexId v2, long long cap = 100000);

/// Exact ins'(G, F): minimum over embeddings of the sum of per-pair dual
/// distances (crossings between inserted edges not counted).
int exact_ins_prime(const Multigraph& g, const InsertionSet& F, long long cap = 100000);

} // namespace mei
