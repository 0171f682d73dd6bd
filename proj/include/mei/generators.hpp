#pragma once

#include "mei/multigraph.hpp"

#include <cstdint>

namespace mei {

class BadParamsError : public Error {
public:
    explicit BadParamsError(const std::string& w) : Error("bad generator parameters: " + w) {}
};

class BadInstanceError : public Error {
public:
    explicit BadInstanceError(const std::string& w) : Error("bad instance: " + w) {}
};

struct GeneratedInstance {
    Multigraph graph;
    InsertionSet pairs;
    long long certified_lower_bound = -1; // -1: none
    long long budget = -1;                // Ziegler reduction budget
};

/// A hexagonal grid with two subdivision vertices a, b far apart and far
/// from the boundary; ins(G, ab) grows with r and Delta(G + ab) = 3.
GeneratedInstance gen_construction_I(int r);

/// A deep prism (concentric 2l-cycles joined by spokes) whose outer face
/// of length 2l carries s_1..s_l, t_1..t_l clockwise; F = {s_i t_i}. Every
/// single insertion is free but the pairs must mutually cross: the optimum
/// is l(l-1)/2.
GeneratedInstance gen_construction_II(int l);

/// The recursive bolt construction: an H^6 bolt joining two copies built
/// from H^4 gadgets (2m concentric cycles, each drawn line a bundle of
/// Delta/4 parallel edges, marked vertices of degree exactly Delta/2).
/// Carries the certified lower bound Delta*m*d/2 on ins'(G, F).
GeneratedInstance gen_construction_III(int m, int delta);

/// Ziegler's reduction from fixed linear crossing number: a rigid frame
/// (path v_1..v_n plus two apex vertices) with every frame edge replaced
/// by |E|^2 parallel edges; F = E(H), budget = l.
GeneratedInstance gen_ziegler(const std::vector<std::pair<int, int>>& h_edges, int n, int l);

/// Seeded random connected planar graph (stacked triangulation, then
/// random subdivisions and pendants) with extra_k random non-edge pairs.
GeneratedInstance gen_random_planar(int n, int extra_k, std::uint64_t seed);

} // namespace mei
