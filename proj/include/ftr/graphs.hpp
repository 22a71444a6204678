#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ftr/algebra.hpp"

namespace ftr {

// Element of G_{g,1+n}: a trivalent connected graph with first Betti number g,
// leaves l_0..l_n, and a spanning tree containing l_0 and no other leaf.
// Generated by the recursive B / Cconn / Cdisc decomposition at the root
// vertex, which also serves as the weight recipe. Automorphisms act on
// half-edges, fix the labelled leaves, and are blind to the spanning tree;
// their count is always a power of 2.
struct TrivalentGraph {
    enum class Kind { Base03, Base11, B, Cconn, Cdisc };

    struct Edge {
        int u, v;   // u <= v; loop when u == v
        bool tree;
        auto operator<=>(const Edge&) const = default;
    };

    int g = 0, n = 0; // type (g, 1+n)
    int nv = 0;
    std::vector<Edge> edges;
    std::vector<int> leaf_at; // leaf i -> vertex, i = 0..n
    long aut = 1;     // |Aut|, enters |G_{g,1+n}|
    long aut_amp = 1; // amplitude-side denominator: loops carry no factor,
                      // matching the base case F_{1,1} = D of the recursion

    // recipe
    Kind kind = Kind::Base03;
    int leaf_m = -1;                               // case B: leaf at the root vertex
    std::shared_ptr<const TrivalentGraph> sub0, sub1;
    std::vector<int> map0, map1;                   // child input-leaf j (1-based) -> parent leaf label

    std::string canonical() const; // includes tree flags and leaf labels
    std::string dot() const;
};

using GraphPtr = std::shared_ptr<const TrivalentGraph>;

// Complete list of G_{g,1+n} up to isomorphism (n = number of inputs;
// 1+n leaves in total), each with its automorphism order.
const std::vector<GraphPtr>& enumerate_graphs(int g, int n);

enum class CountMethod { Enumerate, Recurse };

// |G_{g,1+n}| = sum over graphs of 1/|Aut|, by direct enumeration or by the
// automorphism recursion; the two must agree.
Rat graph_count(int g, int n, CountMethod method);

// Independent oracle for the F-TR amplitudes: the coloured-graph sum
// sum_G sum_c w(G,c)/|Aut(G)|.
MultiTensor<Rat> graph_sum_amplitude(const Seed& seed, int g, int n);

// DOT dump of the whole class (tree edges bold, leaves labelled).
std::string graphs_dot(int g, int n);

} // namespace ftr
