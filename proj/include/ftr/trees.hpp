#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "ftr/tensor.hpp"

namespace ftr {

// Tensor with one output and an ordered input tuple. Tree compositions are
// generally not symmetric in their leaves, so they land here; symmetric sums
// over trees are read back into MultiTensor afterwards.
struct OrderedTensor {
    std::map<std::pair<Loop, Multi>, Rat> vals;

    void add(const Loop& out, const Multi& in, const Rat& v) {
        if (v.is_zero()) return;
        auto [it, fresh] = vals.try_emplace({out, in}, v);
        if (!fresh) {
            it->second += v;
            if (it->second.is_zero()) vals.erase(it);
        }
    }
    Rat at(const Loop& out, const Multi& in) const {
        auto it = vals.find({out, in});
        return it == vals.end() ? Rat(0) : it->second;
    }
};

// Rooted composition tree. Each vertex carries a tensor whose inputs are the
// vertex's direct leaves (identified by global labels) followed by its
// children; each child is reached through an edge map whose output feeds the
// parent and whose input consumes the child's output.
struct ComposeNode {
    MultiTensor<Rat> tensor;
    std::vector<int> labels;
    std::vector<std::pair<LinMap<Rat>, ComposeNode>> kids;
};

// Contract vertex tensors along the tree. The result's input tuple is ordered
// by increasing global leaf label. Throws on vertex arity mismatch.
OrderedTensor compose_along_tree(const ComposeNode& root);

// Stable tree of type (g, 1+n): genus-decorated rooted tree, every vertex
// stable, leaves l_1..l_n distributed over the vertices (l_0 is the root
// edge of the root vertex).
struct StableTree {
    struct Node {
        int genus = 0;
        std::vector<int> labels; // original leaf labels at this vertex
        std::vector<Node> kids;
    };
    int g = 0, n = 0;
    Node root;
    long aut = 1; // product over vertices of (identical child subtree)!
    std::string enc;
};

const std::vector<StableTree>& enumerate_stable_trees(int g, int n);

// sum over stable trees of (1/|Aut(T)|) (tensor_T o_T edge maps), with the
// vertex tensor at v given by table(g(v), n(v)). This realises both the
// Bogoliubov action on amplitudes and the Givental tree sum.
MultiTensor<Rat> stable_tree_sum(const std::function<const MultiTensor<Rat>&(int, int)>& table,
                                 const LinMap<Rat>& edge, int g, int n);

} // namespace ftr
