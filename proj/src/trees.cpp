#include "ftr/trees.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "ftr/engine.hpp"

namespace ftr {

namespace {

struct Partial {
    std::vector<int> labels; // sorted global labels of the subtree
    // out -> list of (tuple ordered by labels, value)
    std::map<Loop, std::vector<std::pair<Multi, Rat>>> rows;
};

Partial compose_rec(const ComposeNode& node) {
    if (node.tensor.arity != static_cast<int>(node.labels.size() + node.kids.size()))
        throw ValidationError("compose_along_tree: vertex arity mismatch");

    std::vector<Partial> kids;
    for (const auto& [edge, child] : node.kids) {
        Partial sub = compose_rec(child);
        Partial dressed;
        dressed.labels = sub.labels;
        for (const auto& [b, rows] : sub.rows)
            edge.scan_in(b, [&](const Loop& a, const Rat& ev) {
                auto& dst = dressed.rows[a];
                for (const auto& [tup, v] : rows) dst.push_back({tup, ev * v});
            });
        kids.push_back(std::move(dressed));
    }

    Partial res;
    res.labels = node.labels;
    for (const auto& k : kids) res.labels.insert(res.labels.end(), k.labels.begin(), k.labels.end());
    std::vector<int> order(res.labels.size());
    {
        std::vector<std::pair<int, int>> tag;
        for (size_t i = 0; i < res.labels.size(); ++i) tag.push_back({res.labels[i], int(i)});
        std::sort(tag.begin(), tag.end());
        for (size_t i = 0; i < tag.size(); ++i) order[tag[i].second] = int(i);
        std::sort(res.labels.begin(), res.labels.end());
    }

    const size_t nl = node.labels.size(), nk = kids.size();
    for (const auto& [key, val] : node.tensor.vals) {
        Multi arrangement = key.in; // sorted; walk distinct permutations
        std::sort(arrangement.begin(), arrangement.end());
        do {
            // direct-leaf values: arrangement[0..nl), kid slots: arrangement[nl..)
            std::vector<std::pair<Multi, Rat>> acc{{Multi{}, val}};
            bool dead = false;
            for (size_t c = 0; c < nk && !dead; ++c) {
                const Loop a = arrangement[nl + c];
                auto it = kids[c].rows.find(a);
                if (it == kids[c].rows.end()) {
                    dead = true;
                    break;
                }
                std::vector<std::pair<Multi, Rat>> next;
                for (const auto& [tup0, v0] : acc)
                    for (const auto& [tup1, v1] : it->second) {
                        Multi merged = tup0;
                        merged.insert(merged.end(), tup1.begin(), tup1.end());
                        next.push_back({std::move(merged), v0 * v1});
                    }
                acc = std::move(next);
            }
            if (dead) continue;
            for (auto& [kidtup, v] : acc) {
                Multi tup(res.labels.size());
                for (size_t i = 0; i < nl; ++i) tup[order[i]] = arrangement[i];
                for (size_t i = 0; i < kidtup.size(); ++i) tup[order[nl + i]] = kidtup[i];
                auto& rows = res.rows[key.out];
                bool merged_in = false;
                for (auto& [t, rv] : rows)
                    if (t == tup) {
                        rv += v;
                        merged_in = true;
                        break;
                    }
                if (!merged_in) rows.push_back({std::move(tup), v});
            }
        } while (std::next_permutation(arrangement.begin(), arrangement.end()));
    }
    return res;
}

} // namespace

OrderedTensor compose_along_tree(const ComposeNode& root) {
    Partial p = compose_rec(root);
    OrderedTensor t;
    for (const auto& [out, rows] : p.rows)
        for (const auto& [tup, v] : rows) t.add(out, tup, v);
    return t;
}

namespace {

void encode_node(const StableTree::Node& nd, std::ostringstream& os) {
    os << '(' << nd.genus << ':';
    for (int l : nd.labels) os << l << ',';
    std::vector<std::string> kid_encs;
    for (const auto& k : nd.kids) {
        std::ostringstream ks;
        encode_node(k, ks);
        kid_encs.push_back(ks.str());
    }
    std::sort(kid_encs.begin(), kid_encs.end());
    for (const auto& s : kid_encs) os << s;
    os << ')';
}

std::string encode_tree(const StableTree::Node& root) {
    std::ostringstream os;
    encode_node(root, os);
    return os.str();
}

long node_aut(const StableTree::Node& nd) {
    long a = 1;
    std::map<std::string, long> counts;
    for (const auto& k : nd.kids) {
        a *= node_aut(k);
        counts[encode_tree(k)] += 1;
    }
    for (const auto& [enc, c] : counts)
        for (long i = 2; i <= c; ++i) a *= i;
    return a;
}

bool node_stable(int genus, size_t nlabels, size_t nkids) {
    // valence 1 + nlabels + nkids (one half-edge toward the root)
    return 2 * genus - 2 + 1 + static_cast<int>(nlabels + nkids) > 0;
}

// All subtree shapes over the given genus and label set.
std::vector<StableTree::Node> gen_subtrees(int g, const std::vector<int>& labels);

// A subtree over (h, B) needs its own stability budget.
bool subtree_possible(int h, size_t nlabels) { return 2 * h - 2 + 1 + static_cast<int>(nlabels) >= 1; }

// All child lists consuming exactly (labels, genus). When the parent vertex
// consumed nothing, a single child swallowing the whole problem would repeat
// it verbatim (and the parent would be unstable anyway), so that branch is
// cut to guarantee progress. Duplicate orderings are removed later via the
// tree encoding.
std::vector<std::vector<StableTree::Node>> gen_children(std::vector<int> labels, int genus,
                                                        bool parent_consumed) {
    std::vector<std::vector<StableTree::Node>> out;
    if (labels.empty() && genus == 0) {
        out.push_back({});
        return out;
    }
    if (!labels.empty()) {
        int first = labels[0];
        std::vector<int> rest(labels.begin() + 1, labels.end());
        // choose the block containing the smallest label
        for (unsigned mask = 0; mask < (1u << rest.size()); ++mask) {
            std::vector<int> block{first}, remain;
            for (size_t i = 0; i < rest.size(); ++i) ((mask >> i) & 1 ? block : remain).push_back(rest[i]);
            for (int h = 0; h <= genus; ++h) {
                if (!subtree_possible(h, block.size())) continue;
                bool whole = remain.empty() && h == genus;
                if (whole && !parent_consumed) continue;
                for (const auto& sub : gen_subtrees(h, block))
                    for (auto tail : gen_children(remain, genus - h, true)) {
                        tail.push_back(sub);
                        out.push_back(std::move(tail));
                    }
            }
        }
        return out;
    }
    for (int h = 1; h <= genus; ++h) {
        bool whole = (h == genus);
        if (whole && !parent_consumed) continue;
        if (!subtree_possible(h, 0)) continue;
        for (const auto& sub : gen_subtrees(h, {}))
            for (auto tail : gen_children({}, genus - h, true)) {
                tail.push_back(sub);
                out.push_back(std::move(tail));
            }
    }
    return out;
}

std::vector<StableTree::Node> gen_subtrees(int g, const std::vector<int>& labels) {
    std::vector<StableTree::Node> out;
    std::set<std::string> seen;
    for (int g0 = 0; g0 <= g; ++g0) {
        // direct labels at this vertex
        for (unsigned mask = 0; mask < (1u << labels.size()); ++mask) {
            std::vector<int> here, below;
            for (size_t i = 0; i < labels.size(); ++i)
                ((mask >> i) & 1 ? here : below).push_back(labels[i]);
            bool consumed = g0 > 0 || !here.empty();
            for (auto& kids : gen_children(below, g - g0, consumed)) {
                if (!node_stable(g0, here.size(), kids.size())) continue;
                StableTree::Node nd;
                nd.genus = g0;
                nd.labels = here;
                nd.kids = std::move(kids);
                std::string enc = encode_tree(nd);
                if (seen.insert(enc).second) out.push_back(std::move(nd));
            }
        }
    }
    return out;
}

std::map<std::pair<int, int>, std::vector<StableTree>> tree_cache;

} // namespace

const std::vector<StableTree>& enumerate_stable_trees(int g, int n) {
    require_stable(g, n);
    auto key = std::make_pair(g, n);
    if (auto it = tree_cache.find(key); it != tree_cache.end()) return it->second;
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = i + 1;
    std::vector<StableTree> out;
    for (auto& nd : gen_subtrees(g, labels)) {
        StableTree t;
        t.g = g;
        t.n = n;
        t.root = std::move(nd);
        t.enc = encode_tree(t.root);
        t.aut = node_aut(t.root);
        out.push_back(std::move(t));
    }
    // genus decorations sum correctly by construction; stability was enforced
    return tree_cache.emplace(key, std::move(out)).first->second;
}

namespace {

ComposeNode to_compose(const StableTree::Node& nd,
                       const std::function<const MultiTensor<Rat>&(int, int)>& table,
                       const LinMap<Rat>& edge) {
    ComposeNode cn;
    int nv = static_cast<int>(nd.labels.size() + nd.kids.size());
    cn.tensor = table(nd.genus, nv);
    cn.labels = nd.labels;
    for (const auto& k : nd.kids) cn.kids.push_back({edge, to_compose(k, table, edge)});
    return cn;
}

} // namespace

MultiTensor<Rat> stable_tree_sum(const std::function<const MultiTensor<Rat>&(int, int)>& table,
                                 const LinMap<Rat>& edge, int g, int n) {
    require_stable(g, n);
    OrderedTensor total;
    for (const auto& T : enumerate_stable_trees(g, n)) {
        ComposeNode root = to_compose(T.root, table, edge);
        OrderedTensor ot = compose_along_tree(root);
        Rat w(1, T.aut);
        for (const auto& [k, v] : ot.vals) total.add(k.first, k.second, v * w);
    }
    MultiTensor<Rat> F(n);
    for (const auto& [k, v] : total.vals) {
        Multi sorted = k.second;
        std::sort(sorted.begin(), sorted.end());
        if (sorted == k.second) F.add(k.first, k.second, v);
    }
    return F;
}

} // namespace ftr
