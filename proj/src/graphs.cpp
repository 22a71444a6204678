#include "ftr/graphs.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace ftr {

namespace {

std::string encode(int nv, std::vector<TrivalentGraph::Edge> es, const std::vector<int>& leaves,
                   const std::vector<int>& perm, bool with_tree) {
    for (auto& e : es) {
        int u = perm[e.u], v = perm[e.v];
        e.u = std::min(u, v);
        e.v = std::max(u, v);
        if (!with_tree) e.tree = false;
    }
    std::sort(es.begin(), es.end());
    std::ostringstream os;
    os << nv << ';';
    for (const auto& e : es) os << e.u << ',' << e.v << ',' << (e.tree ? 1 : 0) << ';';
    os << '|';
    for (int lv : leaves) os << perm[lv] << ',';
    return os.str();
}

std::map<std::pair<int, int>, std::vector<GraphPtr>> g_cache;

} // namespace

std::string TrivalentGraph::canonical() const {
    std::vector<int> perm(nv);
    std::iota(perm.begin(), perm.end(), 0);
    std::string best;
    do {
        std::string s = encode(nv, edges, leaf_at, perm, true);
        if (best.empty() || s < best) best = s;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::string TrivalentGraph::dot() const {
    std::ostringstream os;
    os << "graph G {\n";
    for (int v = 0; v < nv; ++v) os << "  v" << v << " [shape=point];\n";
    for (size_t i = 0; i < leaf_at.size(); ++i) {
        os << "  l" << i << " [shape=plaintext,label=\"l" << i << "\"];\n";
        os << "  l" << i << " -- v" << leaf_at[i];
        if (i == 0) os << " [style=bold]";
        os << ";\n";
    }
    for (const auto& e : edges) {
        os << "  v" << e.u << " -- v" << e.v;
        if (e.tree) os << " [style=bold]";
        os << ";\n";
    }
    os << "}\n";
    return os.str();
}

const std::vector<GraphPtr>& enumerate_graphs(int g, int n) {
    require_stable(g, n);
    auto key = std::make_pair(g, n);
    if (auto it = g_cache.find(key); it != g_cache.end()) return it->second;

    std::vector<GraphPtr> out;
    if (g == 0 && n == 2) {
        auto G = std::make_shared<TrivalentGraph>();
        G->g = 0; G->n = 2; G->nv = 1;
        G->leaf_at = {0, 0, 0};
        G->kind = TrivalentGraph::Kind::Base03;
        G->aut = 1;
        out.push_back(G);
    } else if (g == 1 && n == 0) {
        auto G = std::make_shared<TrivalentGraph>();
        G->g = 1; G->n = 0; G->nv = 1;
        G->edges = {{0, 0, false}};
        G->leaf_at = {0};
        G->kind = TrivalentGraph::Kind::Base11;
        G->aut = 2;
        G->aut_amp = 1;
        out.push_back(G);
    } else {
        // case B: leaf m and an edge to a graph of type (g, 1+(n-1))
        for (int m = 1; m <= n; ++m) {
            if (!stable(g, n - 1)) break;
            for (const auto& sub : enumerate_graphs(g, n - 1)) {
                auto G = std::make_shared<TrivalentGraph>();
                G->g = g; G->n = n; G->nv = sub->nv + 1;
                for (auto e : sub->edges) G->edges.push_back({e.u + 1, e.v + 1, e.tree});
                G->edges.push_back({0, sub->leaf_at[0] + 1, true});
                G->leaf_at.assign(n + 1, 0);
                G->leaf_at[0] = 0;
                G->leaf_at[m] = 0;
                G->kind = TrivalentGraph::Kind::B;
                G->leaf_m = m;
                G->sub0 = sub;
                G->aut = sub->aut;
                G->aut_amp = sub->aut_amp;
                G->map0.assign(n, 0); // child leaf j (1..n-1) -> parent label
                {
                    int j = 1;
                    for (int lbl = 1; lbl <= n; ++lbl) {
                        if (lbl == m) continue;
                        G->map0[j] = lbl;
                        G->leaf_at[lbl] = sub->leaf_at[j] + 1;
                        ++j;
                    }
                }
                out.push_back(G);
            }
        }

        // case Cconn: two edges to a graph of type (g-1, 1+(n+1)); the tree
        // edge replaces the child's root leaf, the other edge its last leaf
        if (g >= 1) {
            for (const auto& sub : enumerate_graphs(g - 1, n + 1)) {
                auto G = std::make_shared<TrivalentGraph>();
                G->g = g; G->n = n; G->nv = sub->nv + 1;
                for (auto e : sub->edges) G->edges.push_back({e.u + 1, e.v + 1, e.tree});
                G->edges.push_back({0, sub->leaf_at[0] + 1, true});
                {
                    int u = 0, v = sub->leaf_at[n + 1] + 1;
                    G->edges.push_back({std::min(u, v), std::max(u, v), false});
                }
                G->leaf_at.assign(n + 1, 0);
                G->leaf_at[0] = 0;
                G->map0.assign(n + 1, 0);
                for (int lbl = 1; lbl <= n; ++lbl) {
                    G->map0[lbl] = lbl;
                    G->leaf_at[lbl] = sub->leaf_at[lbl] + 1;
                }
                G->kind = TrivalentGraph::Kind::Cconn;
                G->sub0 = sub;
                G->aut = 2 * sub->aut;
                G->aut_amp = 2 * sub->aut_amp;
                out.push_back(G);
            }
        }

        // case Cdisc: two subgraphs joined at the root vertex
        std::vector<int> labels(n);
        std::iota(labels.begin(), labels.end(), 1);
        for (int h = 0; h <= g; ++h) {
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                std::vector<int> LA, LB;
                for (int i = 0; i < n; ++i) ((mask >> i) & 1 ? LA : LB).push_back(labels[i]);
                int h2 = g - h;
                if (!stable(h, static_cast<int>(LA.size())) || !stable(h2, static_cast<int>(LB.size())))
                    continue;
                const auto& lista = enumerate_graphs(h, static_cast<int>(LA.size()));
                const auto& listb = enumerate_graphs(h2, static_cast<int>(LB.size()));
                for (size_t ia = 0; ia < lista.size(); ++ia)
                    for (size_t ib = 0; ib < listb.size(); ++ib) {
                        // emit each unordered pair once
                        auto ka = std::make_tuple(h, LA, ia), kb = std::make_tuple(h2, LB, ib);
                        if (kb < ka) continue;
                        const auto& sa = lista[ia];
                        const auto& sb = listb[ib];
                        auto G = std::make_shared<TrivalentGraph>();
                        G->g = g; G->n = n; G->nv = 1 + sa->nv + sb->nv;
                        int offa = 1, offb = 1 + sa->nv;
                        for (auto e : sa->edges) G->edges.push_back({e.u + offa, e.v + offa, e.tree});
                        for (auto e : sb->edges) G->edges.push_back({e.u + offb, e.v + offb, e.tree});
                        G->edges.push_back({0, sa->leaf_at[0] + offa, true});
                        G->edges.push_back({0, sb->leaf_at[0] + offb, true});
                        G->leaf_at.assign(n + 1, 0);
                        G->leaf_at[0] = 0;
                        G->map0.assign(LA.size() + 1, 0);
                        G->map1.assign(LB.size() + 1, 0);
                        for (size_t j = 0; j < LA.size(); ++j) {
                            G->map0[j + 1] = LA[j];
                            G->leaf_at[LA[j]] = sa->leaf_at[j + 1] + offa;
                        }
                        for (size_t j = 0; j < LB.size(); ++j) {
                            G->map1[j + 1] = LB[j];
                            G->leaf_at[LB[j]] = sb->leaf_at[j + 1] + offb;
                        }
                        G->kind = TrivalentGraph::Kind::Cdisc;
                        G->sub0 = sa;
                        G->sub1 = sb;
                        // ordered double cover folded into one element
                        G->aut = (ka == kb) ? 2 * sa->aut * sb->aut : sa->aut * sb->aut;
                        G->aut_amp = (ka == kb) ? 2 * sa->aut_amp * sb->aut_amp
                                                : sa->aut_amp * sb->aut_amp;
                        out.push_back(G);
                    }
            }
        }

    }

    return g_cache.emplace(key, std::move(out)).first->second;
}

Rat graph_count(int g, int n, CountMethod method) {
    require_stable(g, n);
    if (method == CountMethod::Enumerate) {
        Rat acc(0);
        for (const auto& G : enumerate_graphs(g, n)) acc += Rat(1, G->aut);
        return acc;
    }
    // |G_{g,1+n}| = n|G_{g,1+(n-1)}| + 1/2 |G_{g-1,1+(n+1)}| + 1/2 sum over splits
    static std::map<std::pair<int, int>, Rat> memo;
    auto rec = [&](auto&& self, int gg, int nn) -> Rat {
        if (!stable(gg, nn)) return Rat(0);
        if (gg == 0 && nn == 2) return Rat(1);
        if (gg == 1 && nn == 0) return Rat(1, 2);
        auto it = memo.find({gg, nn});
        if (it != memo.end()) return it->second;
        Rat acc = Rat(nn) * self(self, gg, nn - 1);
        acc += Rat(1, 2) * self(self, gg - 1, nn + 1);
        Rat disc(0);
        for (int h = 0; h <= gg; ++h)
            for (int j = 0; j <= nn; ++j) {
                if (!stable(h, j) || !stable(gg - h, nn - j)) continue;
                disc += binomial(nn, j) * self(self, h, j) * self(self, gg - h, nn - j);
            }
        acc += Rat(1, 2) * disc;
        memo[{gg, nn}] = acc;
        return acc;
    };
    return rec(rec, g, n);
}

namespace {

// sum of w(G,c) over all colourings of the internal edges, with fixed leaf
// colours; the per-edge sums distribute through the recursive weight rules
Rat weight_sum(const Seed& seed, const TrivalentGraph& G, const Loop& root,
               const std::vector<Loop>& leaf_col) {
    const std::vector<Loop> I = seed.index_set();
    switch (G.kind) {
        case TrivalentGraph::Kind::Base03:
            return seed.A.at(root, {leaf_col[1], leaf_col[2]});
        case TrivalentGraph::Kind::Base11: {
            auto it = seed.D.find(root);
            return it == seed.D.end() ? Rat(0) : it->second;
        }
        case TrivalentGraph::Kind::B: {
            Rat acc(0);
            std::vector<Loop> sub_col(G.sub0->n + 1);
            for (int j = 1; j <= G.sub0->n; ++j) sub_col[j] = leaf_col[G.map0[j]];
            seed.B.scan(root, leaf_col[G.leaf_m], [&](const Loop& a, const Rat& bv) {
                sub_col[0] = a;
                Rat sub = weight_sum(seed, *G.sub0, a, sub_col);
                if (!sub.is_zero()) acc += bv * sub;
            });
            return acc;
        }
        case TrivalentGraph::Kind::Cconn: {
            // child root colour = Cconn input (tree edge), child's last leaf
            // colour = Cconn's traced output
            Rat acc(0);
            std::vector<Loop> sub_col(G.sub0->n + 1);
            for (int j = 1; j <= G.sub0->n - 1; ++j) sub_col[j] = leaf_col[G.map0[j]];
            seed.Cconn.scan(root, [&](const Loop& b, const Loop& a, const Rat& cv) {
                sub_col[0] = a;
                sub_col[G.sub0->n] = b;
                Rat sub = weight_sum(seed, *G.sub0, a, sub_col);
                if (!sub.is_zero()) acc += cv * sub;
            });
            return acc;
        }
        case TrivalentGraph::Kind::Cdisc: {
            Rat acc(0);
            std::vector<Loop> colA(G.sub0->n + 1), colB(G.sub1->n + 1);
            for (int j = 1; j <= G.sub0->n; ++j) colA[j] = leaf_col[G.map0[j]];
            for (int j = 1; j <= G.sub1->n; ++j) colB[j] = leaf_col[G.map1[j]];
            for (const auto& [ins, cv] : seed.Cdisc.row(root)) {
                Loop a = ins[0], b = ins[1];
                colA[0] = a;
                colB[0] = b;
                Rat wa = weight_sum(seed, *G.sub0, a, colA);
                Rat wb = wa.is_zero() ? Rat(0) : weight_sum(seed, *G.sub1, b, colB);
                Rat term = (*cv) * wa * wb;
                if (a != b) {
                    colA[0] = b;
                    colB[0] = a;
                    Rat wa2 = weight_sum(seed, *G.sub0, b, colA);
                    Rat wb2 = wa2.is_zero() ? Rat(0) : weight_sum(seed, *G.sub1, a, colB);
                    term += (*cv) * wa2 * wb2;
                }
                acc += term;
            }
            return acc;
        }
    }
    return Rat(0);
}

} // namespace

MultiTensor<Rat> graph_sum_amplitude(const Seed& seed, int g, int n) {
    require_stable(g, n);
    if (seed.graded())
        throw ValidationError("graph sum oracle runs on finite-dimensional seeds");
    const auto& graphs = enumerate_graphs(g, n);
    const std::vector<Loop> I = seed.index_set();

    MultiTensor<Rat> F(n);
    for_multisets(I, n, -1, [&](const Multi& ms) {
        // evaluate each graph at one ordered representative; the total sum is
        // input-symmetric
        std::vector<Loop> leaf_col(n + 1);
        for (int j = 0; j < n; ++j) leaf_col[j + 1] = ms[j];
        for (const auto& i0 : I) {
            Rat acc(0);
            for (const auto& G : graphs) {
                Rat w = weight_sum(seed, *G, i0, leaf_col);
                if (!w.is_zero()) acc += w / Rat(G->aut_amp);
            }
            if (!acc.is_zero()) F.add(i0, ms, acc);
        }
    });
    return F;
}

std::string graphs_dot(int g, int n) {
    std::ostringstream os;
    int idx = 0;
    for (const auto& G : enumerate_graphs(g, n)) {
        std::string d = G->dot();
        // give each graph a distinct name
        d.replace(d.find("graph G"), 7, "graph G" + std::to_string(idx++));
        os << "// |Aut| = " << G->aut << "\n" << d;
    }
    return os.str();
}

} // namespace ftr
