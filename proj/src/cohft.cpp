#include "ftr/cohft.hpp"

#include <algorithm>

#include "ftr/dfact.hpp"
#include "ftr/trees.hpp"

namespace ftr {

namespace {

Rat sym_factor_longs(const std::vector<long>& m) {
    Rat acc(1);
    size_t i = 0;
    while (i < m.size()) {
        size_t j = i;
        while (j < m.size() && m[j] == m[i]) ++j;
        acc *= factorial(static_cast<long>(j - i));
        i = j;
    }
    return acc;
}

// bare correlator vector of T-hat Omega^0: F-TFT contraction times a Witten
// correlator, summed over T(psi) insertion multisets. `ins` carries explicit
// V_0 vectors with their psi powers; the output leg carries psi_0^ell.
std::vector<Rat> bare_translated_vertex(const Algebra& alg,
                                        const std::map<int, std::vector<Rat>>& T, int g, long ell,
                                        const std::vector<std::pair<std::vector<Rat>, long>>& ins) {
    int n = static_cast<int>(ins.size());
    std::vector<Rat> out(alg.dim, Rat(0));
    if (!stable(g, n) && T.empty()) return out;

    long dim_budget = 3L * g - 2 + n;
    long base_pow = ell;
    for (const auto& [v, p] : ins) base_pow += p;

    std::vector<int> support;
    for (const auto& [d, vec] : T) support.push_back(d);

    // enumerate nondecreasing tuples of insertion degrees
    std::vector<long> nu;
    auto emit = [&](auto&& self, size_t start, long deg_sum) -> void {
        int m = static_cast<int>(nu.size());
        if (stable(g, n + m)) {
            // dimension selection for the Witten factor
            if (base_pow + deg_sum == 3L * g - 2 + (n + m)) {
                std::vector<long> ks;
                ks.reserve(n + m);
                for (const auto& [v, p] : ins) ks.push_back(p);
                for (long d : nu) ks.push_back(d);
                Rat witten = witten_correlator(g, ell, ks);
                if (!witten.is_zero()) {
                    // F-TFT contraction of all vectors with w^g
                    std::vector<Rat> acc;
                    bool started = false;
                    for (int i = 0; i < g; ++i) {
                        acc = started ? alg.mul(acc, alg.w) : alg.w;
                        started = true;
                    }
                    for (const auto& [v, p] : ins) {
                        acc = started ? alg.mul(acc, v) : v;
                        started = true;
                    }
                    for (long d : nu) {
                        acc = started ? alg.mul(acc, T.at(static_cast<int>(d))) : T.at(static_cast<int>(d));
                        started = true;
                    }
                    if (!started) return; // cannot happen on stable input
                    Rat pref = witten / sym_factor_longs(nu);
                    for (int i = 0; i < alg.dim; ++i) out[i] += pref * acc[i];
                }
            }
        }
        for (size_t si = start; si < support.size(); ++si) {
            long d = support[si];
            if (base_pow + deg_sum + d > dim_budget + static_cast<long>(nu.size()) + 1) continue;
            nu.push_back(d);
            self(self, si, deg_sum + d);
            nu.pop_back();
        }
    };
    emit(emit, 0, 0);
    return out;
}

std::map<int, std::vector<Rat>> no_translation() { return {}; }

} // namespace

Rat topological_correlator(const Algebra& alg, const UpDown& ud, const CorrelatorKey& key) {
    require_stable(key.g, static_cast<int>(key.ins.size()));
    if (ud.cap < 3 * key.g - 2 + static_cast<int>(key.ins.size()))
        throw CapOverflow("up/down cap below the dimension of the moduli space");
    std::vector<std::pair<std::vector<Rat>, long>> ins;
    for (const auto& i : key.ins) {
        std::vector<Rat> e(alg.dim, Rat(0));
        e[i.a] = Rat(1);
        ins.push_back({std::move(e), i.k});
    }
    Rat acc(0);
    ud.U.scan_out({key.out.a, key.out.k}, [&](const Loop& bl, const Rat& uv) {
        auto bare = bare_translated_vertex(alg, no_translation(), key.g, bl.k, ins);
        acc += uv * bare[bl.a];
    });
    return acc;
}

Seed loop_seed_topological(const Algebra& alg, const UpDown& ud, int cap) {
    alg.validate();
    if (cap < 1) throw ValidationError("loop seed needs cap >= 1");
    if (ud.cap < cap) throw CapOverflow("up/down cap below seed cap");
    const int dim = alg.dim;
    Seed s;
    s.dim = dim;
    s.cap = cap;
    s.dim_bounded = true;

    // A^{(a,i)}_{(b,0),(c,0)} = U^{a;i,0}_l P^l_{bc}
    for (int b = 0; b < dim; ++b)
        for (int c = b; c < dim; ++c) {
            std::vector<Rat> p(dim, Rat(0));
            for (int l = 0; l < dim; ++l) p[l] = alg.p(l, b, c);
            for (int l = 0; l < dim; ++l) {
                if (p[l].is_zero()) continue;
                ud.U.scan_in({l, 0}, [&](const Loop& ai, const Rat& uv) {
                    if (ai.k > cap) return;
                    s.A.add(ai, {{b, 0}, {c, 0}}, uv * p[l]);
                });
            }
        }

    // B^{(a,i)}_{(b,j),(c,k)} = U^{a;i,l}_lam P^lam_{b mu} D^mu_{c;m,k} delta^{m+1}_{l+j} {m / l, j-1}
    for (int b = 0; b < dim; ++b)
        for (int j = 0; j <= cap; ++j)
            for (int c = 0; c < dim; ++c)
                for (int k = 0; k <= cap; ++k)
                    for (const auto& [dk, dv] : ud.D.vals) {
                        // D^mu_{c;m,k}: key ((mu,m),(c,k))
                        if (dk.second != Loop{c, k}) continue;
                        int mu = dk.first.a;
                        long m = dk.first.k;
                        for (int lam = 0; lam < dim; ++lam) {
                            Rat pv = alg.p(lam, b, mu);
                            if (pv.is_zero()) continue;
                            for (long l = 0; l <= cap; ++l) {
                                if (l + j != m + 1) continue;
                                Rat df = df_ratio({m}, {l, static_cast<long>(j) - 1});
                                ud.U.scan_in({lam, static_cast<int>(l)}, [&](const Loop& ai, const Rat& uv) {
                                    if (ai.k > cap) return;
                                    s.B.add(ai, {b, j}, {c, k}, uv * pv * dv * df);
                                });
                            }
                        }
                    }

    // Cconn^{(a,i),(b,j)}_{(c,k)} = U^{a;i,l}_lam w^b D^lam_{c;m,k} delta_l^{m+j+2} {m, j / l}
    for (int bq = 0; bq < dim; ++bq) {
        if (alg.w[bq].is_zero()) continue;
        for (int j = 0; j <= cap; ++j)
            for (int c = 0; c < dim; ++c)
                for (int k = 0; k <= cap; ++k)
                    for (const auto& [dk, dv] : ud.D.vals) {
                        if (dk.second != Loop{c, k}) continue;
                        int lam = dk.first.a;
                        long m = dk.first.k;
                        long l = m + j + 2;
                        if (l > cap) continue;
                        Rat df = df_ratio({m, static_cast<long>(j)}, {l});
                        ud.U.scan_in({lam, static_cast<int>(l)}, [&](const Loop& ai, const Rat& uv) {
                            if (ai.k > cap) return;
                            s.Cconn.add(ai, {bq, j}, {c, k}, uv * alg.w[bq] * dv * df);
                        });
                    }
    }

    // Cdisc^{(a,i)}_{(b,j),(c,k)} = U^{a;i,l}_lam P^lam_{rho sig} D^rho_{b;r,j} D^sig_{c;s,k}
    //                               delta_l^{r+s+2} {r, s / l}
    for (const auto& [dk1, dv1] : ud.D.vals)
        for (const auto& [dk2, dv2] : ud.D.vals) {
            int b = dk1.second.a, j = dk1.second.k;
            int c = dk2.second.a, k = dk2.second.k;
            if (Loop{b, j} > Loop{c, k}) continue; // symmetric inputs, one representative
            int rho = dk1.first.a, sig = dk2.first.a;
            long r = dk1.first.k, sdeg = dk2.first.k;
            long l = r + sdeg + 2;
            if (l > cap) continue;
            Rat both = dv1 * dv2;
            // off-diagonal stored entries already represent both orders through
            // the symmetrised value: accumulate the ordered sum explicitly
            Rat df = df_ratio({r, sdeg}, {l});
            for (int lam = 0; lam < dim; ++lam) {
                Rat pv = alg.p(lam, rho, sig);
                if (pv.is_zero()) continue;
                Rat base = both * df * pv;
                ud.U.scan_in({lam, static_cast<int>(l)}, [&](const Loop& ai, const Rat& uv) {
                    if (ai.k > cap) return;
                    s.Cdisc.add(ai, {{b, j}, {c, k}}, uv * base);
                });
            }
        }

    // D^{(a,i)} = U^{a;i,1}_lam w^lam / 24
    for (int lam = 0; lam < dim; ++lam) {
        if (alg.w[lam].is_zero()) continue;
        ud.U.scan_in({lam, 1}, [&](const Loop& ai, const Rat& uv) {
            if (ai.k > cap) return;
            Rat v = uv * alg.w[lam] * Rat(1, 24);
            auto [it, fresh] = s.D.try_emplace(ai, v);
            if (!fresh) it->second += v;
        });
    }
    std::erase_if(s.D, [](const auto& kv) { return kv.second.is_zero(); });
    return s;
}

Seed loop_seed_lrt(const Algebra& alg, const GiventalData& data, const UpDown& ud, int cap,
                   LoopFrame::Frame frame) {
    // internal series run with headroom: entries at degree <= cap receive
    // contributions from intermediate exponents up to about twice that
    const int ord = 2 * cap + 4;
    UpDown big = ud;
    if (big.cap < ord) {
        // extend a standard up/down transparently; anything else must come
        // with enough range from the caller
        bool standard = true;
        for (const auto& [k, v] : ud.U.vals)
            standard = standard && k.first == k.second && v == Rat(1);
        if (standard)
            big = standard_updown(alg.dim, ord);
        else
            throw CapOverflow("up/down cap below the internal series order " + std::to_string(ord));
    }
    LoopFrame fr(alg, big, data, ord, frame);
    Seed s;
    s.dim = alg.dim;
    s.cap = cap;
    // only the final-standard frame keeps the moduli-dimension support bound:
    // the other frame's up-morphism mixes output degrees upward
    s.dim_bounded = (frame == LoopFrame::Frame::TransformedStandard);

    std::vector<Loop> I;
    for (int a = 0; a < alg.dim; ++a)
        for (int k = 0; k <= cap; ++k) I.push_back({a, k});
    auto keep = [&](const Loop& o) { return o.k <= cap; };

    std::map<Loop, Form> dlr, deltad;
    for (const auto& i : I) {
        dlr[i] = fr.d_lr(i);
        deltad[i] = fr.delta_lr_dressed(i);
    }

    for (const auto& f1 : I)
        for (const auto& f2 : I) {
            if (f2 < f1) continue;
            PlusVec a = fr.ubar(fr.mul_T(dlr[f1], dlr[f2]));
            for (const auto& [o, v] : a)
                if (keep(o)) s.A.add(o, {f1, f2}, v);
            PlusVec cd = fr.ubar(fr.mul_T(deltad[f1], deltad[f2]));
            for (const auto& [o, v] : cd)
                if (keep(o)) s.Cdisc.add(o, {f1, f2}, v);
        }
    for (const auto& f1 : I)
        for (const auto& f2 : I) {
            PlusVec b = fr.ubar(fr.mul_T(dlr[f1], deltad[f2]));
            for (const auto& [o, v] : b)
                if (keep(o)) s.B.add(o, f1, f2, v);
        }
    for (const auto& f : I) {
        Form chi;
        fr.Delta_LR.scan_in(f, [&](const Loop& o, const Rat& v) { form_add(chi, o.a, o.k, v); });
        for (const auto& [left, right] : fr.kappa_T(chi)) {
            PlusVec o0 = fr.ubar(left);
            // right side dressed by lambda_{LR,t}
            PlusVec o1;
            for (const auto& [rk, rv] : right)
                fr.lam_t.scan_in(rk, [&](const Loop& o, const Rat& lv) {
                    if (o.k > cap) return;
                    auto [it, fresh] = o1.try_emplace(o, lv * rv);
                    if (!fresh) it->second += lv * rv;
                });
            for (const auto& [k0, v0] : o0)
                for (const auto& [k1, v1] : o1)
                    if (keep(k0) && keep(k1)) s.Cconn.add(k0, k1, f, v0 * v1);
        }
    }
    {
        PlusVec d = fr.ubar(fr.varpi_T());
        for (const auto& [o, v] : d) {
            if (!keep(o)) continue;
            Rat val = v * Rat(1, 2);
            auto [it, fresh] = s.D.try_emplace(o, val);
            if (!fresh) it->second += val;
        }
        std::erase_if(s.D, [](const auto& kv) { return kv.second.is_zero(); });
    }
    return s;
}

Rat lrt_correlator(const Algebra& alg, const GiventalData& data, const UpDown& ud,
                   const CorrelatorKey& key, int cap, LoopFrame::Frame frame) {
    Seed s = loop_seed_lrt(alg, data, ud, cap, frame);
    return ftr_amplitude(s, key.g, static_cast<int>(key.ins.size())).at(key.out, key.ins);
}

MultiTensor<Rat> translated_tensor(const Algebra& alg, const UpDown& ud,
                                   const std::map<int, std::vector<Rat>>& T, int g, int n,
                                   int cap) {
    require_stable(g, n);
    MultiTensor<Rat> F(n);
    std::vector<Loop> I;
    for (int a = 0; a < alg.dim; ++a)
        for (int k = 0; k <= cap; ++k) I.push_back({a, k});

    for_multisets(I, n, 3 * g - 2 + n, [&](const Multi& ms) {
        std::vector<std::pair<std::vector<Rat>, long>> ins;
        for (const auto& i : ms) {
            std::vector<Rat> e(alg.dim, Rat(0));
            e[i.a] = Rat(1);
            ins.push_back({std::move(e), i.k});
        }
        std::map<long, std::vector<Rat>> bare; // ell -> vector
        for (const auto& i0 : I) {
            Rat acc(0);
            ud.U.scan_out(i0, [&](const Loop& bl, const Rat& uv) {
                auto it = bare.find(bl.k);
                if (it == bare.end())
                    it = bare.emplace(bl.k, bare_translated_vertex(alg, T, g, bl.k, ins)).first;
                acc += uv * it->second[bl.a];
            });
            if (!acc.is_zero()) F.add(i0, ms, acc);
        }
    });
    return F;
}

Rat translated_correlator(const Algebra& alg, const UpDown& ud,
                          const std::map<int, std::vector<Rat>>& T, const CorrelatorKey& key,
                          int cap) {
    return translated_tensor(alg, ud, T, key.g, static_cast<int>(key.ins.size()), cap)
        .at(key.out, key.ins);
}

MultiTensor<Rat> dress_tensor(const MultiTensor<Rat>& T, const LinMap<Rat>& out_map,
                              const LinMap<Rat>& in_map) {
    std::map<std::pair<Loop, Multi>, Rat> buf;
    for (const auto& [key, v] : T.vals) {
        Multi arrangement = key.in;
        do {
            // fan out each slot through in_map rows
            std::vector<std::pair<Multi, Rat>> acc{{Multi{}, v}};
            for (const auto& b : arrangement) {
                std::vector<std::pair<Multi, Rat>> next;
                in_map.scan_out(b, [&](const Loop& j, const Rat& iv) {
                    for (const auto& [tup, tv] : acc) {
                        Multi t2 = tup;
                        t2.push_back(j);
                        next.push_back({std::move(t2), tv * iv});
                    }
                });
                acc = std::move(next);
                if (acc.empty()) break;
            }
            if (acc.empty()) continue;
            out_map.scan_in(key.out, [&](const Loop& i, const Rat& ov) {
                for (const auto& [tup, tv] : acc) {
                    auto [it, fresh] = buf.try_emplace({i, tup}, ov * tv);
                    if (!fresh) it->second += ov * tv;
                }
            });
        } while (std::next_permutation(arrangement.begin(), arrangement.end()));
    }
    MultiTensor<Rat> R(T.arity);
    for (const auto& [k, v] : buf) {
        Multi sorted = k.second;
        std::sort(sorted.begin(), sorted.end());
        if (sorted == k.second && !v.is_zero()) R.add(k.first, k.second, v);
    }
    return R;
}

MultiTensor<Rat> rt_treesum_tensor(const Algebra& alg, const GiventalData& data, const UpDown& ud,
                                   int g, int n, int cap) {
    require_stable(g, n);
    LoopFrame fr(alg, ud, data, cap, LoopFrame::Frame::TransformedStandard);

    // B_R = E_R o D: ((alpha,i),(beta,k)) = sum_{mu,m} [E_{im}]^alpha_mu D^mu_{beta;m,k}
    auto E = edge_weight_coeffs(data, cap + 1);
    LinMap<Rat> BR;
    for (const auto& [dk, dv] : ud.D.vals) {
        int mu = dk.first.a;
        int m = dk.first.k;
        for (int i = 0; i + m <= cap + 1 && i <= cap; ++i) {
            const auto& mat = E[i][m];
            for (int a = 0; a < alg.dim; ++a)
                if (!mat[a][mu].is_zero()) BR.add({a, i}, dk.second, mat[a][mu] * dv);
        }
    }

    std::map<std::pair<int, int>, MultiTensor<Rat>> table;
    auto table_fn = [&](int gg, int nn) -> const MultiTensor<Rat>& {
        auto key = std::make_pair(gg, nn);
        auto it = table.find(key);
        if (it == table.end())
            it = table.emplace(key, translated_tensor(alg, ud, data.T, gg, nn, cap)).first;
        return it->second;
    };

    MultiTensor<Rat> tree = stable_tree_sum(table_fn, BR, g, n);
    // land in the final-standard frame: the raw dressing lambda_{LR,t} followed
    // by the frame conversion mu_LR o lambda_{LR,t}^{-1} collapses to mu_LR
    return dress_tensor(tree, fr.mu_LR, fr.lam_s_inv);
}

Rat rt_correlator_treesum(const Algebra& alg, const GiventalData& data, const UpDown& ud,
                          const CorrelatorKey& key, int cap) {
    return rt_treesum_tensor(alg, data, ud, key.g, static_cast<int>(key.ins.size()), cap)
        .at(key.out, key.ins);
}

// ---------------------------------------------------------------------------
// class-level oracle

namespace {

struct ClassEval {
    const Algebra& alg;
    const GiventalData& data;
    std::vector<std::vector<std::vector<std::vector<Rat>>>> E; // edge weights
    std::vector<std::vector<Rat>> rinv_flat;                   // rho matrices, flattened

    std::vector<Rat> rho_apply(int m, int col) const {
        std::vector<Rat> v(alg.dim, Rat(0));
        for (int i = 0; i < alg.dim; ++i) v[i] = rinv_flat[m][i * alg.dim + col];
        return v;
    }

    // output vector at the root leg of the subtree, with psi_0^ell on it
    std::vector<Rat> eval_vertex(const StableTree::Node& nd, long ell, const Multi& leaf_ins,
                                 int psi_budget_self) const {
        // assemble insertion lists over all leaf/edge dressing choices
        std::vector<std::pair<std::vector<Rat>, long>> ins;
        std::vector<Rat> out(alg.dim, Rat(0));

        // recursive assignment over labels then kids
        auto rec = [&](auto&& self, size_t li, size_t ki, Rat pref) -> void {
            if (pref.is_zero()) return;
            if (li < nd.labels.size()) {
                const Loop& leaf = leaf_ins[nd.labels[li] - 1];
                for (int m = 0; m + leaf.k <= psi_budget_self; ++m) {
                    std::vector<Rat> v = rho_apply(m, leaf.a);
                    bool nz = false;
                    for (const auto& x : v) nz = nz || !x.is_zero();
                    if (!nz) continue;
                    ins.push_back({std::move(v), leaf.k + m});
                    self(self, li + 1, ki, pref);
                    ins.pop_back();
                }
                return;
            }
            if (ki < nd.kids.size()) {
                const auto& child = nd.kids[ki];
                int child_budget = vertex_budget(child);
                for (int ie = 0; ie <= psi_budget_self; ++ie)
                    for (int je = 0; je <= child_budget; ++je) {
                        if (ie + je > cap_pair()) continue;
                        auto sub = eval_vertex(child, je, leaf_ins, vertex_budget(child));
                        // dress by E_{ie,je}
                        std::vector<Rat> v(alg.dim, Rat(0));
                        bool nz = false;
                        for (int r = 0; r < alg.dim; ++r) {
                            Rat acc(0);
                            for (int c = 0; c < alg.dim; ++c) acc += E[ie][je][r][c] * sub[c];
                            v[r] = acc;
                            nz = nz || !acc.is_zero();
                        }
                        if (!nz) continue;
                        ins.push_back({std::move(v), static_cast<long>(ie)});
                        self(self, li, ki + 1, pref);
                        ins.pop_back();
                    }
                return;
            }
            auto bare = bare_translated_vertex(alg, data.T, nd.genus, ell, ins);
            for (int i = 0; i < alg.dim; ++i) out[i] += pref * bare[i];
        };
        rec(rec, 0, 0, Rat(1));
        return out;
    }

    static int vertex_budget(const StableTree::Node& nd) {
        return 3 * nd.genus - 2 + static_cast<int>(nd.labels.size() + nd.kids.size()) + 2;
    }
    int cap_pair() const {
        return static_cast<int>(E.size()) - 1;
    }
};

} // namespace

Rat rt_correlator_classlevel(const Algebra& alg, const GiventalData& data,
                             const CorrelatorKey& key) {
    int n = static_cast<int>(key.ins.size());
    require_stable(key.g, n);
    // enough psi budget for every vertex of every tree
    int order = 3 * key.g - 2 + n + 2;
    ClassEval ev{alg, data, edge_weight_coeffs(data, order), data.rinv_series(order)};

    // L-dressing: output by L, inputs by L^{-1}
    std::vector<Loop> base;
    for (int a = 0; a < alg.dim; ++a) base.push_back({a, 0});
    LinMap<Rat> lm;
    for (int i = 0; i < alg.dim; ++i)
        for (int j = 0; j < alg.dim; ++j) lm.add({i, 0}, {j, 0}, data.L[i][j]);
    LinMap<Rat> lminv = invert(lm, base);

    Rat total(0);
    // sum over input dressings by L^{-1}
    Multi ins = key.ins;
    auto rec_inputs = [&](auto&& self, size_t idx, Multi dressed, Rat pref) -> void {
        if (pref.is_zero()) return;
        if (idx < ins.size()) {
            lminv.scan_in({ins[idx].a, 0}, [&](const Loop& j, const Rat& v) {
                Multi d2 = dressed;
                d2.push_back({j.a, ins[idx].k});
                self(self, idx + 1, std::move(d2), pref * v);
            });
            return;
        }
        // R(-psi_0) on the output leg and L on the output index
        for (int m0 = 0; m0 <= 3 * key.g - 2 + n; ++m0) {
            Rat sgn = (m0 % 2) ? Rat(-1) : Rat(1);
            for (const auto& T : enumerate_stable_trees(key.g, n)) {
                auto vec = ev.eval_vertex(T.root, key.out.k + m0, dressed, 3 * key.g - 2 + n);
                // R_{m0} then L on the output
                std::vector<Rat> rv(alg.dim, Rat(0));
                if (m0 == 0)
                    rv = vec;
                else if (m0 <= static_cast<int>(data.Rm.size()))
                    for (int i = 0; i < alg.dim; ++i)
                        for (int j = 0; j < alg.dim; ++j) rv[i] += data.Rm[m0 - 1][i][j] * vec[j];
                Rat outv(0);
                for (int j = 0; j < alg.dim; ++j) outv += data.L[key.out.a][j] * rv[j];
                total += pref * sgn * outv / Rat(T.aut);
            }
        }
    };
    rec_inputs(rec_inputs, 0, {}, Rat(1));
    return total;
}

RtUnitReport check_rt_unit(const Algebra& alg, const GiventalData& r_only, const UpDown& ud,
                           const std::vector<CorrelatorKey>& keys, int cap) {
    std::vector<Rat> unit;
    if (!alg.is_unital(&unit)) throw ValidationError("algebra has no unit");
    if (!r_only.T.empty() || !(r_only.L == GiventalData::identity(alg.dim).L))
        throw ValidationError("check_rt_unit expects pure R data");

    // T'_R(u) = u (R(u) - id) e, T''_R(u) = u (id - R^{-1}(u)) e
    std::map<int, std::vector<Rat>> Tp, Tpp;
    auto flat = r_only.rinv_series(cap + 1);
    for (int m = 1; m <= cap; ++m) {
        std::vector<Rat> a = r_only.r_coeff(m, unit);
        std::vector<Rat> b(alg.dim, Rat(0));
        for (int i = 0; i < alg.dim; ++i)
            for (int j = 0; j < alg.dim; ++j) b[i] -= flat[m][i * alg.dim + j] * unit[j];
        bool nza = false, nzb = false;
        for (const auto& x : a) nza = nza || !x.is_zero();
        for (const auto& x : b) nzb = nzb || !x.is_zero();
        if (nza) Tp[m + 1] = a;
        if (nzb) Tpp[m + 1] = b;
    }

    GiventalData with_tpp = r_only;
    with_tpp.T = Tpp;

    std::map<Loop, Rat> tau;
    for (const auto& [m, v] : Tp)
        for (int a = 0; a < alg.dim; ++a)
            if (!v[a].is_zero()) tau[{a, m}] = v[a];
    std::vector<Loop> support;
    for (const auto& [i, v] : tau) support.push_back(i);

    // tensors are shared across all keys of a topology
    std::map<std::pair<int, int>, MultiTensor<Rat>> lhs_tab, rhs_tab;
    auto lhs_tensor = [&](int g, int n) -> const MultiTensor<Rat>& {
        auto it = lhs_tab.find({g, n});
        if (it == lhs_tab.end())
            it = lhs_tab.emplace(std::make_pair(g, n), rt_treesum_tensor(alg, r_only, ud, g, n, cap))
                     .first;
        return it->second;
    };
    auto rhs_tensor = [&](int g, int n) -> const MultiTensor<Rat>& {
        auto it = rhs_tab.find({g, n});
        if (it == rhs_tab.end())
            it = rhs_tab.emplace(std::make_pair(g, n), rt_treesum_tensor(alg, with_tpp, ud, g, n, cap))
                     .first;
        return it->second;
    };

    RtUnitReport rep;
    for (const auto& key : keys) {
        int n = static_cast<int>(key.ins.size());
        // side A: translate the R-hat amplitudes by T'
        Rat lhs(0);
        int m_max = 3 * key.g - 2 + n;
        for (int m = 0; m <= m_max; ++m) {
            if (!stable(key.g, n + m)) continue;
            const MultiTensor<Rat>& F = lhs_tensor(key.g, n + m);
            for_multisets(support, m, -1, [&](const Multi& mu) {
                Rat tpow(1);
                for (const auto& v : mu) tpow *= tau.at(v);
                Rat sym(1);
                size_t i = 0;
                while (i < mu.size()) {
                    size_t j = i;
                    while (j < mu.size() && mu[j] == mu[i]) ++j;
                    sym *= factorial(static_cast<long>(j - i));
                    i = j;
                }
                Multi all = key.ins;
                all.insert(all.end(), mu.begin(), mu.end());
                lhs += F.at(key.out, all) * tpow / sym;
            });
        }
        // side B: R-hat of the T''-translated theory
        Rat rhs = rhs_tensor(key.g, n).at(key.out, key.ins);
        if (lhs != rhs) {
            rep.ok = false;
            rep.first_failure = key;
            return rep;
        }
    }
    return rep;
}

} // namespace ftr
