#include "ftr/actions.hpp"

#include <algorithm>

namespace ftr {

Seed act_change_basis(const Seed& seed, const BasisPair& pair) {
    const std::vector<Loop> universe = seed.index_set();
    LinMap<Rat> ls_inv = invert(pair.source, universe);
    LinMap<Rat> lt_inv = invert(pair.target, universe);
    const LinMap<Rat>& lt = pair.target;

    // output slot: new^i = lt^i_a old^a, column scan of lt at a;
    // input slot dressed by m = lambda^{-1}: old index b picks row b of m,
    // contributing m^b_j at new input j.
    auto dress2 = [&](const MultiTensor<Rat>& T, const LinMap<Rat>& m_in) {
        std::map<std::tuple<Loop, Loop, Loop>, Rat> buf; // ordered (i, j, k)
        for (const auto& [key, v] : T.vals) {
            Loop b = key.in[0], c = key.in[1];
            std::vector<std::pair<Loop, Loop>> orders{{b, c}};
            if (b != c) orders.push_back({c, b});
            lt.scan_in(key.out, [&](const Loop& i, const Rat& lv) {
                for (auto [bb, cc] : orders)
                    m_in.scan_out(bb, [&](const Loop& j, const Rat& vj) {
                        m_in.scan_out(cc, [&](const Loop& k, const Rat& vk) {
                            Rat t = lv * v * vj * vk;
                            if (t.is_zero()) return;
                            auto [it, fresh] = buf.try_emplace({i, j, k}, t);
                            if (!fresh) it->second += t;
                        });
                    });
            });
        }
        MultiTensor<Rat> R(2);
        for (const auto& [k, v] : buf) {
            auto [i, j, kk] = k;
            if (j <= kk && !v.is_zero()) R.add(i, {j, kk}, v);
        }
        return R;
    };

    Seed out;
    out.dim = seed.dim;
    out.cap = seed.cap;
    out.dim_bounded = false; // a general basis change can move the degree support

    out.A = dress2(seed.A, ls_inv);
    out.Cdisc = dress2(seed.Cdisc, lt_inv);

    for (const auto& [key, v] : seed.B.vals) {
        auto [o, i0, i1] = key;
        lt.scan_in(o, [&](const Loop& i, const Rat& lv) {
            ls_inv.scan_out(i0, [&](const Loop& j, const Rat& v0) {
                lt_inv.scan_out(i1, [&](const Loop& k, const Rat& v1) {
                    out.B.add(i, j, k, lv * v * v0 * v1);
                });
            });
        });
    }

    for (const auto& [key, v] : seed.Cconn.vals) {
        auto [o0, o1, in] = key;
        lt.scan_in(o0, [&](const Loop& i, const Rat& l0) {
            lt.scan_in(o1, [&](const Loop& j, const Rat& l1) {
                lt_inv.scan_out(in, [&](const Loop& k, const Rat& li) {
                    out.Cconn.add(i, j, k, l0 * l1 * v * li);
                });
            });
        });
    }

    for (const auto& [i, v] : seed.D)
        lt.scan_in(i, [&](const Loop& j, const Rat& lv) {
            auto [it, fresh] = out.D.try_emplace(j, lv * v);
            if (!fresh) it->second += lv * v;
        });
    std::erase_if(out.D, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

Seed act_bogoliubov(const Seed& seed, const LinMap<Rat>& beta) {
    Seed out = seed;

    // ^B = B + A o (id (x) beta):  ^B^i_{j,k} += A^i_{j,a} beta^a_k
    for (const auto& [kb, bv] : beta.vals) {
        auto [a, k] = kb;
        for (const auto& [key, av] : seed.A.vals) {
            Loop x = key.in[0], y = key.in[1];
            if (x == a) out.B.add(key.out, y, k, av * bv);
            if (y == a && x != y) out.B.add(key.out, x, k, av * bv);
        }
    }

    // ^Cdisc = Cdisc + B(beta (x) id) + B(beta (x) id) sigma + A beta^{(x)2}
    std::map<std::tuple<Loop, Loop, Loop>, Rat> buf; // ordered (i, j, k)
    auto bump = [&](const Loop& i, const Loop& j, const Loop& k, const Rat& v) {
        if (v.is_zero()) return;
        auto [it, fresh] = buf.try_emplace({i, j, k}, v);
        if (!fresh) it->second += v;
    };
    for (const auto& [key, av] : seed.A.vals) {
        Loop a = key.in[0], b = key.in[1];
        std::vector<std::pair<Loop, Loop>> orders{{a, b}};
        if (a != b) orders.push_back({b, a});
        for (auto [aa, bb] : orders)
            beta.scan_out(aa, [&](const Loop& j, const Rat& v1) {
                beta.scan_out(bb, [&](const Loop& k, const Rat& v2) {
                    bump(key.out, j, k, av * v1 * v2);
                });
            });
    }
    for (const auto& [key, bv0] : seed.B.vals) {
        auto [i, a, k] = key;
        beta.scan_out(a, [&](const Loop& j, const Rat& vb) {
            bump(i, j, k, bv0 * vb);
            bump(i, k, j, bv0 * vb);
        });
    }
    for (const auto& [k, v] : buf) {
        auto [i, j, kk] = k;
        if (j <= kk) out.Cdisc.add(i, {j, kk}, v);
    }
    return out;
}

MultiTensor<Rat> bogoliubov_tree_sum(const std::function<const MultiTensor<Rat>&(int, int)>& table,
                                     const LinMap<Rat>& beta, int g, int n) {
    return stable_tree_sum(table, beta, g, n);
}

// ---------------------------------------------------------------------------
// fixed point check

namespace {

// hbar-graded V-valued polynomial function of x: (genus grade, exponent) -> components
using PolyFn = std::map<std::pair<int, Multi>, std::map<Loop, Rat>>;

Rat sym_factor(const Multi& m) {
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

void fn_add(PolyFn& f, int g, const Multi& m, const Loop& comp, const Rat& v) {
    if (v.is_zero()) return;
    auto& slot = f[{g, m}][comp];
    slot += v;
    if (slot.is_zero()) {
        f[{g, m}].erase(comp);
        if (f[{g, m}].empty()) f.erase({g, m});
    }
}

PolyFn potential_fn(const std::map<std::pair<int, int>, MultiTensor<Rat>>& tables, int gcap,
                    int ncap) {
    PolyFn f;
    for (const auto& [gn, T] : tables) {
        if (gn.first > gcap || gn.second > ncap) continue;
        for (const auto& [key, v] : T.vals)
            fn_add(f, gn.first, key.in, key.out, v / sym_factor(key.in));
    }
    return f;
}

} // namespace

FixedPointReport check_fixed_point_potential(
    const Seed& base, const std::map<std::pair<int, int>, MultiTensor<Rat>>& phi_transformed,
    const LinMap<Rat>& beta, int genus_cap, int n_cap) {
    Amplitudes<Rat> amps(base);

    PolyFn phiT = potential_fn(phi_transformed, genus_cap, n_cap);

    // y = x + hbar beta ^beta Phi(x); the hbar grade of the beta-term equals
    // the genus grade of phiT
    PolyFn y;
    for (const auto& v : base.index_set()) fn_add(y, 0, {v}, v, Rat(1));
    for (const auto& [key, comps] : phiT)
        for (const auto& [c, val] : comps)
            beta.scan_in(c, [&](const Loop& out, const Rat& bv) {
                fn_add(y, key.first, key.second, out, bv * val);
            });

    // RHS = sum 1/m! F_{g0,1+m}(y^m), grade-collected
    PolyFn rhs;
    const int m_max = n_cap + n_cap / 2 + genus_cap + 1;
    for (int g0 = 0; g0 <= genus_cap; ++g0)
        for (int m = 0; m <= m_max; ++m) {
            if (!stable(g0, m)) continue;
            const auto& F = amps.get(g0, m);
            for (const auto& [key, fv] : F.vals) {
                std::map<std::pair<int, Multi>, Rat> conv{{{0, {}}, Rat(1)}};
                for (const auto& a : key.in) {
                    std::map<std::pair<int, Multi>, Rat> next;
                    for (const auto& [st, v0] : conv)
                        for (const auto& [yk, comps] : y) {
                            auto it = comps.find(a);
                            if (it == comps.end()) continue;
                            int gsum = st.first + yk.first;
                            if (g0 + gsum > genus_cap) continue;
                            Multi mm = st.second;
                            mm.insert(mm.end(), yk.second.begin(), yk.second.end());
                            if (static_cast<int>(mm.size()) > n_cap) continue;
                            std::sort(mm.begin(), mm.end());
                            Rat t = v0 * it->second;
                            auto [jt, fresh] = next.try_emplace({gsum, std::move(mm)}, t);
                            if (!fresh) jt->second += t;
                        }
                    conv = std::move(next);
                    if (conv.empty()) break;
                }
                if (conv.empty()) continue;
                Rat pref = fv / sym_factor(key.in);
                for (const auto& [st, v0] : conv)
                    fn_add(rhs, g0 + st.first, st.second, key.out, pref * v0);
            }
        }

    FixedPointReport rep;
    for (int g = 0; g <= genus_cap && rep.ok; ++g)
        for (int n = 0; n <= n_cap && rep.ok; ++n) {
            if (!stable(g, n)) continue;
            auto slice = [&](const PolyFn& f) {
                PolyFn s;
                for (const auto& [key, comps] : f)
                    if (key.first == g && static_cast<int>(key.second.size()) == n) s[key] = comps;
                return s;
            };
            if (slice(phiT) != slice(rhs)) {
                rep.ok = false;
                rep.first_mismatch = {g, n};
            }
        }
    return rep;
}

FixedPointReport check_fixed_point(const Seed& seed, const LinMap<Rat>& beta, int genus_cap,
                                   int n_cap) {
    Seed transformed = act_bogoliubov(seed, beta);
    Amplitudes<Rat> ampsT(transformed);
    std::map<std::pair<int, int>, MultiTensor<Rat>> phiT;
    for (int g = 0; g <= genus_cap; ++g)
        for (int n = 0; n <= n_cap; ++n)
            if (stable(g, n)) phiT[{g, n}] = ampsT.get(g, n);
    return check_fixed_point_potential(seed, phiT, beta, genus_cap, n_cap);
}

// ---------------------------------------------------------------------------
// translation

TranslationFamily translate_family(const Seed& seed, int degree_cap) {
    const int M = degree_cap;
    const std::vector<Loop> universe = seed.index_set();
    Amplitudes<Rat> amps(seed);

    auto sym_factor = [](const Multi& m) {
        Rat acc(1);
        size_t i = 0;
        while (i < m.size()) {
            size_t j = i;
            while (j < m.size() && m[j] == m[i]) ++j;
            acc *= factorial(static_cast<long>(j - i));
            i = j;
        }
        return acc;
    };

    TranslationFamily fam;
    fam.degree_cap = M;

    // G starts in degree 2, H in degree 1
    for (int m = 2; m <= M; ++m) {
        const auto& F = amps.get(0, m);
        for (const auto& [key, v] : F.vals) {
            auto& g = fam.G[key.out];
            if (g.cap < 0) g.cap = M;
            g.add_term(key.in, v / sym_factor(key.in));
        }
    }
    for (int m = 1; m <= M; ++m) {
        const auto& F = amps.get(0, 1 + m);
        for (const auto& [key, v] : F.vals) {
            size_t p = 0;
            while (p < key.in.size()) {
                size_t q = p;
                while (q < key.in.size() && key.in[q] == key.in[p]) ++q;
                Loop j = key.in[p];
                Multi rest;
                rest.insert(rest.end(), key.in.begin(), key.in.begin() + p);
                rest.insert(rest.end(), key.in.begin() + p + 1, key.in.end());
                auto& h = fam.H[{key.out, j}];
                if (h.cap < 0) h.cap = M;
                h.add_term(rest, v / sym_factor(rest));
                p = q;
            }
        }
    }

    auto Gof = [&](const Loop& i) {
        auto it = fam.G.find(i);
        return it == fam.G.end() ? TruncPoly(Rat(0), M) : it->second;
    };
    auto Hof = [&](const Loop& i, const Loop& j) {
        auto it = fam.H.find({i, j});
        return it == fam.H.end() ? TruncPoly(Rat(0), M) : it->second;
    };

    FamilySeed& f = fam.family;
    f.dim = seed.dim;
    f.cap = seed.cap;
    f.dim_bounded = false;

    for (const auto& [key, v] : seed.A.vals) f.A.add(key.out, key.in, TruncPoly(v, M));
    for (const auto& [key, v] : seed.B.vals)
        f.B.add(std::get<0>(key), std::get<1>(key), std::get<2>(key), TruncPoly(v, M));
    for (const auto& [key, v] : seed.Cconn.vals)
        f.Cconn.add(std::get<0>(key), std::get<1>(key), std::get<2>(key), TruncPoly(v, M));
    for (const auto& [key, v] : seed.Cdisc.vals) f.Cdisc.add(key.out, key.in, TruncPoly(v, M));
    for (const auto& [i, v] : seed.D) f.D[i] = TruncPoly(v, M);

    // homogeneous layers: degree m uses layers < m plus G[>=2], H[>=1]
    for (int m = 1; m <= M; ++m) {
        SeedT<TruncPoly> next = f;

        auto btail = [&](auto&& getter, const Loop& out) {
            TruncPoly acc(Rat(0), M);
            for (const auto& [key, bv] : seed.B.vals) {
                auto [i, a, b2] = key;
                if (i != out) continue;
                TruncPoly low = getter(b2).component(m - 1);
                if (low.is_zero()) continue;
                acc += low.shifted(a).scaled(bv);
            }
            return acc;
        };
        auto ctail = [&](auto&& getter, const Loop& out) {
            TruncPoly acc(Rat(0), M);
            for (const auto& [key, cv] : seed.Cdisc.vals) {
                if (key.out != out) continue;
                Loop a = key.in[0], b = key.in[1];
                std::vector<std::pair<Loop, Loop>> orders{{a, b}};
                if (a != b) orders.push_back({b, a});
                for (auto [aa, bb] : orders)
                    for (int m1 = 2; m1 <= m; ++m1) {
                        TruncPoly ga = Gof(aa).component(m1);
                        if (ga.is_zero()) continue;
                        TruncPoly xb = getter(bb).component(m - m1);
                        if (xb.is_zero()) continue;
                        acc += (ga * xb).scaled(cv);
                    }
            }
            return acc;
        };

        for (const auto& i : universe)
            for (const auto& j : universe)
                for (const auto& k : universe) {
                    if (k < j) continue;
                    auto getA = [&](const Loop& o) { return f.A.at(o, {j, k}); };
                    TruncPoly t = btail(getA, i);
                    seed.B.scan(i, j, [&](const Loop& a, const Rat& bv) {
                        t += Hof(a, k).component(m).scaled(bv);
                    });
                    seed.B.scan(i, k, [&](const Loop& a, const Rat& bv) {
                        t += Hof(a, j).component(m).scaled(bv);
                    });
                    t += ctail(getA, i);
                    for (const auto& [key, cv] : seed.Cdisc.vals) {
                        if (key.out != i) continue;
                        Loop a = key.in[0], b = key.in[1];
                        std::vector<std::pair<Loop, Loop>> orders{{a, b}};
                        if (a != b) orders.push_back({b, a});
                        for (auto [aa, bb] : orders)
                            for (int m1 = 1; m1 <= m - 1; ++m1) {
                                TruncPoly hj = Hof(aa, j).component(m1);
                                if (hj.is_zero()) continue;
                                TruncPoly hk = Hof(bb, k).component(m - m1);
                                if (hk.is_zero()) continue;
                                t += (hj * hk).scaled(cv);
                            }
                    }
                    if (!t.is_zero()) next.A.set(i, {j, k}, f.A.at(i, {j, k}) + t);
                }

        for (const auto& i : universe)
            for (const auto& j : universe)
                for (const auto& k : universe) {
                    auto getB = [&](const Loop& o) { return f.B.at(o, j, k); };
                    TruncPoly t = btail(getB, i);
                    for (const auto& a : universe) {
                        Rat cv = seed.Cdisc.at(i, {a, k});
                        if (cv.is_zero()) continue;
                        t += Hof(a, j).component(m).scaled(cv);
                    }
                    t += ctail(getB, i);
                    if (!t.is_zero()) next.B.vals[{i, j, k}] = f.B.at(i, j, k) + t;
                }

        for (const auto& i : universe)
            for (const auto& j : universe)
                for (const auto& k : universe) {
                    auto getC = [&](const Loop& o) { return f.Cconn.at(o, j, k); };
                    TruncPoly t = btail(getC, i);
                    t += ctail(getC, i);
                    if (!t.is_zero()) next.Cconn.vals[{i, j, k}] = f.Cconn.at(i, j, k) + t;
                }

        for (const auto& i : universe)
            for (const auto& j : universe)
                for (const auto& k : universe) {
                    if (k < j) continue;
                    auto getC = [&](const Loop& o) { return f.Cdisc.at(o, {j, k}); };
                    TruncPoly t = btail(getC, i);
                    t += ctail(getC, i);
                    if (!t.is_zero()) next.Cdisc.set(i, {j, k}, f.Cdisc.at(i, {j, k}) + t);
                }

        for (const auto& i : universe) {
            auto getD = [&](const Loop& o) {
                auto it = f.D.find(o);
                return it == f.D.end() ? TruncPoly(Rat(0), M) : it->second;
            };
            TruncPoly t = btail(getD, i);
            // 1/2 Cconn^{i,k}_a H[m]^a_k: the trace term inherits the factor
            // 1/2 of the connected recursion term it unrolls
            seed.Cconn.scan(i, [&](const Loop& k, const Loop& a, const Rat& cv) {
                t += Hof(a, k).component(m).scaled(cv * Rat(1, 2));
            });
            t += ctail(getD, i);
            if (!t.is_zero()) next.D[i] = getD(i) + t;
        }

        f = std::move(next);
    }

    return fam;
}

EvaluatedTranslation act_translation_eval(const Seed& seed, const std::map<Loop, Rat>& tau,
                                          int degree_cap) {
    if (!seed.graded())
        throw ValidationError("evaluation not guaranteed finite: translation of an ungraded seed");
    for (const auto& [i, v] : tau)
        if (!v.is_zero() && i.k == 0)
            throw ValidationError("evaluation not guaranteed finite: tau has degree-0 support");

    Amplitudes<Rat> amps(seed);
    std::vector<Loop> support;
    for (const auto& [i, v] : tau)
        if (!v.is_zero()) support.push_back(i);

    auto sym_of = [](const Multi& m) {
        Rat acc(1);
        size_t i = 0;
        while (i < m.size()) {
            size_t j = i;
            while (j < m.size() && m[j] == m[i]) ++j;
            acc *= factorial(static_cast<long>(j - i));
            i = j;
        }
        return acc;
    };

    // ^tau G and ^tau H by the evaluated sums; the genus-0 amplitudes must
    // stop feeding them within the degree cap for the evaluation to be exact
    EvaluatedTranslation out;
    out.seed.dim = seed.dim;
    out.seed.cap = seed.cap;
    out.seed.dim_bounded = false;

    for (int m = 2; m <= degree_cap + 2; ++m) {
        bool active = false;
        const auto& F = amps.get(0, m);
        for_multisets(support, m, -1, [&](const Multi& mu) {
            Rat tpow(1);
            for (const auto& v : mu) tpow *= tau.at(v);
            tpow /= sym_of(mu);
            for (const auto& o : seed.index_set()) {
                Rat fv = F.at(o, mu);
                if (fv.is_zero()) continue;
                active = true;
                auto [it, fresh] = out.G.try_emplace(o, fv * tpow);
                if (!fresh) it->second += fv * tpow;
            }
        });
        if (m > degree_cap && active)
            throw CapOverflow("translation evaluation not exact at degree " + std::to_string(m));
    }
    std::erase_if(out.G, [](const auto& kv) { return kv.second.is_zero(); });
    for (int m = 1; m <= degree_cap + 2; ++m) {
        bool active = false;
        const auto& F = amps.get(0, 1 + m);
        for_multisets(support, m, -1, [&](const Multi& mu) {
            Rat tpow(1);
            for (const auto& v : mu) tpow *= tau.at(v);
            tpow /= sym_of(mu);
            for (const auto& [key, fv] : F.vals) {
                // pull one slot out of the stored multiset as the H input
                size_t p = 0;
                while (p < key.in.size()) {
                    size_t q = p;
                    while (q < key.in.size() && key.in[q] == key.in[p]) ++q;
                    Loop jslot = key.in[p];
                    Multi rest;
                    rest.insert(rest.end(), key.in.begin(), key.in.begin() + p);
                    rest.insert(rest.end(), key.in.begin() + p + 1, key.in.end());
                    if (rest == mu) {
                        active = true;
                        out.H.add(key.out, jslot, fv * tpow);
                    }
                    p = q;
                }
            }
        });
        if (m > degree_cap && active)
            throw CapOverflow("translation evaluation not exact at degree " + std::to_string(m));
    }

    // K = id - B(tau (x) .) - Cdisc(^tau G (x) .), inverted exactly: the
    // degree-by-degree geometric series of the formal family can diverge
    // termwise under evaluation even when the resummed operator is a plain
    // rational matrix (e.g. tau proportional to u on a loop seed)
    const std::vector<Loop> universe = seed.index_set();
    LinMap<Rat> K = identity_map(universe);
    for (const auto& [tk, tv] : tau)
        for (const auto& [key, bv] : seed.B.vals) {
            auto [o, a, b] = key;
            if (a == tk) K.add(o, b, -(bv * tv));
        }
    for (const auto& [gk, gv] : out.G)
        for (const auto& [key, cv] : seed.Cdisc.vals) {
            Loop a = key.in[0], b = key.in[1];
            if (a == gk) K.add(key.out, b, -(cv * gv));
            if (b == gk && a != b) K.add(key.out, a, -(cv * gv));
        }
    LinMap<Rat> Kinv;
    try {
        Kinv = invert(K, universe);
    } catch (const ValidationError&) {
        throw ValidationError("translation operator K is singular at this tau");
    }

    auto Hval = [&](const Loop& a, const Loop& j) { return out.H.at(a, j); };

    // A-tilde: K A~ = A + B(id (x) H) + B(id (x) H) sigma + Cdisc(H (x) H)
    for (const auto& i : universe)
        for (const auto& j : universe)
            for (const auto& k : universe) {
                if (k < j) continue;
                Rat rhs = seed.A.at(i, {j, k});
                seed.B.scan(i, j, [&](const Loop& a, const Rat& bv) { rhs += bv * Hval(a, k); });
                seed.B.scan(i, k, [&](const Loop& a, const Rat& bv) { rhs += bv * Hval(a, j); });
                for (const auto& [key, cv] : seed.Cdisc.vals) {
                    if (key.out != i) continue;
                    Loop a = key.in[0], b = key.in[1];
                    rhs += cv * Hval(a, j) * Hval(b, k);
                    if (a != b) rhs += cv * Hval(b, j) * Hval(a, k);
                }
                if (!rhs.is_zero())
                    Kinv.scan_in(i, [&](const Loop& o, const Rat& kv) {
                        // Kinv entries (out, in): A~^o = (K^{-1})^o_i rhs^i
                        out.seed.A.add(o, {j, k}, kv * rhs);
                    });
            }

    // B-tilde, Cconn-tilde, Cdisc-tilde via K^{-1}
    for (const auto& i : universe)
        for (const auto& j : universe)
            for (const auto& k : universe) {
                Rat rhsB = seed.B.at(i, j, k);
                for (const auto& a : universe) {
                    Rat cv = seed.Cdisc.at(i, {a, k});
                    if (!cv.is_zero()) rhsB += cv * Hval(a, j);
                }
                if (!rhsB.is_zero())
                    Kinv.scan_in(i, [&](const Loop& o, const Rat& kv) {
                        out.seed.B.add(o, j, k, kv * rhsB);
                    });
                Rat rhsCc = seed.Cconn.at(i, j, k);
                if (!rhsCc.is_zero())
                    Kinv.scan_in(i, [&](const Loop& o, const Rat& kv) {
                        out.seed.Cconn.add(o, j, k, kv * rhsCc);
                    });
            }
    for (const auto& i : universe)
        for (const auto& j : universe)
            for (const auto& k : universe) {
                if (k < j) continue;
                Rat cv = seed.Cdisc.at(i, {j, k});
                if (cv.is_zero()) continue;
                Kinv.scan_in(i, [&](const Loop& o, const Rat& kv) {
                    out.seed.Cdisc.add(o, {j, k}, kv * cv);
                });
            }

    // D-tilde: K D~ = D + 1/2 Cconn^{i,k}_a H^a_k
    for (const auto& i : universe) {
        Rat rhs(0);
        auto it = seed.D.find(i);
        if (it != seed.D.end()) rhs = it->second;
        seed.Cconn.scan(i, [&](const Loop& k, const Loop& a, const Rat& cv) {
            rhs += Rat(1, 2) * cv * Hval(a, k);
        });
        if (rhs.is_zero()) continue;
        Kinv.scan_in(i, [&](const Loop& o, const Rat& kv) {
            Rat v = kv * rhs;
            if (v.is_zero()) return;
            auto [jt, fresh] = out.seed.D.try_emplace(o, v);
            if (!fresh) jt->second += v;
        });
    }
    std::erase_if(out.seed.D, [](const auto& kv) { return kv.second.is_zero(); });
    return out;
}

MultiTensor<Rat> translated_amplitude_oracle(Amplitudes<Rat>& amps, const std::map<Loop, Rat>& tau,
                                             int g, int n, int m_max) {
    require_stable(g, n);
    std::vector<Loop> support;
    for (const auto& [i, v] : tau)
        if (!v.is_zero()) support.push_back(i);

    auto sym_factor = [](const Multi& m) {
        Rat acc(1);
        size_t i = 0;
        while (i < m.size()) {
            size_t j = i;
            while (j < m.size() && m[j] == m[i]) ++j;
            acc *= factorial(static_cast<long>(j - i));
            i = j;
        }
        return acc;
    };

    MultiTensor<Rat> out(n);
    for (int m = 0; m <= m_max; ++m) {
        if (!stable(g, n + m)) continue;
        const auto& F = amps.get(g, n + m);
        for_multisets(support, m, -1, [&](const Multi& mu) {
            Rat tpow(1);
            for (const auto& v : mu) tpow *= tau.at(v);
            tpow /= sym_factor(mu);
            for (const auto& [key, fv] : F.vals) {
                Multi rest;
                size_t pi = 0;
                for (const auto& x : key.in) {
                    if (pi < mu.size() && x == mu[pi])
                        ++pi;
                    else
                        rest.push_back(x);
                }
                if (pi == mu.size()) out.add(key.out, rest, fv * tpow);
            }
        });
    }
    return out;
}

} // namespace ftr
