#include "ftr/laplace.hpp"

#include "ftr/dfact.hpp"

namespace ftr {

namespace {

std::vector<std::vector<Rat>> mat_mul(const std::vector<std::vector<Rat>>& a,
                                      const std::vector<std::vector<Rat>>& b) {
    int n = static_cast<int>(a.size());
    std::vector<std::vector<Rat>> c(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            if (a[i][k].is_zero()) continue;
            for (int j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

std::vector<std::vector<Rat>> mat_inv(const std::vector<std::vector<Rat>>& m) {
    int n = static_cast<int>(m.size());
    std::vector<Loop> universe;
    for (int a = 0; a < n; ++a) universe.push_back({a, 0});
    LinMap<Rat> lm;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) lm.add({i, 0}, {j, 0}, m[i][j]);
    LinMap<Rat> li = invert(lm, universe); // throws on degenerate L
    std::vector<std::vector<Rat>> r(n, std::vector<Rat>(n, Rat(0)));
    for (const auto& [k, v] : li.vals) r[k.first.a][k.second.a] = v;
    return r;
}

std::vector<Rat> mat_apply(const std::vector<std::vector<Rat>>& m, const std::vector<Rat>& v) {
    int n = static_cast<int>(m.size());
    std::vector<Rat> r(n, Rat(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r[i] += m[i][j] * v[j];
    return r;
}

} // namespace

std::vector<Rat> GiventalData::r_coeff(int m, const std::vector<Rat>& v) const {
    if (m == 0) return v;
    if (m > static_cast<int>(Rm.size())) return std::vector<Rat>(dim, Rat(0));
    return mat_apply(Rm[m - 1], v);
}

std::vector<std::vector<Rat>> GiventalData::rinv_series(int order) const {
    std::vector<std::vector<std::vector<Rat>>> rho(order + 1);
    std::vector<std::vector<Rat>> id(dim, std::vector<Rat>(dim, Rat(0)));
    for (int i = 0; i < dim; ++i) id[i][i] = Rat(1);
    rho[0] = id;
    auto Rof = [&](int m) {
        if (m == 0) return id;
        if (m > static_cast<int>(Rm.size()))
            return std::vector<std::vector<Rat>>(dim, std::vector<Rat>(dim, Rat(0)));
        return Rm[m - 1];
    };
    for (int m = 1; m <= order; ++m) {
        std::vector<std::vector<Rat>> acc(dim, std::vector<Rat>(dim, Rat(0)));
        for (int q = 1; q <= m; ++q) {
            auto t = mat_mul(rho[m - q], Rof(q));
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) acc[i][j] -= t[i][j];
        }
        rho[m] = acc;
    }
    // flatten unused; return rho as matrices
    std::vector<std::vector<Rat>> flat;
    flat.reserve(order + 1);
    for (auto& m : rho) {
        std::vector<Rat> row;
        for (auto& r : m)
            for (auto& v : r) row.push_back(v);
        flat.push_back(std::move(row));
    }
    return flat;
}

std::vector<std::vector<std::vector<std::vector<Rat>>>> edge_weight_coeffs(const GiventalData& g,
                                                                           int order) {
    int dim = g.dim;
    std::vector<std::vector<Rat>> id(dim, std::vector<Rat>(dim, Rat(0)));
    for (int i = 0; i < dim; ++i) id[i][i] = Rat(1);
    auto Rof = [&](int m) {
        if (m == 0) return id;
        if (m > static_cast<int>(g.Rm.size()))
            return std::vector<std::vector<Rat>>(dim, std::vector<Rat>(dim, Rat(0)));
        return g.Rm[m - 1];
    };
    auto flat = g.rinv_series(order + 1);
    auto rho = [&](int m) {
        std::vector<std::vector<Rat>> r(dim, std::vector<Rat>(dim, Rat(0)));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) r[i][j] = flat[m][i * dim + j];
        return r;
    };

    // N_{pq} = [ (p,q) = (0,0) ] id - rho_p R_q (-1)^q, numerator of the edge weight
    auto N = [&](int p, int q) {
        auto t = mat_mul(rho(p), Rof(q));
        std::vector<std::vector<Rat>> r(dim, std::vector<Rat>(dim, Rat(0)));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                Rat v = -t[i][j];
                if (q % 2) v = -v;
                if (p == 0 && q == 0 && i == j) v += Rat(1);
                r[i][j] = v;
            }
        return r;
    };

    // divide by (u0 + u): E_{p,q} = N_{p+1,q} - E_{p+1,q-1}; rho is generated
    // through order+1, so E is kept for p + q <= order
    int sz = order + 1;
    std::vector<std::vector<std::vector<std::vector<Rat>>>> E(
        sz, std::vector<std::vector<std::vector<Rat>>>(sz));
    for (int p = sz - 1; p >= 0; --p)
        for (int q = 0; q + p < sz; ++q) {
            auto val = N(p + 1, q);
            if (q >= 1 && p + 1 < sz) {
                const auto& prev = E[p + 1][q - 1];
                for (int i = 0; i < dim; ++i)
                    for (int j = 0; j < dim; ++j) val[i][j] -= prev[i][j];
            }
            E[p][q] = std::move(val);
        }
    return E;
}

void form_add(Form& f, int alpha, int j, const Rat& v) {
    if (v.is_zero()) return;
    auto [it, fresh] = f.try_emplace({alpha, j}, v);
    if (!fresh) {
        it->second += v;
        if (it->second.is_zero()) f.erase(it);
    }
}

std::map<Loop, Rat> laplace_tau(const GiventalData& g) {
    std::map<Loop, Rat> tau;
    for (const auto& [m, vec] : g.T)
        for (int a = 0; a < g.dim; ++a)
            if (!vec[a].is_zero()) tau[{a, m}] = vec[a];
    return tau;
}

LoopFrame::LoopFrame(Algebra a, UpDown u, GiventalData g, int cap_, Frame frame)
    : alg(std::move(a)), ud(std::move(u)), data(std::move(g)), cap(cap_) {
    alg.validate();
    const int dim = alg.dim;
    if (ud.dim != dim || data.dim != dim) throw ValidationError("dimension mismatch in loop frame");
    if (ud.cap < cap) throw CapOverflow("up/down cap below requested series order");

    // theta tail: S = sum_{k>=1} (d tau theta_0)^k with (d tau theta_0)_j = T_{j+1}/(2j+1)!!
    std::map<int, std::vector<Rat>> gser;
    for (const auto& [m, vec] : data.T) {
        if (m < 2) throw ValidationError("translation must start at u^2");
        std::vector<Rat> coeff(dim);
        Rat f = odd_double_factorial(2 * (m - 1) + 1).inv();
        for (int i = 0; i < dim; ++i) coeff[i] = vec[i] * f;
        gser[m - 1] = coeff;
    }
    const int tail_order = cap + 2;
    std::map<int, std::vector<Rat>> cur = gser, total;
    auto add_into = [&](std::map<int, std::vector<Rat>>& dst, const std::map<int, std::vector<Rat>>& src) {
        for (const auto& [m, v] : src) {
            auto& slot = dst[m];
            if (slot.empty()) slot.assign(dim, Rat(0));
            for (int i = 0; i < dim; ++i) slot[i] += v[i];
        }
    };
    while (!cur.empty()) {
        add_into(total, cur);
        std::map<int, std::vector<Rat>> next;
        for (const auto& [m1, v1] : cur)
            for (const auto& [m2, v2] : gser) {
                if (m1 + m2 > tail_order) continue;
                auto prod = alg.mul(v1, v2);
                auto& slot = next[m1 + m2];
                if (slot.empty()) slot.assign(dim, Rat(0));
                for (int i = 0; i < dim; ++i) slot[i] += prod[i];
            }
        std::erase_if(next, [&](const auto& kv) {
            for (const auto& v : kv.second)
                if (!v.is_zero()) return false;
            return true;
        });
        cur = std::move(next);
    }
    std::erase_if(total, [&](const auto& kv) {
        for (const auto& v : kv.second)
            if (!v.is_zero()) return false;
        return true;
    });
    theta_tail = std::move(total);

    // lambda maps and their inverses
    auto Linv = mat_inv(data.L);
    auto flat = data.rinv_series(cap);
    auto rho = [&](int m) {
        std::vector<std::vector<Rat>> r(dim, std::vector<Rat>(dim, Rat(0)));
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) r[i][j] = flat[m][i * dim + j];
        return r;
    };
    std::vector<std::vector<Rat>> id(dim, std::vector<Rat>(dim, Rat(0)));
    for (int i = 0; i < dim; ++i) id[i][i] = Rat(1);
    auto Rof = [&](int m) {
        if (m == 0) return id;
        if (m > static_cast<int>(data.Rm.size()))
            return std::vector<std::vector<Rat>>(dim, std::vector<Rat>(dim, Rat(0)));
        return data.Rm[m - 1];
    };
    for (int m = 0; m <= cap; ++m) {
        auto LR = mat_mul(data.L, Rof(m));       // u^m coefficient of L R(u)
        auto RiLi = mat_mul(rho(m), Linv);       // u^m coefficient of R^{-1}(u) L^{-1}
        for (int k = 0; k + m <= cap; ++k)
            for (int i = 0; i < dim; ++i)
                for (int j = 0; j < dim; ++j) {
                    Rat s = LR[i][j], si = RiLi[i][j];
                    Rat t = (m % 2) ? -s : s, ti = (m % 2) ? -si : si;
                    lam_s.add({i, k + m}, {j, k}, s);
                    lam_t.add({i, k + m}, {j, k}, t);
                    lam_s_inv.add({i, k + m}, {j, k}, si);
                    lam_t_inv.add({i, k + m}, {j, k}, ti);
                }
    }

    // U_LR and Delta_LR
    auto truncate = [&](LinMap<Rat> m) {
        std::erase_if(m.vals, [&](const auto& kv) {
            return kv.first.first.k > cap || kv.first.second.k > cap;
        });
        return m;
    };
    // mu_LR[eps_beta^j] = [L R(-u) eps_beta^j]_-, truncated to j-m >= 0
    for (int m = 0; m <= cap; ++m) {
        auto C = mat_mul(data.L, Rof(m));
        auto Ci = mat_mul(rho(m), Linv);
        for (int j = m; j <= cap; ++j)
            for (int i = 0; i < dim; ++i)
                for (int jj = 0; jj < dim; ++jj) {
                    Rat c = (m % 2) ? -C[i][jj] : C[i][jj];
                    Rat ci = (m % 2) ? -Ci[i][jj] : Ci[i][jj];
                    mu_LR.add({i, j - m}, {jj, j}, c);
                    mu_LR_inv.add({i, j - m}, {jj, j}, ci);
                }
    }
    if (frame == Frame::TransformOfStandard) {
        U_LR = truncate(compose(lam_t, ud.U));
        Delta_LR = truncate(compose(ud.D, lam_t_inv));
    } else {
        U_LR = truncate(compose(ud.U, mu_LR));
        Delta_LR = truncate(compose(mu_LR_inv, ud.D));
    }

    // d o E_R
    auto E = edge_weight_coeffs(data, cap + 1);
    for (int beta = 0; beta < dim; ++beta)
        for (int k = 0; k <= cap; ++k) {
            Form f;
            for (int i = 0; i + k <= cap + 1; ++i) {
                const auto& mat = E[i][k];
                for (int alphaI = 0; alphaI < dim; ++alphaI) {
                    Rat v = mat[alphaI][beta];
                    if (v.is_zero()) continue;
                    if (i % 2) v = -v;
                    form_add(f, alphaI, -i - 1, v);
                }
            }
            if (!f.empty()) dER[{beta, k}] = std::move(f);
        }
}

Form LoopFrame::mul_T(const Form& a, const Form& b) const {
    Form out;
    for (const auto& [ka, va] : a)
        for (const auto& [kb, vb] : b) {
            std::vector<Rat> ea(alg.dim, Rat(0)), eb(alg.dim, Rat(0));
            ea[ka.first] = Rat(1);
            eb[kb.first] = Rat(1);
            auto v0 = alg.mul(ea, eb);
            bool any = false;
            for (const auto& x : v0) any = any || !x.is_zero();
            if (!any) continue;
            Rat c = va * vb;
            long base = ka.second + kb.second + 2;
            // m = 0 term
            if (base >= 0 && base <= cap) {
                Rat df = df_ratio({ka.second, kb.second}, {base});
                for (int g = 0; g < alg.dim; ++g) form_add(out, g, static_cast<int>(base), c * df * v0[g]);
            }
            // theta tail
            for (const auto& [m, S] : theta_tail) {
                long t = base - m;
                if (t < 0 || t > cap) continue;
                auto v1 = alg.mul(v0, S);
                Rat df = df_ratio({ka.second, kb.second}, {t});
                for (int g = 0; g < alg.dim; ++g) form_add(out, g, static_cast<int>(t), c * df * v1[g]);
            }
        }
    return out;
}

Form LoopFrame::d_lr(const Loop& in) const {
    Form f;
    lam_s_inv.scan_in(in, [&](const Loop& o, const Rat& v) {
        Rat c = (o.k % 2) ? -v : v;
        form_add(f, o.a, -o.k - 1, c);
    });
    return f;
}

Form LoopFrame::delta_lr_dressed(const Loop& in) const {
    Form f;
    Delta_LR.scan_in(in, [&](const Loop& o, const Rat& v) {
        form_add(f, o.a, o.k, v);
        auto it = dER.find({o.a, o.k});
        if (it != dER.end())
            for (const auto& [k2, v2] : it->second) form_add(f, k2.first, k2.second, v * v2);
    });
    return f;
}

PlusVec LoopFrame::ubar(const Form& f) const {
    PlusVec out;
    for (const auto& [k, v] : f) {
        if (k.second < 0) continue;
        U_LR.scan_in({k.first, k.second}, [&](const Loop& o, const Rat& uv) {
            auto [it, fresh] = out.try_emplace(o, uv * v);
            if (!fresh) {
                it->second += uv * v;
                if (it->second.is_zero()) out.erase(it);
            }
        });
    }
    return out;
}

std::vector<std::pair<Form, PlusVec>> LoopFrame::kappa_T(const Form& chi) const {
    std::vector<std::pair<Form, PlusVec>> out;
    for (int l = 0; l <= cap; ++l) {
        PlusVec right;
        Rat dfl = odd_double_factorial(2 * l + 1);
        for (int a = 0; a < alg.dim; ++a)
            if (!alg.w[a].is_zero()) right[{a, l}] = alg.w[a] * dfl;
        if (right.empty()) continue;
        Form left;
        for (const auto& [k, v] : chi) {
            long base = k.second + l + 2;
            if (base >= 0 && base <= cap) {
                Rat df = df_ratio({k.second}, {base});
                form_add(left, k.first, static_cast<int>(base), v * df);
            }
            std::vector<Rat> eb(alg.dim, Rat(0));
            eb[k.first] = Rat(1);
            for (const auto& [m, S] : theta_tail) {
                long t = base - m;
                if (t < 0 || t > cap) continue;
                auto v1 = alg.mul(eb, S);
                Rat df = df_ratio({k.second}, {t});
                for (int g = 0; g < alg.dim; ++g)
                    form_add(left, g, static_cast<int>(t), v * df * v1[g]);
            }
        }
        if (!left.empty()) out.push_back({std::move(left), std::move(right)});
    }
    return out;
}

Form LoopFrame::varpi_T() const {
    Form f;
    const Rat quarter(1, 4);
    for (int a = 0; a < alg.dim; ++a)
        if (!alg.w[a].is_zero()) form_add(f, a, 1, quarter * alg.w[a] * df_ratio({}, {1}));
    for (const auto& [m, S] : theta_tail) {
        long t = 1 - m;
        if (t < 0) continue; // negative exponents are annihilated by Ubar
        auto v = alg.mul(alg.w, S);
        Rat df = df_ratio({}, {t});
        for (int g = 0; g < alg.dim; ++g) form_add(f, g, static_cast<int>(t), quarter * df * v[g]);
    }
    return f;
}

} // namespace ftr
