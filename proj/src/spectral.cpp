#include "ftr/spectral.hpp"

#include <algorithm>

#include "ftr/dfact.hpp"
#include "ftr/engine.hpp"

namespace ftr {

namespace {

using Series = std::map<int, Rat>; // exponent -> coefficient, truncated

void ser_add(Series& s, int e, const Rat& v) {
    if (v.is_zero()) return;
    auto [it, fresh] = s.try_emplace(e, v);
    if (!fresh) {
        it->second += v;
        if (it->second.is_zero()) s.erase(it);
    }
}

Series ser_mul(const Series& a, const Series& b, int lo, int hi) {
    Series r;
    for (const auto& [ea, va] : a)
        for (const auto& [eb, vb] : b) {
            int e = ea + eb;
            if (e < lo || e > hi) continue;
            ser_add(r, e, va * vb);
        }
    return r;
}

// form composed with the involution: (c zeta^e dzeta)(-zeta) = (-1)^{e+1} c zeta^e dzeta
Series ser_negate_arg_form(const Series& a) {
    Series r;
    for (const auto& [e, v] : a) r[e] = (e % 2 == 0) ? -v : v;
    return r;
}

Rat residue(const Series& s) {
    auto it = s.find(-1);
    return it == s.end() ? Rat(0) : it->second;
}

} // namespace

void LocalCurve::validate() const {
    if (npts < 1 || static_cast<int>(w.size()) != npts || static_cast<int>(y_odd.size()) != npts)
        throw ValidationError("inconsistent local curve data");
    for (int a = 0; a < npts; ++a) {
        auto it = y_odd[a].find(1);
        if (it == y_odd[a].end() || it->second.is_zero())
            throw ValidationError("dy vanishes at ramification point " + std::to_string(a));
        for (const auto& [e, v] : y_odd[a])
            if (e % 2 == 0) throw ValidationError("y_odd carries an even exponent");
    }
}

LocalCurve airy_curve(int order) {
    LocalCurve c;
    c.npts = 1;
    c.w = {Rat(1)};
    c.y_odd = {{{1, Rat(-1)}}};
    c.order = order;
    return c;
}

LocalCurve curve_from_lrt(const Algebra& alg, const GiventalData& data, int order) {
    alg.validate();
    for (int a = 0; a < alg.dim; ++a)
        for (int b = 0; b < alg.dim; ++b)
            for (int c = 0; c < alg.dim; ++c) {
                Rat want = (a == b && b == c) ? Rat(1) : Rat(0);
                if (alg.p(a, b, c) != want)
                    throw ValidationError(
                        "non-semisimple product (canonical idempotent basis required)");
            }
    LocalCurve curve;
    curve.npts = alg.dim;
    curve.w = alg.w;
    curve.order = order;
    curve.y_odd.assign(alg.dim, {});
    for (int a = 0; a < alg.dim; ++a) curve.y_odd[a][1] = Rat(-1);
    // d tau / d x = sum_m T_m zeta^{2m-1} / (2m-1)!!
    for (const auto& [m, vec] : data.T) {
        Rat f = odd_double_factorial(2 * m - 1).inv();
        for (int a = 0; a < alg.dim; ++a)
            if (!vec[a].is_zero()) ser_add(curve.y_odd[a], 2 * m - 1, vec[a] * f);
    }
    // disc block: d(x)d E_R with coefficients E_{ij} / ((2i-1)!!(2j-1)!!)
    auto E = edge_weight_coeffs(data, order);
    for (int i = 0; 2 * i <= order; ++i)
        for (int j = 0; i + j < static_cast<int>(E.size()) && 2 * j <= order; ++j) {
            Rat f = (odd_double_factorial(2 * i - 1) * odd_double_factorial(2 * j - 1)).inv();
            for (int a = 0; a < alg.dim; ++a)
                for (int b = 0; b < alg.dim; ++b) {
                    Rat v = E[i][j][a][b] * f;
                    if (!v.is_zero()) curve.disc_block[{{a, 2 * i}, {b, 2 * j}}] = v;
                }
        }
    return curve;
}

void LaurentForm::validate_residue_free() const {
    for (const auto& s : sheets)
        if (s.count(-1)) throw ValidationError("form carries a residue");
}

namespace {

// xi^{star,(beta,k)} restricted to a sheet, as a coefficient series (dzeta
// implied): the standard double-pole part plus the block's holomorphic part.
Series xi_series(const LocalCurve& c, Star star, int sheet, const Loop& bk, int lo, int hi) {
    Series s;
    if (sheet == bk.a) {
        int e = -2 * bk.k - 2;
        if (e >= lo && e <= hi) ser_add(s, e, odd_double_factorial(2 * bk.k + 1));
    }
    const auto& block = (star == Star::Conn) ? c.conn_block : c.disc_block;
    Rat f = odd_double_factorial(2 * bk.k - 1);
    for (const auto& [key, v] : block) {
        if (key.first.first != sheet || key.second.first != bk.a || key.second.second != 2 * bk.k)
            continue;
        int e = key.first.second;
        if (e >= lo && e <= hi) ser_add(s, e, v * f);
    }
    return s;
}

// kernel denominator inverse on a sheet: 1/(omega01(z) - omega01(sigma z)) =
// 1/(2 zeta y_odd(zeta)) as a Laurent series (1/dzeta implied)
Series kernel_series(const LocalCurve& c, int sheet, int lo, int hi) {
    // 2 zeta y_odd = 2 c1 zeta^2 (1 + t(zeta)), invert term by term
    const auto& y = c.y_odd[sheet];
    Rat c1 = y.at(1) * Rat(2);
    Series t; // the tail of (2 zeta y)/ (c1 zeta^2) - 1
    for (const auto& [e, v] : y) {
        if (e == 1) continue;
        t[e - 1] = v * Rat(2) / c1;
    }
    Series inv{{0, Rat(1)}};
    Series pw{{0, Rat(1)}};
    int guard = hi - lo + 4;
    for (int it = 0; it < guard && !pw.empty(); ++it) {
        pw = ser_mul(pw, t, 0, hi - lo + 4);
        if (pw.empty()) break;
        Series signed_pw;
        for (const auto& [e, v] : pw) signed_pw[e] = (it % 2 == 0) ? -v : v;
        for (const auto& [e, v] : signed_pw) ser_add(inv, e, v);
    }
    Series r;
    for (const auto& [e, v] : inv) {
        int ee = e - 2;
        if (ee >= lo && ee <= hi) ser_add(r, ee, v / c1);
    }
    return r;
}

struct Engine {
    const LocalCurve& c;
    int order;
    std::map<std::pair<int, int>, MultiTensor<Rat>> memo;

    int lo() const { return -order - 4; }
    int hi() const { return order + 4; }

    const MultiTensor<Rat>& get(int g, int n) {
        auto key = std::make_pair(g, n);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        MultiTensor<Rat> t = compute(g, n);
        return memo.emplace(key, std::move(t)).first->second;
    }

    // eps_{(sheet,k)}(zeta) = zeta^{2k+1}/(2k+1)!!, a function
    Series eps_series(int k) const {
        Series s;
        ser_add(s, 2 * k + 1, odd_double_factorial(2 * k + 1).inv());
        return s;
    }

    // omega^star_{0,2}(zeta|sigma zeta) on a sheet, coefficient of dzeta^2
    Series special_11(int sheet) const {
        Series s;
        ser_add(s, -2, Rat(-1, 4));
        const auto& block = c.conn_block;
        for (const auto& [key, v] : block) {
            if (key.first.first != sheet || key.second.first != sheet) continue;
            int a = key.first.second, b = key.second.second;
            Rat coeff = -v;
            if (b % 2) coeff = -coeff;
            if (a + b >= lo() && a + b <= hi()) ser_add(s, a + b, coeff);
        }
        return s;
    }

    // the (alpha_i, k_i)-projected z_i-slice of omega^disc_{0,2}(zeta | z_i)
    // on sheet `sheet`: standard part zeta^{2k}/(2k-1)!! when the sheets
    // match (positive z_i powers and the block's z_i-holomorphic part project
    // to zero; odd polar parts cancel against the swapped summand)
    Series o02_slice(int sheet, const Loop& in) const {
        Series s;
        if (sheet == in.a)
            ser_add(s, 2 * in.k, odd_double_factorial(2 * in.k - 1).inv());
        return s;
    }

    MultiTensor<Rat> compute(int g, int n) {
        require_stable(g, n);
        const int kmax = std::max(0, (order - 2) / 2);

        MultiTensor<Rat> F(n);
        std::vector<Loop> I;
        for (int a = 0; a < c.npts; ++a)
            for (int k = 0; k <= kmax; ++k) I.push_back({a, k});

        if (g >= 1 && stable(g - 1, n + 1)) (void)get(g - 1, n + 1);
        for (int h = 0; h <= g; ++h)
            for (int m = 0; m <= n; ++m)
                if (stable(h, m) && stable(g - h, n - m)) (void)get(h, m);
        if (n >= 1 && stable(g, n - 1)) (void)get(g, n - 1);

        for_multisets(I, n, 3 * g - 2 + n, [&](const Multi& ms) {
            for (int sheet = 0; sheet < c.npts; ++sheet) {
                Series ker = kernel_series(c, sheet, lo(), hi());
                for (int k0 = 0; k0 <= 3 * g - 2 + n && k0 <= kmax; ++k0) {
                    Rat val = entry(g, n, sheet, k0, ms, ker);
                    if (!val.is_zero()) F.add({sheet, k0}, ms, val);
                }
            }
        });
        return F;
    }

    Rat entry(int g, int n, int sheet, int k0, const Multi& ms, const Series& ker) {
        Rat val(0);
        Series eps = eps_series(k0);
        Series base = ser_mul(eps, ker, lo(), hi());

        // connected term
        if (g == 1 && n == 0) {
            val += c.w[sheet] * residue(ser_mul(base, special_11(sheet), lo(), 0));
        } else if (g >= 1) {
            const auto& low = memo.at({g - 1, n + 1});
            // P^conn projections of the two contracted slots
            for (const auto& [key, fv] : low.vals) {
                // match: inputs of `low` = ms + one extra slot c0
                Multi rest;
                Loop extra{-1, -1};
                size_t pi = 0;
                bool ok = true;
                int extras = 0;
                for (const auto& x : key.in) {
                    if (pi < ms.size() && x == ms[pi]) {
                        ++pi;
                    } else {
                        ++extras;
                        extra = x;
                        if (extras > 1) { ok = false; break; }
                    }
                }
                ok = ok && pi == ms.size() && extras == 1;
                if (!ok) continue;
                Series xb = xi_series(c, Star::Conn, sheet, key.out, lo(), hi());
                if (xb.empty()) continue;
                Series xc = ser_negate_arg_form(xi_series(c, Star::Conn, sheet, extra, lo(), hi()));
                if (xc.empty()) continue;
                Series prod = ser_mul(ser_mul(base, xb, lo(), hi()), xc, lo(), 0);
                val += c.w[sheet] * fv * residue(prod);
            }
        }

        // disconnected terms, ordered splits
        for (int h = 0; h <= g; ++h)
            for_submultisets(ms, [&](const Multi& J, const Multi& Jc, const Rat& ways) {
                int h2 = g - h;
                int nJ = static_cast<int>(J.size()), nJc = static_cast<int>(Jc.size());
                bool left02 = (h == 0 && nJ == 1);
                bool right02 = (h2 == 0 && nJc == 1);
                bool leftST = stable(h, nJ);
                bool rightST = stable(h2, nJc);
                if (!(left02 || leftST) || !(right02 || rightST)) return;
                if (left02 && right02) {
                    // omega02(zeta|z_i) omega02(-zeta|z_j)
                    Series sl = o02_slice(sheet, J[0]);
                    Series sr = ser_negate_arg_form(o02_slice(sheet, Jc[0]));
                    if (sl.empty() || sr.empty()) return;
                    Series prod = ser_mul(ser_mul(base, sl, lo(), hi()), sr, lo(), 0);
                    val += ways * residue(prod);
                    return;
                }
                if (left02 && rightST) {
                    const auto& low = memo.at({h2, nJc});
                    Series sl = o02_slice(sheet, J[0]);
                    if (sl.empty()) return;
                    for (const auto& o : sheet_outputs(h2, nJc, Jc)) {
                        Rat fv = low.at(o, Jc);
                        if (fv.is_zero()) continue;
                        Series xr = ser_negate_arg_form(xi_series(c, Star::Disc, sheet, o, lo(), hi()));
                        if (xr.empty()) continue;
                        Series prod = ser_mul(ser_mul(base, sl, lo(), hi()), xr, lo(), 0);
                        val += ways * fv * residue(prod);
                    }
                    return;
                }
                if (leftST && right02) {
                    const auto& low = memo.at({h, nJ});
                    Series sr = ser_negate_arg_form(o02_slice(sheet, Jc[0]));
                    if (sr.empty()) return;
                    for (const auto& o : sheet_outputs(h, nJ, J)) {
                        Rat fv = low.at(o, J);
                        if (fv.is_zero()) continue;
                        Series xl = xi_series(c, Star::Disc, sheet, o, lo(), hi());
                        if (xl.empty()) continue;
                        Series prod = ser_mul(ser_mul(base, xl, lo(), hi()), sr, lo(), 0);
                        val += ways * fv * residue(prod);
                    }
                    return;
                }
                // both stable
                const auto& lowL = memo.at({h, nJ});
                const auto& lowR = memo.at({h2, nJc});
                for (const auto& oL : sheet_outputs(h, nJ, J)) {
                    Rat fL = lowL.at(oL, J);
                    if (fL.is_zero()) continue;
                    Series xl = xi_series(c, Star::Disc, sheet, oL, lo(), hi());
                    if (xl.empty()) continue;
                    Series lbase = ser_mul(base, xl, lo(), hi());
                    for (const auto& oR : sheet_outputs(h2, nJc, Jc)) {
                        Rat fR = lowR.at(oR, Jc);
                        if (fR.is_zero()) continue;
                        Series xr = ser_negate_arg_form(xi_series(c, Star::Disc, sheet, oR, lo(), hi()));
                        if (xr.empty()) continue;
                        val += ways * fL * fR * residue(ser_mul(lbase, xr, lo(), 0));
                    }
                }
            });
        return val;
    }

    std::vector<Loop> sheet_outputs(int g, int n, const Multi&) const {
        std::vector<Loop> outs;
        int kmax = std::min((order - 2) / 2, 3 * g - 2 + n);
        for (int a = 0; a < c.npts; ++a)
            for (int k = 0; k <= kmax; ++k) outs.push_back({a, k});
        return outs;
    }
};

} // namespace

LaurentForm polar_project(const LocalCurve& curve, Star star, const LaurentForm& form) {
    curve.validate();
    form.validate_residue_free();
    if (static_cast<int>(form.sheets.size()) != curve.npts)
        throw ValidationError("form sheet count differs from the curve");
    LaurentForm out;
    out.sheets.assign(curve.npts, {});
    // polar part stays; each pole zeta^{-p-2} (p >= 0) additionally sources
    // the block's holomorphic column at b = p
    for (int sheet = 0; sheet < curve.npts; ++sheet) {
        for (const auto& [e, v] : form.sheets[sheet]) {
            if (e > -2) continue;
            ser_add(out.sheets[sheet], e, v);
            int b = -e - 2;
            const auto& block = (star == Star::Conn) ? curve.conn_block : curve.disc_block;
            for (const auto& [key, bv] : block) {
                if (key.second.first != sheet || key.second.second != b) continue;
                // contributes on the sheet of the first slot
                Rat add = v * bv / Rat(b + 1);
                ser_add(out.sheets[key.first.first], key.first.second, add);
            }
        }
    }
    return out;
}

MultiDiffTable spectral_omega(const LocalCurve& curve, int g, int n, int order, bool audit) {
    require_stable(g, n);
    curve.validate();
    if (order < 2 * (3 * g - 2 + n) + 2) throw ValidationError("insufficient truncation order");

    auto run = [&](int ord) {
        Engine eng{curve, ord, {}};
        MultiDiffTable t;
        for (int gg = 0; gg <= g; ++gg)
            for (int nn = 0; nn <= n + 2 * (g - gg); ++nn)
                if (stable(gg, nn) && 2 * gg - 2 + 1 + nn <= 2 * g - 2 + 1 + n)
                    t.omega[{gg, nn}] = eng.get(gg, nn);
        return t;
    };
    MultiDiffTable t = run(order);
    if (audit) {
        MultiDiffTable t2 = run(order + 4);
        for (const auto& [k, v] : t.omega)
            if (!(t2.omega.at(k) == v))
                throw CapOverflow("truncation audit failed at (g,n) = (" + std::to_string(k.first) +
                                  "," + std::to_string(k.second) + ")");
    }
    return t;
}

MultiTensor<Rat> omega_to_amplitudes(const LocalCurve& curve, const UpDown& ud,
                                     const MultiDiffTable& table, int g, int n) {
    // only the standard identification is wired here: coefficients carry over
    for (const auto& [k, v] : ud.U.vals)
        if (!(k.first == k.second && v == Rat(1)))
            throw ValidationError("omega_to_amplitudes expects the standard up/down-morphisms");
    (void)curve;
    auto it = table.omega.find({g, n});
    if (it == table.omega.end()) throw ValidationError("topology missing from the table");
    return it->second;
}

} // namespace ftr
