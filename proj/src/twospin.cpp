#include "ftr/twospin.hpp"

#include "ftr/dfact.hpp"

namespace ftr {

Rat vartheta(int m) {
    if (m < 0) throw ValidationError("vartheta index must be nonnegative");
    static std::vector<Rat> memo{Rat(1)};
    while (static_cast<int>(memo.size()) <= m) {
        int mm = static_cast<int>(memo.size());
        // vartheta_m = 1/(2m+1) - sum_{j=1}^{m-1} vartheta_{m-j} / (2j+1)
        Rat acc(1, 2L * mm + 1);
        for (int j = 1; j <= mm - 1; ++j) acc -= memo[mm - j] / Rat(2L * j + 1);
        memo.push_back(acc);
    }
    return memo[m];
}

Rat vartheta_composition_sum(int m) {
    if (m == 0) return Rat(1);
    // phi_m = sum over compositions (m_1,...,m_r), m_i >= 1, of prod -1/(2 m_i + 1);
    // the listed sequence is -phi_m for m >= 1
    std::function<Rat(int)> phi = [&](int rest) -> Rat {
        if (rest == 0) return Rat(1);
        Rat acc(0);
        for (int first = 1; first <= rest; ++first)
            acc += Rat(-1, 2L * first + 1) * phi(rest - first);
        return acc;
    };
    return -phi(m);
}

Algebra twospin_algebra(const Rat& s) {
    if (s.is_zero()) throw ValidationError("two-spin parameter s must be nonzero");
    std::vector<std::vector<std::vector<Rat>>> p(
        2, std::vector<std::vector<Rat>>(2, std::vector<Rat>(2, Rat(0))));
    p[0][0][0] = Rat(1);
    p[1][1][1] = Rat(1);
    return make_algebra(2, p, {Rat(0), -s * s});
}

GiventalData twospin_givental_data(const Rat& s, int cap) {
    if (s.is_zero()) throw ValidationError("two-spin parameter s must be nonzero");
    GiventalData d = GiventalData::identity(2);
    d.L = {{Rat(1), Rat(0)}, {s.inv(), -s.inv()}};
    for (int m = 1; m <= cap; ++m) {
        std::vector<std::vector<Rat>> rm(2, std::vector<Rat>(2, Rat(0)));
        rm[1][0] = -odd_double_factorial(2 * m - 1) * s.pow(-2 * m);
        d.Rm.push_back(rm);
    }
    for (int m = 2; m <= cap; ++m)
        d.T[m] = {Rat(0), -odd_double_factorial(2 * m - 3) * s.pow(-(2 * m - 2))};
    return d;
}

namespace {

// the twist coefficients entering the closed forms: theta-tail with signs,
// th(0) = 1, th(m) = -vartheta(m) for m >= 1
Rat th(long m) { return m == 0 ? Rat(1) : -vartheta(static_cast<int>(m)); }

} // namespace

Seed twospin_seed_closed(const TwoSpinParams& p) {
    if (p.s.is_zero()) throw ValidationError("two-spin parameter s must be nonzero");
    const Rat& s = p.s;
    const int cap = p.cap;
    Seed seed;
    seed.dim = 2;
    seed.cap = cap;
    seed.dim_bounded = true;

    // basis labels: alpha = 1 <-> a = 0, alpha = 2 <-> a = 1
    const int E1 = 0, E2 = 1;

    // A^{(a,i)}_{(b,j),(c,k)} = [d^a_1 d_{bc}^{11} + d^a_2 (d^{(12)} + d^{(21)} - s d^{22})] d^i_0 d^0_{jk}
    seed.A.set({E1, 0}, {{E1, 0}, {E1, 0}}, Rat(1));
    seed.A.set({E2, 0}, {{E1, 0}, {E2, 0}}, Rat(1));
    seed.A.set({E2, 0}, {{E2, 0}, {E2, 0}}, -s);

    // D^{(a,i)} = 1/24 d^a_2 (s d^i_1 - 1/s d^i_0)
    seed.D[{E2, 1}] = s / Rat(24);
    seed.D[{E2, 0}] = -(s * Rat(24)).inv();

    auto spow = [&](long e) { return s.pow(e); };

    for (long j = 0; j <= cap; ++j)
        for (long k = 0; k <= cap; ++k) {
            // ----- B tensor: first input (b,j) consumed, second (c,k) recursed
            for (long i = 0; i <= cap; ++i) {
                // sheet-1 output
                if (i == k - j + 1) {
                    Rat v = df_ratio({k}, {i, j - 1});
                    if (!v.is_zero()) seed.B.add({E1, static_cast<int>(i)}, {E1, static_cast<int>(j)},
                                                 {E1, static_cast<int>(k)}, v);
                }
                // sheet-2 output, i <= k - j + 1
                long M = k - j + 1 - i;
                if (M < 0) continue;
                Rat pref = spow(-2 * M);
                {
                    // (b,c) = (1,1)
                    Rat v = df_ratio({k}, {k - j + 1, j - 1, i + j - k - 2});
                    for (long pq = 0; pq <= M; ++pq)
                        for (long pp = 0; pp <= pq; ++pp) {
                            long qq = pq - pp;
                            v -= df_ratio({k - qq, pp - 1}, {i, j - 1 + pp, -qq - 1}) * th(M - pp - qq);
                        }
                    v *= pref / s;
                    if (!v.is_zero()) seed.B.add({E2, static_cast<int>(i)}, {E1, static_cast<int>(j)},
                                                 {E1, static_cast<int>(k)}, v);
                }
                {
                    // (b,c) = (2,2)
                    Rat v = -s * df_ratio({k}, {i, j - 1}) * th(M) * pref;
                    if (!v.is_zero()) seed.B.add({E2, static_cast<int>(i)}, {E2, static_cast<int>(j)},
                                                 {E2, static_cast<int>(k)}, v);
                }
                {
                    // (b,c) = (1,2)
                    Rat v(0);
                    for (long pp = 0; pp <= M; ++pp)
                        v += df_ratio({k, pp - 1}, {i, j - 1 + pp}) * th(M - pp);
                    v *= pref;
                    if (!v.is_zero()) seed.B.add({E2, static_cast<int>(i)}, {E1, static_cast<int>(j)},
                                                 {E2, static_cast<int>(k)}, v);
                }
                {
                    // (b,c) = (2,1)
                    Rat v(0);
                    for (long qq = 0; qq <= M; ++qq)
                        v += df_ratio({k - qq}, {i, j - 1, -qq - 1}) * th(M - qq);
                    v *= pref;
                    if (!v.is_zero()) seed.B.add({E2, static_cast<int>(i)}, {E2, static_cast<int>(j)},
                                                 {E1, static_cast<int>(k)}, v);
                }
            }

            // ----- Cconn: outputs ((a,i),(b,j)), input (c,k)
            for (long i = 0; i <= cap; ++i) {
                if (i == j + k + 2) {
                    Rat v = s * df_ratio({j, k}, {i});
                    if (!v.is_zero()) seed.Cconn.add({E1, static_cast<int>(i)}, {E2, static_cast<int>(j)},
                                                     {E1, static_cast<int>(k)}, v);
                }
                long M = j + k + 2 - i;
                if (M < 0) continue;
                Rat pref = spow(-2 * M);
                {
                    // gamma = 1; the s-weights of the two gamma-sectors are
                    // swapped relative to the displayed closed form (fixed
                    // against the pipeline at s = 1, 2, 1/3)
                    Rat v = df_ratio({j, k}, {j + k + 2, i - j - k - 3});
                    for (long m = 0; m <= k && m <= M; ++m)
                        v -= df_ratio({j, k - m}, {i, -m - 1}) * th(M - m);
                    v *= pref;
                    if (!v.is_zero()) seed.Cconn.add({E2, static_cast<int>(i)}, {E2, static_cast<int>(j)},
                                                     {E1, static_cast<int>(k)}, v);
                }
                {
                    // gamma = 2
                    Rat v = s * df_ratio({j, k}, {i}) * th(M) * pref;
                    if (!v.is_zero()) seed.Cconn.add({E2, static_cast<int>(i)}, {E2, static_cast<int>(j)},
                                                     {E2, static_cast<int>(k)}, v);
                }
            }

            // ----- Cdisc (symmetric inputs: fill sorted representatives)
            if (Loop{E1, static_cast<int>(j)} <= Loop{E1, static_cast<int>(k)})
                for (long i = 0; i <= cap; ++i)
                    if (i == j + k + 2) {
                        Rat v = df_ratio({j, k}, {i});
                        if (!v.is_zero())
                            seed.Cdisc.set({E1, static_cast<int>(i)},
                                           {{E1, static_cast<int>(j)}, {E1, static_cast<int>(k)}}, v);
                    }
            for (long i = 0; i <= cap; ++i) {
                long M = j + k + 2 - i;
                if (M < 0) continue;
                Rat pref = spow(-2 * M);
                if (Loop{E1, static_cast<int>(j)} <= Loop{E1, static_cast<int>(k)}) {
                    // (b,c) = (1,1)
                    Rat v = df_ratio({j, k}, {j + k + 2, i - j - k - 3});
                    for (long pq = 0; pq <= M; ++pq)
                        for (long pp = 0; pp <= pq; ++pp) {
                            long qq = pq - pp;
                            v -= df_ratio({j - pp, k - qq}, {i, -pp - 1, -qq - 1}) * th(M - pp - qq);
                        }
                    v *= pref / s;
                    if (!v.is_zero())
                        seed.Cdisc.add({E2, static_cast<int>(i)},
                                       {{E1, static_cast<int>(j)}, {E1, static_cast<int>(k)}}, v);
                }
                if (Loop{E2, static_cast<int>(j)} <= Loop{E2, static_cast<int>(k)}) {
                    // (b,c) = (2,2)
                    Rat v = -s * df_ratio({j, k}, {i}) * th(M) * pref;
                    if (!v.is_zero())
                        seed.Cdisc.add({E2, static_cast<int>(i)},
                                       {{E2, static_cast<int>(j)}, {E2, static_cast<int>(k)}}, v);
                }
                {
                    // (b,c) = (1,2): stored at the sorted key {(1,j),(2,k)}; the
                    // ordered sum over both orders is what the engine reads off
                    Rat v(0);
                    for (long pp = 0; pp <= M; ++pp)
                        v += df_ratio({j - pp, k}, {i, -pp - 1}) * th(M - pp);
                    // plus the (2,1) reading with the roles of (j,k) swapped is
                    // handled when the loop visits (j,k) with labels (2,1); the
                    // symmetric container stores the common value once
                    v *= pref;
                    if (!v.is_zero())
                        seed.Cdisc.add({E2, static_cast<int>(i)},
                                       {{E1, static_cast<int>(j)}, {E2, static_cast<int>(k)}}, v);
                }
            }
        }

    return seed;
}

Seed twospin_seed_pipeline(const TwoSpinParams& p) {
    Algebra alg = twospin_algebra(p.s);
    UpDown ud = standard_updown(2, p.cap);
    // the series data must reach the internal order of the seed assembly
    GiventalData data = twospin_givental_data(p.s, 2 * p.cap + 6);
    return loop_seed_lrt(alg, data, ud, p.cap, LoopFrame::Frame::TransformedStandard);
}

Rat twospin_correlator(const TwoSpinParams& p, const CorrelatorKey& key) {
    require_stable(key.g, static_cast<int>(key.ins.size()));
    Seed s = twospin_seed_closed(p);
    return ftr_amplitude(s, key.g, static_cast<int>(key.ins.size())).at(key.out, key.ins);
}

} // namespace ftr
