#include "ftr/algebra.hpp"

namespace ftr {

std::vector<Rat> Algebra::mul(const std::vector<Rat>& x, const std::vector<Rat>& y) const {
    std::vector<Rat> z(dim, Rat(0));
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
            if (x[a].is_zero() || y[b].is_zero()) continue;
            for (int c = 0; c < dim; ++c) z[c] += p(c, a, b) * x[a] * y[b];
        }
    return z;
}

void Algebra::validate() const {
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int c = 0; c < dim; ++c)
                for (int l = 0; l < dim; ++l) {
                    Rat lhs(0), rhs(0);
                    for (int m = 0; m < dim; ++m) {
                        lhs += p(m, a, b) * p(l, m, c);
                        rhs += p(m, b, c) * p(l, m, a);
                    }
                    if (lhs != rhs)
                        throw ValidationError("product not associative on triple (" + std::to_string(a) +
                                              "," + std::to_string(b) + "," + std::to_string(c) + ")");
                }
}

bool Algebra::is_unital(std::vector<Rat>* unit_out) const {
    // Solve e . e_b = e_b for all b.
    std::vector<Loop> universe;
    for (int a = 0; a < dim; ++a) universe.push_back({a, 0});
    // Build the dim^2 x dim system M e = rhs by Gaussian elimination.
    int rows = dim * dim;
    std::vector<std::vector<Rat>> m(rows, std::vector<Rat>(dim + 1, Rat(0)));
    for (int b = 0; b < dim; ++b)
        for (int c = 0; c < dim; ++c) {
            for (int a = 0; a < dim; ++a) m[b * dim + c][a] = p(c, a, b);
            m[b * dim + c][dim] = (b == c) ? Rat(1) : Rat(0);
        }
    int rank = 0;
    for (int col = 0; col < dim && rank < rows; ++col) {
        int piv = -1;
        for (int r = rank; r < rows; ++r)
            if (!m[r][col].is_zero()) { piv = r; break; }
        if (piv < 0) return false; // free column: no unique solve; treat as non-unital
        std::swap(m[piv], m[rank]);
        Rat inv = m[rank][col].inv();
        for (int j = 0; j <= dim; ++j) m[rank][j] *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == rank || m[r][col].is_zero()) continue;
            Rat cc = m[r][col];
            for (int j = 0; j <= dim; ++j) m[r][j] -= cc * m[rank][j];
        }
        ++rank;
    }
    for (int r = rank; r < rows; ++r)
        if (!m[r][dim].is_zero()) return false;
    std::vector<Rat> e(dim, Rat(0));
    for (int r = 0; r < rank; ++r) {
        int lead = -1;
        for (int c = 0; c < dim; ++c)
            if (!m[r][c].is_zero()) { lead = c; break; }
        if (lead >= 0) e[lead] = m[r][dim];
    }
    // verify
    for (int b = 0; b < dim; ++b) {
        std::vector<Rat> eb(dim, Rat(0));
        eb[b] = Rat(1);
        if (mul(e, eb) != eb) return false;
    }
    if (unit_out) *unit_out = e;
    return true;
}

Algebra make_algebra(int dim, const std::vector<std::vector<std::vector<Rat>>>& p,
                     const std::vector<Rat>& w) {
    Algebra alg;
    alg.dim = dim;
    alg.w = w;
    for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b)
            for (int c = b; c < dim; ++c) {
                if (p[a][b][c] != p[a][c][b]) throw ValidationError("product not commutative");
                alg.P.set({a, 0}, {{b, 0}, {c, 0}}, p[a][b][c]);
            }
    alg.validate();
    return alg;
}

MultiTensor<Rat> ftft_amplitude(const Algebra& alg, int g, int n) {
    require_stable(g, n);
    std::vector<Loop> I;
    for (int a = 0; a < alg.dim; ++a) I.push_back({a, 0});

    std::vector<Rat> wg(alg.dim, Rat(0));
    bool have = false;
    for (int i = 0; i < g; ++i) {
        wg = have ? alg.mul(wg, alg.w) : alg.w;
        have = true;
    }

    MultiTensor<Rat> F(n);
    for_multisets(I, n, -1, [&](const Multi& ms) {
        std::vector<Rat> acc = wg;
        bool started = have;
        for (const auto& i : ms) {
            std::vector<Rat> ei(alg.dim, Rat(0));
            ei[i.a] = Rat(1);
            acc = started ? alg.mul(acc, ei) : ei;
            started = true;
        }
        for (int a = 0; a < alg.dim; ++a)
            if (!acc[a].is_zero()) F.add({a, 0}, ms, acc[a]);
    });
    return F;
}

Seed ftft_seed(const Algebra& alg) {
    alg.validate();
    Seed s;
    s.dim = alg.dim;
    s.cap = -1;
    for (const auto& [key, v] : alg.P.vals) {
        s.A.add(key.out, key.in, v);
        s.Cdisc.add(key.out, key.in, v);
        // ordered B: both input orders carry the same value
        s.B.add(key.out, key.in[0], key.in[1], v);
        if (key.in[0] != key.in[1]) s.B.add(key.out, key.in[1], key.in[0], v);
    }
    for (int a = 0; a < alg.dim; ++a) {
        // Cconn(e_a) = e_a (x) w
        for (int b = 0; b < alg.dim; ++b)
            if (!alg.w[b].is_zero()) s.Cconn.add({a, 0}, {b, 0}, {a, 0}, alg.w[b]);
        Rat d = alg.w[a] * Rat(1, 2);
        if (!d.is_zero()) s.D[{a, 0}] = d;
    }
    return s;
}

} // namespace ftr
