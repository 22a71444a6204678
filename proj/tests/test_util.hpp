#pragma once

#include <random>

#include "ftr/algebra.hpp"
#include "ftr/engine.hpp"

namespace ftr::testutil {

inline Rat small_rat(std::mt19937& rng) {
    long num = static_cast<long>(rng() % 9) - 4;
    long den = static_cast<long>(rng() % 3) + 1;
    return Rat(num, den);
}

// Random ungraded seed with small rational entries.
inline Seed random_seed(int dim, std::mt19937& rng) {
    Seed s;
    s.dim = dim;
    s.cap = -1;
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) {
            for (int k = j; k < dim; ++k) {
                s.A.set({i, 0}, {{j, 0}, {k, 0}}, small_rat(rng));
                s.Cdisc.set({i, 0}, {{j, 0}, {k, 0}}, small_rat(rng));
            }
            for (int k = 0; k < dim; ++k) {
                Rat b = small_rat(rng);
                if (!b.is_zero()) s.B.add({i, 0}, {j, 0}, {k, 0}, b);
                Rat c = small_rat(rng);
                if (!c.is_zero()) s.Cconn.add({i, 0}, {j, 0}, {k, 0}, c);
            }
        }
        Rat d = small_rat(rng);
        if (!d.is_zero()) s.D[{i, 0}] = d;
    }
    return s;
}

inline LinMap<Rat> random_linmap(int dim, std::mt19937& rng) {
    LinMap<Rat> b;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            Rat v = small_rat(rng);
            if (!v.is_zero()) b.add({i, 0}, {j, 0}, v);
        }
    return b;
}

// Random commutative associative algebra: a direct sum of 1-dim lines in a
// random invertible frame stays associative; we build it as Q = T diag T^{-1}
// conjugation of a diagonal product.
inline Algebra random_algebra(int dim, std::mt19937& rng, bool unital_frame = false) {
    while (true) {
        std::vector<Rat> lam(dim);
        for (auto& l : lam) l = small_rat(rng);
        std::vector<Loop> universe;
        for (int a = 0; a < dim; ++a) universe.push_back({a, 0});
        LinMap<Rat> T = random_linmap(dim, rng);
        try {
            LinMap<Rat> Ti = invert(T, universe);
            // p^c_{ab} = sum_m T^c... conjugate the diagonal algebra
            // e_a . e_b = delta_ab lambda_a e_a through x -> T^{-1} x
            std::vector<std::vector<std::vector<Rat>>> p(
                dim, std::vector<std::vector<Rat>>(dim, std::vector<Rat>(dim, Rat(0))));
            for (int a = 0; a < dim; ++a)
                for (int b = 0; b < dim; ++b)
                    for (int c = 0; c < dim; ++c) {
                        Rat acc(0);
                        for (int m = 0; m < dim; ++m)
                            acc += Ti.at({c, 0}, {m, 0}) * lam[m] * T.at({m, 0}, {a, 0}) *
                                   T.at({m, 0}, {b, 0});
                        p[c][a][b] = acc;
                    }
            std::vector<Rat> w(dim);
            for (auto& x : w) x = small_rat(rng);
            if (unital_frame) {
                // unital requires all lambda nonzero; unit = T^{-1} (1/lambda)
                bool ok = true;
                for (const auto& l : lam) ok = ok && !l.is_zero();
                if (!ok) continue;
            }
            return make_algebra(dim, p, w);
        } catch (const ValidationError&) {
            continue;
        }
    }
}

// Semisimple algebra in its canonical idempotent basis (diagonal product).
inline Algebra diagonal_algebra(const std::vector<Rat>& w) {
    int dim = static_cast<int>(w.size());
    std::vector<std::vector<std::vector<Rat>>> p(
        dim, std::vector<std::vector<Rat>>(dim, std::vector<Rat>(dim, Rat(0))));
    for (int a = 0; a < dim; ++a) p[a][a][a] = Rat(1);
    return make_algebra(dim, p, w);
}

} // namespace ftr::testutil
