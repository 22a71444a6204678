#pragma once

#include <vector>

#include "ftr/engine.hpp"

namespace ftr {

// Commutative associative algebra (V_0, .) with a distinguished vector w:
// an F-topological field theory. Not necessarily unital.
struct Algebra {
    int dim = 1;
    MultiTensor<Rat> P{2};  // product structure constants P^a_{bc}, inputs symmetric
    std::vector<Rat> w;

    Rat p(int a, int b, int c) const { return P.at({a, 0}, {{b, 0}, {c, 0}}); }

    std::vector<Rat> mul(const std::vector<Rat>& x, const std::vector<Rat>& y) const;

    // Throws ValidationError (listing a violating triple) unless the product
    // is associative. Commutativity is structural: P has symmetric inputs.
    void validate() const;

    bool is_unital(std::vector<Rat>* unit_out = nullptr) const;
};

Algebra make_algebra(int dim, const std::vector<std::vector<std::vector<Rat>>>& p,
                     const std::vector<Rat>& w);

// F-TFT amplitudes: F_{g,1+n}(v_1 ... v_n) = v_1 . ... . v_n . w^g.
MultiTensor<Rat> ftft_amplitude(const Algebra& alg, int g, int n);

// The F-Airy structure attached to an F-TFT: A = B = Cdisc = product,
// Cconn(v) = v (x) w, D = w/2. Supported in loop degree 0.
Seed ftft_seed(const Algebra& alg);

} // namespace ftr
