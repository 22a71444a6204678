#pragma once

#include "ftr/cohft.hpp"

namespace ftr {

// The extended 2-spin theory on V_0 = C e_1 + C e_2 (labels 0 and 1 here),
// diagonal product, w = -s^2 e_2, parametrised by a nonzero rational s.
struct TwoSpinParams {
    Rat s;
    int cap = 6;
};

// vartheta sequence (1, 1/3, 4/45, 44/945, ...): expansion coefficients of
// the twist of the translated product. The convolution recursion is O(m^2);
// the finite composition sum serves as the test oracle.
Rat vartheta(int m);
Rat vartheta_composition_sum(int m); // oracle: sum over compositions of m

Algebra twospin_algebra(const Rat& s);
GiventalData twospin_givental_data(const Rat& s, int cap);

// Closed-form seed tensors of the extended 2-spin theory.
Seed twospin_seed_closed(const TwoSpinParams& p);

// Seed through the generic pipeline (final-standard frame); equals the
// closed form entrywise.
Seed twospin_seed_pipeline(const TwoSpinParams& p);

Rat twospin_correlator(const TwoSpinParams& p, const CorrelatorKey& key);

} // namespace ftr
