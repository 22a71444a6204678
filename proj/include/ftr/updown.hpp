#pragma once

#include "ftr/tensor.hpp"

namespace ftr {

// Up/down-morphisms (U, D): mutually inverse degree-mixing maps dualising the
// output loop variable. Entries U^{alpha;i,j}_beta are stored as a map from
// (beta, j) to (alpha, i), and likewise D^alpha_{beta;i,j}. Non-degeneracy
// (U o D = id and D o U = id up to the cap) is checked on construction.
struct UpDown {
    int dim = 1;
    int cap = 0;
    LinMap<Rat> U, D;

    // U^{alpha;i,j}_beta and D^alpha_{beta;i,j}
    Rat u(int alpha, int i, int j, int beta) const { return U.at({alpha, i}, {beta, j}); }
    Rat d(int alpha, int beta, int i, int j) const { return D.at({alpha, i}, {beta, j}); }
};

UpDown make_updown(int dim, int cap, LinMap<Rat> U, LinMap<Rat> D);

// U^{alpha;i,j}_beta = delta^alpha_beta delta^{i,j}.
UpDown standard_updown(int dim, int cap);

} // namespace ftr
