#pragma once

#include <map>
#include <vector>

#include "ftr/poly.hpp"
#include "ftr/tensor.hpp"

namespace ftr {

// F-Airy structure (A, B, Cconn, Cdisc, D) on V, together with the degree
// bookkeeping needed to run the recursion:
//   cap < 0   : ungraded, indices are pure basis labels (k = 0);
//   cap >= 0  : graded on the loop space, loop degrees run over 0..cap;
//   dim_bounded : the amplitudes obey the moduli-dimension support bound
//                 (inputs with total u-degree > 3g-3+(n+1) vanish), which
//                 holds for every seed built from cohomology data.
template <class S>
struct SeedT {
    int dim = 1;
    int cap = -1;
    bool dim_bounded = false;

    MultiTensor<S> A{2};  // symmetric inputs
    BiMap<S> B;           // ordered inputs: B(out, consumed, recursed)
    CoMap<S> Cconn;       // outputs (result, traced), one input
    MultiTensor<S> Cdisc{2};
    std::map<Loop, S> D;

    bool graded() const { return cap >= 0; }

    std::vector<Loop> index_set() const {
        std::vector<Loop> I;
        int kmax = graded() ? cap : 0;
        for (int a = 0; a < dim; ++a)
            for (int k = 0; k <= kmax; ++k) I.push_back({a, k});
        return I;
    }
};

using Seed = SeedT<Rat>;
using FamilySeed = SeedT<TruncPoly>;

inline Rat mul_rat(const Rat& s, const Rat& c) { return s * c; }
inline TruncPoly mul_rat(const TruncPoly& s, const Rat& c) { return s.scaled(c); }

} // namespace ftr
