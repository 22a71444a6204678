#pragma once

#include <vector>

#include "ftr/engine.hpp"

namespace ftr {

// psi-class intersection numbers <tau_l tau_{k_1} ... tau_{k_n}>_g computed by
// the Virasoro constraints from the two base cases <tau_i tau_j tau_k>_0 =
// delta_{i,j,k,0} and <tau_i>_1 = delta_{i,1}/24. Unstable or negative-index
// correlators are zero; the value vanishes unless l + sum k_i = 3g - 2 + n.
// The recursion privileges slot 0 but the value does not (tested).
Rat witten_correlator(int g, long ell, const std::vector<long>& ks);

} // namespace ftr
