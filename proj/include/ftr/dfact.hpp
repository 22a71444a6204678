#pragma once

#include <initializer_list>
#include <vector>

#include "ftr/rational.hpp"

namespace ftr {

// (m)!! for odd m. Positive m by the usual product, m = -1 the empty product,
// and m <= -3 by the signed-reciprocal extension coming from the Gamma
// function: (-2k+1)!! = (-1)^(k-1) / (2k-3)!!.
Rat odd_double_factorial(long m);

// Ratio of double factorials at shifted arguments:
//   prod_i (2a_i+1)!! / prod_j (2b_j+1)!!
// Entries may be negative; the odd extension above applies.
Rat df_ratio(const std::vector<long>& a, const std::vector<long>& b);
Rat df_ratio(std::initializer_list<long> a, std::initializer_list<long> b);

} // namespace ftr
