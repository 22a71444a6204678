#include "ftr/dfact.hpp"

namespace ftr {

Rat odd_double_factorial(long m) {
    if (m % 2 == 0) throw ValidationError("double factorial defined on odd integers only");
    if (m >= -1) {
        Rat acc(1);
        for (long v = m; v >= 3; v -= 2) acc *= Rat(v);
        return acc;
    }
    // m = -2k+1 with k >= 2
    long k = (1 - m) / 2;
    Rat val = odd_double_factorial(2 * k - 3).inv();
    if ((k - 1) % 2 == 1) val = -val;
    return val;
}

Rat df_ratio(const std::vector<long>& a, const std::vector<long>& b) {
    Rat acc(1);
    for (long ai : a) acc *= odd_double_factorial(2 * ai + 1);
    for (long bj : b) acc /= odd_double_factorial(2 * bj + 1);
    return acc;
}

Rat df_ratio(std::initializer_list<long> a, std::initializer_list<long> b) {
    return df_ratio(std::vector<long>(a), std::vector<long>(b));
}

} // namespace ftr
