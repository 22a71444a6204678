#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace ftr {

// Index e_{(alpha,k)} = e_alpha u^k of the loop space V_+ = V_0[u].
// Ungraded (finite-dimensional) structures use k = 0 throughout.
struct Loop {
    int32_t a = 0; // basis label in V_0, 0-based
    int32_t k = 0; // u-degree / psi-power

    auto operator<=>(const Loop&) const = default;
};

inline std::string to_string(const Loop& i) {
    return "(" + std::to_string(i.a) + "," + std::to_string(i.k) + ")";
}

// Sorted multiset of input indices.
using Multi = std::vector<Loop>;

inline std::string to_string(const Multi& m) {
    std::string s = "[";
    for (size_t i = 0; i < m.size(); ++i) s += (i ? "," : "") + to_string(m[i]);
    return s + "]";
}

inline long total_degree(const Multi& m) {
    long d = 0;
    for (const auto& i : m) d += i.k;
    return d;
}

} // namespace ftr
