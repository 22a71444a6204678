#include "ftr/updown.hpp"

namespace ftr {

UpDown make_updown(int dim, int cap, LinMap<Rat> U, LinMap<Rat> D) {
    UpDown ud{dim, cap, std::move(U), std::move(D)};
    std::vector<Loop> universe;
    for (int a = 0; a < dim; ++a)
        for (int k = 0; k <= cap; ++k) universe.push_back({a, k});
    LinMap<Rat> id = identity_map(universe);

    auto truncated = [&](const LinMap<Rat>& m) {
        LinMap<Rat> t;
        for (const auto& [k, v] : m.vals)
            if (k.first.k <= cap && k.second.k <= cap) t.add(k.first, k.second, v);
        return t;
    };
    if (truncated(compose(ud.U, ud.D)) != id || truncated(compose(ud.D, ud.U)) != id)
        throw ValidationError("degenerate up/down-morphisms (U D != id up to cap)");
    return ud;
}

UpDown standard_updown(int dim, int cap) {
    LinMap<Rat> u, d;
    for (int a = 0; a < dim; ++a)
        for (int k = 0; k <= cap; ++k) {
            u.add({a, k}, {a, k}, Rat(1));
            d.add({a, k}, {a, k}, Rat(1));
        }
    return make_updown(dim, cap, std::move(u), std::move(d));
}

} // namespace ftr
