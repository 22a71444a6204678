#include "ftr/tensor.hpp"

namespace ftr {

LinMap<Rat> compose(const LinMap<Rat>& f, const LinMap<Rat>& g) {
    LinMap<Rat> h;
    for (const auto& [kg, vg] : g.vals)
        f.scan_in(kg.first, [&](const Loop& out, const Rat& vf) { h.add(out, kg.second, vf * vg); });
    return h;
}

LinMap<Rat> identity_map(const std::vector<Loop>& universe) {
    LinMap<Rat> id;
    for (const auto& i : universe) id.add(i, i, Rat(1));
    return id;
}

LinMap<Rat> invert(const LinMap<Rat>& f, const std::vector<Loop>& universe) {
    const size_t n = universe.size();
    std::map<Loop, size_t> pos;
    for (size_t i = 0; i < n; ++i) pos[universe[i]] = i;

    // Dense Gaussian elimination on [M | I] over Q.
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(2 * n, Rat(0)));
    for (const auto& [k, v] : f.vals) {
        auto io = pos.find(k.first), ii = pos.find(k.second);
        if (io == pos.end() || ii == pos.end())
            throw ValidationError("linear map has support outside the index universe");
        m[io->second][ii->second] = v;
    }
    for (size_t i = 0; i < n; ++i) m[i][n + i] = Rat(1);

    for (size_t col = 0; col < n; ++col) {
        size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) throw ValidationError("non-invertible map");
        std::swap(m[piv], m[col]);
        Rat inv = m[col][col].inv();
        for (size_t j = col; j < 2 * n; ++j) m[col][j] *= inv;
        for (size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col].is_zero()) continue;
            Rat c = m[r][col];
            for (size_t j = col; j < 2 * n; ++j) m[r][j] -= c * m[col][j];
        }
    }

    LinMap<Rat> g;
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c)
            if (!m[r][n + c].is_zero()) g.add(universe[r], universe[c], m[r][n + c]);
    return g;
}

} // namespace ftr
