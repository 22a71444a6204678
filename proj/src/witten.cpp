#include "ftr/witten.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "ftr/dfact.hpp"

namespace ftr {

namespace {

std::map<std::tuple<int, long, std::vector<long>>, Rat> memo;

Rat eval(int g, long ell, std::vector<long> ks) {
    int n = static_cast<int>(ks.size());
    if (g < 0 || ell < 0) return Rat(0);
    for (long k : ks)
        if (k < 0) return Rat(0);
    if (!stable(g, n)) return Rat(0);
    long dim = 3L * g - 2 + n;
    long total = ell;
    for (long k : ks) total += k;
    if (total != dim) return Rat(0);

    if (g == 0 && n == 2) return (ell == 0 && ks[0] == 0 && ks[1] == 0) ? Rat(1) : Rat(0);
    if (g == 1 && n == 0) return ell == 1 ? Rat(1, 24) : Rat(0);

    std::sort(ks.begin(), ks.end());
    auto key = std::make_tuple(g, ell, ks);
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    Rat acc(0);
    // B terms: one insertion merges with the output slot
    for (int m = 0; m < n; ++m) {
        if (m > 0 && ks[m] == ks[m - 1]) continue;
        long mult = std::count(ks.begin(), ks.end(), ks[m]);
        std::vector<long> rest;
        rest.reserve(n - 1);
        for (int j = 0; j < n; ++j)
            if (j != m) rest.push_back(ks[j]);
        long p = ell + ks[m] - 1;
        if (p < 0) continue;
        acc += Rat(mult) * df_ratio({p}, {ell, ks[m] - 1}) * eval(g, p, rest);
    }
    // splitting terms, present only for ell >= 2
    for (long a = 0; a + 2 <= ell; ++a) {
        long a2 = ell - 2 - a;
        Rat pref = Rat(1, 2) * df_ratio({a, a2}, {ell});
        {
            std::vector<long> ext = ks;
            ext.push_back(a2);
            acc += pref * eval(g - 1, a, ext);
        }
        for (int h = 0; h <= g; ++h) {
            std::vector<std::pair<long, int>> groups;
            for (long k : ks) {
                if (!groups.empty() && groups.back().first == k)
                    ++groups.back().second;
                else
                    groups.push_back({k, 1});
            }
            std::vector<long> J, Jc;
            auto rec = [&](auto&& self, size_t gi, Rat w) -> void {
                if (gi == groups.size()) {
                    Rat left = eval(h, a, J);
                    if (!left.is_zero()) acc += pref * w * left * eval(g - h, a2, Jc);
                    return;
                }
                auto [v, mult] = groups[gi];
                for (int take = 0; take <= mult; ++take) {
                    size_t j0 = J.size(), c0 = Jc.size();
                    for (int i = 0; i < take; ++i) J.push_back(v);
                    for (int i = take; i < mult; ++i) Jc.push_back(v);
                    self(self, gi + 1, w * binomial(mult, take));
                    J.resize(j0);
                    Jc.resize(c0);
                }
            };
            rec(rec, 0, Rat(1));
        }
    }
    memo.emplace(key, acc);
    return acc;
}

} // namespace

Rat witten_correlator(int g, long ell, const std::vector<long>& ks) {
    require_stable(g, static_cast<int>(ks.size()));
    if (ell < 0) throw ValidationError("negative psi power on the output slot");
    for (long k : ks)
        if (k < 0) throw ValidationError("negative psi power");
    return eval(g, ell, ks);
}

} // namespace ftr
