#pragma once

#include <utility>

#include "ftr/seed.hpp"

namespace ftr {

inline bool stable(int g, int n) { return g >= 0 && n >= 0 && 2 * g - 2 + (1 + n) > 0; }

inline void require_stable(int g, int n) {
    if (!stable(g, n))
        throw ValidationError("unstable topology (g=" + std::to_string(g) + ", 1+n=" + std::to_string(1 + n) + ")");
}

// Enumerate sorted multisets of size n over I, optionally bounded in total
// u-degree. I must be sorted.
template <class F>
void for_multisets(const std::vector<Loop>& I, int n, long degree_bound, F&& f) {
    Multi cur;
    cur.reserve(n);
    auto rec = [&](auto&& self, size_t start, int left, long deg) -> void {
        if (left == 0) {
            f(static_cast<const Multi&>(cur));
            return;
        }
        for (size_t i = start; i < I.size(); ++i) {
            long d = deg + I[i].k;
            if (degree_bound >= 0 && d > degree_bound) continue;
            cur.push_back(I[i]);
            self(self, i, left - 1, d);
            cur.pop_back();
        }
    };
    rec(rec, 0, n, 0);
}

// Enumerate sub-multisets of a sorted multiset together with the complement
// and the number of ways to pick them: prod_v C(mult_v, chosen_v).
template <class F>
void for_submultisets(const Multi& ms, F&& f) {
    std::vector<std::pair<Loop, int>> groups;
    for (const auto& v : ms) {
        if (!groups.empty() && groups.back().first == v)
            ++groups.back().second;
        else
            groups.push_back({v, 1});
    }
    Multi sub, rest;
    auto rec = [&](auto&& self, size_t gi, Rat w) -> void {
        if (gi == groups.size()) {
            f(static_cast<const Multi&>(sub), static_cast<const Multi&>(rest), w);
            return;
        }
        auto [v, mult] = groups[gi];
        for (int take = 0; take <= mult; ++take) {
            size_t s0 = sub.size(), r0 = rest.size();
            for (int i = 0; i < take; ++i) sub.push_back(v);
            for (int i = take; i < mult; ++i) rest.push_back(v);
            self(self, gi + 1, w * binomial(mult, take));
            sub.resize(s0);
            rest.resize(r0);
        }
    };
    rec(rec, 0, Rat(1));
}

// Memoized F-topological-recursion amplitudes of a seed. F_{0,1} and F_{0,2}
// are zero by convention (their summands are skipped); base cases are
// F_{0,3} = A and F_{1,1} = D.
template <class S>
class Amplitudes {
public:
    explicit Amplitudes(SeedT<S> seed) : seed_(std::move(seed)) {}

    const SeedT<S>& seed() const { return seed_; }

    const MultiTensor<S>& get(int g, int n) {
        require_stable(g, n);
        auto it = memo_.find({g, n});
        if (it != memo_.end()) return it->second;
        MultiTensor<S> t = compute(g, n);
        return memo_.emplace(std::make_pair(g, n), std::move(t)).first->second;
    }

    void clear() { memo_.clear(); }

private:
    SeedT<S> seed_;
    std::map<std::pair<int, int>, MultiTensor<S>> memo_;

    MultiTensor<S> compute(int g, int n) {
        if (g == 0 && n == 2) return seed_.A;
        if (g == 1 && n == 0) {
            MultiTensor<S> t(0);
            for (const auto& [i, v] : seed_.D) t.add(i, {}, v);
            return t;
        }

        if (seed_.dim_bounded && seed_.graded() && seed_.cap < 3 * g - 2 + n)
            throw CapOverflow("loop degree " + std::to_string(3 * g - 2 + n) + " exceeds cap " +
                              std::to_string(seed_.cap));

        // Pull in every lower tensor this topology touches.
        if (n >= 1) (void)get(g, n - 1);
        if (g >= 1) (void)get(g - 1, n + 1);
        for (int h = 0; h <= g; ++h)
            for (int m = 0; m <= n; ++m)
                if (stable(h, m) && stable(g - h, n - m)) (void)get(h, m);

        const MultiTensor<S>* Fb = n >= 1 ? &memo_.at({g, n - 1}) : nullptr;
        const MultiTensor<S>* Fc = g >= 1 ? &memo_.at({g - 1, n + 1}) : nullptr;

        const Rat half(1, 2);
        const std::vector<Loop> I = seed_.index_set();
        const long bound = seed_.dim_bounded ? 3 * g - 2 + n : -1;
        const long out_bound = seed_.dim_bounded ? 3 * g - 2 + n : (seed_.graded() ? seed_.cap : 0);

        MultiTensor<S> F(n);
        for_multisets(I, n, bound, [&](const Multi& ms) {
            for (const auto& i0 : I) {
                if (i0.k > out_bound) continue;
                S val{};

                // B terms, one per distinct consumed input
                size_t p = 0;
                while (p < ms.size()) {
                    size_t q = p;
                    while (q < ms.size() && ms[q] == ms[p]) ++q;
                    long mult = static_cast<long>(q - p);
                    Multi rest;
                    rest.reserve(ms.size() - 1);
                    rest.insert(rest.end(), ms.begin(), ms.begin() + p);
                    rest.insert(rest.end(), ms.begin() + p + 1, ms.end());
                    seed_.B.scan(i0, ms[p], [&](const Loop& a, const S& bv) {
                        S sub = Fb->at(a, rest);
                        if (!is_zero(sub)) val += mul_rat(bv * sub, Rat(mult));
                    });
                    p = q;
                }

                // connected term: 1/2 Cconn^{i0,b}_a F_{g-1}^a(ms + b)
                if (Fc) {
                    seed_.Cconn.scan(i0, [&](const Loop& b, const Loop& a, const S& cv) {
                        Multi ext = ms;
                        ext.insert(std::lower_bound(ext.begin(), ext.end(), b), b);
                        S sub = Fc->at(a, ext);
                        if (!is_zero(sub)) val += mul_rat(cv * sub, half);
                    });
                }

                // disconnected term; sorted storage of Cdisc represents both
                // index orders, so off-diagonal entries count once at weight 1
                for (const auto& [ins, cv] : seed_.Cdisc.row(i0)) {
                    Loop a = ins[0], b = ins[1];
                    Rat pref = (a == b) ? half : Rat(1);
                    for (int h = 0; h <= g; ++h) {
                        for_submultisets(ms, [&](const Multi& J, const Multi& Jc, const Rat& ways) {
                            if (!stable(h, static_cast<int>(J.size())) ||
                                !stable(g - h, static_cast<int>(Jc.size())))
                                return;
                            S fa = memo_.at({h, static_cast<int>(J.size())}).at(a, J);
                            if (is_zero(fa)) return;
                            S fb = memo_.at({g - h, static_cast<int>(Jc.size())}).at(b, Jc);
                            if (is_zero(fb)) return;
                            val += mul_rat((*cv) * fa * fb, pref * ways);
                        });
                    }
                }

                if (!is_zero(val)) F.add(i0, ms, val);
            }
        });
        return F;
    }
};

// One-shot amplitude computation.
template <class S>
MultiTensor<S> ftr_amplitude(const SeedT<S>& seed, int g, int n) {
    Amplitudes<S> amps(seed);
    return amps.get(g, n);
}

// Coefficient table of the vector potential Phi(x) = sum hbar^{g-1}/n! F_{g,1+n}(x^n).
// Entries are the bare tensors; the 1/n! convention is carried by consumers.
// Unstable (0,1) and (0,2) entries are absent.
template <class S>
struct VectorPotential {
    std::map<std::pair<int, int>, MultiTensor<S>> coeff;
};

template <class S>
VectorPotential<S> vector_potential(const SeedT<S>& seed, int genus_cap, int n_cap) {
    VectorPotential<S> pot;
    Amplitudes<S> amps(seed);
    for (int g = 0; g <= genus_cap; ++g)
        for (int n = 0; n <= n_cap; ++n)
            if (stable(g, n)) pot.coeff[{g, n}] = amps.get(g, n);
    return pot;
}

} // namespace ftr
