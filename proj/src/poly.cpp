#include "ftr/poly.hpp"

#include <algorithm>

namespace ftr {

void TruncPoly::add_term(Mono m, const Rat& c) {
    if (c.is_zero()) return;
    if (cap >= 0 && static_cast<int>(m.size()) > cap) return;
    std::sort(m.begin(), m.end());
    auto [it, fresh] = terms.try_emplace(std::move(m), c);
    if (!fresh) {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

TruncPoly& TruncPoly::operator+=(const TruncPoly& o) {
    cap = effective_cap(o);
    for (const auto& [m, c] : o.terms) {
        if (cap >= 0 && static_cast<int>(m.size()) > cap) continue;
        auto [it, fresh] = terms.try_emplace(m, c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero()) terms.erase(it);
        }
    }
    if (cap >= 0) std::erase_if(terms, [&](const auto& kv) { return static_cast<int>(kv.first.size()) > cap; });
    return *this;
}

TruncPoly& TruncPoly::operator-=(const TruncPoly& o) { return *this += o.operator-(); }

TruncPoly TruncPoly::operator-() const {
    TruncPoly r;
    r.cap = cap;
    for (const auto& [m, c] : terms) r.terms[m] = -c;
    return r;
}

TruncPoly operator*(const TruncPoly& a, const TruncPoly& b) {
    TruncPoly r;
    r.cap = a.effective_cap(b);
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            if (r.cap >= 0 && static_cast<int>(ma.size() + mb.size()) > r.cap) continue;
            TruncPoly::Mono m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            r.add_term(std::move(m), ca * cb);
        }
    return r;
}

TruncPoly TruncPoly::scaled(const Rat& c) const {
    TruncPoly r;
    r.cap = cap;
    if (c.is_zero()) return r;
    for (const auto& [m, v] : terms) r.terms[m] = v * c;
    return r;
}

TruncPoly TruncPoly::shifted(const Loop& v) const {
    TruncPoly r;
    r.cap = cap;
    for (const auto& [m, c] : terms) {
        if (cap >= 0 && static_cast<int>(m.size()) + 1 > cap) continue;
        Mono mm = m;
        mm.insert(std::lower_bound(mm.begin(), mm.end(), v), v);
        r.terms[std::move(mm)] = c;
    }
    return r;
}

TruncPoly TruncPoly::component(int deg) const {
    TruncPoly r;
    r.cap = cap;
    for (const auto& [m, c] : terms)
        if (static_cast<int>(m.size()) == deg) r.terms[m] = c;
    return r;
}

Rat TruncPoly::eval(const std::map<Loop, Rat>& tau) const {
    Rat acc(0);
    for (const auto& [m, c] : terms) {
        Rat t = c;
        for (const auto& v : m) {
            auto it = tau.find(v);
            if (it == tau.end()) {
                t = Rat(0);
                break;
            }
            t *= it->second;
        }
        acc += t;
    }
    return acc;
}

std::string TruncPoly::str() const {
    if (terms.empty()) return "0";
    std::string s;
    for (const auto& [m, c] : terms) {
        if (!s.empty()) s += " + ";
        s += c.str();
        for (const auto& v : m) s += "*e^" + to_string(v);
    }
    return s;
}

Rat mono_sym_factor(const TruncPoly::Mono& m) {
    Rat acc(1);
    size_t i = 0;
    while (i < m.size()) {
        size_t j = i;
        while (j < m.size() && m[j] == m[i]) ++j;
        acc *= factorial(static_cast<long>(j - i));
        i = j;
    }
    return acc;
}

} // namespace ftr
