#pragma once

#include <map>
#include <string>

#include "ftr/index.hpp"
#include "ftr/rational.hpp"

namespace ftr {

// Truncated polynomial in commuting variables e^i indexed by loop indices,
// with rational coefficients. Everything of degree > cap is discarded. The
// translation family of an F-Airy structure has entries of this type.
struct TruncPoly {
    using Mono = Multi; // sorted multiset of variables

    int cap = -1; // -1: not yet truncated (constants)
    std::map<Mono, Rat> terms;

    TruncPoly() = default;
    explicit TruncPoly(const Rat& c, int cap_ = -1) : cap(cap_) {
        if (!c.is_zero()) terms[{}] = c;
    }
    static TruncPoly var(const Loop& v, int cap_) {
        TruncPoly p;
        p.cap = cap_;
        if (cap_ != 0) p.terms[{v}] = Rat(1);
        return p;
    }

    bool is_zero() const { return terms.empty(); }
    bool operator==(const TruncPoly& o) const { return terms == o.terms; }

    int effective_cap(const TruncPoly& o) const {
        if (cap < 0) return o.cap;
        if (o.cap < 0) return cap;
        return cap < o.cap ? cap : o.cap;
    }

    void add_term(Mono m, const Rat& c);

    TruncPoly& operator+=(const TruncPoly& o);
    TruncPoly& operator-=(const TruncPoly& o);
    friend TruncPoly operator+(TruncPoly a, const TruncPoly& b) { return a += b; }
    friend TruncPoly operator-(TruncPoly a, const TruncPoly& b) { return a -= b; }
    friend TruncPoly operator*(const TruncPoly& a, const TruncPoly& b);
    TruncPoly& operator*=(const TruncPoly& o) { return *this = *this * o; }
    TruncPoly operator-() const;

    TruncPoly scaled(const Rat& c) const;
    // Multiply by the variable e^v (degree shift by one).
    TruncPoly shifted(const Loop& v) const;
    // Homogeneous degree-m part.
    TruncPoly component(int m) const;

    Rat coeff(const Mono& m) const {
        auto it = terms.find(m);
        return it == terms.end() ? Rat(0) : it->second;
    }

    // Evaluate at e^i -> tau^i.
    Rat eval(const std::map<Loop, Rat>& tau) const;

    std::string str() const;
};

inline bool is_zero(const TruncPoly& p) { return p.is_zero(); }

// multiplicity factorial: prod over distinct variables of (multiplicity!)
Rat mono_sym_factor(const TruncPoly::Mono& m);

} // namespace ftr
