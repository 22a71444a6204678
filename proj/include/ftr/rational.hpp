#pragma once

#include <gmpxx.h>

#include <iosfwd>
#include <string>

#include "ftr/errors.hpp"

namespace ftr {

// Exact rational number. Always in lowest terms with positive denominator;
// every computation in the library goes through this type, there is no
// floating point anywhere in the core.
class Rat {
public:
    Rat() : q_(0) {}
    Rat(int n) : q_(n) {}
    Rat(long n) : q_(static_cast<signed long>(n)) {}
    Rat(long n, long d) : q_(static_cast<signed long>(n), static_cast<signed long>(d)) {
        if (d == 0) throw ValidationError("rational with zero denominator");
        q_.canonicalize();
    }
    explicit Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    static Rat parse(const std::string& s);

    const mpq_class& raw() const { return q_; }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rat operator-() const { return Rat(mpq_class(-q_)); }
    Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
    Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
    Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.is_zero()) throw ValidationError("rational division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) { return mpq_cmp(a.q_.get_mpq_t(), b.q_.get_mpq_t()) == 0; }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) { return mpq_cmp(a.q_.get_mpq_t(), b.q_.get_mpq_t()) < 0; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    Rat inv() const {
        if (is_zero()) throw ValidationError("inverse of zero");
        return Rat(mpq_class(1) / q_);
    }

    // Integer exponent, negative allowed for nonzero values.
    Rat pow(long e) const;

    // "p/q", or "p" when the denominator is 1.
    std::string str() const;

private:
    mpq_class q_;
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

inline bool is_zero(const Rat& r) { return r.is_zero(); }

// Factorials and binomials as exact values; used by symmetry factors and the
// 1/m! weights in translation and tick sums.
Rat factorial(long n);
Rat binomial(long n, long k);

} // namespace ftr
