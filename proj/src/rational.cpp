#include "ftr/rational.hpp"

#include <cctype>
#include <ostream>

namespace ftr {

Rat Rat::parse(const std::string& s) {
    if (s.empty()) throw ParseError("empty rational");
    std::string num = s, den = "1";
    if (auto pos = s.find('/'); pos != std::string::npos) {
        num = s.substr(0, pos);
        den = s.substr(pos + 1);
    }
    auto digits = [](const std::string& t) {
        if (t.empty()) return false;
        size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
        return true;
    };
    if (!digits(num) || !digits(den)) throw ParseError("bad rational '" + s + "'");
    mpq_class q;
    if (q.set_str(num + "/" + den, 10) != 0) throw ParseError("bad rational '" + s + "'");
    if (q.get_den() == 0) throw ParseError("zero denominator in '" + s + "'");
    q.canonicalize();
    return Rat(q);
}

Rat Rat::pow(long e) const {
    if (e == 0) return Rat(1);
    Rat base = e > 0 ? *this : inv();
    long k = e > 0 ? e : -e;
    Rat acc(1);
    while (k > 0) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

std::string Rat::str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

Rat factorial(long n) {
    if (n < 0) throw ValidationError("factorial of negative integer");
    mpz_class z;
    mpz_fac_ui(z.get_mpz_t(), static_cast<unsigned long>(n));
    return Rat(mpq_class(z));
}

Rat binomial(long n, long k) {
    if (k < 0 || k > n) return Rat(0);
    mpz_class z;
    mpz_bin_uiui(z.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return Rat(mpq_class(z));
}

} // namespace ftr
