#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ftr/witten.hpp"
#include "test_util.hpp"

using namespace ftr;

TEST_CASE("base cases and pinned values") {
    CHECK(witten_correlator(0, 0, {0, 0}) == Rat(1));
    CHECK(witten_correlator(1, 1, {}) == Rat(1, 24));
    // one step of the constraints: three B-terms of value 1/3
    CHECK(witten_correlator(0, 1, {0, 0, 0}) == Rat(1));
    // B-term 1/120 plus C-term 1/30
    CHECK(witten_correlator(1, 2, {0}) == Rat(1, 24));
    // classical values
    CHECK(witten_correlator(0, 0, {0, 0, 1}) == Rat(1)); // <tau_0^3 tau_1>_0
    CHECK(witten_correlator(1, 0, {2}) == Rat(1, 24));
    CHECK(witten_correlator(2, 4, {}) == Rat(1, 1152));
    CHECK(witten_correlator(2, 2, {3}) == Rat(29, 5760)); // <tau_2 tau_3>_2
    CHECK(witten_correlator(0, 2, {0, 0, 0, 0}) == Rat(1));
}

TEST_CASE("dimension selection") {
    for (int g = 0; g <= 2; ++g)
        for (long ell = 0; ell <= 5; ++ell)
            for (long k = 0; k <= 3; ++k) {
                if (!stable(g, 1)) continue;
                Rat v = witten_correlator(g, ell, {k});
                if (ell + k != 3 * g - 1) CHECK(v.is_zero());
            }
}

TEST_CASE("first slot is not privileged") {
    for (int g = 0; g <= 2; ++g)
        for (long a = 0; a <= 4; ++a)
            for (long b = 0; b <= 4; ++b)
                for (long c = 0; c <= 4; ++c) {
                    if (!stable(g, 2)) continue;
                    Rat v1 = witten_correlator(g, a, {b, c});
                    Rat v2 = witten_correlator(g, b, {a, c});
                    Rat v3 = witten_correlator(g, c, {b, a});
                    CHECK(v1 == v2);
                    CHECK(v1 == v3);
                }
}

TEST_CASE("errors") {
    CHECK_THROWS_AS(witten_correlator(0, 0, {0}), ValidationError);
    CHECK_THROWS_AS(witten_correlator(1, -1, {}), ValidationError);
}
