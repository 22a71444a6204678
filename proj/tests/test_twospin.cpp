#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ftr/twospin.hpp"
#include "test_util.hpp"

using namespace ftr;
using namespace ftr::testutil;

TEST_CASE("vartheta values and oracle") {
    CHECK(vartheta(0) == Rat(1));
    CHECK(vartheta(1) == Rat(1, 3));
    CHECK(vartheta(2) == Rat(4, 45));
    CHECK(vartheta(4) == Rat(428, 14175));
    CHECK(vartheta(6) == Rat(10719068, 638512875));
    for (int m = 0; m <= 8; ++m) CHECK(vartheta(m) == vartheta_composition_sum(m));
}

TEST_CASE("closed-form seed entries") {
    Rat s(2);
    TwoSpinParams p{s, 6};
    Seed seed = twospin_seed_closed(p);
    CHECK(seed.D.at({1, 1}) == s / Rat(24));
    CHECK(seed.D.at({1, 0}) == -(Rat(24) * s).inv());
    CHECK(seed.D.count({0, 0}) == 0);
    CHECK(seed.D.count({0, 1}) == 0);
    CHECK(seed.A.at({1, 0}, {{1, 0}, {1, 0}}) == -s);
    CHECK(seed.A.at({0, 0}, {{0, 0}, {0, 0}}) == Rat(1));
    // A is supported at i = j = k = 0
    for (const auto& [k, v] : seed.A.vals) {
        CHECK(k.out.k == 0);
        CHECK(total_degree(k.in) == 0);
    }
}

TEST_CASE("givental data entries") {
    Rat s(3);
    GiventalData d = twospin_givental_data(s, 5);
    CHECK(d.L[1][1] == -s.inv());
    CHECK(d.L[0][0] == Rat(1));
    CHECK(d.Rm[0][1][0] == -s.pow(-2)); // R_1 entry (2,1) = -1/s^2
    CHECK(d.T.at(2)[1] == -s.pow(-2));  // T coefficient of u^2 = -e_2/s^2
    CHECK(d.T.at(2)[0].is_zero());
    CHECK_THROWS_AS(twospin_givental_data(Rat(0), 5), ValidationError);
    CHECK_THROWS_AS(twospin_seed_closed(TwoSpinParams{Rat(0), 5}), ValidationError);
}

TEST_CASE("correlator base cases") {
    TwoSpinParams p{Rat(1), 6};
    CHECK(twospin_correlator(p, {1, {1, 1}, {}}) == Rat(1, 24));
    CHECK(twospin_correlator(p, {1, {0, 0}, {}}).is_zero());
    CHECK(twospin_correlator(p, {1, {0, 1}, {}}).is_zero());
    CHECK(twospin_correlator(p, {0, {1, 0}, {{1, 0}, {1, 0}}}) == Rat(-1));
}

TEST_CASE("closed equals pipeline at a sampled s") {
    TwoSpinParams p{Rat(1, 3), 5};
    Seed closed = twospin_seed_closed(p);
    Seed pipe = twospin_seed_pipeline(p);
    for (int a = 0; a < 2; ++a)
        for (int i = 0; i <= 2; ++i)
            for (int b = 0; b < 2; ++b)
                for (int j = 0; j <= 2; ++j)
                    for (int c = 0; c < 2; ++c)
                        for (int k = 0; k <= 2; ++k) {
                            Loop out{a, i}, x{b, j}, y{c, k};
                            CAPTURE(a);
                            CAPTURE(i);
                            CAPTURE(b);
                            CAPTURE(j);
                            CAPTURE(c);
                            CAPTURE(k);
                            CHECK(closed.B.at(out, x, y) == pipe.B.at(out, x, y));
                            CHECK(closed.Cconn.at(out, x, y) == pipe.Cconn.at(out, x, y));
                            CHECK(closed.Cdisc.at(out, {x, y}) == pipe.Cdisc.at(out, {x, y}));
                        }
}

TEST_CASE("e1-output component of all-e1 correlators vanishes for g >= 1") {
    TwoSpinParams p{Rat(2), 6};
    Amplitudes<Rat> amps(twospin_seed_closed(p));
    for (int g = 1; g <= 2; ++g)
        for (int n = 1; n <= 2; ++n) {
            if (!stable(g, n)) continue;
            std::vector<Loop> e1s;
            for (int k = 0; k <= 3 * g - 2 + n; ++k) e1s.push_back({0, k});
            for_multisets(e1s, n, 3 * g - 2 + n, [&](const Multi& ms) {
                for (int k0 = 0; k0 <= 3 * g - 2 + n; ++k0)
                    CHECK(amps.get(g, n).at({0, k0}, ms).is_zero());
            });
        }
}
