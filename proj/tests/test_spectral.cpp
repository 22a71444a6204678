#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ftr/spectral.hpp"
#include "ftr/twospin.hpp"
#include "test_util.hpp"

using namespace ftr;
using namespace ftr::testutil;

TEST_CASE("polar projector on the standard curve") {
    LocalCurve airy = airy_curve(20);
    // exact forms map to zero: d(zeta^3) = 3 zeta^2 dzeta
    LaurentForm chi;
    chi.sheets.assign(1, {});
    chi.sheets[0][2] = Rat(3);
    auto p = polar_project(airy, Star::Disc, chi);
    CHECK(p.sheets[0].empty());
    // basis forms are fixed: dzeta/zeta^4
    LaurentForm xi;
    xi.sheets.assign(1, {});
    xi.sheets[0][-4] = Rat(1);
    auto q = polar_project(airy, Star::Conn, xi);
    CHECK(q.sheets == xi.sheets);
    // residues rejected
    LaurentForm res;
    res.sheets.assign(1, {});
    res.sheets[0][-1] = Rat(1);
    CHECK_THROWS_AS(polar_project(airy, Star::Disc, res), ValidationError);
}

TEST_CASE("airy curve values") {
    LocalCurve airy = airy_curve(24);
    auto t11 = spectral_omega(airy, 1, 0, 2 * (3 * 1 - 2 + 0) + 4, true);
    // omega_{1,1} = dzeta/(8 zeta^4) = (1/24) xi_{(1,1)}
    CHECK(t11.omega.at({1, 0}).at({0, 1}, {}) == Rat(1, 24));

    auto t03 = spectral_omega(airy, 0, 2, 2 * (3 * 0 - 2 + 2) + 4, true);
    CHECK(t03.omega.at({0, 2}).at({0, 0}, {{0, 0}, {0, 0}}) == Rat(1));

    // w = 0 kills every connected contribution
    LocalCurve flat = airy;
    flat.w = {Rat(0)};
    auto z11 = spectral_omega(flat, 1, 0, 8, true);
    CHECK(z11.omega.at({1, 0}).vals.empty());
}

TEST_CASE("insufficient order is rejected") {
    LocalCurve airy = airy_curve(24);
    CHECK_THROWS_AS(spectral_omega(airy, 2, 1, 4, false), ValidationError);
}

TEST_CASE("symmetry of omega in the last slots") {
    Rat s(1);
    GiventalData data = twospin_givental_data(s, 20);
    Algebra alg = twospin_algebra(s);
    LocalCurve curve = curve_from_lrt(alg, data, 20);
    auto tab = spectral_omega(curve, 0, 3, 2 * (3 * 0 - 2 + 3) + 4, true);
    // multiset storage is the invariant; spot-check lookups under permutation
    const auto& w = tab.omega.at({0, 3});
    for (const auto& [k, v] : w.vals) {
        Multi in = k.in;
        std::next_permutation(in.begin(), in.end());
        CHECK(w.at(k.out, in) == v);
    }
}

TEST_CASE("two-spin curve example structure") {
    Rat s(2);
    GiventalData data = twospin_givental_data(s, 12);
    Algebra alg = twospin_algebra(s);
    LocalCurve curve = curve_from_lrt(alg, data, 12);
    // y odd part on sheet 2: -zeta - sum_{m >= 2} zeta^{2m-1}/((2m-1) s^{2m-2})
    CHECK(curve.y_odd[1].at(1) == Rat(-1));
    CHECK(curve.y_odd[1].at(3) == Rat(-1, 3) * s.pow(-2));
    CHECK(curve.y_odd[1].at(5) == Rat(-1, 5) * s.pow(-4));
    // sheet 1 is the Airy sheet
    CHECK(curve.y_odd[0].size() == 1);
    CHECK(curve.y_odd[0].at(1) == Rat(-1));
    // the disc block sits in the (e_2 (x) e_1) corner with even exponents
    for (const auto& [k, v] : curve.disc_block) {
        CHECK(k.first.first == 1);
        CHECK(k.second.first == 0);
        CHECK(k.first.second % 2 == 0);
        CHECK(k.second.second % 2 == 0);
    }
    // block coefficient at (0,0): -(2*0+2*0+1)!!/s^2 * (-1)^0 / ((-1)!!(-1)!!)
    CHECK(curve.disc_block.at({{1, 0}, {0, 0}}) == -s.pow(-2));
    // deleting the e_2 sheet leaves the Airy curve
    LocalCurve airy = airy_curve(12);
    CHECK(curve.y_odd[0] == airy.y_odd[0]);

    // non-semisimple products are rejected
    std::mt19937 rng(7);
    Algebra nonss = random_algebra(2, rng);
    bool diagonal = true;
    for (int a = 0; a < 2 && diagonal; ++a)
        for (int b = 0; b < 2 && diagonal; ++b)
            for (int c = 0; c < 2 && diagonal; ++c)
                diagonal = (nonss.p(a, b, c) == ((a == b && b == c) ? Rat(1) : Rat(0)));
    if (!diagonal) CHECK_THROWS_AS(curve_from_lrt(nonss, data, 12), ValidationError);
}

TEST_CASE("omega_to_amplitudes is coefficient-preserving for the standard frame") {
    LocalCurve airy = airy_curve(24);
    auto tab = spectral_omega(airy, 1, 1, 2 * (3 * 1 - 2 + 1) + 4, true);
    UpDown ud = standard_updown(1, 8);
    auto amp = omega_to_amplitudes(airy, ud, tab, 1, 1);
    CHECK(amp == tab.omega.at({1, 1}));
    // non-standard up/down rejected
    LinMap<Rat> u, d;
    for (int k = 0; k <= 8; ++k) {
        u.add({0, k}, {0, k}, Rat(2));
        d.add({0, k}, {0, k}, Rat(1, 2));
    }
    UpDown scaled = make_updown(1, 8, u, d);
    CHECK_THROWS_AS(omega_to_amplitudes(airy, scaled, tab, 1, 1), ValidationError);
}
