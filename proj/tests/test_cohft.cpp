#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ftr/cohft.hpp"
#include "test_util.hpp"

using namespace ftr;
using namespace ftr::testutil;

TEST_CASE("up/down-morphisms validate") {
    CHECK_NOTHROW(standard_updown(2, 5));
    LinMap<Rat> u, d;
    for (int k = 0; k <= 3; ++k) {
        u.add({0, k}, {0, k}, Rat(2));
        d.add({0, k}, {0, k}, Rat(1)); // not the inverse
    }
    CHECK_THROWS_AS(make_updown(1, 3, u, d), ValidationError);
    // a degree-mixing non-degenerate pair
    LinMap<Rat> u2, d2;
    for (int k = 0; k <= 3; ++k) {
        u2.add({0, k}, {0, k}, Rat(1));
        if (k + 1 <= 3) u2.add({0, k + 1}, {0, k}, Rat(5));
    }
    // truncated geometric inverse of id + 5 S
    for (int k = 0; k <= 3; ++k)
        for (int m = 0; k + m <= 3; ++m) {
            Rat c = Rat(-5).pow(m);
            d2.add({0, k + m}, {0, k}, c);
        }
    CHECK_NOTHROW(make_updown(1, 3, u2, d2));
}

TEST_CASE("topological correlators") {
    Algebra alg = diagonal_algebra({Rat(2), Rat(3)});
    UpDown ud = standard_updown(2, 8);
    // dim selection
    CHECK(topological_correlator(alg, ud, {1, {0, 0}, {}}).is_zero());
    // <tau_1>_1 w^alpha / 24
    CHECK(topological_correlator(alg, ud, {1, {0, 1}, {}}) == Rat(2) / Rat(24));
    CHECK(topological_correlator(alg, ud, {1, {1, 1}, {}}) == Rat(3) / Rat(24));
    // genus 0: <tau_0 tau_1 tau_0 tau_0>_0 = 1 with diagonal product
    CHECK(topological_correlator(alg, ud, {0, {0, 0}, {{0, 1}, {0, 0}, {0, 0}}}) == Rat(1));
    CHECK(topological_correlator(alg, ud, {0, {0, 0}, {{1, 1}, {0, 0}, {0, 0}}}).is_zero());
}

TEST_CASE("loop seed of a topological theory") {
    Algebra alg = diagonal_algebra({Rat(1)});
    UpDown ud = standard_updown(1, 8);
    Seed s = loop_seed_topological(alg, ud, 8);
    // pinned coordinate values with the standard up/down
    CHECK(s.D.at({0, 1}) == Rat(1, 24));
    CHECK(s.A.at({0, 0}, {{0, 0}, {0, 0}}) == Rat(1));
    CHECK(s.A.at({0, 1}, {{0, 0}, {0, 0}}).is_zero()); // supported at i = j = k = 0
    CHECK(s.B.at({0, 1}, {0, 0}, {0, 0}) == Rat(1, 3));
    CHECK(s.B.at({0, 2}, {0, 1}, {0, 2}) == Rat(1));
    // graded support: inputs beyond the dimension bound vanish
    Amplitudes<Rat> amps(s);
    const auto& F = amps.get(1, 1);
    for (const auto& [k, v] : F.vals) CHECK(total_degree(k.in) <= 3 * 1 - 3 + 2);
}

TEST_CASE("identity Givental data collapses to the topological seed") {
    Algebra alg = diagonal_algebra({Rat(2), Rat(-1, 2)});
    const int cap = 5;
    UpDown ud = standard_updown(2, cap);
    GiventalData id = GiventalData::identity(2);
    Seed lrt = loop_seed_lrt(alg, id, ud, cap);
    Seed topo = loop_seed_topological(alg, ud, cap);
    CHECK(lrt.A == topo.A);
    CHECK(lrt.B == topo.B);
    CHECK(lrt.Cconn == topo.Cconn);
    CHECK(lrt.Cdisc == topo.Cdisc);
    CHECK(lrt.D == topo.D);
}

TEST_CASE("T-only data matches the independent translated tensors") {
    Algebra alg = diagonal_algebra({Rat(1), Rat(2)});
    const int cap = 5;
    UpDown ud = standard_updown(2, cap);
    GiventalData data = GiventalData::identity(2);
    data.T[2] = {Rat(1, 2), Rat(-1, 3)};
    data.T[3] = {Rat(0), Rat(1, 4)};
    Seed s = loop_seed_lrt(alg, data, ud, cap);
    Amplitudes<Rat> amps(s);
    for (int g = 0; g <= 1; ++g)
        for (int n = 0; n <= 2; ++n) {
            if (!stable(g, n) || 2 * g - 2 + 1 + n > 3) continue;
            MultiTensor<Rat> direct = translated_tensor(alg, ud, data.T, g, n, cap);
            CAPTURE(g);
            CAPTURE(n);
            CHECK(amps.get(g, n) == direct);
        }
}

TEST_CASE("L-only data acts by conjugation on correlators") {
    Algebra alg = diagonal_algebra({Rat(1), Rat(3)});
    const int cap = 5;
    UpDown ud = standard_updown(2, cap);
    GiventalData data = GiventalData::identity(2);
    data.L = {{Rat(1), Rat(1, 2)}, {Rat(-1), Rat(2)}};
    Seed s = loop_seed_lrt(alg, data, ud, cap);
    Amplitudes<Rat> amps(s);
    Seed topo = loop_seed_topological(alg, ud, cap);
    Amplitudes<Rat> base(topo);
    // F^L = L o F o (L^{-1})^(x) n on the loop space
    LinMap<Rat> L, Li;
    std::vector<Loop> universe = topo.index_set();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k <= cap; ++k)
                if (!data.L[i][j].is_zero()) L.add({i, k}, {j, k}, data.L[i][j]);
    Li = invert(L, universe);
    for (int g = 0; g <= 1; ++g)
        for (int n = 0; n <= 2; ++n) {
            if (!stable(g, n) || 2 * g - 2 + 1 + n > 3) continue;
            MultiTensor<Rat> want = dress_tensor(base.get(g, n), L, Li);
            CAPTURE(g);
            CAPTURE(n);
            CHECK(amps.get(g, n) == want);
        }
}

TEST_CASE("two Givental routes agree away from the documented gap") {
    std::mt19937 rng(8);
    Algebra alg = diagonal_algebra({Rat(2), Rat(-1, 3)});
    GiventalData data = GiventalData::identity(2);
    data.Rm = {{{Rat(1, 2), Rat(1)}, {Rat(-1, 3), Rat(1, 5)}}};
    data.T[2] = {Rat(1, 3), Rat(0)};
    const int cap = 6;
    UpDown ud = standard_updown(2, cap);
    Seed s = loop_seed_lrt(alg, data, ud, cap);
    Amplitudes<Rat> amps(s);
    for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 2}, {0, 3}, {1, 0}, {1, 1}}) {
        auto tree = rt_treesum_tensor(alg, data, ud, g, n, cap);
        CAPTURE(g);
        CAPTURE(n);
        CHECK(amps.get(g, n) == tree);
    }
    // the documented deviation beyond the smallest positive-genus topologies:
    // pinned as regression witnesses
    CHECK_FALSE(amps.get(1, 2) == rt_treesum_tensor(alg, data, ud, 1, 2, cap));
    CHECK_FALSE(amps.get(2, 0) == rt_treesum_tensor(alg, data, ud, 2, 0, cap));
}

TEST_CASE("class-level oracle agrees with the tree route") {
    Algebra alg = diagonal_algebra({Rat(1), Rat(-2)});
    GiventalData data = GiventalData::identity(2);
    data.L = {{Rat(2), Rat(0)}, {Rat(1), Rat(1)}};
    data.Rm = {{{Rat(0), Rat(1, 2)}, {Rat(1, 3), Rat(-1)}}};
    data.T[2] = {Rat(1, 5), Rat(1)};
    const int cap = 6;
    UpDown ud = standard_updown(2, cap);
    for (auto [g, n] : std::vector<std::pair<int, int>>{{0, 2}, {1, 1}, {1, 2}}) {
        auto tree = rt_treesum_tensor(alg, data, ud, g, n, cap);
        // convert the class-level (bare) values into the same frame:
        // tree-route values are bare correlators (final-standard frame)
        std::vector<Loop> I;
        for (int a = 0; a < 2; ++a)
            for (int k = 0; k <= 3 * g - 2 + n; ++k) I.push_back({a, k});
        for_multisets(I, n, 3 * g - 2 + n, [&](const Multi& ms) {
            for (const auto& i0 : I) {
                Rat cl = rt_correlator_classlevel(alg, data, {g, i0, ms});
                CHECK(tree.at(i0, ms) == cl);
            }
        });
    }
}
