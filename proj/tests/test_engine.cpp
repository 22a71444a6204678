#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ftr/graphs.hpp"
#include "test_util.hpp"

using namespace ftr;
using namespace ftr::testutil;

namespace {

// Literal right-hand side of the recursion at an ordered input tuple;
// independent of the engine's multiset bookkeeping.
Rat direct_entry(const Seed& seed, Amplitudes<Rat>& amps, int g, const Loop& i0,
                 const std::vector<Loop>& in) {
    int n = static_cast<int>(in.size());
    Rat val(0);
    const std::vector<Loop> I = seed.index_set();
    for (int m = 0; m < n; ++m) {
        Multi rest;
        for (int j = 0; j < n; ++j)
            if (j != m) rest.push_back(in[j]);
        for (const auto& a : I) {
            Rat b = seed.B.at(i0, in[m], a);
            if (!b.is_zero()) val += b * amps.get(g, n - 1).at(a, rest);
        }
    }
    if (g >= 1)
        for (const auto& a : I)
            for (const auto& b : I) {
                Rat c = seed.Cconn.at(i0, b, a);
                if (c.is_zero()) continue;
                Multi ext = in;
                ext.push_back(b);
                val += Rat(1, 2) * c * amps.get(g - 1, n + 1).at(a, ext);
            }
    for (const auto& a : I)
        for (const auto& b : I) {
            Rat c = seed.Cdisc.at(i0, {a, b});
            if (c.is_zero()) continue;
            for (int h = 0; h <= g; ++h)
                for (unsigned mask = 0; mask < (1u << n); ++mask) {
                    Multi J, Jc;
                    for (int j = 0; j < n; ++j) ((mask >> j) & 1 ? J : Jc).push_back(in[j]);
                    if (!stable(h, static_cast<int>(J.size())) ||
                        !stable(g - h, static_cast<int>(Jc.size())))
                        continue;
                    val += Rat(1, 2) * c * amps.get(h, static_cast<int>(J.size())).at(a, J) *
                           amps.get(g - h, static_cast<int>(Jc.size())).at(b, Jc);
                }
        }
    return val;
}

} // namespace

TEST_CASE("base cases") {
    std::mt19937 rng(5);
    Seed s = random_seed(2, rng);
    Amplitudes<Rat> amps(s);
    CHECK(amps.get(0, 2) == s.A);
    const auto& d = amps.get(1, 0);
    for (const auto& [i, v] : s.D) CHECK(d.at(i, {}) == v);
    CHECK_THROWS_AS(amps.get(0, 0), ValidationError);
    CHECK_THROWS_AS(amps.get(0, 1), ValidationError);
    CHECK_THROWS_AS((void)ftr_amplitude(s, -1, 5), ValidationError);
}

TEST_CASE("dim-1 F-TFT values") {
    // product 1, w = 1: A = B = Cconn = Cdisc = 1, D = 1/2. Frozen values come
    // from the automorphism-count recursion via the F-TFT scaling identity.
    Algebra alg = diagonal_algebra({Rat(1)});
    Seed s = ftft_seed(alg);
    CHECK(s.A.at({0, 0}, {{0, 0}, {0, 0}}) == Rat(1));
    CHECK(s.B.at({0, 0}, {0, 0}, {0, 0}) == Rat(1));
    CHECK(s.Cconn.at({0, 0}, {0, 0}, {0, 0}) == Rat(1));
    CHECK(s.Cdisc.at({0, 0}, {{0, 0}, {0, 0}}) == Rat(1));
    CHECK(s.D.at({0, 0}) == Rat(1, 2));

    Amplitudes<Rat> amps(s);
    Loop o{0, 0};
    auto f = [&](int g, int n) { return amps.get(g, n).at(o, Multi(n, o)); };
    CHECK(f(1, 1) == Rat(1));    // B*D + 1/2*Cconn*A
    CHECK(f(0, 3) == Rat(3));
    CHECK(f(2, 0) == Rat(5, 8)); // 1/2*F_{1,2} + 1/2*Cdisc*D^2
    CHECK(f(1, 2) == Rat(4));

    // scaling against the independent automorphism-count recursion
    for (int g = 0; g <= 2; ++g)
        for (int n = 0; n <= 4; ++n) {
            if (!stable(g, n) || 2 * g - 2 + 1 + n > 5) continue;
            CHECK(f(g, n) == graph_count(g, n, CountMethod::Recurse));
        }
}

TEST_CASE("F-TFT scaling on random algebras") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 3; ++trial) {
        int dim = 1 + int(rng() % 3);
        Algebra alg = random_algebra(dim, rng);
        Seed s = ftft_seed(alg);
        Amplitudes<Rat> amps(s);
        for (int g = 0; g <= 2; ++g)
            for (int n = 0; n <= 3; ++n) {
                if (!stable(g, n) || 2 * g - 2 + 1 + n > 4) continue;
                Rat count = graph_count(g, n, CountMethod::Recurse);
                MultiTensor<Rat> expect = ftft_amplitude(alg, g, n);
                MultiTensor<Rat> scaled(n);
                for (const auto& [k, v] : expect.vals) scaled.add(k.out, k.in, v * count);
                CHECK(amps.get(g, n) == scaled);
            }
    }
}

TEST_CASE("symmetry of amplitudes under input permutations") {
    std::mt19937 rng(123);
    Seed s = random_seed(2, rng);
    Amplitudes<Rat> amps(s);
    for (int g = 0; g <= 1; ++g)
        for (int n = 2; n <= 4; ++n) {
            if (!stable(g, n) || 2 * g - 2 + 1 + n <= 1) continue; // recursion step only
            (void)amps.get(g, n);
            std::vector<Loop> in;
            for (int j = 0; j < n; ++j) in.push_back({int(rng() % 2), 0});
            std::sort(in.begin(), in.end());
            Loop i0{int(rng() % 2), 0};
            Rat ref = direct_entry(s, amps, g, i0, in);
            CHECK(ref == amps.get(g, n).at(i0, in));
            do {
                CHECK(direct_entry(s, amps, g, i0, in) == ref);
            } while (std::next_permutation(in.begin(), in.end()));
        }
}

TEST_CASE("memo determinism") {
    std::mt19937 rng(77);
    Seed s = random_seed(2, rng);
    Amplitudes<Rat> amps(s);
    auto t1 = amps.get(1, 2);
    amps.clear();
    auto t2 = amps.get(1, 2);
    CHECK(t1 == t2);
}

TEST_CASE("ftft_seed examples") {
    // w = 0 kills D and Cconn
    Algebra alg0 = diagonal_algebra({Rat(0), Rat(0)});
    Seed s0 = ftft_seed(alg0);
    CHECK(s0.D.empty());
    CHECK(s0.Cconn.vals.empty());

    // dim-2 diagonal with w = (2,3)
    Algebra alg = diagonal_algebra({Rat(2), Rat(3)});
    Seed s = ftft_seed(alg);
    CHECK(s.D.at({0, 0}) == Rat(1));
    CHECK(s.D.at({1, 0}) == Rat(3, 2));
    CHECK(s.Cconn.at({0, 0}, {0, 0}, {0, 0}) == Rat(2));
    CHECK(s.Cconn.at({0, 0}, {1, 0}, {0, 0}) == Rat(3));
    CHECK(s.Cconn.at({1, 0}, {0, 0}, {1, 0}) == Rat(2));

    // dim-2 diagonal F_{2,1}^a = (w^a)^2
    auto f21 = ftft_amplitude(alg, 2, 0);
    CHECK(f21.at({0, 0}, {}) == Rat(4));
    CHECK(f21.at({1, 0}, {}) == Rat(9));
    auto f03 = ftft_amplitude(alg, 0, 2);
    CHECK(f03.at({0, 0}, {{0, 0}, {0, 0}}) == Rat(1));
    CHECK(f03.at({0, 0}, {{0, 0}, {1, 0}}) == Rat(0));

    // non-associative product rejected
    std::vector<std::vector<std::vector<Rat>>> bad(
        2, std::vector<std::vector<Rat>>(2, std::vector<Rat>(2, Rat(0))));
    bad[0][0][0] = Rat(1);
    bad[0][1][1] = Rat(1);
    bad[1][0][1] = bad[1][1][0] = Rat(1);
    bad[1][1][1] = Rat(1);
    bad[0][0][1] = bad[0][1][0] = Rat(1);
    CHECK_THROWS_AS(make_algebra(2, bad, {Rat(1), Rat(1)}), ValidationError);
}

TEST_CASE("vector potential table") {
    Algebra alg = diagonal_algebra({Rat(1)});
    Seed s = ftft_seed(alg);
    auto pot = vector_potential(s, 1, 2);
    CHECK(pot.coeff.count({0, 0}) == 0);
    CHECK(pot.coeff.count({0, 1}) == 0);
    CHECK(pot.coeff.at({1, 0}).at({0, 0}, {}) == Rat(1, 2));
    CHECK(pot.coeff.at({0, 2}).at({0, 0}, {{0, 0}, {0, 0}}) == Rat(1));
    CHECK(pot.coeff.at({1, 2}).at({0, 0}, {{0, 0}, {0, 0}}) == Rat(4));
}
