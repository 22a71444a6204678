#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "ftr/dfact.hpp"
#include "ftr/engine.hpp"
#include "ftr/poly.hpp"
#include "ftr/tensor.hpp"
#include "ftr/trees.hpp"

using namespace ftr;

TEST_CASE("rational basics") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(-3, -6) == Rat(1, 2));
    CHECK((Rat(1, 3) + Rat(1, 6)).str() == "1/2");
    CHECK(Rat(7).str() == "7");
    CHECK(Rat::parse("10719068/638512875") == Rat(10719068, 638512875));
    CHECK(Rat::parse("-5").str() == "-5");
    CHECK(Rat(2, 3).pow(-2) == Rat(9, 4));
    CHECK_THROWS_AS(Rat(1, 0), ValidationError);
    CHECK_THROWS_AS(Rat::parse("1.5"), ParseError);
    CHECK_THROWS_AS(Rat(1) / Rat(0), ValidationError);
}

TEST_CASE("odd double factorial") {
    CHECK(odd_double_factorial(5) == Rat(15));
    CHECK(odd_double_factorial(-1) == Rat(1));
    CHECK(odd_double_factorial(-3) == Rat(-1));
    CHECK(odd_double_factorial(1) == Rat(1));
    CHECK(odd_double_factorial(7) == Rat(105));
    CHECK(odd_double_factorial(-5) == Rat(-1, 3) * Rat(-1)); // (-5)!! = 1/3
    CHECK_THROWS_AS(odd_double_factorial(4), ValidationError);

    // (-2k+1)!! (2k-3)!! = (-1)^(k-1) exactly
    for (long k = 2; k <= 9; ++k) {
        Rat prod = odd_double_factorial(-2 * k + 1) * odd_double_factorial(2 * k - 3);
        CHECK(prod == ((k - 1) % 2 ? Rat(-1) : Rat(1)));
    }
}

TEST_CASE("df ratio") {
    CHECK(df_ratio({1}, {0}) == Rat(3));
    CHECK(df_ratio({}, {}) == Rat(1));
    // (2*0+1)!! (2*(-2)+1)!! / (2*1+1)!! = (1)(-3)!!/3!! = -1/3
    CHECK(df_ratio({0, -2}, {1}) == Rat(-1, 3));
    CHECK(df_ratio({2, 1}, {3, 0}) == odd_double_factorial(5) * odd_double_factorial(3) /
                                          odd_double_factorial(7));
}

TEST_CASE("multitensor lookup is input-order invariant") {
    std::mt19937 rng(7);
    MultiTensor<Rat> t(3);
    std::vector<std::pair<Loop, Multi>> keys;
    for (int it = 0; it < 40; ++it) {
        Loop out{int(rng() % 3), int(rng() % 2)};
        Multi in{{int(rng() % 3), int(rng() % 2)},
                 {int(rng() % 3), int(rng() % 2)},
                 {int(rng() % 3), int(rng() % 2)}};
        Rat v(long(rng() % 19) - 9, long(rng() % 7) + 1);
        t.add(out, in, v);
        keys.push_back({out, in});
    }
    for (auto [out, in] : keys) {
        Rat ref = t.at(out, in);
        for (int s = 0; s < 5; ++s) {
            std::shuffle(in.begin(), in.end(), rng);
            CHECK(t.at(out, in) == ref);
        }
    }
}

TEST_CASE("exact inverse of loop-space maps") {
    std::vector<Loop> universe{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
    std::mt19937 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        LinMap<Rat> f;
        do {
            f.vals.clear();
            for (const auto& i : universe)
                for (const auto& j : universe)
                    if (rng() % 2) f.add(i, j, Rat(long(rng() % 9) - 4, long(rng() % 4) + 1));
        } while ([&] {
            try {
                (void)invert(f, universe);
                return false;
            } catch (const ValidationError&) {
                return true;
            }
        }());
        auto fi = invert(f, universe);
        CHECK(compose(f, fi) == identity_map(universe));
        CHECK(compose(fi, f) == identity_map(universe));
    }
}

TEST_CASE("truncated polynomials") {
    Loop x{0, 1}, y{1, 0};
    auto px = TruncPoly::var(x, 3), py = TruncPoly::var(y, 3);
    auto p = (px + py) * (px - py);
    CHECK(p.coeff({x, x}) == Rat(1));
    CHECK(p.coeff({y, y}) == Rat(-1));
    CHECK(p.coeff({x, y}) == Rat(0));
    auto q = px * px * px * px; // degree 4 > cap
    CHECK(q.is_zero());
    CHECK(mono_sym_factor({x, x, y}) == Rat(2));
    CHECK(p.eval({{x, Rat(2)}, {y, Rat(3)}}) == Rat(-5));
}

TEST_CASE("compose_along_tree") {
    // single vertex, no edges: the tensor itself
    MultiTensor<Rat> t(2);
    t.add({0, 0}, {{0, 0}, {1, 0}}, Rat(5));
    t.add({1, 0}, {{1, 0}, {1, 0}}, Rat(7, 2));
    ComposeNode leaf_only{t, {1, 2}, {}};
    auto r = compose_along_tree(leaf_only);
    CHECK(r.at({0, 0}, {{0, 0}, {1, 0}}) == Rat(5));
    CHECK(r.at({0, 0}, {{1, 0}, {0, 0}}) == Rat(5)); // symmetric vertex tensor
    CHECK(r.at({1, 0}, {{1, 0}, {1, 0}}) == Rat(7, 2));

    // two vertices joined by the identity edge map: plain contraction
    std::vector<Loop> universe{{0, 0}, {1, 0}};
    MultiTensor<Rat> top(1), bot(1);
    top.add({0, 0}, {{1, 0}}, Rat(2));
    top.add({1, 0}, {{0, 0}}, Rat(3));
    bot.add({0, 0}, {{0, 0}}, Rat(5));
    bot.add({1, 0}, {{0, 0}}, Rat(-1));
    ComposeNode two{top, {}, {}};
    two.kids.push_back({identity_map(universe), ComposeNode{bot, {1}, {}}});
    auto r2 = compose_along_tree(two);
    // (top . bot)^i_j = top^i_a bot^a_j
    CHECK(r2.at({0, 0}, {{0, 0}}) == Rat(2) * Rat(-1));
    CHECK(r2.at({1, 0}, {{0, 0}}) == Rat(3) * Rat(5));

    // diagonal edge map with entry c scales the contracted index
    LinMap<Rat> edge;
    edge.add({0, 0}, {0, 0}, Rat(4));
    edge.add({1, 0}, {1, 0}, Rat(9));
    ComposeNode three{top, {}, {}};
    three.kids.push_back({edge, ComposeNode{bot, {1}, {}}});
    auto r3 = compose_along_tree(three);
    CHECK(r3.at({0, 0}, {{0, 0}}) == Rat(2) * Rat(9) * Rat(-1));
    CHECK(r3.at({1, 0}, {{0, 0}}) == Rat(3) * Rat(4) * Rat(5));

    // arity mismatch reported
    ComposeNode bad{t, {1}, {}};
    CHECK_THROWS_AS(compose_along_tree(bad), ValidationError);
}

TEST_CASE("compose_along_tree associativity on a path") {
    // path of three arity-1 tensors with identity edges equals iterated
    // contraction in either grouping
    std::vector<Loop> universe{{0, 0}, {1, 0}};
    std::mt19937 rng(3);
    auto rnd1 = [&] {
        MultiTensor<Rat> m(1);
        for (const auto& o : universe)
            for (const auto& i : universe) m.add(o, {i}, Rat(long(rng() % 7) - 3, long(rng() % 3) + 1));
        return m;
    };
    auto a = rnd1(), b = rnd1(), c = rnd1();
    ComposeNode path{a, {}, {}};
    path.kids.push_back({identity_map(universe), ComposeNode{b, {}, {}}});
    path.kids[0].second.kids.push_back({identity_map(universe), ComposeNode{c, {1}, {}}});
    auto whole = compose_along_tree(path);

    // contract (a.b) first
    MultiTensor<Rat> ab(1);
    for (const auto& o : universe)
        for (const auto& i : universe) {
            Rat acc(0);
            for (const auto& m : universe) acc += a.at(o, {m}) * b.at(m, {i});
            ab.add(o, {i}, acc);
        }
    ComposeNode grouped{ab, {}, {}};
    grouped.kids.push_back({identity_map(universe), ComposeNode{c, {1}, {}}});
    auto whole2 = compose_along_tree(grouped);
    CHECK(whole.vals == whole2.vals);
}
