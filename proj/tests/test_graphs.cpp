#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ftr/graphs.hpp"
#include "test_util.hpp"

using namespace ftr;
using namespace ftr::testutil;

TEST_CASE("base classes") {
    const auto& g03 = enumerate_graphs(0, 2);
    REQUIRE(g03.size() == 1);
    CHECK(g03[0]->aut == 1);

    const auto& g11 = enumerate_graphs(1, 0);
    REQUIRE(g11.size() == 1);
    CHECK(g11[0]->aut == 2);

    // G_{0,1+3}: only case (B) applies, one graph per choice of m
    const auto& g04 = enumerate_graphs(0, 3);
    REQUIRE(g04.size() == 3);
    for (const auto& G : g04) CHECK(G->aut == 1);

    CHECK_THROWS_AS(enumerate_graphs(0, 1), ValidationError);
}

TEST_CASE("base counting values") {
    CHECK(graph_count(0, 2, CountMethod::Enumerate) == Rat(1));
    CHECK(graph_count(1, 0, CountMethod::Enumerate) == Rat(1, 2));
    CHECK(graph_count(0, 2, CountMethod::Recurse) == Rat(1));
    CHECK(graph_count(1, 0, CountMethod::Recurse) == Rat(1, 2));
    // one step of the recursion: |G_{1,1+1}| = 1*(1/2) + (1/2)*1
    CHECK(graph_count(1, 1, CountMethod::Recurse) == Rat(1));
}

TEST_CASE("enumeration agrees with the automorphism recursion") {
    for (int g = 0; g <= 3; ++g)
        for (int n = 0; n <= 7; ++n) {
            if (!stable(g, n) || 2 * g - 2 + 1 + n > 6) continue;
            CAPTURE(g);
            CAPTURE(n);
            CHECK(graph_count(g, n, CountMethod::Enumerate) == graph_count(g, n, CountMethod::Recurse));
        }
}

TEST_CASE("automorphism orders are powers of two") {
    for (int g = 0; g <= 3; ++g)
        for (int n = 0; n <= 7; ++n) {
            if (!stable(g, n) || 2 * g - 2 + 1 + n > 6) continue;
            for (const auto& G : enumerate_graphs(g, n)) {
                long a = G->aut;
                while (a % 2 == 0) a /= 2;
                CHECK(a == 1);
            }
        }
}

TEST_CASE("graph sum equals the recursion") {
    SUBCASE("base topologies") {
        std::mt19937 rng(31);
        Seed s = random_seed(2, rng);
        CHECK(graph_sum_amplitude(s, 0, 2) == s.A);
        const auto& d = graph_sum_amplitude(s, 1, 0);
        for (const auto& [i, v] : s.D) CHECK(d.at(i, {}) == v);
    }
    SUBCASE("random seeds through chi <= 4") {
        std::mt19937 rng(41);
        for (int trial = 0; trial < 4; ++trial) {
            Seed s = random_seed(2, rng);
            Amplitudes<Rat> amps(s);
            for (int g = 0; g <= 2; ++g)
                for (int n = 0; n <= 3; ++n) {
                    if (!stable(g, n) || 2 * g - 2 + 1 + n > 4) continue;
                    CAPTURE(trial);
                    CAPTURE(g);
                    CAPTURE(n);
                    CHECK(graph_sum_amplitude(s, g, n) == amps.get(g, n));
                }
        }
    }
}

TEST_CASE("dot dump") {
    std::string d = graphs_dot(1, 1);
    CHECK(d.find("graph G0") != std::string::npos);
    CHECK(d.find("style=bold") != std::string::npos);
    CHECK(d.find("l0") != std::string::npos);
}
