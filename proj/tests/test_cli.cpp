#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ftr/jsonio.hpp"
#include "test_util.hpp"

using namespace ftr;
using namespace ftr::testutil;

TEST_CASE("seed round trip is byte-identical") {
    std::mt19937 rng(17);
    Seed s = random_seed(2, rng);
    Json j1 = seed_to_json(s);
    Seed s2 = seed_from_json(j1);
    Json j2 = seed_to_json(s2);
    CHECK(j1.dump() == j2.dump());
    CHECK(s.A == s2.A);
    CHECK(s.B == s2.B);
    CHECK(s.Cconn == s2.Cconn);
    CHECK(s.Cdisc == s2.Cdisc);
    CHECK(s.D == s2.D);
}

TEST_CASE("curve round trip") {
    Rat s(2);
    GiventalData data = twospin_givental_data(s, 10);
    LocalCurve c = curve_from_lrt(twospin_algebra(s), data, 10);
    Json j1 = curve_to_json(c);
    LocalCurve c2 = curve_from_json(j1);
    Json j2 = curve_to_json(c2);
    CHECK(j1.dump() == j2.dump());
    CHECK(c.y_odd == c2.y_odd);
    CHECK(c.disc_block == c2.disc_block);
    CHECK(c.w == c2.w);
}

TEST_CASE("rational strings are decimal-free and canonical") {
    CHECK(Rat(4, 8).str() == "1/2");
    CHECK(Rat(-4, 8).str() == "-1/2");
    CHECK(Rat(4, 1).str() == "4");
    CHECK(Rat::parse("7/1").str() == "7");
    CHECK_THROWS_AS(Rat::parse("0.5"), ParseError);
    CHECK_THROWS_AS(Rat::parse(""), ParseError);
}

TEST_CASE("correlator rows use the documented label conventions") {
    std::map<CorrelatorKey, Rat> rows;
    rows[{1, {1, 1}, {}}] = Rat(1, 24);
    Json j = correlator_rows_json(rows, true);
    CHECK(j[0]["out"] == "(2,1)");
    CHECK(j[0]["value"] == "1/24");
    std::string csv = correlator_rows_csv(rows, false);
    CHECK(csv.find("g,out,in,value") == 0);
    CHECK(csv.find("(1,1)") != std::string::npos);
}

TEST_CASE("parse errors carry context") {
    CHECK_THROWS_AS(seed_from_json(Json::parse("{}")), ParseError);
    CHECK_THROWS_AS(curve_from_json(Json::parse("{\"points\":[{\"weight\":\"x\"}]}")), ParseError);
    CHECK_THROWS_AS(linmap_from_json(Json::parse("[{\"out\":[0]}]")), ParseError);
}
