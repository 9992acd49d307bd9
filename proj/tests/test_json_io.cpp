#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ndchaos/json_io.hpp>

using namespace ndchaos;

TEST_CASE("system configs") {
    SUBCASE("logistic, constant and scheduled r") {
        auto s1 = parse_system(json::parse(R"({"kind":"logistic","r":4.0})"));
        REQUIRE(s1.is_interval());
        CHECK(orbit_step(*s1.interval_system, 0, 0.5) == 1.0);

        auto s2 = parse_system(json::parse(R"({"kind":"logistic","r":[3.5,4.0]})"));
        CHECK(orbit_step(*s2.interval_system, 0, 0.5) == 0.875);
        CHECK(orbit_step(*s2.interval_system, 1, 0.5) == 1.0);
    }

    SUBCASE("tent") {
        auto s = parse_system(json::parse(R"({"kind":"tent","slope":2.0})"));
        CHECK(orbit_step(*s.interval_system, 0, 0.25) == 0.5);
    }

    SUBCASE("piecewise-linear single map") {
        auto s = parse_system(
            json::parse(R"({"kind":"piecewise-linear","breakpoints":[[0,0],[0.5,1],[1,0]]})"));
        REQUIRE(s.is_interval());
        CHECK(orbit_step(*s.interval_system, 0, 0.25) == 0.5);
        CHECK(orbit_step(*s.interval_system, 0, 0.75) == 0.5);
    }

    SUBCASE("piecewise-linear cycled maps") {
        auto s = parse_system(json::parse(
            R"({"kind":"piecewise-linear","maps":[[[0,0],[1,1]],[[0,1],[1,0]]]})"));
        CHECK(orbit_step(*s.interval_system, 0, 0.25) == 0.25);
        CHECK(orbit_step(*s.interval_system, 1, 0.25) == 0.75);
    }

    SUBCASE("full shift and gallery references") {
        auto s = parse_system(json::parse(R"({"kind":"full-shift"})"));
        CHECK_FALSE(s.is_interval());
        auto g1 = parse_system(json::parse(R"("gallery:tent")"));
        CHECK(g1.is_interval());
        auto g2 = parse_system(json::parse(R"({"kind":"gallery","id":"full-shift"})"));
        CHECK_FALSE(g2.is_interval());
    }

    SUBCASE("malformed configs") {
        CHECK_THROWS_AS(parse_system(json::parse(R"({"kind":"nope"})")), SchemaError);
        CHECK_THROWS_AS(parse_system(json::parse(R"({"kind":"logistic"})")), SchemaError);
        CHECK_THROWS_AS(parse_system(json::parse(R"({"kind":"logistic","r":9.0})")),
                        ParameterError);
        CHECK_THROWS_AS(parse_system(json::parse(R"("tent")")), SchemaError);
        CHECK_THROWS_AS(
            parse_system(json::parse(R"({"kind":"piecewise-linear","breakpoints":[[0,0]]})")),
            SchemaError);
    }
}

TEST_CASE("index sequences") {
    auto arr = parse_index_sequence(json::parse("[0,3,7,12]"));
    CHECK(arr.materialized_size() == 4);
    CHECK(arr.term(2) == 7);

    auto arith = parse_index_sequence(json::parse(R"({"kind":"arithmetic","a":5,"step":3})"));
    CHECK(arith.term(0) == 5);
    CHECK(arith.term(4) == 17);
    CHECK(arith.contains(11));
    CHECK_FALSE(arith.contains(12));

    // round trip preserves the generator form
    auto j = index_sequence_to_json(arith);
    auto back = parse_index_sequence(j);
    for (std::uint64_t i = 0; i < 32; ++i) CHECK(back.term(i) == arith.term(i));

    CHECK_THROWS_AS(parse_index_sequence(json::parse("[3,1]")), SchemaError);
    CHECK_THROWS_AS(parse_index_sequence(json::parse("[-2,1]")), SchemaError);
    CHECK_THROWS_AS(parse_index_sequence(json::parse(R"({"kind":"geometric"})")), SchemaError);
}

TEST_CASE("symbol sequences") {
    auto s = parse_symbol_sequence(
        json::parse(R"({"prefix":"0110","tail":{"kind":"periodic","pattern":"01"}})"));
    CHECK(s.bit(0) == 0);
    CHECK(s.bit(1) == 1);
    CHECK(s.bit(2) == 1);
    CHECK(s.bit(3) == 0);
    CHECK(s.bit(4) == 0);
    CHECK(s.bit(5) == 1);
    CHECK(s.bit(6) == 0);

    SUBCASE("round trip within the serializable subset") {
        auto j = symbol_sequence_to_json(s);
        auto back = parse_symbol_sequence(j);
        for (std::uint64_t i = 0; i < 64; ++i) CHECK(back.bit(i) == s.bit(i));
        // shifted views re-serialize through their phase
        auto j2 = symbol_sequence_to_json(s.shifted(3));
        auto back2 = parse_symbol_sequence(j2);
        for (std::uint64_t i = 0; i < 64; ++i) CHECK(back2.bit(i) == s.bit(i + 3));
    }

    SUBCASE("generators are not serializable") {
        auto gen = SymbolSequence::generator([](std::uint64_t k) { return int(k % 2); });
        CHECK_THROWS_AS(symbol_sequence_to_json(gen), SchemaError);
    }

    SUBCASE("malformed inputs") {
        CHECK_THROWS_AS(parse_symbol_sequence(json::parse(R"({"prefix":"012"})")), SchemaError);
        CHECK_THROWS_AS(parse_symbol_sequence(json::parse(R"({"prefix":"01"})")), SchemaError);
        CHECK_THROWS_AS(
            parse_symbol_sequence(json::parse(R"({"tail":{"kind":"periodic","pattern":""}})")),
            SchemaError);
    }
}

TEST_CASE("17-digit float formatting round-trips") {
    for (std::uint64_t i = 0; i < 5000; ++i) {
        const double x = unit_double(splitmix64(i)) * std::ldexp(1.0, int(i % 64) - 32);
        CHECK(std::stod(fmt17(x)) == x);
    }
    CHECK(fmt17(1.0 / 3.0) == "0.33333333333333331");
}

TEST_CASE("dyadic doubles convert to exact fractions") {
    CHECK(frac_from_double(0.5) == Frac(1, 2));
    CHECK(frac_from_double(0.8125) == Frac(13, 16));
    CHECK(frac_from_double(0.0) == Frac(0));
    CHECK(frac_from_double(3.0) == Frac(3));
    CHECK_THROWS_AS(frac_from_double(1.0 / 3.0), SchemaError);
}
