#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <ndchaos/core.hpp>
#include <ndchaos/gallery.hpp>

using namespace ndchaos;

TEST_CASE("compose_orbit on the logistic map") {
    auto sys = make_logistic({4.0});

    SUBCASE("the origin is fixed") {
        auto o = compose_orbit(sys, 0.0, 16);
        REQUIRE(o.points.size() == 17);
        for (double x : o.points) CHECK(x == 0.0);
    }

    SUBCASE("0.5 collapses to the origin in two steps") {
        auto o = compose_orbit(sys, 0.5, 2);
        CHECK(o.points[0] == 0.5);
        CHECK(o.points[1] == 1.0);
        CHECK(o.points[2] == 0.0);
    }

    SUBCASE("orbit recurrence holds pointwise") {
        auto o = compose_orbit(sys, 0.3, 64);
        CHECK(o.points.front() == o.start);
        for (std::size_t k = 0; k + 1 < o.points.size(); ++k)
            CHECK(o.points[k + 1] == orbit_step(sys, k, o.points[k]));
    }
}

TEST_CASE("non-autonomous logistic matches an independent recurrence") {
    auto sys = make_logistic({3.5, 4.0});
    auto o = compose_orbit(sys, 0.3, 3);

    // separate scalar loop, same arithmetic order as the rule
    double x = 0.3;
    std::vector<double> expect{x};
    for (int n = 0; n < 3; ++n) {
        const double r = (n % 2 == 0) ? 3.5 : 4.0;
        x = (r * x) * (1.0 - x);
        expect.push_back(x);
    }
    for (int i = 0; i <= 3; ++i) CHECK(o.points[i] == expect[i]);
}

TEST_CASE("compose_orbit error paths") {
    auto sys = make_logistic({4.0});
    CHECK_THROWS_AS(compose_orbit(sys, 1.5, 4), DomainViolationError);
    CHECK_THROWS_AS(compose_orbit(sys, 0.5, 100, /*capacity=*/16), CapacityError);
}

TEST_CASE("orbit_at_indices") {
    auto sys = make_logistic({4.0});

    SUBCASE("index 0 returns the start") {
        auto pts = orbit_at_indices(sys, 0.3, IndexSequence::from_terms({0}), 1);
        CHECK(pts.size() == 1);
        CHECK(pts[0] == 0.3);
    }

    SUBCASE("indices 1,2 from 0.5") {
        auto pts = orbit_at_indices(sys, 0.5, IndexSequence::from_terms({1, 2}), 2);
        CHECK(pts[0] == 1.0);
        CHECK(pts[1] == 0.0);
    }

    SUBCASE("even indices on the tent map equal an orbit subsample, bitwise") {
        auto tent = make_tent({2.0});
        auto evens = IndexSequence::arithmetic(0, 2);
        auto streamed = orbit_at_indices(tent, 0.3, evens, 10);
        auto full = compose_orbit(tent, 0.3, evens.term(9));
        for (std::size_t i = 0; i < 10; ++i)
            CHECK(streamed[i] == full.points[evens.term(i)]);
    }

    SUBCASE("non-increasing indices are rejected") {
        CHECK_THROWS_AS(IndexSequence::from_terms({3, 3}), ParameterError);
    }
}

TEST_CASE("metric axioms hold on sampled triples") {
    const double tol = 1e-12;
    CHECK(verify_metric_axioms(interval_domain(0.0, 1.0), 10000, 1).within(tol));
    CHECK(verify_metric_axioms(symbol_space_domain(), 10000, 2).within(tol));
    CHECK(verify_metric_axioms(product_domain(interval_domain(0.0, 1.0), interval_domain(-1.0, 2.0)),
                               10000, 3)
              .within(tol));
}

TEST_CASE("product metric is the max of the component metrics") {
    auto d1 = interval_domain(0.0, 1.0);
    auto d2 = interval_domain(0.0, 4.0);
    auto prod = product_domain(d1, d2);
    for (std::uint64_t i = 0; i < 2000; ++i) {
        auto a = prod.sample(mix64(9, 2 * i));
        auto b = prod.sample(mix64(9, 2 * i + 1));
        CHECK(prod.distance(a, b) ==
              std::max(d1.distance(a.first, b.first), d2.distance(a.second, b.second)));
    }
}

TEST_CASE("interval domain validation and clamping") {
    CHECK_THROWS_AS(interval_domain(1.0, 1.0), ParameterError);
    auto d = interval_domain(0.0, 1.0);
    CHECK(d.clamp(1.25) == 1.0);
    CHECK(d.clamp(-0.5) == 0.0);

    // a rule that overshoots by rounding is pulled back each step
    MapFamily<double> sys;
    sys.domain = d;
    sys.rule = [](std::uint64_t, const double& x) { return x + 5e-13 * (1.0 - x) + 5e-13; };
    auto o = compose_orbit(sys, 1.0, 8);
    for (double x : o.points) CHECK(d.contains(x));
    CHECK(max_clamp_magnitude(sys, 16, 16) < 1e-12);
}

TEST_CASE("streamed and materialized orbits agree bitwise across systems") {
    for (const char* id : {"logistic-autonomous", "tent", "doubling", "expanding-family"}) {
        auto g = load_interval_gallery(id);
        auto idx = IndexSequence::from_terms({0, 3, 7, 20, 21, 64, 127});
        const double start = g.system.domain.sample(99);
        auto streamed = orbit_at_indices(g.system, start, idx, 7);
        auto full = compose_orbit(g.system, start, 127);
        for (std::size_t i = 0; i < 7; ++i) CHECK(streamed[i] == full.points[idx.term(i)]);
    }
}
