#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <ndchaos/seqdensity.hpp>

#include "oracles.hpp"

using namespace ndchaos;

TEST_CASE("relative density of arithmetic progressions") {
    auto nats = IndexSequence::naturals();

    SUBCASE("multiples of 3 have density 1/3") {
        auto est = relative_density(IndexSequence::arithmetic(0, 3), nats, 1000000, 1000);
        CHECK(std::fabs(est.upper - 1.0 / 3.0) <= 1e-3);
        CHECK(std::fabs(est.lower - 1.0 / 3.0) <= 1e-3);
        CHECK(est.lower <= est.upper);
    }

    SUBCASE("P = Q gives density exactly one") {
        auto Q = IndexSequence::arithmetic(5, 7);
        auto est = relative_density(Q, Q, 50000, 5000);
        CHECK(est.upper == 1.0);
        CHECK(est.lower == 1.0);
    }

    SUBCASE("estimate converges like 1/horizon for every small step") {
        const std::uint64_t horizon = 100000;
        for (std::uint64_t k = 2; k <= 10; ++k) {
            auto est = relative_density(IndexSequence::arithmetic(0, k), nats, horizon,
                                        horizon / 10);
            CHECK(std::fabs(est.upper - 1.0 / double(k)) <= 10.0 / double(horizon));
            CHECK(std::fabs(est.lower - 1.0 / double(k)) <= 10.0 / double(horizon));
        }
    }
}

TEST_CASE("relative density of the squares matches a direct count") {
    auto est = relative_density(IndexSequence::power(2), IndexSequence::naturals(), 1000000, 1000);
    CHECK(est.upper <= 2e-3);
    // oracle: squares in {1..n} counted by integer square root
    const double direct = double(oracles::isqrt_u64(999999)) / 1e6;
    CHECK(std::fabs(est.lower - direct) <= 2e-5);
}

TEST_CASE("relative density validation") {
    auto nats = IndexSequence::naturals();
    CHECK_THROWS_AS(relative_density(nats, nats, 0, 0), ParameterError);
    CHECK_THROWS_AS(relative_density(nats, nats, 10, 20), ParameterError);
    auto finite = IndexSequence::from_terms({1, 2, 3});
    CHECK_THROWS_AS(relative_density(nats, finite, 10, 2), ExtensionError);
}

TEST_CASE("generators regenerate their materialized prefix exactly") {
    auto sched = merge_schedule(7);
    for (std::size_t i = 0; i < sched.materialized_size(); ++i)
        CHECK(sched.generator()->term(i) == sched.materialized()[i]);
    CHECK_THROWS_AS(
        IndexSequence::with_generator({0, 2, 5},
                                      [] {
                                          auto g = std::make_shared<IndexSequence::Generator>();
                                          g->kind = "arithmetic";
                                          g->term = [](std::uint64_t i) { return 2 * i; };
                                          return g;
                                      }()),
        ParameterError);
}

TEST_CASE("density-one witness") {
    SUBCASE("a single family witnesses itself") {
        auto w = density_one_witness({IndexSequence::arithmetic(0, 2)}, {2, 4});
        auto est = relative_density(IndexSequence::arithmetic(0, 2), w.sequence,
                                    w.sequence.materialized_size(), 1);
        CHECK(est.upper == 1.0);
    }

    SUBCASE("multiples of 2 and 3 both reach upper density 0.99 at their block ends") {
        std::vector<IndexSequence> fams{IndexSequence::arithmetic(0, 2),
                                        IndexSequence::arithmetic(0, 3)};
        auto w = density_one_witness(fams, {2, 100});
        for (const auto& blk : w.schedule) {
            // oracle: recount the intersection over the materialized prefix
            std::uint64_t count = 0;
            for (std::uint64_t i = 0; i < blk.end_count; ++i)
                count += fams[blk.family].contains(w.sequence.term(i));
            const double ratio = double(count) / double(blk.end_count);
            CHECK(ratio == doctest::Approx(blk.achieved_ratio).epsilon(1e-12));
            CHECK(ratio >= 1.0 - 1.0 / double(blk.quality_k));
            if (blk.quality_k == 100) CHECK(ratio >= 0.99);
        }
    }

    SUBCASE("squares and cubes") {
        std::vector<IndexSequence> fams{IndexSequence::power(2), IndexSequence::power(3)};
        auto w = density_one_witness(fams, {2, 100});
        std::size_t checked = 0;
        for (const auto& blk : w.schedule) {
            if (blk.quality_k != 100) continue;
            std::uint64_t count = 0;
            for (std::uint64_t i = 0; i < blk.end_count; ++i)
                count += fams[blk.family].contains(w.sequence.term(i));
            CHECK(double(count) / double(blk.end_count) >= 0.99);
            ++checked;
        }
        CHECK(checked == 2);
    }

    SUBCASE("a finite family exhausts") {
        CHECK_THROWS_AS(
            density_one_witness({IndexSequence::from_terms({5, 7}),
                                 IndexSequence::arithmetic(0, 2)},
                                {2, 100}),
            InsufficientSequenceError);
    }
}

TEST_CASE("cesaro mean / density-zero split") {
    SUBCASE("identically zero input") {
        auto split = cesaro_density_equivalence(std::vector<double>(1000, 0.0), 1.0);
        CHECK(split.cesaro_mean_tail == 0.0);
        CHECK(split.exceptional_set.materialized_size() == 0);
        CHECK(split.residual_limit == 0.0);
        CHECK(split.mean_vanishes);
    }

    SUBCASE("spikes on the squares, 1/(i+1) elsewhere") {
        const std::uint64_t n = 100000;
        std::vector<double> a(n);
        double direct_sum = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            const std::uint64_t r = oracles::isqrt_u64(i);
            a[i] = (r * r == i) ? 1.0 : 1.0 / double(i + 1);
            direct_sum += a[i];
        }
        auto split = cesaro_density_equivalence(a, 1.0);
        CHECK(split.cesaro_mean_tail == doctest::Approx(direct_sum / double(n)).epsilon(1e-12));
        CHECK(split.cesaro_mean_tail <= 0.02);
        CHECK(split.exceptional_density <= 0.01);
        CHECK(split.residual_limit <= 0.01);
        CHECK(split.mean_vanishes);
    }

    SUBCASE("identically one input never vanishes") {
        auto split = cesaro_density_equivalence(std::vector<double>(1000, 1.0), 1.0);
        CHECK(split.cesaro_mean_tail == 1.0);
        CHECK_FALSE(split.mean_vanishes);
    }

    SUBCASE("bound violation") {
        CHECK_THROWS_AS(cesaro_density_equivalence({0.5, 2.0}, 1.0), BoundViolationError);
    }

    SUBCASE("exceptional density shrinks like the square root of the tail") {
        // unit spikes on an arithmetic progression of step k: tail ~ 1/k and
        // the split must keep the exceptional set near the spikes
        const std::uint64_t n = 50000;
        for (std::uint64_t k : {4, 9, 16, 25, 64}) {
            std::vector<double> a(n, 0.0);
            for (std::uint64_t i = 0; i < n; i += k) a[i] = 1.0;
            auto split = cesaro_density_equivalence(a, 1.0);
            const double tau = split.cesaro_mean_tail;
            CHECK(tau == doctest::Approx(1.0 / double(k)).epsilon(0.05));
            CHECK(split.exceptional_density <= std::sqrt(tau) + 0.01);
            CHECK(split.residual_limit == 0.0);
        }
    }
}

TEST_CASE("merge schedule") {
    SUBCASE("k_max = 1") {
        auto s = merge_schedule(1);
        CHECK(s.materialized_size() == 1);
        CHECK(s.term(0) == 1);
    }

    SUBCASE("k_max = 4 unrolls to 1,2,8,48") {
        auto s = merge_schedule(4);
        CHECK(s.prefix(4) == std::vector<std::uint64_t>{1, 2, 8, 48});
    }

    SUBCASE("k_max = 7 matches the 128-bit oracle") {
        auto s = merge_schedule(7);
        auto big = oracles::merge_schedule_u128(7);
        REQUIRE(big.size() == 7);
        for (std::size_t i = 0; i < 7; ++i)
            CHECK((unsigned __int128)s.term(i) == big[i]);
        CHECK(s.term(6) == 46080);
    }

    SUBCASE("consecutive ratio is exactly 2k") {
        auto s = merge_schedule(12);
        for (std::uint64_t k = 1; k < 12; ++k) {
            CHECK(s.term(k) % s.term(k - 1) == 0);
            CHECK(s.term(k) / s.term(k - 1) == 2 * k);
        }
    }

    SUBCASE("overflow is detected") {
        CHECK_THROWS_AS(merge_schedule(40), OverflowError);
    }
}
