#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <ndchaos/core.hpp>
#include <ndchaos/symbolic.hpp>

using namespace ndchaos;

namespace {

SymbolSequence random_sequence(std::uint64_t seed) {
    const std::uint64_t bits = splitmix64(seed);
    switch (seed % 3) {
        case 0: return SymbolSequence::constant(int(bits & 1));
        case 1: {
            std::string pattern;
            const std::size_t len = 1 + (bits >> 8) % 6;
            for (std::size_t i = 0; i < len; ++i) pattern += char('0' + ((bits >> i) & 1));
            return SymbolSequence::periodic(pattern);
        }
        default:
            return SymbolSequence::generator(
                [bits](std::uint64_t k) { return int((splitmix64(bits + k) >> 13) & 1); });
    }
}

}  // namespace

TEST_CASE("rho basics") {
    auto zeros = SymbolSequence::constant(0);
    auto ones = SymbolSequence::constant(1);

    CHECK(rho(zeros, zeros).value == 0.0);
    CHECK(rho(zeros, ones).value == 2.0);
    CHECK(rho(zeros, ones).error_bound == 0.0);

    auto spike = SymbolSequence::with_prefix("1", zeros);
    CHECK(rho(spike, zeros).value == 1.0);

    CHECK_THROWS_AS(rho(zeros, ones, 0), ParameterError);
}

TEST_CASE("rho bounds") {
    for (std::uint64_t i = 0; i < 2000; ++i) {
        auto a = random_sequence(2 * i);
        auto b = random_sequence(2 * i + 1);
        const double v = rho(a, b).value;
        CHECK(v <= 2.0);
        if (a.bit(0) != b.bit(0)) CHECK(v >= 1.0);
    }
}

TEST_CASE("shift") {
    auto zeros = SymbolSequence::constant(0);

    SUBCASE("constants are fixed") {
        auto s = shift(zeros);
        CHECK(rho(s, zeros).value == 0.0);
    }

    SUBCASE("prefix is consumed bit by bit") {
        auto s = shift(SymbolSequence::with_prefix("10", zeros));
        auto expect = SymbolSequence::with_prefix("0", zeros);
        for (std::uint64_t i = 0; i < 32; ++i) CHECK(s.bit(i) == expect.bit(i));
    }

    SUBCASE("prefixing a shifted, prefixed tail preserves every bit") {
        auto base = SymbolSequence::with_prefix("0110", SymbolSequence::periodic("011"));
        auto spliced = SymbolSequence::with_prefix("10", base.shifted(2));
        for (std::uint64_t i = 0; i < 2; ++i) CHECK(spliced.bit(i) == (i == 0 ? 1 : 0));
        for (std::uint64_t i = 2; i < 64; ++i) CHECK(spliced.bit(i) == base.bit(i));
        auto deep = SymbolSequence::with_prefix("1", base.shifted(9));
        CHECK(deep.bit(0) == 1);
        for (std::uint64_t i = 1; i < 64; ++i) CHECK(deep.bit(i) == base.bit(i + 8));
    }

    SUBCASE("exactly 2-Lipschitz, with equality when bit 0 agrees") {
        for (std::uint64_t i = 0; i < 10000; ++i) {
            auto a = random_sequence(3 * i);
            auto b = random_sequence(3 * i + 1);
            const double before = rho(a, b, 80).value;
            const double after = rho(shift(a), shift(b), 80).value;
            CHECK(after <= 2.0 * before + 1e-12);
            if (a.bit(0) == b.bit(0) && a.period() > 0 && b.period() > 0)
                CHECK(after == doctest::Approx(2.0 * before).epsilon(1e-12));
        }
    }
}

TEST_CASE("rho is a metric on sampled triples") {
    auto rep = verify_metric_axioms(symbol_space_domain(), 10000, 17);
    CHECK(rep.within(1e-12));
}

TEST_CASE("code family") {
    SUBCASE("count below 2 is rejected") {
        CHECK_THROWS_AS(code_family(1, 0), ParameterError);
    }

    SUBCASE("two calls yield identical bits") {
        auto f1 = code_family(4, 12345);
        auto f2 = code_family(4, 12345);
        for (std::size_t j = 0; j < 4; ++j)
            for (std::uint64_t t = 0; t < 512; ++t) CHECK(f1[j].bit(t) == f2[j].bit(t));
    }

    SUBCASE("a member agrees with itself everywhere") {
        auto fam = code_family(2, 7);
        auto rep = check_agree_disagree(fam[0], fam[0], 10000);
        CHECK(rep.agreements == 10000);
        CHECK(rep.disagreements == 0);
    }

    SUBCASE("pairs agree and disagree at many indices") {
        auto fam = code_family(2, 99);
        auto rep = check_agree_disagree(fam[0], fam[1], 10000);
        CHECK(rep.agreements >= 100);
        CHECK(rep.disagreements >= 100);
        CHECK(rep.window_check);
    }

    SUBCASE("all 45 pairs of a 10-member family pass the window check at depth 10^4") {
        auto fam = code_family(10, 4242);
        for (std::size_t i = 0; i < fam.size(); ++i)
            for (std::size_t j = i + 1; j < fam.size(); ++j) {
                auto rep = check_agree_disagree(fam[i], fam[j], 10000);
                CHECK(rep.agreements >= 100);
                CHECK(rep.disagreements >= 100);
                CHECK(rep.window_check);
            }
    }
}
