#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <ndchaos/gallery.hpp>

using namespace ndchaos;

TEST_CASE("every gallery entry loads with its metadata verified") {
    for (const auto& id : gallery_ids()) CHECK_NOTHROW(load_gallery(id));
    CHECK_THROWS_AS(load_gallery("no-such-system"), GalleryError);
}

TEST_CASE("logistic fixed points") {
    auto g = load_interval_gallery("logistic-autonomous");
    // 4x(1-x) = x at 0 and 3/4; both orbits are constant in double arithmetic
    auto o0 = compose_orbit(g.system, 0.0, 200);
    auto o1 = compose_orbit(g.system, 0.75, 200);
    for (double x : o0.points) CHECK(x == 0.0);
    for (double x : o1.points) CHECK(x == 0.75);
    CHECK(g.periodic_pairs[0].separation == 0.3);
}

TEST_CASE("full shift fixed points sit at distance two") {
    auto g = load_shift_gallery();
    const auto& p = g.periodic_pairs[0];
    CHECK(g.system.domain.distance(p.x, p.y) == 2.0);
    CHECK(g.system.domain.distance(p.x, p.y) > 2.0 * p.separation);
    auto shifted = orbit_step(g.system, 0, p.x);
    CHECK(g.system.domain.distance(shifted, p.x) == 0.0);
}

TEST_CASE("expanding family level-1 inclusion, exactly") {
    auto bundle = load_expanding_family();
    const auto a1 = bundle.family.A(1), b1 = bundle.family.B(1);
    CHECK(a1.lo == Frac(0));
    CHECK(a1.hi == Frac(1, 2));
    CHECK(b1.lo == Frac(5, 8));
    CHECK(b1.hi == Frac(1));

    // oracle: recompute both images with exact rational arithmetic
    const PwlMap f0 = bundle.maps.map_at(0);
    auto img_a = f0.exact_image_hull(a1.lo, a1.hi);
    auto img_b = f0.exact_image_hull(b1.lo, b1.hi);
    CHECK(img_a.first == Frac(0));
    CHECK(img_a.second == Frac(1));
    CHECK(img_b.first == Frac(0));
    CHECK(img_b.second == Frac(1));

    const auto a2 = bundle.family.A(2), b2 = bundle.family.B(2);
    CHECK(img_a.first <= a2.lo);
    CHECK(a2.hi <= img_a.second);
    CHECK(img_b.first <= b2.lo);
    CHECK(b2.hi <= img_b.second);

    CHECK(bundle.family.scramble_delta() == doctest::Approx(5.0 / 16.0).epsilon(1e-15));
}

TEST_CASE("expanding condition holds on many materialized levels") {
    auto bundle = load_expanding_family();
    auto rep = check_expanding_condition(bundle.family, bundle.maps, 64);
    CHECK(rep.ok);
    CHECK(rep.max_diameter_at_depth <= 1e-6);
}

TEST_CASE("corrupt metadata fails closed") {
    GallerySystem<double> g;
    g.id = "corrupt";
    g.system = make_tent({2.0});
    // claims a fixed pair that is not fixed
    g.periodic_pairs.push_back({0.1, 0.9, {1, 1}, 0.3});
    g.verify_depth = 16;
    CHECK_THROWS_AS(verify_gallery(g), GalleryError);
}

TEST_CASE("gallery clamp corrections stay tiny") {
    for (const char* id : {"logistic-autonomous", "logistic-periodic-r", "tent", "doubling",
                           "expanding-family"}) {
        auto g = load_interval_gallery(id);
        CHECK(max_clamp_magnitude(g.system, 32, 64) < 1e-12);
    }
}
