#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "constructors.hpp"
#include "core.hpp"
#include "errors.hpp"
#include "pwl.hpp"
#include "symbolic.hpp"

namespace ndchaos {

// Concrete systems with machine-checkable structure. Every claim carried in
// the metadata is re-verified at load; the suite fails closed.
template <class P>
struct GallerySystem {
    std::string id;
    MapFamily<P> system;
    std::vector<PeriodicPointPair<P>> periodic_pairs;
    bool interval_continuous = true;  // the doubling entry is continuous only as a circle map
    bool mixing_candidate = false;    // probe target, not a verified claim
    std::uint64_t verify_depth = 128;
    double return_tol = 1e-9;
};

using AnyGallerySystem = std::variant<GallerySystem<double>, GallerySystem<SymbolSequence>>;

template <class P>
void verify_gallery(const GallerySystem<P>& g) {
    auto fail = [&](const std::string& why) {
        throw GalleryError("gallery '" + g.id + "' failed verification: " + why);
    };
    if (!verify_metric_axioms(g.system.domain, 2000, 7).within(1e-12))
        fail("metric axioms");
    for (std::size_t s = 0; s < 48; ++s) {
        P x = g.system.domain.sample(mix64(11, s));
        for (std::uint64_t n = 0; n < 64; ++n) {
            x = orbit_step(g.system, n, x);
            if (!g.system.domain.contains(x)) fail("orbit escaped the domain");
        }
    }
    if (max_clamp_magnitude(g.system, 32, 64) >= 1e-12) fail("clamp magnitude");
    for (const auto& pair : g.periodic_pairs) {
        auto rep = verify_periodic_pair(g.system, pair, g.verify_depth, g.return_tol);
        if (!rep.ok) fail("periodic pair (return error " + fmt17(rep.max_return_error) +
                          ", min separation " + fmt17(rep.min_separation) + ")");
    }
}

// ---------------------------------------------------------------------------
// Interval entries.

inline MapFamily<double> make_logistic(std::vector<double> r_schedule) {
    if (r_schedule.empty()) throw ParameterError("logistic: empty r schedule");
    for (double r : r_schedule)
        if (r < 0.0 || r > 4.0) throw ParameterError("logistic: r must lie in [0, 4]");
    MapFamily<double> f;
    f.domain = interval_domain(0.0, 1.0);
    f.description = "logistic r-scheduled";
    f.rule = [r = std::move(r_schedule)](std::uint64_t n, const double& x) {
        return (r[n % r.size()] * x) * (1.0 - x);
    };
    return f;
}

inline MapFamily<double> make_tent(std::vector<double> slope_schedule) {
    if (slope_schedule.empty()) throw ParameterError("tent: empty slope schedule");
    for (double s : slope_schedule)
        if (s <= 0.0 || s > 2.0) throw ParameterError("tent: slope must lie in (0, 2]");
    MapFamily<double> f;
    f.domain = interval_domain(0.0, 1.0);
    f.description = "tent slope-scheduled";
    f.rule = [s = std::move(slope_schedule)](std::uint64_t n, const double& x) {
        const double slope = s[n % s.size()];
        return x <= 0.5 ? slope * x : slope - slope * x;
    };
    return f;
}

inline MapFamily<double> make_doubling() {
    MapFamily<double> f;
    f.domain = interval_domain(0.0, 1.0);
    f.description = "doubling (circle map, branch convention on [0,1])";
    f.rule = [](std::uint64_t, const double& x) { return x < 0.5 ? 2.0 * x : 2.0 * x - 1.0; };
    return f;
}

inline MapFamily<SymbolSequence> make_full_shift(std::size_t rho_depth = 64) {
    MapFamily<SymbolSequence> f;
    f.domain = symbol_space_domain(rho_depth);
    f.description = "full shift on two symbols";
    f.rule = [](std::uint64_t, const SymbolSequence& s) { return s.shifted(); };
    return f;
}

// ---------------------------------------------------------------------------
// Expanding family: nested sets A(n) = [0, 2^-n], B(n) = [5/8, 5/8 + 3/2^(n+2)]
// (diameters floored at level 30 so doubles stay meaningful), with maps whose
// branches send both current sets onto the whole interval. All endpoints are
// dyadic rationals; the inclusion checks run in exact arithmetic.

namespace detail {

inline std::int64_t pow2(std::uint64_t e) { return std::int64_t(1) << e; }

inline std::uint64_t capped(std::uint64_t n, std::uint64_t cap = 30) {
    return n < cap ? n : cap;
}

}  // namespace detail

inline NestedIntervalFamily expanding_nested_family() {
    NestedIntervalFamily fam;
    fam.A = [](std::uint64_t n) {
        if (n < 1) throw ParameterError("nested family: levels start at 1");
        return FracInterval{Frac(0), Frac(1, detail::pow2(detail::capped(n)))};
    };
    fam.B = [](std::uint64_t n) {
        if (n < 1) throw ParameterError("nested family: levels start at 1");
        const Frac left(5, 8);
        return FracInterval{left, left + Frac(3, detail::pow2(detail::capped(n - 1) + 3))};
    };
    fam.disjoint_at = 1;
    fam.limit_a = Frac(0);
    fam.limit_b = Frac(5, 8);
    return fam;
}

inline PwlFamily expanding_pwl_family() {
    PwlFamily maps;
    maps.map_at = [](std::uint64_t m) -> PwlMap {
        if (m == 0) {
            return PwlMap::from_vertices({{Frac(0), Frac(0)},
                                          {Frac(1, 2), Frac(1)},
                                          {Frac(5, 8), Frac(0)},
                                          {Frac(13, 16), Frac(1)},
                                          {Frac(1), Frac(0)}});
        }
        auto build = [](std::uint64_t level) {
            const Frac h(1, detail::pow2(detail::capped(level + 1)));
            const Frac g(3, detail::pow2(detail::capped(level) + 3));
            const Frac c(5, 8);
            return PwlMap::from_vertices({{Frac(0), Frac(0)},
                                          {h / Frac(2), Frac(1)},
                                          {h, Frac(0)},
                                          {c, Frac(0)},
                                          {c + g / Frac(2), Frac(1)},
                                          {c + g, Frac(0)},
                                          {Frac(1), Frac(0)}});
        };
        if (m >= 30) {
            static const PwlMap capped_map = build(30);  // constant past the cap
            return capped_map;
        }
        return build(m);
    };
    return maps;
}

struct ExpandingFamilyBundle {
    GallerySystem<double> entry;
    NestedIntervalFamily family;
    PwlFamily maps;
};

inline ExpandingFamilyBundle load_expanding_family() {
    ExpandingFamilyBundle b;
    b.family = expanding_nested_family();
    b.maps = expanding_pwl_family();

    MapFamily<double> sys;
    sys.domain = interval_domain(0.0, 1.0);
    sys.description = "expanding nested-family system";
    auto maps = b.maps;
    sys.rule = [maps](std::uint64_t n, const double& x) { return maps.map_at(n).eval(x); };

    b.entry.id = "expanding-family";
    b.entry.system = std::move(sys);
    verify_gallery(b.entry);

    auto rep = check_expanding_condition(b.family, b.maps, 48);
    if (!rep.ok)
        throw GalleryError("gallery 'expanding-family': inclusion fails at level " +
                           std::to_string(rep.first_failure_level));
    for (std::uint64_t n = 1; n < 64; ++n) {
        if (b.family.A(n + 1).diameter() > b.family.A(n).diameter() ||
            b.family.B(n + 1).diameter() > b.family.B(n).diameter())
            throw GalleryError("gallery 'expanding-family': diameters not monotone");
    }
    if (rep.max_diameter_at_depth > 1e-6)
        throw GalleryError("gallery 'expanding-family': diameters not below tolerance");
    {
        const FracInterval a = b.family.A(b.family.disjoint_at);
        const FracInterval bb = b.family.B(b.family.disjoint_at);
        if (!(a.hi < bb.lo || bb.hi < a.lo))
            throw GalleryError("gallery 'expanding-family': sets not disjoint at disjoint_at");
    }
    return b;
}

// ---------------------------------------------------------------------------

inline GallerySystem<double> load_interval_gallery(const std::string& id) {
    GallerySystem<double> g;
    g.id = id;
    if (id == "logistic-autonomous") {
        g.system = make_logistic({4.0});
        g.periodic_pairs.push_back({0.0, 0.75, {1, 1}, 0.3});
        g.verify_depth = 256;
        g.return_tol = 1e-13;
    } else if (id == "logistic-periodic-r") {
        g.system = make_logistic({3.5, 4.0});
        g.verify_depth = 128;
    } else if (id == "tent") {
        g.system = make_tent({2.0});
        g.periodic_pairs.push_back({0.0, 2.0 / 3.0, {1, 1}, 0.3});
        g.mixing_candidate = true;
        g.verify_depth = 24;  // the 2/3 representation error doubles per step
        g.return_tol = 1e-8;
    } else if (id == "doubling") {
        g.system = make_doubling();
        g.periodic_pairs.push_back({0.0, 1.0, {1, 1}, 0.4});
        g.interval_continuous = false;
        g.mixing_candidate = true;
        g.verify_depth = 128;
        g.return_tol = 1e-13;
    } else if (id == "expanding-family") {
        return load_expanding_family().entry;
    } else {
        throw GalleryError("unknown gallery id '" + id + "'");
    }
    verify_gallery(g);
    return g;
}

inline GallerySystem<SymbolSequence> load_shift_gallery() {
    GallerySystem<SymbolSequence> g;
    g.id = "full-shift";
    g.system = make_full_shift();
    // constant sequences are shift-fixed at mutual distance 2; any separation
    // below 1 satisfies the strict 2*delta bound
    g.periodic_pairs.push_back(
        {SymbolSequence::constant(0), SymbolSequence::constant(1), {1, 1}, 0.9});
    g.mixing_candidate = true;
    g.verify_depth = 128;
    g.return_tol = 1e-13;
    verify_gallery(g);
    return g;
}

inline const std::vector<std::string>& gallery_ids() {
    static const std::vector<std::string> ids = {
        "logistic-autonomous", "logistic-periodic-r", "tent",
        "doubling",            "full-shift",          "expanding-family"};
    return ids;
}

inline AnyGallerySystem load_gallery(const std::string& id) {
    if (id == "full-shift") return load_shift_gallery();
    return load_interval_gallery(id);
}

// Tracer for full-shift pseudo-orbits: bit t comes from the block seed that
// owns time t, so every shifted view matches the pseudo-orbit to its block
// end.
inline SymbolSequence concatenation_tracer(const PseudoOrbit<SymbolSequence>& po) {
    auto bases = std::make_shared<const std::vector<SymbolSequence>>(po.block_bases);
    auto m = std::make_shared<const std::vector<std::uint64_t>>(po.schedule.m);
    return SymbolSequence::generator(
        [bases, m](std::uint64_t t) {
            std::size_t n = 0;
            while (n + 1 < m->size() && (*m)[n + 1] <= t) ++n;
            if (n >= bases->size()) n = bases->size() - 1;
            return (*bases)[n].bit(t);
        },
        "concatenation tracer");
}

}  // namespace ndchaos
