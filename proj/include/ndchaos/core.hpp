#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "seqdensity.hpp"
#include "symbolic.hpp"
#include "util.hpp"

namespace ndchaos {

enum class DomainKind { real_interval, symbol_space, product, other };

// A metric domain: point type P, distance, membership, a clamp that repairs
// rounding escapes, and a deterministic sampler for property checks.
template <class P>
struct MetricDomain {
    DomainKind kind = DomainKind::other;
    std::string name;
    std::function<double(const P&, const P&)> distance;
    std::function<bool(const P&)> contains;
    std::function<P(const P&)> clamp;             // identity when null
    std::function<P(std::uint64_t)> sample;       // deterministic by index
    double diameter = 1.0;
    double lo = 0.0, hi = 1.0;                    // real_interval only
};

inline MetricDomain<double> interval_domain(double a, double b) {
    if (!(a < b)) throw ParameterError("interval_domain: requires a < b");
    MetricDomain<double> d;
    d.kind = DomainKind::real_interval;
    d.name = "interval[" + fmt17(a) + "," + fmt17(b) + "]";
    d.lo = a;
    d.hi = b;
    d.diameter = b - a;
    d.distance = [](const double& x, const double& y) { return std::fabs(x - y); };
    d.contains = [a, b](const double& x) { return x >= a && x <= b; };
    d.clamp = [a, b](const double& x) { return x < a ? a : (x > b ? b : x); };
    d.sample = [a, b](std::uint64_t i) {
        return a + (b - a) * unit_double(splitmix64(i * 0x9E3779B97F4A7C15ull + 0xD1B54A32D192ED03ull));
    };
    return d;
}

inline MetricDomain<SymbolSequence> symbol_space_domain(std::size_t rho_depth = 64) {
    MetricDomain<SymbolSequence> d;
    d.kind = DomainKind::symbol_space;
    d.name = "symbol-space";
    d.diameter = 2.0;
    d.distance = [rho_depth](const SymbolSequence& a, const SymbolSequence& b) {
        return rho(a, b, rho_depth).value;
    };
    d.contains = [](const SymbolSequence&) { return true; };
    d.clamp = nullptr;
    d.sample = [](std::uint64_t i) {
        const std::uint64_t bits = splitmix64(i ^ 0xA0761D6478BD642Full);
        return SymbolSequence::generator(
            [bits](std::uint64_t k) { return static_cast<int>((bits >> (k % 64)) & 1); },
            "sampled");
    };
    return d;
}

// Product of two domains under the max metric.
template <class A, class B>
MetricDomain<std::pair<A, B>> product_domain(MetricDomain<A> da, MetricDomain<B> db) {
    MetricDomain<std::pair<A, B>> d;
    d.kind = DomainKind::product;
    d.name = "product(" + da.name + "," + db.name + ")";
    d.diameter = std::max(da.diameter, db.diameter);
    d.distance = [da, db](const std::pair<A, B>& x, const std::pair<A, B>& y) {
        return std::max(da.distance(x.first, y.first), db.distance(x.second, y.second));
    };
    d.contains = [da, db](const std::pair<A, B>& x) {
        return da.contains(x.first) && db.contains(x.second);
    };
    d.clamp = [da, db](const std::pair<A, B>& x) {
        return std::pair<A, B>{da.clamp ? da.clamp(x.first) : x.first,
                               db.clamp ? db.clamp(x.second) : x.second};
    };
    d.sample = [da, db](std::uint64_t i) {
        return std::pair<A, B>{da.sample(mix64(i, 1)), db.sample(mix64(i, 2))};
    };
    return d;
}

// Time-indexed family of self-maps; step n applies rule(n, .).
template <class P>
struct MapFamily {
    std::function<P(std::uint64_t, const P&)> rule;
    std::string description;
    MetricDomain<P> domain;
};

template <class P>
struct Orbit {
    P start;
    std::uint64_t horizon = 0;
    std::vector<P> points;  // horizon + 1 entries
};

inline constexpr std::uint64_t default_orbit_capacity = std::uint64_t(1) << 27;

template <class P>
P orbit_step(const MapFamily<P>& system, std::uint64_t n, const P& x) {
    P y = system.rule(n, x);
    return system.domain.clamp ? system.domain.clamp(y) : y;
}

template <class P>
Orbit<P> compose_orbit(const MapFamily<P>& system, const P& start, std::uint64_t horizon,
                       std::uint64_t capacity = default_orbit_capacity) {
    if (!system.domain.contains(start))
        throw DomainViolationError("compose_orbit: start outside domain");
    if (horizon + 1 > capacity)
        throw CapacityError("compose_orbit: horizon exceeds the memory cap; use orbit_at_indices");
    Orbit<P> o;
    o.start = start;
    o.horizon = horizon;
    o.points.reserve(horizon + 1);
    o.points.push_back(start);
    for (std::uint64_t n = 0; n < horizon; ++n)
        o.points.push_back(orbit_step(system, n, o.points.back()));
    return o;
}

// Streaming evaluation at selected orbit times; O(1) memory in the largest
// index.
template <class P>
std::vector<P> orbit_at_indices(const MapFamily<P>& system, const P& start,
                                const IndexSequence& indices, std::size_t count) {
    if (!system.domain.contains(start))
        throw DomainViolationError("orbit_at_indices: start outside domain");
    std::vector<P> out;
    out.reserve(count);
    P x = start;
    std::uint64_t t = 0;
    std::uint64_t prev = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t target = indices.term(i);
        if (i > 0 && target <= prev)
            throw ParameterError("orbit_at_indices: indices must be strictly increasing");
        while (t < target) {
            x = orbit_step(system, t, x);
            ++t;
        }
        out.push_back(x);
        prev = target;
    }
    return out;
}

// ---------------------------------------------------------------------------

struct MetricAxiomReport {
    double max_self_distance = 0.0;
    double max_asymmetry = 0.0;
    double max_triangle_violation = 0.0;

    bool within(double tol) const {
        return max_self_distance <= tol && max_asymmetry <= tol && max_triangle_violation <= tol;
    }
};

template <class P>
MetricAxiomReport verify_metric_axioms(const MetricDomain<P>& dom, std::size_t triples,
                                       std::uint64_t seed = 0) {
    MetricAxiomReport rep;
    for (std::size_t i = 0; i < triples; ++i) {
        P x = dom.sample(mix64(seed, 3 * i));
        P y = dom.sample(mix64(seed, 3 * i + 1));
        P z = dom.sample(mix64(seed, 3 * i + 2));
        const double dxy = dom.distance(x, y);
        const double dyx = dom.distance(y, x);
        const double dxz = dom.distance(x, z);
        const double dyz = dom.distance(y, z);
        rep.max_self_distance = std::max(rep.max_self_distance, dom.distance(x, x));
        rep.max_asymmetry = std::max(rep.max_asymmetry, std::fabs(dxy - dyx));
        rep.max_triangle_violation =
            std::max(rep.max_triangle_violation, dxz - (dxy + dyz));
        if (dxy < 0.0) rep.max_self_distance = std::max(rep.max_self_distance, -dxy);
    }
    return rep;
}

// Largest clamp correction observed along sampled orbits; gallery systems
// must stay below 1e-12 per step.
template <class P>
double max_clamp_magnitude(const MapFamily<P>& system, std::size_t samples, std::uint64_t steps,
                           std::uint64_t seed = 0) {
    if (!system.domain.clamp) return 0.0;
    double worst = 0.0;
    for (std::size_t s = 0; s < samples; ++s) {
        P x = system.domain.sample(mix64(seed, s));
        for (std::uint64_t n = 0; n < steps; ++n) {
            P raw = system.rule(n, x);
            P fixed = system.domain.clamp(raw);
            worst = std::max(worst, system.domain.distance(raw, fixed));
            x = fixed;
        }
    }
    return worst;
}

}  // namespace ndchaos
