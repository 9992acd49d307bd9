#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "core.hpp"
#include "distchaos.hpp"
#include "errors.hpp"
#include "pwl.hpp"
#include "seqdensity.hpp"
#include "symbolic.hpp"

namespace ndchaos {

// ---------------------------------------------------------------------------
// Checkpoint schedule m(0) = 1, m(n+1) = (2^n + 1) m(n). The block-length
// ratio (m(n+1) - m(n)) / m(n+1) = 2^n / (2^n + 1) drives every density-one
// and density-zero block argument downstream.

struct CheckpointSchedule {
    std::vector<std::uint64_t> m;  // m[0..depth]

    std::size_t depth() const { return m.empty() ? 0 : m.size() - 1; }

    // code bit index controlling orbit time t
    std::size_t block_of_time(std::uint64_t t) const {
        if (m.empty()) throw ScheduleError("CheckpointSchedule: empty");
        if (t < m[0]) return 0;
        auto it = std::upper_bound(m.begin(), m.end(), t);
        std::size_t n = static_cast<std::size_t>(it - m.begin()) - 1;
        if (n + 1 >= m.size())
            throw ScheduleError("CheckpointSchedule: time beyond the last checkpoint");
        return n;
    }
};

inline CheckpointSchedule checkpoint_schedule(std::size_t depth) {
    if (depth < 1) throw ParameterError("checkpoint_schedule: depth must be >= 1");
    CheckpointSchedule s;
    s.m.reserve(depth + 1);
    s.m.push_back(1);
    for (std::size_t n = 0; n < depth; ++n) {
        if (n >= 63) throw OverflowError("checkpoint_schedule: factor exceeds 64 bits");
        const std::uint64_t factor = (std::uint64_t(1) << n) + 1;
        std::uint64_t next;
        if (__builtin_mul_overflow(s.m.back(), factor, &next))
            throw OverflowError("checkpoint_schedule: value exceeds native integer range");
        s.m.push_back(next);
    }
    return s;
}

// Smallest schedule whose last checkpoint reaches `horizon`+1 points.
inline CheckpointSchedule schedule_covering(std::uint64_t horizon) {
    std::size_t depth = 1;
    while (true) {
        CheckpointSchedule s = checkpoint_schedule(depth);
        if (s.m.back() >= horizon + 1) return s;
        ++depth;
    }
}

// ---------------------------------------------------------------------------

// Low-discrepancy default seed points: bit-reversed dyadic fractions on an
// interval, dyadic cylinder representatives on the sequence space.
inline double van_der_corput(std::uint64_t i) {
    double v = 0.0, f = 0.5;
    for (std::uint64_t n = i + 1; n != 0; n >>= 1, f *= 0.5)
        if (n & 1) v += f;
    return v;
}

inline SymbolSequence dyadic_symbol_point(std::uint64_t i) {
    const std::uint64_t n = i + 1;
    std::string bits;
    for (std::uint64_t k = n; k != 0; k >>= 1) bits += char('0' + (k & 1));
    return SymbolSequence::with_prefix(bits, SymbolSequence::constant(0));
}

template <class P>
struct PeriodicPointPair {
    P x{};
    P y{};
    std::pair<unsigned, unsigned> periods{1, 1};
    double separation = 0.0;  // delta with d(f_0^n x, f_0^n y) > 2*delta
};

struct PeriodicPairReport {
    double max_return_error = 0.0;  // worst |f_0^{kp}(x) - x| over checked multiples
    double min_separation = 0.0;    // min_n d(f_0^n x, f_0^n y)
    bool ok = false;
};

template <class P>
PeriodicPairReport verify_periodic_pair(const MapFamily<P>& system,
                                        const PeriodicPointPair<P>& pair, std::uint64_t depth,
                                        double return_tol) {
    PeriodicPairReport rep;
    P ox = pair.x, oy = pair.y;
    rep.min_separation = system.domain.distance(ox, oy);
    for (std::uint64_t n = 1; n <= depth; ++n) {
        ox = orbit_step(system, n - 1, ox);
        oy = orbit_step(system, n - 1, oy);
        rep.min_separation = std::min(rep.min_separation, system.domain.distance(ox, oy));
        if (pair.periods.first > 0 && n % pair.periods.first == 0)
            rep.max_return_error =
                std::max(rep.max_return_error, system.domain.distance(ox, pair.x));
        if (pair.periods.second > 0 && n % pair.periods.second == 0)
            rep.max_return_error =
                std::max(rep.max_return_error, system.domain.distance(oy, pair.y));
    }
    rep.ok = rep.max_return_error <= return_tol && rep.min_separation > 2.0 * pair.separation;
    return rep;
}

// ---------------------------------------------------------------------------
// Asymptotic average pseudo-orbit: restart from a fresh seed point at every
// checkpoint, follow the true orbit inside each block. Per-step errors occur
// only at the O(log) block boundaries, so their Cesàro mean vanishes.

template <class P>
struct PseudoOrbit {
    std::vector<P> points;        // x_0 .. x_horizon
    std::vector<P> block_bases;   // u_n, the seed of block n
    SymbolSequence code;          // which periodic point each h-slot used
    CheckpointSchedule schedule;
};

// Interleaving of seed points: rounds r = 1, 2, ... emit e_0..e_{r-1} then
// h_0..h_{r-1}.
template <class P>
std::vector<P> interleave_bases(const std::vector<P>& h, const std::vector<P>& e,
                                std::size_t count) {
    std::vector<P> u;
    u.reserve(count);
    for (std::size_t r = 1; u.size() < count; ++r) {
        if (e.size() < r || h.size() < r)
            throw ParameterError("interleave_bases: not enough seed points for the horizon");
        for (std::size_t i = 0; i < r && u.size() < count; ++i) u.push_back(e[i]);
        for (std::size_t i = 0; i < r && u.size() < count; ++i) u.push_back(h[i]);
    }
    return u;
}

template <class P>
PseudoOrbit<P> build_aapo(const MapFamily<P>& system, const PeriodicPointPair<P>& pair,
                          const SymbolSequence& code, const std::vector<P>& base_points,
                          const CheckpointSchedule& schedule, std::uint64_t horizon) {
    if (schedule.m.empty() || schedule.m.back() < horizon + 1)
        throw ScheduleError("build_aapo: schedule too shallow for the horizon");

    std::size_t blocks = 0;
    while (blocks + 1 < schedule.m.size() && schedule.m[blocks] <= horizon) ++blocks;

    std::vector<P> h;
    h.reserve(blocks);
    for (std::size_t n = 0; n < blocks; ++n)
        h.push_back(code.bit(n) == 0 ? pair.x : pair.y);
    std::vector<P> u = interleave_bases(h, base_points, blocks);

    PseudoOrbit<P> po;
    po.block_bases = u;
    po.code = code;
    po.schedule = schedule;
    po.points.resize(horizon + 1, pair.x);
    po.points[0] = u[0];
    for (std::size_t n = 0; n < blocks; ++n) {
        const std::uint64_t from = schedule.m[n];
        const std::uint64_t to = std::min<std::uint64_t>(schedule.m[n + 1] - 1, horizon);
        if (from > horizon) break;
        P p = u[n];
        for (std::uint64_t t = 0; t < from; ++t) p = orbit_step(system, t, p);
        for (std::uint64_t i = from; i <= to; ++i) {
            po.points[i] = p;
            if (i < to) p = orbit_step(system, i, p);
        }
    }
    return po;
}

// Cesàro mean of per-step map errors d(f_i(x_i), x_{i+1}) at each checkpoint.
template <class P>
std::vector<double> verify_aapo(const PseudoOrbit<P>& po, const MapFamily<P>& system,
                                const std::vector<std::uint64_t>& checkpoints) {
    for (std::uint64_t c : checkpoints)
        if (c >= po.points.size())
            throw ParameterError("verify_aapo: checkpoint beyond the pseudo-orbit horizon");
    std::vector<double> out;
    out.reserve(checkpoints.size());
    double sum = 0.0;
    std::uint64_t done = 0;
    for (std::uint64_t c : checkpoints) {
        for (std::uint64_t i = done; i < c; ++i)
            sum += system.domain.distance(orbit_step(system, i, po.points[i]), po.points[i + 1]);
        done = c;
        out.push_back(sum / static_cast<double>(c));
    }
    return out;
}

// Cesàro mean of the tracking error d(f_0^i(tracer), x_i) at each checkpoint.
template <class P>
std::vector<double> verify_average_shadowing(const PseudoOrbit<P>& po, const P& tracer,
                                             const MapFamily<P>& system,
                                             const std::vector<std::uint64_t>& checkpoints) {
    if (!system.domain.contains(tracer))
        throw DomainViolationError("verify_average_shadowing: tracer outside domain");
    for (std::uint64_t c : checkpoints)
        if (c > po.points.size())
            throw ParameterError("verify_average_shadowing: checkpoint beyond horizon");
    std::vector<double> out;
    out.reserve(checkpoints.size());
    double sum = 0.0;
    std::uint64_t done = 0;
    P p = tracer;
    for (std::uint64_t c : checkpoints) {
        for (std::uint64_t i = done; i < c; ++i) {
            sum += system.domain.distance(p, po.points[i]);
            p = orbit_step(system, i, p);
        }
        done = c;
        out.push_back(sum / static_cast<double>(c));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Nested interval families with the expanding property: each next pair of
// coding sets lies inside the image of BOTH current sets, so arbitrary
// A/B itineraries are realizable.

struct FracInterval {
    Frac lo, hi;
    double lo_d() const { return lo.to_double(); }
    double hi_d() const { return hi.to_double(); }
    double diameter() const { return (hi - lo).to_double(); }
};

struct NestedIntervalFamily {
    std::function<FracInterval(std::uint64_t)> A;  // level >= 1
    std::function<FracInterval(std::uint64_t)> B;
    std::uint64_t disjoint_at = 1;
    Frac limit_a;  // singleton limit of the A-chain
    Frac limit_b;

    double scramble_delta() const {
        Frac gap = limit_b < limit_a ? limit_a - limit_b : limit_b - limit_a;
        return (gap / Frac(2)).to_double();
    }
};

struct ExpandingCheckReport {
    bool ok = true;
    std::uint64_t first_failure_level = 0;
    double max_diameter_at_depth = 0.0;
};

// Exact check of the inclusion A(n+1) u B(n+1) inside f_{n-1}(A(n)) and
// f_{n-1}(B(n)) on the materialized levels.
inline ExpandingCheckReport check_expanding_condition(const NestedIntervalFamily& family,
                                                      const PwlFamily& maps,
                                                      std::uint64_t levels) {
    ExpandingCheckReport rep;
    for (std::uint64_t n = 1; n <= levels; ++n) {
        const FracInterval an = family.A(n), bn = family.B(n);
        const FracInterval an1 = family.A(n + 1), bn1 = family.B(n + 1);
        const PwlMap f = maps.map_at(n - 1);
        const auto img_a = f.exact_image_hull(an.lo, an.hi);
        const auto img_b = f.exact_image_hull(bn.lo, bn.hi);
        auto contains = [](const std::pair<Frac, Frac>& hull, const FracInterval& s) {
            return hull.first <= s.lo && s.hi <= hull.second;
        };
        const bool ok = contains(img_a, an1) && contains(img_a, bn1) && contains(img_b, an1) &&
                        contains(img_b, bn1);
        if (!ok) {
            rep.ok = false;
            rep.first_failure_level = n;
            return rep;
        }
    }
    rep.max_diameter_at_depth =
        std::max(family.A(levels).diameter(), family.B(levels).diameter());
    return rep;
}

// Level j -> A or B, keyed by the code bit that owns the block containing
// orbit time j - 1.
struct CodingAssignment {
    SymbolSequence alpha;
    CheckpointSchedule schedule;

    bool uses_B_at_level(std::uint64_t level) const {
        if (level < 1) throw ParameterError("CodingAssignment: levels start at 1");
        return alpha.bit(schedule.block_of_time(level - 1)) == 1;
    }
};

struct ExpandingItinerary {
    double point = 0.0;                               // midpoint of the surviving set
    std::vector<std::pair<double, double>> chain;     // chain[t]: location at time t
    double max_width = 0.0;
};

// Backward refinement: start from the deepest coding set and pull back one
// surviving interval per level through the map preimages. Every point of
// chain[0] has its time-t iterate inside chain[t], hence inside the coded
// set, for all t <= depth.
inline ExpandingItinerary build_expanding_point(const NestedIntervalFamily& family,
                                                const CodingAssignment& coding,
                                                const PwlFamily& system, std::uint64_t depth,
                                                double pad = 1e-12) {
    if (depth < 1) throw ParameterError("build_expanding_point: depth must be >= 1");
    auto set_at = [&](std::uint64_t level) {
        return coding.uses_B_at_level(level) ? family.B(level) : family.A(level);
    };

    ExpandingItinerary itin;
    itin.chain.resize(depth + 1);
    {
        const FracInterval last = set_at(depth + 1);
        itin.chain[depth] = {last.lo_d(), last.hi_d()};
    }
    for (std::uint64_t t = depth; t-- > 0;) {
        const auto& next = itin.chain[t + 1];
        const PwlMap f = system.map_at(t);
        const FracInterval c = set_at(t + 1);
        const double clo = c.lo_d(), chi = c.hi_d();
        auto pieces = f.preimage(next.first, next.second, pad);
        bool found = false;
        for (const auto& piece : pieces) {
            const double lo = std::max(piece.first, clo);
            const double hi = std::min(piece.second, chi);
            if (lo <= hi) {
                itin.chain[t] = {lo, hi};
                found = true;
                break;  // leftmost surviving component, deterministically
            }
        }
        if (!found)
            throw ExpandingConditionError(
                "build_expanding_point: empty refinement at level " + std::to_string(t + 1) +
                " (family fails the expanding inclusion numerically)");
    }
    for (const auto& iv : itin.chain)
        itin.max_width = std::max(itin.max_width, iv.second - iv.first);
    itin.point = 0.5 * (itin.chain[0].first + itin.chain[0].second);
    return itin;
}

struct ItineraryCheckReport {
    bool inside_coded_sets = true;
    bool forward_consistent = true;
    std::uint64_t first_failure = 0;
};

inline ItineraryCheckReport verify_expanding_itinerary(const ExpandingItinerary& itin,
                                                       const NestedIntervalFamily& family,
                                                       const CodingAssignment& coding,
                                                       const PwlFamily& system,
                                                       double tol = 1e-9) {
    ItineraryCheckReport rep;
    for (std::uint64_t t = 0; t < itin.chain.size(); ++t) {
        const FracInterval c =
            coding.uses_B_at_level(t + 1) ? family.B(t + 1) : family.A(t + 1);
        if (itin.chain[t].first < c.lo_d() - tol || itin.chain[t].second > c.hi_d() + tol) {
            rep.inside_coded_sets = false;
            rep.first_failure = t;
            return rep;
        }
    }
    for (std::uint64_t t = 0; t + 1 < itin.chain.size(); ++t) {
        const auto hull = system.map_at(t).image_hull(itin.chain[t].first, itin.chain[t].second);
        if (itin.chain[t + 1].first < hull.first - tol ||
            itin.chain[t + 1].second > hull.second + tol) {
            rep.forward_consistent = false;
            rep.first_failure = t;
            return rep;
        }
    }
    return rep;
}

struct DcPairConstruction {
    ExpandingItinerary x, y;
    PairProfile<double> profile;  // distances over times 0..depth-1
    double delta = 0.0;
};

inline DcPairConstruction build_dc_pair_expanding(const NestedIntervalFamily& family,
                                                  const PwlFamily& system,
                                                  const SymbolSequence& alpha,
                                                  const SymbolSequence& beta, std::uint64_t depth,
                                                  double domain_diameter = 1.0,
                                                  double pad = 1e-12) {
    if (family.limit_a == family.limit_b)
        throw ParameterError("build_dc_pair_expanding: degenerate family (delta = 0)");
    {
        const FracInterval a = family.A(family.disjoint_at), b = family.B(family.disjoint_at);
        const bool disjoint = a.hi < b.lo || b.hi < a.lo;
        if (!disjoint)
            throw ParameterError("build_dc_pair_expanding: sets not disjoint at disjoint_at");
    }

    CheckpointSchedule sched = schedule_covering(depth);
    CodingAssignment ca{alpha, sched};
    CodingAssignment cb{beta, sched};
    DcPairConstruction out;
    out.x = build_expanding_point(family, ca, system, depth, pad);
    out.y = build_expanding_point(family, cb, system, depth, pad);
    out.delta = family.scramble_delta();

    std::vector<double> distances;
    distances.reserve(depth);
    double err = 0.0;
    for (std::uint64_t t = 0; t < depth; ++t) {
        const auto& ix = out.x.chain[t];
        const auto& iy = out.y.chain[t];
        distances.push_back(std::fabs(0.5 * (ix.first + ix.second) - 0.5 * (iy.first + iy.second)));
        err = std::max(err, 0.5 * ((ix.second - ix.first) + (iy.second - iy.first)));
    }
    out.profile = make_synthetic_profile(std::move(distances), domain_diameter, err);
    return out;
}

// ---------------------------------------------------------------------------
// Merge of an asymptotic-time sequence P and a distal-time sequence Q into
// one sequence along which the pair is distributionally scrambled. Block
// sizes follow merge_schedule; every term's source is recorded.

struct MergedSequence {
    IndexSequence sequence;
    std::vector<std::uint8_t> source;       // 0 = from P, 1 = from Q
    std::vector<std::uint64_t> boundaries;  // n_1..n_k
};

inline MergedSequence merge_dc_sequence(const IndexSequence& P, const IndexSequence& Q,
                                        std::uint64_t k_max,
                                        std::uint64_t overlap_probe = 4096,
                                        std::uint64_t overlap_cap = 16) {
    IndexSequence sched = merge_schedule(k_max);
    const std::uint64_t total = sched.term(k_max - 1);

    // The merge hypothesis is vacuous when P and Q share an infinite tail;
    // treat a large overlap on the probed prefixes as that case.
    {
        std::uint64_t probe = overlap_probe;
        if (!P.unbounded()) probe = std::min<std::uint64_t>(probe, P.materialized_size());
        if (!Q.unbounded()) probe = std::min<std::uint64_t>(probe, Q.materialized_size());
        std::uint64_t shared = 0;
        for (std::uint64_t i = 0; i < probe && shared <= overlap_cap; ++i)
            if (Q.contains(P.term(i))) ++shared;
        if (shared > overlap_cap)
            throw PreconditionError("merge_dc_sequence: P and Q overlap heavily; hypothesis vacuous");
    }

    MergedSequence out;
    out.boundaries = sched.prefix(k_max);
    std::vector<std::uint64_t> terms;
    terms.reserve(total);
    out.source.reserve(total);

    std::uint64_t ip = 0, iq = 0;
    auto draw = [&](bool from_q) -> std::uint64_t {
        const IndexSequence& s = from_q ? Q : P;
        std::uint64_t& cursor = from_q ? iq : ip;
        while (true) {
            if (!s.unbounded() && cursor >= s.materialized_size())
                throw ExtensionError("merge_dc_sequence: source sequence not extensible far enough");
            std::uint64_t v = s.term(cursor++);
            if (terms.empty() || v > terms.back()) return v;
        }
    };

    terms.push_back(draw(false));
    out.source.push_back(0);
    for (std::uint64_t i = 2; i <= total; ++i) {
        // block (n_{j-1}, n_j]: P when j is even, Q when j is odd
        std::size_t j = 0;
        while (out.boundaries[j] < i) ++j;
        const bool from_q = ((j + 1) % 2) == 1;
        terms.push_back(draw(from_q));
        out.source.push_back(from_q ? 1 : 0);
    }
    out.sequence = IndexSequence::from_terms(std::move(terms));
    return out;
}

// ---------------------------------------------------------------------------
// Sampled probe for simultaneous transit of two open-set pairs. A returned n
// is re-verified from fresh orbits of the witness samples; absence of a hit
// is inconclusive, not a refutation.

struct OpenInterval {
    double lo = 0.0, hi = 0.0;
};

struct WeakMixingQuad {
    OpenInterval u1, v1, u2, v2;
};

inline std::optional<std::uint64_t> weak_mixing_probe(const MapFamily<double>& system,
                                                      const WeakMixingQuad& quad,
                                                      std::uint64_t horizon,
                                                      std::size_t samples_per_set = 64) {
    for (const auto* iv : {&quad.u1, &quad.v1, &quad.u2, &quad.v2})
        if (!(iv->lo < iv->hi))
            throw ParameterError("weak_mixing_probe: intervals must be nonempty");
    if (samples_per_set == 0) throw ParameterError("weak_mixing_probe: need samples");

    auto grid = [&](const OpenInterval& iv) {
        std::vector<double> pts;
        pts.reserve(samples_per_set);
        for (std::size_t i = 0; i < samples_per_set; ++i) {
            double x = iv.lo + (iv.hi - iv.lo) * (static_cast<double>(i) + 0.5) /
                                   static_cast<double>(samples_per_set);
            pts.push_back(x);
        }
        return pts;
    };
    auto inside = [](const OpenInterval& iv, double x) { return x > iv.lo && x < iv.hi; };

    std::vector<double> a = grid(quad.u1), b = grid(quad.u2);
    const std::vector<double> a0 = a, b0 = b;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        std::optional<std::size_t> wa, wb;
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] = orbit_step(system, n - 1, a[i]);
            if (!wa && inside(quad.v1, a[i])) wa = i;
        }
        for (std::size_t i = 0; i < b.size(); ++i) {
            b[i] = orbit_step(system, n - 1, b[i]);
            if (!wb && inside(quad.v2, b[i])) wb = i;
        }
        if (wa && wb) {
            // replay the witnesses from scratch; no false positives at the
            // sample level
            double pa = a0[*wa], pb = b0[*wb];
            for (std::uint64_t t = 0; t < n; ++t) {
                pa = orbit_step(system, t, pa);
                pb = orbit_step(system, t, pb);
            }
            if (inside(quad.v1, pa) && inside(quad.v2, pb)) return n;
            throw Error("weak_mixing_probe: witness replay diverged");
        }
    }
    return std::nullopt;
}

}  // namespace ndchaos
