#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "core.hpp"
#include "errors.hpp"
#include "seqdensity.hpp"

namespace ndchaos {

// Three-valued verdicts: finite-horizon estimates near a decision boundary
// stay undecided instead of being forced to a binary answer.
enum class Tri { holds, fails, undecided };

inline const char* to_string(Tri t) {
    switch (t) {
        case Tri::holds: return "holds";
        case Tri::fails: return "fails";
        default: return "undecided";
    }
}

inline Tri tri_and(Tri a, Tri b) {
    if (a == Tri::fails || b == Tri::fails) return Tri::fails;
    if (a == Tri::undecided || b == Tri::undecided) return Tri::undecided;
    return Tri::holds;
}

// holds iff stat <= thr, with an undecided band around the boundary.
inline Tri tri_le(double stat, double thr, double band) {
    if (stat <= thr - band) return Tri::holds;
    if (stat > thr + band) return Tri::fails;
    return Tri::undecided;
}

// holds iff stat >= thr.
inline Tri tri_ge(double stat, double thr, double band) {
    if (stat >= thr + band) return Tri::holds;
    if (stat < thr - band) return Tri::fails;
    return Tri::undecided;
}

// ---------------------------------------------------------------------------

// Per-pair distance trajectory along an index sequence.
template <class P>
struct PairProfile {
    P x{};
    P y{};
    std::shared_ptr<const IndexSequence> indices;
    std::vector<double> distances;     // distances[i] at orbit time indices.term(i)
    double domain_diameter = 1.0;
    double distance_error = 0.0;       // certified bound for itinerary-built profiles

    std::uint64_t horizon() const { return distances.size(); }
};

template <class P>
PairProfile<P> pair_profile(const MapFamily<P>& system, const P& x, const P& y,
                            const IndexSequence& indices, std::size_t count = 0) {
    if (!system.domain.contains(x) || !system.domain.contains(y))
        throw DomainViolationError("pair_profile: point outside domain");
    if (count == 0) count = indices.materialized_size();
    if (count == 0)
        throw ParameterError("pair_profile: generator-backed indices need an explicit count");

    PairProfile<P> prof;
    prof.x = x;
    prof.y = y;
    prof.indices = std::make_shared<const IndexSequence>(indices);
    prof.domain_diameter = system.domain.diameter;
    prof.distances.reserve(count);

    // one synchronized streaming pass over both orbits
    P ox = x, oy = y;
    std::uint64_t t = 0;
    std::uint64_t prev = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t target = indices.term(i);
        if (i > 0 && target <= prev)
            throw ParameterError("pair_profile: indices must be strictly increasing");
        while (t < target) {
            ox = orbit_step(system, t, ox);
            oy = orbit_step(system, t, oy);
            ++t;
        }
        prof.distances.push_back(system.domain.distance(ox, oy));
        prev = target;
    }
    return prof;
}

// Profile over naturals backed by explicit distances (synthetic data and
// certified itineraries).
inline PairProfile<double> make_synthetic_profile(std::vector<double> distances,
                                                  double domain_diameter,
                                                  double distance_error = 0.0) {
    for (double d : distances)
        if (d < 0.0) throw ParameterError("profile distances must be nonnegative");
    PairProfile<double> prof;
    prof.indices = std::make_shared<const IndexSequence>(IndexSequence::naturals());
    prof.distances = std::move(distances);
    prof.domain_diameter = domain_diameter;
    prof.distance_error = distance_error;
    return prof;
}

// ---------------------------------------------------------------------------

struct DistributionalEstimate {
    double epsilon = 0.0;
    double upper_F = 0.0;   // max running Cesàro mean over the trailing window
    double lower_F = 0.0;   // min over the same window
    std::uint64_t horizon = 0;
    std::uint64_t window = 0;
};

inline std::uint64_t resolve_window(std::uint64_t horizon, std::uint64_t window) {
    if (horizon == 0) throw ParameterError("estimator: empty profile");
    if (window == 0) window = std::max<std::uint64_t>(1, horizon / 10);
    if (window > horizon) throw ParameterError("estimator: window must be <= horizon");
    return window;
}

// Running Cesàro means of the indicator d < eps (strictly, matching the
// half-open interval), extremized over n in [horizon-window, horizon].
template <class P>
DistributionalEstimate estimate_F(const PairProfile<P>& profile, double epsilon,
                                  std::uint64_t window = 0, std::uint64_t horizon = 0) {
    if (!(epsilon > 0.0)) throw ParameterError("estimate_F: epsilon must be positive");
    if (horizon == 0) horizon = profile.horizon();
    if (horizon > profile.horizon()) throw ParameterError("estimate_F: horizon beyond profile");
    window = resolve_window(horizon, window);

    const std::uint64_t lo = horizon - window == 0 ? 1 : horizon - window;
    std::uint64_t count = 0;
    double upper = 0.0, lower = 1.0;
    bool seen = false;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        if (profile.distances[n - 1] < epsilon) ++count;
        if (n >= lo) {
            const double c = static_cast<double>(count) / static_cast<double>(n);
            if (!seen) { upper = lower = c; seen = true; }
            else {
                upper = std::max(upper, c);
                lower = std::min(lower, c);
            }
        }
    }
    return DistributionalEstimate{epsilon, upper, lower, horizon, window};
}

// Running Cesàro mean of the indicator at one checkpoint.
template <class P>
double cesaro_mean_at(const PairProfile<P>& profile, double epsilon, std::uint64_t n) {
    if (!(epsilon > 0.0)) throw ParameterError("cesaro_mean_at: epsilon must be positive");
    if (n == 0 || n > profile.horizon())
        throw ParameterError("cesaro_mean_at: checkpoint outside the profile");
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < n; ++i)
        if (profile.distances[i] < epsilon) ++count;
    return static_cast<double>(count) / static_cast<double>(n);
}

// ---------------------------------------------------------------------------

struct Tolerances {
    double tau_hi = 0.05;    // F* must reach 1 - tau_hi
    double tau_lo = 0.05;    // F must drop to tau_lo
    double tau_prox = 0.01;  // proximity resolution
};

struct ClassifyConfig {
    Tolerances tol;
    std::vector<double> eps_grid;  // empty: {0.2, 0.1, 0.05, 0.01} * diameter
    std::uint64_t window = 0;      // 0: horizon / 10
    double band_F = 0.005;         // undecided band around Cesàro thresholds
    double band_d = 0.0;           // 0: 1e-9 * diameter
};

inline std::vector<double> default_eps_grid(double diameter) {
    return {0.2 * diameter, 0.1 * diameter, 0.05 * diameter, 0.01 * diameter};
}

struct PairVerdict {
    Tri proximal = Tri::undecided;
    Tri asymptotic = Tri::undecided;
    Tri distal = Tri::undecided;
    Tri li_yorke = Tri::undecided;
    Tri li_yorke_delta = Tri::undecided;
    Tri dc_pair = Tri::undecided;
    Tri dc_delta = Tri::undecided;

    double delta = 0.0;
    Tolerances tol;
    std::uint64_t horizon = 0;
    std::uint64_t window = 0;
    double min_trailing_distance = 0.0;
    double max_trailing_distance = 0.0;
    std::vector<DistributionalEstimate> grid_estimates;
    DistributionalEstimate delta_estimate;
};

// Relation flags from one profile:
//   proximal   <=> min trailing distance <= tau_prox
//   asymptotic <=> max trailing distance <= tau_prox
//   distal     <=> min trailing distance >= delta
//   li_yorke   <=> proximal and max trailing distance > tau_prox
//   li_yorke_delta <=> proximal and max trailing distance > delta
//   dc_delta   <=> upper_F(eps) >= 1 - tau_hi for every grid eps
//                  and lower_F(delta) <= tau_lo
//   dc_pair    is dc_delta with the reported delta standing in as the pair's
//              witness separation.
template <class P>
PairVerdict classify_pair(const PairProfile<P>& profile, double delta,
                          const ClassifyConfig& cfg = {}) {
    if (!(delta > 0.0)) throw ParameterError("classify_pair: delta must be positive");
    const double band_d = cfg.band_d > 0.0 ? cfg.band_d : 1e-9 * profile.domain_diameter;
    if (!(delta > cfg.tol.tau_prox + 2.0 * band_d))
        throw ParameterError("classify_pair: delta must exceed tau_prox");
    const std::uint64_t horizon = profile.horizon();
    const std::uint64_t window = resolve_window(horizon, cfg.window);

    PairVerdict v;
    v.delta = delta;
    v.tol = cfg.tol;
    v.horizon = horizon;
    v.window = window;

    const std::uint64_t lo = horizon - window == 0 ? 1 : horizon - window;
    double dmin = profile.distances[lo - 1], dmax = dmin;
    for (std::uint64_t n = lo; n <= horizon; ++n) {
        dmin = std::min(dmin, profile.distances[n - 1]);
        dmax = std::max(dmax, profile.distances[n - 1]);
    }
    v.min_trailing_distance = dmin;
    v.max_trailing_distance = dmax;

    v.proximal = tri_le(dmin, cfg.tol.tau_prox, band_d);
    v.asymptotic = tri_le(dmax, cfg.tol.tau_prox, band_d);
    v.distal = tri_ge(dmin, delta, band_d);
    v.li_yorke = tri_and(v.proximal, tri_ge(dmax, cfg.tol.tau_prox, band_d));
    v.li_yorke_delta = tri_and(v.proximal, tri_ge(dmax, delta, band_d));

    const std::vector<double> grid =
        cfg.eps_grid.empty() ? default_eps_grid(profile.domain_diameter) : cfg.eps_grid;
    Tri upper_all = Tri::holds;
    for (double eps : grid) {
        auto est = estimate_F(profile, eps, window);
        upper_all = tri_and(upper_all, tri_ge(est.upper_F, 1.0 - cfg.tol.tau_hi, cfg.band_F));
        v.grid_estimates.push_back(est);
    }
    v.delta_estimate = estimate_F(profile, delta, window);
    const Tri lower_ok = tri_le(v.delta_estimate.lower_F, cfg.tol.tau_lo, cfg.band_F);
    v.dc_delta = tri_and(upper_all, lower_ok);
    v.dc_pair = v.dc_delta;
    return v;
}

// Flag-level consistency audit over decided flags.
inline std::vector<std::string> flag_consistency_violations(const PairVerdict& v) {
    std::vector<std::string> out;
    if (v.asymptotic == Tri::holds && v.proximal == Tri::fails)
        out.push_back("asymptotic holds but proximal fails");
    if (v.distal == Tri::holds && v.proximal == Tri::holds)
        out.push_back("distal holds but proximal holds");
    if (v.dc_pair == Tri::holds && v.li_yorke == Tri::fails)
        out.push_back("dc_pair holds but li_yorke fails");
    if (v.dc_delta == Tri::holds && v.asymptotic == Tri::holds)
        out.push_back("dc_delta holds but asymptotic holds");
    return out;
}

// ---------------------------------------------------------------------------
// Diagonal geometry. On the real line the distance from (x, y) to the
// diagonal under the max metric is exactly |x - y| / 2 (the midpoint
// realizes the infimum). Elsewhere a candidate grid is minimized over, and
// the bracket d/2 <= result <= d always holds.

template <class P>
double diag_distance(const P& x, const P& y, const MetricDomain<P>& dom,
                     std::size_t candidates = 64) {
    const double d = dom.distance(x, y);
    double best = d;  // z = x attains max(0, d) = d
    for (std::size_t i = 0; i < candidates; ++i) {
        P z = dom.sample(mix64(0x5EEDull, i));
        best = std::min(best, std::max(dom.distance(x, z), dom.distance(y, z)));
    }
    return std::clamp(best, d / 2.0, d);
}

inline double diag_distance(const double& x, const double& y, const MetricDomain<double>& dom,
                            std::size_t = 0) {
    (void)dom;
    return std::fabs(x - y) / 2.0;
}

inline double diag_distance(const SymbolSequence& x, const SymbolSequence& y,
                            const MetricDomain<SymbolSequence>& dom, std::size_t depth = 48) {
    const double d = dom.distance(x, y);
    double best = d;
    std::string bits;
    for (std::size_t j = 0; j <= depth; ++j) {
        // splice: follow one point up to j, the other afterwards
        bits.clear();
        for (std::size_t i = 0; i < j; ++i) bits += char('0' + x.bit(i));
        SymbolSequence zx = SymbolSequence::with_prefix(bits, y.shifted(j));
        bits.clear();
        for (std::size_t i = 0; i < j; ++i) bits += char('0' + y.bit(i));
        SymbolSequence zy = SymbolSequence::with_prefix(bits, x.shifted(j));
        for (const auto& z : {zx, zy})
            best = std::min(best, std::max(dom.distance(x, z), dom.distance(y, z)));
    }
    return std::clamp(best, d / 2.0, d);
}

// ---------------------------------------------------------------------------

struct DiagonalNeighborhood {
    double epsilon = 0.0;                                // [diag]_eps
    std::optional<double> complement_closure_delta;      // delta' for the closed complement
};

struct HittingSet {
    DiagonalNeighborhood target;
    bool complement = false;
    std::shared_ptr<const IndexSequence> base;
    IndexSequence hits;
};

// Orbit times whose pair iterate lies in the target set. Membership uses the
// half-distance diagonal proxy: exact on real intervals, a 2-bracket proxy on
// other domains.
template <class P>
HittingSet hitting_set(const PairProfile<P>& profile, const DiagonalNeighborhood& target,
                       bool complement) {
    if (!(target.epsilon > 0.0)) throw ParameterError("hitting_set: epsilon must be positive");
    double threshold = target.epsilon;
    if (complement) {
        if (!target.complement_closure_delta)
            throw ParameterError("hitting_set: complement requires complement_closure_delta");
        threshold = *target.complement_closure_delta;
        if (!(threshold > 0.0))
            throw ParameterError("hitting_set: complement_closure_delta must be positive");
    }

    std::vector<std::uint64_t> hits;
    for (std::uint64_t i = 0; i < profile.horizon(); ++i) {
        const double diag = profile.distances[i] / 2.0;
        const bool in = complement ? diag > threshold : diag < threshold;
        if (in) hits.push_back(profile.indices->term(i));
    }
    HittingSet hs;
    hs.target = target;
    hs.complement = complement;
    hs.base = profile.indices;
    hs.hits = IndexSequence::from_terms(std::move(hits));
    return hs;
}

// ---------------------------------------------------------------------------
// Dual verdict: the direct distributional estimate against the hitting-set
// formulation. Density-one hitting of [diag]_eps certifies F* at 2*eps, so
// the hitting route evaluates the direct grid at half its epsilons; the
// complement side uses delta' = delta / 4.

struct HittingSetVerdict {
    std::vector<std::pair<double, double>> eps_upper_density;  // (direct eps, upper density)
    double complement_upper_density = 0.0;
    double delta_prime = 0.0;
    Tri dc = Tri::undecided;
};

struct DualVerdict {
    PairVerdict direct;
    HittingSetVerdict via_hitting_sets;
    Tri agreement = Tri::undecided;
};

template <class P>
DualVerdict dc_verdict_dual(const PairProfile<P>& profile, double delta,
                            const std::vector<double>& eps_grid, const ClassifyConfig& cfg = {}) {
    ClassifyConfig direct_cfg = cfg;
    direct_cfg.eps_grid = eps_grid.empty() ? default_eps_grid(profile.domain_diameter) : eps_grid;

    DualVerdict out;
    out.direct = classify_pair(profile, delta, direct_cfg);

    const std::uint64_t horizon = profile.horizon();
    const std::uint64_t window = resolve_window(horizon, cfg.window);

    Tri dc = Tri::holds;
    for (double eps : direct_cfg.eps_grid) {
        auto hs = hitting_set(profile, DiagonalNeighborhood{eps / 2.0, {}}, false);
        auto dens = relative_density(hs.hits, *hs.base, horizon, window);
        out.via_hitting_sets.eps_upper_density.emplace_back(eps, dens.upper);
        dc = tri_and(dc, tri_ge(dens.upper, 1.0 - cfg.tol.tau_hi, cfg.band_F));
    }
    const double delta_prime = delta / 4.0;
    auto hs = hitting_set(profile, DiagonalNeighborhood{delta, delta_prime}, true);
    auto dens = relative_density(hs.hits, *hs.base, horizon, window);
    out.via_hitting_sets.complement_upper_density = dens.upper;
    out.via_hitting_sets.delta_prime = delta_prime;
    dc = tri_and(dc, tri_ge(dens.upper, 1.0 - cfg.tol.tau_lo, cfg.band_F));
    out.via_hitting_sets.dc = dc;

    if (out.direct.dc_delta == Tri::undecided || dc == Tri::undecided)
        out.agreement = Tri::undecided;
    else
        out.agreement = (out.direct.dc_delta == dc) ? Tri::holds : Tri::fails;
    return out;
}

// ---------------------------------------------------------------------------
// Batch driver over all unordered pairs of a sample. Deterministic output
// independent of the worker count.

struct ScanRow {
    std::size_t a = 0;
    std::size_t b = 0;
    PairVerdict verdict;
    std::string status = "ok";
};

template <class P>
std::vector<ScanRow> scan_pairs(const MapFamily<P>& system, const std::vector<P>& sample,
                                const IndexSequence& indices, std::size_t index_count,
                                double delta, const ClassifyConfig& cfg = {},
                                unsigned threads = 1) {
    if (sample.size() < 2) throw ParameterError("scan_pairs: need at least 2 sample points");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < sample.size(); ++i)
        for (std::size_t j = i + 1; j < sample.size(); ++j) pairs.emplace_back(i, j);

    std::vector<ScanRow> rows(pairs.size());
    auto work = [&](std::size_t begin, std::size_t step) {
        for (std::size_t k = begin; k < pairs.size(); k += step) {
            ScanRow& row = rows[k];
            row.a = pairs[k].first;
            row.b = pairs[k].second;
            try {
                auto prof = pair_profile(system, sample[row.a], sample[row.b], indices, index_count);
                row.verdict = classify_pair(prof, delta, cfg);
            } catch (const Error& e) {
                row.status = e.what();
            }
        }
    };

    if (threads <= 1) {
        work(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
        for (auto& th : pool) th.join();
    }
    return rows;
}

}  // namespace ndchaos
