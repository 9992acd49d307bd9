// Independent oracles used to freeze expected values. Everything here stays
// deliberately separate from the library's own computation paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracles {

// Big-integer recursions for the two schedules, kept in 128-bit arithmetic.
inline std::vector<unsigned __int128> checkpoint_schedule_u128(std::size_t depth) {
    std::vector<unsigned __int128> m{1};
    for (std::size_t n = 0; n < depth; ++n)
        m.push_back(m.back() * (((unsigned __int128)1 << n) + 1));
    return m;
}

inline std::vector<unsigned __int128> merge_schedule_u128(std::size_t k_max) {
    std::vector<unsigned __int128> n{1};
    for (std::size_t k = 1; k + 1 <= k_max; ++k) n.push_back(n.back() * 2 * k);
    return n;
}

// Direct filter over a distance profile: indices whose half-distance lands
// in the requested diagonal region.
inline std::vector<std::uint64_t> brute_force_hits(const std::vector<double>& distances,
                                                   double threshold, bool complement) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 0; i < distances.size(); ++i) {
        const double diag = distances[i] / 2.0;
        if (complement ? diag > threshold : diag < threshold) out.push_back(i);
    }
    return out;
}

// Running Cesàro mean of an indicator sequence at one checkpoint.
inline double cesaro_at(const std::vector<double>& distances, double eps, std::uint64_t n) {
    std::uint64_t count = 0;
    for (std::uint64_t i = 0; i < n; ++i)
        if (distances[i] < eps) ++count;
    return static_cast<double>(count) / static_cast<double>(n);
}

// Exact image arithmetic for the slope-2 tent map on dyadic intervals;
// enough to certify transit claims by exhaustion.
struct Iv {
    double lo, hi;
};

inline std::vector<Iv> tent_image(const std::vector<Iv>& set) {
    std::vector<Iv> out;
    for (const Iv& iv : set) {
        if (iv.hi <= 0.5) {
            out.push_back({2.0 * iv.lo, 2.0 * iv.hi});
        } else if (iv.lo >= 0.5) {
            out.push_back({2.0 - 2.0 * iv.hi, 2.0 - 2.0 * iv.lo});
        } else {
            out.push_back({2.0 * iv.lo, 1.0});
            out.push_back({2.0 - 2.0 * iv.hi, 1.0});
        }
    }
    return out;
}

inline bool intervals_meet(const std::vector<Iv>& set, double lo, double hi) {
    for (const Iv& iv : set)
        if (iv.hi > lo && iv.lo < hi) return true;
    return false;
}

// first n <= horizon with tent^n(U1) meeting V1 and tent^n(U2) meeting V2
inline std::int64_t tent_transit_oracle(Iv u1, Iv v1, Iv u2, Iv v2, std::uint64_t horizon) {
    std::vector<Iv> a{u1}, b{u2};
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        a = tent_image(a);
        b = tent_image(b);
        if (intervals_meet(a, v1.lo, v1.hi) && intervals_meet(b, v2.lo, v2.hi))
            return static_cast<std::int64_t>(n);
    }
    return -1;
}

// Integer square root by bisection; counts squares up to n exactly.
inline std::uint64_t isqrt_u64(std::uint64_t n) {
    std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace oracles
