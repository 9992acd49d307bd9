#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "util.hpp"

namespace ndchaos {

// Strictly increasing sequence of naturals. Either a fully materialized
// finite set of terms, or a pure generator giving random access to term i
// (and usually O(1) membership). Immutable; safe to share across threads.
class IndexSequence {
public:
    struct Generator {
        std::string kind;  // "arithmetic", "power", "schedule", "merged", "custom"
        std::function<std::uint64_t(std::uint64_t)> term;   // 0-based index -> value
        std::function<bool(std::uint64_t)> member;          // optional fast membership
    };

    IndexSequence() = default;

    static IndexSequence from_terms(std::vector<std::uint64_t> terms) {
        for (std::size_t i = 1; i < terms.size(); ++i)
            if (terms[i] <= terms[i - 1])
                throw ParameterError("IndexSequence: terms must be strictly increasing");
        IndexSequence s;
        s.terms_ = std::make_shared<const std::vector<std::uint64_t>>(std::move(terms));
        return s;
    }

    // a, a+step, a+2*step, ...
    static IndexSequence arithmetic(std::uint64_t a, std::uint64_t step) {
        if (step == 0) throw ParameterError("IndexSequence: arithmetic step must be positive");
        IndexSequence s;
        auto g = std::make_shared<Generator>();
        g->kind = "arithmetic";
        g->term = [a, step](std::uint64_t i) { return a + i * step; };
        g->member = [a, step](std::uint64_t v) { return v >= a && (v - a) % step == 0; };
        s.gen_ = std::move(g);
        return s;
    }

    static IndexSequence naturals() { return arithmetic(0, 1); }

    // 1, 2^e, 3^e, ... (term i = (i+1)^e)
    static IndexSequence power(unsigned exponent) {
        if (exponent == 0) throw ParameterError("IndexSequence: exponent must be >= 1");
        IndexSequence s;
        auto g = std::make_shared<Generator>();
        g->kind = "power";
        g->term = [exponent](std::uint64_t i) {
            std::uint64_t v = 1;
            for (unsigned k = 0; k < exponent; ++k) {
                if (__builtin_mul_overflow(v, i + 1, &v))
                    throw OverflowError("IndexSequence: power term overflow");
            }
            return v;
        };
        g->member = [exponent](std::uint64_t v) {
            if (v == 0) return false;
            double r = std::pow(static_cast<double>(v), 1.0 / exponent);
            auto lo = static_cast<std::uint64_t>(std::max(0.0, r - 2.0));
            for (std::uint64_t c = lo; c <= lo + 4; ++c) {
                std::uint64_t p = 1;
                bool ovf = false;
                for (unsigned k = 0; k < exponent && !ovf; ++k)
                    ovf = __builtin_mul_overflow(p, c, &p);
                if (!ovf && p == v) return true;
            }
            return false;
        };
        s.gen_ = std::move(g);
        return s;
    }

    static IndexSequence custom(std::function<std::uint64_t(std::uint64_t)> term,
                                std::string kind = "custom") {
        IndexSequence s;
        auto g = std::make_shared<Generator>();
        g->kind = std::move(kind);
        g->term = std::move(term);
        s.gen_ = std::move(g);
        return s;
    }

    // Materialized terms fronted by a generator; the prefix must match what
    // the generator regenerates (checked).
    static IndexSequence with_generator(std::vector<std::uint64_t> terms,
                                        std::shared_ptr<const Generator> gen) {
        IndexSequence s = from_terms(std::move(terms));
        for (std::size_t i = 0; i < s.terms_->size(); ++i)
            if (gen->term(i) != (*s.terms_)[i])
                throw ParameterError("IndexSequence: generator does not reproduce the prefix");
        s.gen_ = std::move(gen);
        return s;
    }

    bool has_generator() const { return gen_ != nullptr; }
    const Generator* generator() const { return gen_.get(); }

    // Number of materialized terms; generator-backed sequences are unbounded.
    std::size_t materialized_size() const { return terms_ ? terms_->size() : 0; }
    bool unbounded() const { return gen_ != nullptr; }

    std::uint64_t term(std::uint64_t i) const {
        if (terms_ && i < terms_->size()) return (*terms_)[i];
        if (gen_) return gen_->term(i);
        throw ExtensionError("IndexSequence: index beyond materialized terms and no generator");
    }

    bool contains(std::uint64_t value) const {
        if (gen_ && gen_->member) return gen_->member(value);
        if (gen_) {
            // random-access generator: binary search over indices
            std::uint64_t lo = 0, hi = 1;
            while (gen_->term(hi) < value) {
                lo = hi;
                if (hi > (std::uint64_t(1) << 62)) return false;
                hi *= 2;
            }
            while (lo < hi) {
                std::uint64_t mid = lo + (hi - lo) / 2;
                if (gen_->term(mid) < value) lo = mid + 1; else hi = mid;
            }
            return gen_->term(lo) == value;
        }
        if (!terms_ || terms_->empty()) return false;
        return std::binary_search(terms_->begin(), terms_->end(), value);
    }

    std::vector<std::uint64_t> prefix(std::size_t count) const {
        std::vector<std::uint64_t> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) out.push_back(term(i));
        return out;
    }

    const std::vector<std::uint64_t>& materialized() const {
        static const std::vector<std::uint64_t> empty;
        return terms_ ? *terms_ : empty;
    }

private:
    std::shared_ptr<const std::vector<std::uint64_t>> terms_;
    std::shared_ptr<const Generator> gen_;
};

struct DensityEstimate {
    double upper = 0.0;   // max of running ratio over the trailing window
    double lower = 0.0;   // min of running ratio over the trailing window
    std::uint64_t horizon = 0;
    std::uint64_t window = 0;
};

// Upper/lower density of P with respect to Q: running ratio
// |P ∩ {q_1..q_n}| / n, extremized over n in [horizon-window, horizon].
inline DensityEstimate relative_density(const IndexSequence& P, const IndexSequence& Q,
                                        std::uint64_t horizon, std::uint64_t window) {
    if (horizon == 0) throw ParameterError("relative_density: horizon must be >= 1");
    if (window > horizon) throw ParameterError("relative_density: window must be <= horizon");
    if (!Q.unbounded() && Q.materialized_size() < horizon)
        throw ExtensionError("relative_density: Q has fewer terms than the horizon and no generator");

    const std::uint64_t lo = horizon - window == 0 ? 1 : horizon - window;
    std::uint64_t count = 0;
    double upper = 0.0, lower = 1.0;
    bool seen = false;
    for (std::uint64_t n = 1; n <= horizon; ++n) {
        if (P.contains(Q.term(n - 1))) ++count;
        if (n >= lo) {
            double ratio = static_cast<double>(count) / static_cast<double>(n);
            if (!seen) { upper = lower = ratio; seen = true; }
            else {
                upper = std::max(upper, ratio);
                lower = std::min(lower, ratio);
            }
        }
    }
    return DensityEstimate{upper, lower, horizon, window};
}

// ---------------------------------------------------------------------------
// Witness sequence with upper relative density ~1 for every family member.
// Built blockwise: each round pulls one block per family, long enough that
// the family's running ratio reaches 1 - 1/k at the block end. The achieved
// (end_count, k) schedule is reported so the claim is re-checkable.

struct WitnessBlock {
    std::size_t family;         // index into the input list
    std::uint64_t quality_k;    // target ratio 1 - 1/k
    std::uint64_t end_count;    // |Q| at the block end
    double achieved_ratio;      // |S_f ∩ Q| / |Q| at the block end
};

struct DensityWitness {
    IndexSequence sequence;
    std::vector<WitnessBlock> schedule;
};

inline DensityWitness density_one_witness(const std::vector<IndexSequence>& families,
                                          const std::vector<std::uint64_t>& quality = {2, 4, 8},
                                          std::uint64_t max_terms = 8'000'000) {
    if (families.empty()) throw ParameterError("density_one_witness: empty family list");
    for (const auto& k : quality)
        if (k < 2) throw ParameterError("density_one_witness: quality targets must be >= 2");

    const std::size_t F = families.size();
    std::vector<std::uint64_t> next_index(F, 0);     // cursor into each family
    std::vector<std::uint64_t> member_count(F, 0);   // |S_f ∩ Q|
    std::vector<std::uint64_t> q;
    std::vector<WitnessBlock> schedule;

    auto draw_from = [&](std::size_t f) -> std::uint64_t {
        const IndexSequence& S = families[f];
        while (true) {
            if (!S.unbounded() && next_index[f] >= S.materialized_size())
                throw InsufficientSequenceError(
                    "density_one_witness: family " + std::to_string(f) + " exhausted");
            std::uint64_t v = S.term(next_index[f]++);
            if (q.empty() || v > q.back()) return v;
        }
    };

    for (std::uint64_t k : quality) {
        const double target = 1.0 - 1.0 / static_cast<double>(k);
        for (std::size_t f = 0; f < F; ++f) {
            bool appended = false;
            while (true) {
                double ratio = q.empty() ? 0.0
                                         : static_cast<double>(member_count[f]) /
                                               static_cast<double>(q.size());
                if (appended && ratio >= target) break;
                if (q.size() >= max_terms)
                    throw CapacityError("density_one_witness: term budget exhausted");
                std::uint64_t v = draw_from(f);
                q.push_back(v);
                appended = true;
                for (std::size_t g = 0; g < F; ++g)
                    if (families[g].contains(v)) ++member_count[g];
            }
            schedule.push_back(WitnessBlock{
                f, k, q.size(),
                static_cast<double>(member_count[f]) / static_cast<double>(q.size())});
        }
    }
    return DensityWitness{IndexSequence::from_terms(std::move(q)), std::move(schedule)};
}

// ---------------------------------------------------------------------------
// Constructive split of a bounded nonnegative sequence: a vanishing Cesàro
// mean is equivalent to convergence to zero off a density-zero exceptional
// set. Threshold schedule: theta(i) = max(sqrt(running mean), 1/sqrt(i+1)).

struct CesaroSplit {
    double cesaro_mean_tail = 0.0;     // running mean at the horizon
    IndexSequence exceptional_set;     // E = { i : a_i > theta(i) }
    double exceptional_density = 0.0;  // |E| / horizon
    double residual_limit = 0.0;       // sup of a_i off E over the last window
    bool mean_vanishes = false;        // tail <= vanish_tol
    double vanish_tol = 0.05;
};

inline CesaroSplit cesaro_density_equivalence(const std::vector<double>& a, double bound,
                                              std::uint64_t window = 0,
                                              double vanish_tol = 0.05) {
    if (a.empty()) throw ParameterError("cesaro_density_equivalence: empty input");
    const std::uint64_t n = a.size();
    if (window == 0) window = std::max<std::uint64_t>(1, n / 10);
    if (window > n) throw ParameterError("cesaro_density_equivalence: window must be <= horizon");

    std::vector<std::uint64_t> exceptional;
    double sum = 0.0;
    double residual = 0.0;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (a[i] < 0.0 || a[i] > bound)
            throw BoundViolationError("cesaro_density_equivalence: a[" + std::to_string(i) +
                                      "] outside [0, bound]");
        sum += a[i];
        double mean = sum / static_cast<double>(i + 1);
        double theta = std::max(std::sqrt(mean), 1.0 / std::sqrt(static_cast<double>(i + 1)));
        if (a[i] > theta) exceptional.push_back(i);
        else if (i + window >= n) residual = std::max(residual, a[i]);
    }

    CesaroSplit out;
    out.cesaro_mean_tail = sum / static_cast<double>(n);
    out.exceptional_density =
        static_cast<double>(exceptional.size()) / static_cast<double>(n);
    out.exceptional_set = IndexSequence::from_terms(std::move(exceptional));
    out.residual_limit = residual;
    out.vanish_tol = vanish_tol;
    out.mean_vanishes = out.cesaro_mean_tail <= vanish_tol;
    return out;
}

// ---------------------------------------------------------------------------
// Merge block schedule: n_1 = 1, n_{k+1} = 2k n_k, exact integers.

inline IndexSequence merge_schedule(std::uint64_t k_max) {
    if (k_max < 1) throw ParameterError("merge_schedule: k_max must be >= 1");
    std::vector<std::uint64_t> n;
    n.reserve(k_max);
    n.push_back(1);
    for (std::uint64_t k = 1; k + 1 <= k_max; ++k) {
        std::uint64_t next;
        if (__builtin_mul_overflow(n.back(), 2 * k, &next))
            throw OverflowError("merge_schedule: value exceeds native integer range");
        n.push_back(next);
    }
    auto gen = std::make_shared<IndexSequence::Generator>();
    auto values = std::make_shared<const std::vector<std::uint64_t>>(n);
    gen->kind = "schedule";
    gen->term = [values](std::uint64_t i) {
        if (i >= values->size()) throw ExtensionError("merge_schedule: index beyond k_max");
        return (*values)[i];
    };
    gen->member = [values](std::uint64_t v) {
        return std::binary_search(values->begin(), values->end(), v);
    };
    return IndexSequence::with_generator(std::move(n), std::move(gen));
}

}  // namespace ndchaos
