#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "util.hpp"

namespace ndchaos {

// One-sided binary sequence: finite prefix plus an eventual rule, viewed
// through an offset so that the shift is O(1). Immutable and shareable.
class SymbolSequence {
public:
    enum class TailKind { constant, periodic, generator };

    SymbolSequence() : SymbolSequence(Data{}) {}  // all-zero sequence

    static SymbolSequence constant(int bit) {
        Data d;
        d.tail_kind = TailKind::constant;
        d.constant_bit = check_bit(bit);
        return SymbolSequence(std::move(d));
    }

    static SymbolSequence periodic(std::string_view pattern) {
        if (pattern.empty()) throw ParameterError("SymbolSequence: empty periodic pattern");
        Data d;
        d.tail_kind = TailKind::periodic;
        for (char c : pattern) d.pattern.push_back(check_bit(c - '0'));
        return SymbolSequence(std::move(d));
    }

    static SymbolSequence generator(std::function<int(std::uint64_t)> rule,
                                    std::string description = "generator") {
        Data d;
        d.tail_kind = TailKind::generator;
        d.gen = std::move(rule);
        d.description = std::move(description);
        return SymbolSequence(std::move(d));
    }

    // Prepend explicit bits ("0110") to a tail sequence.
    static SymbolSequence with_prefix(std::string_view bits, SymbolSequence tail) {
        Data d;
        d.tail_kind = tail.data_->tail_kind;
        d.constant_bit = tail.data_->constant_bit;
        d.pattern = tail.data_->pattern;
        d.gen = tail.data_->gen;
        d.description = tail.data_->description;
        for (char c : bits) d.prefix.push_back(check_bit(c - '0'));
        // splice in whatever of the tail's own prefix is still visible, then
        // fold the remaining view offset into the rule's phase
        const auto& tail_prefix = tail.data_->prefix;
        for (std::uint64_t j = tail.offset_; j < tail_prefix.size(); ++j)
            d.prefix.push_back(tail_prefix[j]);
        const std::uint64_t phase =
            tail.offset_ > tail_prefix.size() ? tail.offset_ - tail_prefix.size() : 0;
        if (phase > 0) {
            if (d.tail_kind == TailKind::periodic)
                std::rotate(d.pattern.begin(),
                            d.pattern.begin() +
                                static_cast<std::ptrdiff_t>(phase % d.pattern.size()),
                            d.pattern.end());
            else if (d.tail_kind == TailKind::generator) {
                auto base = d.gen;
                d.gen = [base, phase](std::uint64_t i) { return base(i + phase); };
            }
        }
        return SymbolSequence(std::move(d));
    }

    int bit(std::uint64_t i) const {
        std::uint64_t j = i + offset_;
        if (j < data_->prefix.size()) return data_->prefix[j];
        return tail_bit(j - data_->prefix.size());
    }

    SymbolSequence shifted(std::uint64_t by = 1) const {
        SymbolSequence s(*this);
        s.offset_ += by;
        return s;
    }

    TailKind tail_kind() const { return data_->tail_kind; }

    // Index from which this view is periodic, and the period; generators
    // report period 0 (not resolvable in closed form).
    std::uint64_t periodic_from() const {
        std::uint64_t p = data_->prefix.size();
        return p > offset_ ? p - offset_ : 0;
    }
    std::uint64_t period() const {
        switch (data_->tail_kind) {
            case TailKind::constant: return 1;
            case TailKind::periodic: return data_->pattern.size();
            default: return 0;
        }
    }

    std::string describe(std::size_t bits = 12) const {
        std::string s;
        for (std::size_t i = 0; i < bits; ++i) s += char('0' + bit(i));
        s += "~";
        switch (data_->tail_kind) {
            case TailKind::constant: s += "const"; break;
            case TailKind::periodic: s += "periodic"; break;
            default: s += "gen"; break;
        }
        return s;
    }

private:
    struct Data {
        std::vector<std::int8_t> prefix;
        TailKind tail_kind = TailKind::constant;
        int constant_bit = 0;
        std::vector<std::int8_t> pattern;
        std::function<int(std::uint64_t)> gen;
        std::string description;
    };

    explicit SymbolSequence(Data d) : data_(std::make_shared<const Data>(std::move(d))) {}

    int tail_bit(std::uint64_t k) const {
        switch (data_->tail_kind) {
            case TailKind::constant: return data_->constant_bit;
            case TailKind::periodic: return data_->pattern[k % data_->pattern.size()];
            default: return check_bit(data_->gen(k));
        }
    }

    static int check_bit(int b) {
        if (b != 0 && b != 1) throw ParameterError("SymbolSequence: bits must be 0 or 1");
        return b;
    }

    std::shared_ptr<const Data> data_;
    std::uint64_t offset_ = 0;
};

struct RhoResult {
    double value = 0.0;
    double error_bound = 0.0;
};

// Metric on the sequence space: sum of per-index disagreements weighted by
// 2^-i. Closed form when both views are eventually periodic with a small
// joint period; otherwise truncated at `depth` with tail bound 2^(1-depth).
inline RhoResult rho(const SymbolSequence& a, const SymbolSequence& b, std::size_t depth = 64) {
    if (depth < 1) throw ParameterError("rho: depth must be >= 1");

    const std::uint64_t pa = a.period(), pb = b.period();
    if (pa > 0 && pb > 0) {
        const std::uint64_t s = std::max(a.periodic_from(), b.periodic_from());
        const std::uint64_t joint = std::lcm(pa, pb);
        if (s <= 4096 && joint <= 128) {
            double head = 0.0;
            for (std::uint64_t i = 0; i < s; ++i)
                if (a.bit(i) != b.bit(i)) head += std::ldexp(1.0, -static_cast<int>(i));
            double cycle = 0.0;
            for (std::uint64_t j = 0; j < joint; ++j)
                if (a.bit(s + j) != b.bit(s + j)) cycle += std::ldexp(1.0, -static_cast<int>(j));
            double tail = 0.0;
            if (cycle > 0.0)
                tail = std::ldexp(cycle, -static_cast<int>(s)) /
                       (1.0 - std::ldexp(1.0, -static_cast<int>(joint)));
            return RhoResult{head + tail, 0.0};
        }
    }

    const std::size_t n = std::max<std::size_t>(depth, 64);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (a.bit(i) != b.bit(i)) v += std::ldexp(1.0, -static_cast<int>(i));
    return RhoResult{v, std::ldexp(1.0, 1 - static_cast<int>(n))};
}

inline SymbolSequence shift(const SymbolSequence& a) { return a.shifted(); }

// ---------------------------------------------------------------------------
// Finite sampler of a family in which every pair of distinct members agrees
// at infinitely many indices and disagrees at infinitely many indices.
//
// Member j carries a W-bit codeword (pairwise distinct). The sequence is laid
// out in rounds k = 0, 1, ...: a label block of length 2^k whose positions
// cycle through the codeword bits, followed by a synchronization block of
// 2^k zeros. Distinct codewords disagree somewhere in every label block of
// length >= W; the shared zero blocks supply the agreements.

inline std::vector<SymbolSequence> code_family(std::size_t count, std::uint64_t seed) {
    if (count < 2) throw ParameterError("code_family: count must be >= 2");
    unsigned width = 1;
    while ((std::size_t(1) << width) < count) ++width;
    const std::uint64_t mask = splitmix64(seed) & ((width >= 64) ? ~0ull : ((1ull << width) - 1));

    std::vector<SymbolSequence> family;
    family.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        const std::uint64_t code = static_cast<std::uint64_t>(j) ^ mask;
        auto rule = [code, width](std::uint64_t t) -> int {
            // region k holds positions [2^(k+1) - 2, 2^(k+2) - 2)
            const unsigned k = std::bit_width(t + 2) - 2;
            const std::uint64_t region_start = (std::uint64_t(1) << (k + 1)) - 2;
            const std::uint64_t o = t - region_start;
            const std::uint64_t block_len = std::uint64_t(1) << k;
            if (o >= block_len) return 0;  // synchronization block
            return static_cast<int>((code >> (o % width)) & 1);
        };
        family.push_back(SymbolSequence::generator(rule, "code-family member"));
    }
    return family;
}

struct AgreeDisagreeReport {
    std::uint64_t agreements = 0;
    std::uint64_t disagreements = 0;
    bool window_check = true;
    std::uint64_t first_failed_window = 0;
};

// Sliding-window audit: beyond `start`, every window [t, t + 2*B(t)) with
// B(t) the label-block length at t must contain at least one agreement and
// one disagreement index.
inline AgreeDisagreeReport check_agree_disagree(const SymbolSequence& a, const SymbolSequence& b,
                                                std::uint64_t depth, std::uint64_t start = 64) {
    AgreeDisagreeReport rep;
    std::vector<std::uint32_t> agree_ps(depth + 1, 0), differ_ps(depth + 1, 0);
    for (std::uint64_t t = 0; t < depth; ++t) {
        bool eq = a.bit(t) == b.bit(t);
        rep.agreements += eq;
        rep.disagreements += !eq;
        agree_ps[t + 1] = agree_ps[t] + (eq ? 1 : 0);
        differ_ps[t + 1] = differ_ps[t] + (eq ? 0 : 1);
    }
    for (std::uint64_t t = start; t < depth; ++t) {
        const unsigned k = std::bit_width(t + 2) - 2;
        const std::uint64_t window = std::uint64_t(2) << k;
        const std::uint64_t end = t + window;
        if (end > depth) break;
        const bool has_agree = agree_ps[end] > agree_ps[t];
        const bool has_differ = differ_ps[end] > differ_ps[t];
        if (!has_agree || !has_differ) {
            rep.window_check = false;
            rep.first_failed_window = t;
            break;
        }
    }
    return rep;
}

}  // namespace ndchaos
