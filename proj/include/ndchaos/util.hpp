#pragma once

#include <cstdint>
#include <cstdio>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace ndchaos {

// splitmix64: deterministic stream used by all samplers.
inline std::uint64_t splitmix64(std::uint64_t state) {
    std::uint64_t z = state + 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return splitmix64(a ^ (0x9E3779B97F4A7C15ull + (b << 6) + (b >> 2)));
}

// Uniform double in [0,1) from 53 high bits.
inline double unit_double(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Decimal with 17 significant digits; round-trips every finite double.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

// Small exact rationals backing gallery interval endpoints and the
// expanding-condition checks. Denominators stay tiny (dyadic times 3),
// so int64 components with __int128 intermediates are exact.
struct Frac {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Frac() = default;
    Frac(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
        if (den == 0) throw ParameterError("Frac: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        reduce();
    }

    void reduce() {
        std::int64_t a = num < 0 ? -num : num;
        std::int64_t b = den;
        while (b != 0) { std::int64_t t = a % b; a = b; b = t; }
        if (a > 1) { num /= a; den /= a; }
    }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Frac operator+(const Frac& a, const Frac& b) {
        __int128 n = (__int128)a.num * b.den + (__int128)b.num * a.den;
        __int128 d = (__int128)a.den * b.den;
        return make_checked(n, d);
    }
    friend Frac operator-(const Frac& a, const Frac& b) {
        __int128 n = (__int128)a.num * b.den - (__int128)b.num * a.den;
        __int128 d = (__int128)a.den * b.den;
        return make_checked(n, d);
    }
    friend Frac operator*(const Frac& a, const Frac& b) {
        return make_checked((__int128)a.num * b.num, (__int128)a.den * b.den);
    }
    friend Frac operator/(const Frac& a, const Frac& b) {
        if (b.num == 0) throw ParameterError("Frac: division by zero");
        return make_checked((__int128)a.num * b.den, (__int128)a.den * b.num);
    }
    friend bool operator==(const Frac& a, const Frac& b) {
        return (__int128)a.num * b.den == (__int128)b.num * a.den;
    }
    friend bool operator!=(const Frac& a, const Frac& b) { return !(a == b); }
    friend bool operator<(const Frac& a, const Frac& b) {
        return (__int128)a.num * b.den < (__int128)b.num * a.den;
    }
    friend bool operator<=(const Frac& a, const Frac& b) { return a < b || a == b; }
    friend bool operator>(const Frac& a, const Frac& b) { return b < a; }
    friend bool operator>=(const Frac& a, const Frac& b) { return b <= a; }

private:
    static Frac make_checked(__int128 n, __int128 d) {
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        if (a > 1) { n /= a; d /= a; }
        constexpr __int128 lim = (__int128)1 << 62;
        if (n >= lim || n <= -lim || d >= lim)
            throw OverflowError("Frac: component out of range");
        Frac f;
        f.num = static_cast<std::int64_t>(n);
        f.den = static_cast<std::int64_t>(d);
        return f;
    }
};

}  // namespace ndchaos
