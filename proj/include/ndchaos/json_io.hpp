#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "errors.hpp"
#include "gallery.hpp"
#include "pwl.hpp"
#include "seqdensity.hpp"
#include "symbolic.hpp"

namespace ndchaos {

using json = nlohmann::json;

// Every double is a dyadic rational; reject the ones whose reduced
// denominator does not fit the exact layer.
inline Frac frac_from_double(double x) {
    if (!std::isfinite(x)) throw SchemaError("breakpoint values must be finite");
    if (x == 0.0) return Frac(0);
    int e = 0;
    const double m = std::frexp(x, &e);
    auto num = static_cast<std::int64_t>(std::ldexp(m, 53));
    int exp2 = 53 - e;
    while (num != 0 && num % 2 == 0 && exp2 > 0) {
        num /= 2;
        --exp2;
    }
    if (exp2 < 0) {
        if (exp2 < -10) throw SchemaError("breakpoint magnitude too large");
        return Frac(num * (std::int64_t(1) << -exp2));
    }
    if (exp2 > 40) throw SchemaError("breakpoint is not a small dyadic rational");
    return Frac(num, std::int64_t(1) << exp2);
}

// ---------------------------------------------------------------------------
// System configs.
//
//   {"kind":"logistic","r":4.0}                  r: number or per-step array
//   {"kind":"tent","slope":2.0}                  slope: number or array
//   {"kind":"doubling"}
//   {"kind":"piecewise-linear","breakpoints":[[x,y],...]}        one map
//   {"kind":"piecewise-linear","maps":[[[x,y],...],...]}         cycled
//   {"kind":"full-shift"}
//   {"kind":"gallery","id":"tent"}  or the string "gallery:tent"
//
// Floats in configs written by this library carry 17 significant digits.

struct ParsedSystem {
    std::string kind;
    std::optional<MapFamily<double>> interval_system;
    std::optional<MapFamily<SymbolSequence>> shift_system;

    bool is_interval() const { return interval_system.has_value(); }
};

inline std::vector<double> number_or_array(const json& j, const char* key) {
    if (!j.contains(key)) throw SchemaError(std::string("missing field '") + key + "'");
    const json& v = j.at(key);
    if (v.is_number()) return {v.get<double>()};
    if (v.is_array() && !v.empty()) {
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) throw SchemaError(std::string("'") + key + "' must hold numbers");
            out.push_back(x.get<double>());
        }
        return out;
    }
    throw SchemaError(std::string("'") + key + "' must be a number or nonempty array");
}

inline PwlMap parse_pwl_map(const json& breakpoints) {
    if (!breakpoints.is_array() || breakpoints.size() < 2)
        throw SchemaError("piecewise-linear breakpoints must be an array of [x,y] pairs");
    std::vector<std::pair<Frac, Frac>> v;
    for (const auto& bp : breakpoints) {
        if (!bp.is_array() || bp.size() != 2) throw SchemaError("breakpoint must be [x,y]");
        v.emplace_back(frac_from_double(bp[0].get<double>()),
                       frac_from_double(bp[1].get<double>()));
    }
    return PwlMap::from_vertices(std::move(v));
}

inline ParsedSystem parse_system(const json& j) {
    ParsedSystem out;
    std::string kind;
    std::string gallery_id;
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s.rfind("gallery:", 0) != 0)
            throw SchemaError("system string must look like 'gallery:<id>'");
        kind = "gallery";
        gallery_id = s.substr(8);
    } else if (j.is_object()) {
        if (!j.contains("kind")) throw SchemaError("system config needs a 'kind'");
        kind = j.at("kind").get<std::string>();
        if (kind == "gallery") gallery_id = j.at("id").get<std::string>();
    } else {
        throw SchemaError("system config must be an object or 'gallery:<id>' string");
    }
    out.kind = kind;

    if (kind == "logistic") {
        out.interval_system = make_logistic(number_or_array(j, "r"));
    } else if (kind == "tent") {
        out.interval_system = make_tent(number_or_array(j, "slope"));
    } else if (kind == "doubling") {
        out.interval_system = make_doubling();
    } else if (kind == "piecewise-linear") {
        std::vector<PwlMap> maps;
        if (j.contains("breakpoints")) {
            maps.push_back(parse_pwl_map(j.at("breakpoints")));
        } else if (j.contains("maps")) {
            for (const auto& mp : j.at("maps")) maps.push_back(parse_pwl_map(mp));
        } else {
            throw SchemaError("piecewise-linear needs 'breakpoints' or 'maps'");
        }
        if (maps.empty()) throw SchemaError("piecewise-linear needs at least one map");
        double lo = maps[0].domain_lo(), hi = maps[0].domain_hi();
        for (const auto& m : maps)
            if (m.domain_lo() != lo || m.domain_hi() != hi)
                throw SchemaError("piecewise-linear maps must share one domain interval");
        MapFamily<double> f;
        f.domain = interval_domain(lo, hi);
        f.description = "piecewise-linear";
        f.rule = [maps = std::move(maps)](std::uint64_t n, const double& x) {
            return maps[n % maps.size()].eval(x);
        };
        out.interval_system = std::move(f);
    } else if (kind == "full-shift") {
        out.shift_system = make_full_shift();
    } else if (kind == "gallery") {
        AnyGallerySystem g = load_gallery(gallery_id);
        if (std::holds_alternative<GallerySystem<double>>(g))
            out.interval_system = std::get<GallerySystem<double>>(g).system;
        else
            out.shift_system = std::get<GallerySystem<SymbolSequence>>(g).system;
        out.kind = "gallery:" + gallery_id;
    } else {
        throw SchemaError("unknown system kind '" + kind + "'");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Index sequences: a JSON array of integers, or
// {"kind":"arithmetic","a":0,"step":1}.

inline IndexSequence parse_index_sequence(const json& j) {
    if (j.is_array()) {
        std::vector<std::uint64_t> terms;
        for (const auto& v : j) {
            if (!v.is_number_unsigned() && !v.is_number_integer())
                throw SchemaError("index sequence entries must be nonnegative integers");
            const auto x = v.get<std::int64_t>();
            if (x < 0) throw SchemaError("index sequence entries must be nonnegative");
            terms.push_back(static_cast<std::uint64_t>(x));
        }
        try {
            return IndexSequence::from_terms(std::move(terms));
        } catch (const ParameterError& e) {
            throw SchemaError(e.what());
        }
    }
    if (j.is_object() && j.contains("kind")) {
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "arithmetic")
            return IndexSequence::arithmetic(j.at("a").get<std::uint64_t>(),
                                             j.at("step").get<std::uint64_t>());
        if (kind == "naturals") return IndexSequence::naturals();
        throw SchemaError("unknown index sequence kind '" + kind + "'");
    }
    throw SchemaError("index sequence must be an array or a generator object");
}

inline json index_sequence_to_json(const IndexSequence& s) {
    if (s.has_generator() && s.generator()->kind == "arithmetic") {
        return json{{"kind", "arithmetic"}, {"a", s.term(0)}, {"step", s.term(1) - s.term(0)}};
    }
    json arr = json::array();
    for (std::uint64_t v : s.materialized()) arr.push_back(v);
    return arr;
}

// ---------------------------------------------------------------------------
// Symbol sequences: {"prefix":"0110","tail":{"kind":"periodic","pattern":"01"}}
// with tail kinds "constant" ({"bit":0}) and "periodic".

inline SymbolSequence parse_symbol_sequence(const json& j) {
    if (!j.is_object()) throw SchemaError("symbol sequence must be an object");
    std::string prefix = j.value("prefix", std::string{});
    for (char c : prefix)
        if (c != '0' && c != '1') throw SchemaError("prefix must be a 0/1 string");
    if (!j.contains("tail")) throw SchemaError("symbol sequence needs a 'tail'");
    const json& t = j.at("tail");
    const std::string kind = t.at("kind").get<std::string>();
    SymbolSequence tail = SymbolSequence::constant(0);
    if (kind == "constant") {
        tail = SymbolSequence::constant(t.at("bit").get<int>());
    } else if (kind == "periodic") {
        const std::string pattern = t.at("pattern").get<std::string>();
        for (char c : pattern)
            if (c != '0' && c != '1') throw SchemaError("pattern must be a 0/1 string");
        try {
            tail = SymbolSequence::periodic(pattern);
        } catch (const ParameterError& e) {
            throw SchemaError(e.what());
        }
    } else {
        throw SchemaError("unknown tail kind '" + kind + "'");
    }
    return prefix.empty() ? tail : SymbolSequence::with_prefix(prefix, tail);
}

inline json symbol_sequence_to_json(const SymbolSequence& s) {
    const std::uint64_t period = s.period();
    if (period == 0)
        throw SchemaError("generator-backed symbol sequences are not serializable");
    const std::uint64_t from = s.periodic_from();
    std::string prefix;
    for (std::uint64_t i = 0; i < from; ++i) prefix += char('0' + s.bit(i));
    json tail;
    if (period == 1) {
        tail = json{{"kind", "constant"}, {"bit", s.bit(from)}};
    } else {
        std::string pattern;
        for (std::uint64_t i = 0; i < period; ++i) pattern += char('0' + s.bit(from + i));
        tail = json{{"kind", "periodic"}, {"pattern", pattern}};
    }
    return json{{"prefix", prefix}, {"tail", tail}};
}

}  // namespace ndchaos
