// Experiment runner: every subcommand reads a JSON config, computes, and
// writes one CSV artifact whose header echoes every config parameter. Reruns
// of the same config are byte-identical (17 significant digits throughout).
//
// Exit codes: 0 success, 1 usage/schema error, 2 numeric/validation failure.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <ndchaos/json_io.hpp>
#include <ndchaos/ndchaos.hpp>

namespace nc = ndchaos;
using nc::json;

namespace {

struct Output {
    std::string csv;
    std::optional<std::string> path;

    void flush() const {
        if (path) {
            std::ofstream f(*path, std::ios::binary | std::ios::trunc);
            if (!f) throw nc::ParameterError("cannot open output file '" + *path + "'");
            f << csv;
        } else {
            std::cout << csv;
        }
    }
};

std::string echo_params(const std::string& subcommand, const json& cfg) {
    std::map<std::string, std::string> kv;
    for (auto it = cfg.begin(); it != cfg.end(); ++it) kv[it.key()] = it.value().dump();
    std::string out = "# ndchaos " + subcommand + "\n";
    for (const auto& [k, v] : kv) out += "# " + k + "=" + v + "\n";
    return out;
}

json load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw nc::SchemaError("cannot read config file '" + path + "'");
    json cfg;
    try {
        f >> cfg;
    } catch (const json::exception& e) {
        throw nc::SchemaError(std::string("malformed JSON config: ") + e.what());
    }
    if (!cfg.is_object()) throw nc::SchemaError("config must be a JSON object");
    return cfg;
}

std::string point_str(double x) { return nc::fmt17(x); }
std::string point_str(const nc::SymbolSequence& s) { return s.describe(16); }

double parse_point(const json& j, const nc::MapFamily<double>&) {
    if (!j.is_number()) throw nc::SchemaError("interval points must be numbers");
    return j.get<double>();
}
nc::SymbolSequence parse_point(const json& j, const nc::MapFamily<nc::SymbolSequence>&) {
    return nc::parse_symbol_sequence(j);
}

nc::ClassifyConfig classify_config_from(const json& cfg, std::uint64_t horizon) {
    nc::ClassifyConfig c;
    c.window = cfg.value("window", std::uint64_t{0});
    if (c.window == 0 && cfg.value("full_window", false)) c.window = horizon;
    if (cfg.contains("eps_grid"))
        for (const auto& e : cfg.at("eps_grid")) c.eps_grid.push_back(e.get<double>());
    if (cfg.contains("tolerances")) {
        const json& t = cfg.at("tolerances");
        c.tol.tau_hi = t.value("tau_hi", c.tol.tau_hi);
        c.tol.tau_lo = t.value("tau_lo", c.tol.tau_lo);
        c.tol.tau_prox = t.value("tau_prox", c.tol.tau_prox);
    }
    return c;
}

const char* verdict_columns =
    "eps,upper_F,lower_F,delta,proximal,asymptotic,distal,li_yorke,li_yorke_delta,dc_pair,"
    "dc_delta";

std::string verdict_cells(const nc::PairVerdict& v, const nc::DistributionalEstimate& e) {
    std::string s;
    s += nc::fmt17(e.epsilon) + "," + nc::fmt17(e.upper_F) + "," + nc::fmt17(e.lower_F) + ",";
    s += nc::fmt17(v.delta);
    for (nc::Tri t : {v.proximal, v.asymptotic, v.distal, v.li_yorke, v.li_yorke_delta,
                      v.dc_pair, v.dc_delta})
        s += std::string(",") + nc::to_string(t);
    return s;
}

// ---------------------------------------------------------------------------

template <class P>
std::string run_orbit_typed(const json& cfg, const nc::MapFamily<P>& sys) {
    const P start = parse_point(cfg.at("start"), sys);
    std::string body = "i,time,point\n";
    if (cfg.contains("indices")) {
        nc::IndexSequence idx = nc::parse_index_sequence(cfg.at("indices"));
        const std::size_t count = idx.materialized_size();
        auto pts = nc::orbit_at_indices(sys, start, idx, count);
        for (std::size_t i = 0; i < pts.size(); ++i)
            body += std::to_string(i) + "," + std::to_string(idx.term(i)) + "," +
                    point_str(pts[i]) + "\n";
    } else {
        const auto horizon = cfg.at("horizon").get<std::uint64_t>();
        auto orbit = nc::compose_orbit(sys, start, horizon);
        for (std::size_t i = 0; i < orbit.points.size(); ++i)
            body += std::to_string(i) + "," + std::to_string(i) + "," +
                    point_str(orbit.points[i]) + "\n";
    }
    return body;
}

std::string run_orbit(const json& cfg) {
    nc::ParsedSystem sys = nc::parse_system(cfg.at("system"));
    return sys.is_interval() ? run_orbit_typed(cfg, *sys.interval_system)
                             : run_orbit_typed(cfg, *sys.shift_system);
}

std::string run_density(const json& cfg) {
    nc::IndexSequence P = nc::parse_index_sequence(cfg.at("P"));
    nc::IndexSequence Q = cfg.contains("Q") ? nc::parse_index_sequence(cfg.at("Q"))
                                            : nc::IndexSequence::naturals();
    std::vector<std::uint64_t> horizons;
    if (cfg.contains("horizons"))
        for (const auto& h : cfg.at("horizons")) horizons.push_back(h.get<std::uint64_t>());
    else
        horizons.push_back(cfg.at("horizon").get<std::uint64_t>());

    std::string body = "horizon,upper,lower\n";
    for (std::uint64_t h : horizons) {
        const auto w = cfg.value("window", std::max<std::uint64_t>(1, h / 10));
        auto est = nc::relative_density(P, Q, h, std::min(w, h));
        body += std::to_string(h) + "," + nc::fmt17(est.upper) + "," + nc::fmt17(est.lower) + "\n";
    }
    return body;
}

template <class P>
std::string run_pair_stats_typed(const json& cfg, const nc::MapFamily<P>& sys) {
    const P x = parse_point(cfg.at("x"), sys);
    const P y = parse_point(cfg.at("y"), sys);
    const auto horizon = cfg.at("horizon").get<std::uint64_t>();
    auto prof = nc::pair_profile(sys, x, y, nc::IndexSequence::naturals(), horizon);
    nc::ClassifyConfig ccfg = classify_config_from(cfg, horizon);
    const double delta = cfg.at("delta").get<double>();
    auto v = nc::classify_pair(prof, delta, ccfg);

    std::string body = std::string("x,y,horizon,window,") + verdict_columns + "\n";
    const std::string head = point_str(x) + "," + point_str(y) + "," + std::to_string(v.horizon) +
                             "," + std::to_string(v.window) + ",";
    for (const auto& est : v.grid_estimates) body += head + verdict_cells(v, est) + "\n";
    return body;
}

std::string run_pair_stats(const json& cfg) {
    nc::ParsedSystem sys = nc::parse_system(cfg.at("system"));
    return sys.is_interval() ? run_pair_stats_typed(cfg, *sys.interval_system)
                             : run_pair_stats_typed(cfg, *sys.shift_system);
}

template <class P>
std::string run_scan_typed(const json& cfg, const nc::MapFamily<P>& sys, unsigned threads,
                           std::uint64_t seed) {
    std::vector<P> sample;
    if (cfg.at("sample").is_array()) {
        for (const auto& p : cfg.at("sample")) sample.push_back(parse_point(p, sys));
    } else {
        const auto count = cfg.at("sample").at("count").get<std::size_t>();
        const auto s = cfg.at("sample").value("seed", seed);
        for (std::size_t i = 0; i < count; ++i)
            sample.push_back(sys.domain.sample(nc::mix64(s, i)));
    }
    const auto horizon = cfg.at("horizon").get<std::uint64_t>();
    nc::ClassifyConfig ccfg = classify_config_from(cfg, horizon);
    const double delta = cfg.at("delta").get<double>();
    auto rows = nc::scan_pairs(sys, sample, nc::IndexSequence::naturals(), horizon, delta, ccfg,
                               threads);

    std::string body = std::string("pair_a,pair_b,x,y,horizon,window,") + verdict_columns +
                       ",status\n";
    for (const auto& row : rows) {
        const auto& v = row.verdict;
        nc::DistributionalEstimate binding;
        if (!v.grid_estimates.empty()) binding = v.grid_estimates.back();
        body += std::to_string(row.a) + "," + std::to_string(row.b) + "," +
                point_str(sample[row.a]) + "," + point_str(sample[row.b]) + "," +
                std::to_string(v.horizon) + "," + std::to_string(v.window) + "," +
                verdict_cells(v, binding) + "," + row.status + "\n";
    }
    return body;
}

std::string run_scan(const json& cfg, unsigned threads, std::uint64_t seed) {
    nc::ParsedSystem sys = nc::parse_system(cfg.at("system"));
    return sys.is_interval() ? run_scan_typed(cfg, *sys.interval_system, threads, seed)
                             : run_scan_typed(cfg, *sys.shift_system, threads, seed);
}

// ---------------------------------------------------------------------------

template <class P>
std::vector<P> default_bases(const nc::MapFamily<P>& sys, std::size_t count);

template <>
std::vector<double> default_bases(const nc::MapFamily<double>& sys, std::size_t count) {
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(sys.domain.lo + (sys.domain.hi - sys.domain.lo) * nc::van_der_corput(i));
    return out;
}
template <>
std::vector<nc::SymbolSequence> default_bases(const nc::MapFamily<nc::SymbolSequence>&,
                                              std::size_t count) {
    std::vector<nc::SymbolSequence> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(nc::dyadic_symbol_point(i));
    return out;
}

std::string run_construct_aapo(const json& cfg) {
    // built against the full-shift gallery unless an interval system is given
    nc::ParsedSystem parsed = nc::parse_system(cfg.value("system", json("gallery:full-shift")));
    if (parsed.is_interval())
        throw nc::ParameterError(
            "construct aapo: only the full-shift system ships a verified periodic pair and "
            "tracer; pass system \"gallery:full-shift\"");
    auto gallery = nc::load_shift_gallery();
    const auto& sys = gallery.system;
    const auto& pair = gallery.periodic_pairs.at(0);
    nc::SymbolSequence code = cfg.contains("code")
                                  ? nc::parse_symbol_sequence(cfg.at("code"))
                                  : nc::SymbolSequence::periodic("01");
    const auto depth = cfg.value("depth", std::size_t{6});
    // one level of slack so the block containing the last checkpoint exists
    nc::CheckpointSchedule sched = nc::checkpoint_schedule(depth + 1);
    const std::uint64_t horizon = sched.m[depth];
    auto po = nc::build_aapo(sys, pair, code, default_bases(sys, depth + 2), sched, horizon);

    std::vector<std::uint64_t> checkpoints(sched.m.begin() + 1, sched.m.begin() + 1 + depth);
    auto aapo_err = nc::verify_aapo(po, sys, checkpoints);
    auto tracer = nc::concatenation_tracer(po);
    auto shadow = nc::verify_average_shadowing(po, tracer, sys, checkpoints);

    std::string body = "checkpoint,aapo_error,shadowing_error\n";
    for (std::size_t i = 0; i < checkpoints.size(); ++i)
        body += std::to_string(checkpoints[i]) + "," + nc::fmt17(aapo_err[i]) + "," +
                nc::fmt17(shadow[i]) + "\n";
    return body;
}

std::string run_construct_expanding(const json& cfg) {
    auto bundle = nc::load_expanding_family();
    nc::SymbolSequence alpha = nc::parse_symbol_sequence(cfg.at("alpha"));
    nc::SymbolSequence beta = nc::parse_symbol_sequence(cfg.at("beta"));
    const auto depth = cfg.at("depth").get<std::uint64_t>();
    auto pair = nc::build_dc_pair_expanding(bundle.family, bundle.maps, alpha, beta, depth);
    const double delta = cfg.value("delta", pair.delta);

    std::vector<double> grid = nc::default_eps_grid(1.0);
    if (cfg.contains("eps_grid")) {
        grid.clear();
        for (const auto& e : cfg.at("eps_grid")) grid.push_back(e.get<double>());
    }

    nc::CheckpointSchedule sched = nc::schedule_covering(depth);
    std::string body = "checkpoint,kind,eps,cesaro_mean\n";
    for (std::uint64_t m : sched.m) {
        if (m > depth) break;
        auto at = [&](double eps) { return nc::cesaro_mean_at(pair.profile, eps, m); };
        body += std::to_string(m) + ",F_delta," + nc::fmt17(delta) + "," + nc::fmt17(at(delta)) +
                "\n";
        for (double eps : grid)
            body += std::to_string(m) + ",Fstar," + nc::fmt17(eps) + "," + nc::fmt17(at(eps)) +
                    "\n";
    }
    return body;
}

std::string run_construct_merge(const json& cfg) {
    nc::IndexSequence P = nc::parse_index_sequence(cfg.at("P"));
    nc::IndexSequence Q = nc::parse_index_sequence(cfg.at("Q"));
    const auto k_max = cfg.at("k_max").get<std::uint64_t>();
    auto merged = nc::merge_dc_sequence(P, Q, k_max);
    std::string body = "i,term,source\n";
    for (std::size_t i = 0; i < merged.sequence.materialized_size(); ++i)
        body += std::to_string(i + 1) + "," + std::to_string(merged.sequence.term(i)) + "," +
                (merged.source[i] ? "Q" : "P") + "\n";
    return body;
}

std::string run_probe_weak_mixing(const json& cfg,
                                  const std::map<std::string, std::vector<double>>& flag_ivs) {
    nc::ParsedSystem parsed = nc::parse_system(cfg.at("system"));
    if (!parsed.is_interval())
        throw nc::ParameterError("probe weak-mixing: interval systems only");
    auto iv = [&](const char* key) {
        auto it = flag_ivs.find(key);
        if (it != flag_ivs.end() && !it->second.empty()) {
            if (it->second.size() != 2)
                throw nc::SchemaError(std::string("--") + key + " needs two endpoints");
            return nc::OpenInterval{it->second[0], it->second[1]};
        }
        if (!cfg.contains(key))
            throw nc::SchemaError(std::string("probe weak-mixing: missing interval '") + key +
                                  "' (config field or flag)");
        const json& j = cfg.at(key);
        return nc::OpenInterval{j.at(0).get<double>(), j.at(1).get<double>()};
    };
    nc::WeakMixingQuad quad{iv("u1"), iv("v1"), iv("u2"), iv("v2")};
    const auto horizon = cfg.value("horizon", std::uint64_t{256});
    const auto samples = cfg.value("samples", std::size_t{128});
    auto hit = nc::weak_mixing_probe(*parsed.interval_system, quad, horizon, samples);
    std::string body = "found,n\n";
    body += hit ? "1," + std::to_string(*hit) + "\n" : "0,\n";
    return body;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ndchaos: orbit statistics and scrambled-pair constructions for "
                 "non-autonomous discrete systems"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_path, construct_what, probe_what;
    unsigned threads = 1;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "JSON config path")->required();
    app.add_option("--out", out_path, "CSV output path (stdout when absent)");
    app.add_option("--threads", threads, "worker threads for pair scans");
    app.add_option("--seed", seed, "sampling seed when the config omits one");

    auto* orbit = app.add_subcommand("orbit", "materialize or subsample one orbit");
    auto* pair_stats = app.add_subcommand("pair-stats", "distributional estimates for one pair");
    auto* scan = app.add_subcommand("scan-pairs", "classify all pairs of a sample");
    auto* density = app.add_subcommand("density", "relative density of P within Q");
    auto* construct = app.add_subcommand("construct", "run a scrambled-point construction");
    construct->add_option("what", construct_what, "aapo | expanding | merge")->required();
    auto* probe = app.add_subcommand("probe", "weak-mixing transit probe");
    probe->add_option("what", probe_what, "weak-mixing")->required();
    std::map<std::string, std::vector<double>> probe_ivs;
    for (const char* key : {"u1", "v1", "u2", "v2"})
        probe->add_option("--" + std::string(key), probe_ivs[key],
                          "open interval endpoints (overrides the config)")
            ->expected(2);

    CLI11_PARSE(app, argc, argv);

    try {
        const json cfg = load_config(config_path);
        std::string subcommand, body;
        if (orbit->parsed()) {
            subcommand = "orbit";
            body = run_orbit(cfg);
        } else if (pair_stats->parsed()) {
            subcommand = "pair-stats";
            body = run_pair_stats(cfg);
        } else if (scan->parsed()) {
            subcommand = "scan-pairs";
            body = run_scan(cfg, threads, seed);
        } else if (density->parsed()) {
            subcommand = "density";
            body = run_density(cfg);
        } else if (construct->parsed()) {
            subcommand = "construct " + construct_what;
            if (construct_what == "aapo") body = run_construct_aapo(cfg);
            else if (construct_what == "expanding") body = run_construct_expanding(cfg);
            else if (construct_what == "merge") body = run_construct_merge(cfg);
            else throw nc::SchemaError("construct expects aapo, expanding, or merge");
        } else if (probe->parsed()) {
            subcommand = "probe " + probe_what;
            if (probe_what != "weak-mixing") throw nc::SchemaError("probe expects weak-mixing");
            body = run_probe_weak_mixing(cfg, probe_ivs);
        }

        Output out;
        out.csv = echo_params(subcommand, cfg) + body;
        if (!out_path.empty()) out.path = out_path;
        out.flush();
        return 0;
    } catch (const nc::SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const nc::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
