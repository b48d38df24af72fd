#pragma once

#include <chrono>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "nilprob/acceptance.hpp"
#include "nilprob/corpus.hpp"
#include "nilprob/gallagher.hpp"
#include "nilprob/genericity.hpp"
#include "nilprob/group_io.hpp"
#include "nilprob/malcev.hpp"
#include "nilprob/nildegree.hpp"
#include "nilprob/pgroups.hpp"
#include "nilprob/report.hpp"
#include "nilprob/sampling.hpp"

namespace nilprob {

struct RunConfig {
    std::string command;
    std::string group;        // builtin:<name> or file path
    std::string word_file;
    std::string poly_file;
    std::string normal_spec;  // gallagher: center | derived | v4 | element list
    std::string target_spec;  // pofg: element label or #index
    std::string sampler_spec;
    std::string grid;         // estimate: <param>=<v1,v2,...>
    std::vector<long long> primes;
    std::vector<int> radii;
    std::vector<std::string> only;
    int k = 1;
    long long quotient = 0;
    int p = 3, n = 1, r = 1, s = 1;
    int rank = 2, radius = 0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool full_audit = false;
    bool verify_all = false;
    bool timing = false;
    long long cap_order = 20000;
    std::uint64_t cap_evals = 100000000ULL;
    std::string format = "json";
    std::string out_path;
};

namespace cli_detail {

inline FiniteGroup resolve_group(const std::string& source, const RunConfig& cfg) {
    GroupBuildOptions opt;
    opt.table_cap = static_cast<std::size_t>(cfg.cap_order);
    opt.closure_cap = std::max<std::size_t>(opt.table_cap, 200000);
    if (source.rfind("builtin:", 0) != 0) return load_group_file(source, opt);
    std::string name = source.substr(8);
    auto starts = [&name](const char* prefix) { return name.rfind(prefix, 0) == 0; };
    if (name == "trivial") return trivial_group();
    if (name == "sym3") return symmetric_group(3);
    if (name == "sym4") return symmetric_group(4);
    if (name == "sym5") return symmetric_group(5);
    if (name == "alt4") return alternating_group(4);
    if (name == "alt5") return alternating_group(5);
    try {
        if (starts("cyclic")) return cyclic_group(std::stoi(name.substr(6)));
        if (starts("dihedral")) return dihedral_group_of_order(std::stoi(name.substr(8)));
        if (starts("quaternion")) return quaternion_group(std::stoi(name.substr(10)));
        if (starts("extraspecial")) {
            std::size_t exp_pos = name.find("exp");
            int order = std::stoi(name.substr(12, exp_pos - 12));
            int p = 3;
            while (p * p * p < order) p += 2;
            if (p * p * p != order) throw UnknownGroup("extraspecial order must be p^3");
            int e = std::stoi(name.substr(exp_pos + 3));
            if (e == p) {
                GkGroup gk = build_gk(GkSpec{p, 1, 1, 1, 1});
                return gk.group;
            }
            if (e == p * p) return extraspecial_exponent_p2(p);
            throw UnknownGroup("extraspecial exponent must be p or p^2");
        }
        if (starts("gk:")) {
            std::istringstream ss(name.substr(3));
            GkSpec spec;
            char colon;
            if (!(ss >> spec.p >> colon >> spec.k >> colon >> spec.n >> colon >> spec.r >> colon >>
                  spec.s))
                throw UnknownGroup("gk spec is gk:p:k:n:r:s");
            return build_gk(spec, GkBuildOptions{cfg.cap_order}).group;
        }
    } catch (const std::invalid_argument&) {
        throw UnknownGroup("bad numeric field in builtin group '" + name + "'");
    }
    throw UnknownGroup("unknown builtin group '" + name + "'");
}

inline MalcevGroup resolve_malcev(const std::string& source) {
    if (source == "heisenberg" || source == "ut4" || source.rfind("zn(", 0) == 0)
        return builtin_malcev_group(source);
    return load_malcev_file(source);
}

inline int resolve_element(const FiniteGroup& g, const std::string& spec) {
    if (!spec.empty() && spec[0] == '#') {
        int idx = std::stoi(spec.substr(1));
        if (idx < 0 || idx >= g.order()) throw InvalidElement("element index out of range");
        return idx;
    }
    int e = g.element_labeled(spec);
    if (e < 0) throw InvalidElement("no element labelled '" + spec + "'");
    return e;
}

inline Subgroup resolve_normal(const FiniteGroup& g, const std::string& spec) {
    if (spec == "center") return center(g);
    if (spec == "derived") {
        CentralSeries cs = central_series(g);
        return cs.lower.size() > 1 ? cs.lower[1] : Subgroup::trivial(g);
    }
    if (spec == "v4") {
        int a = g.element_labeled("(1 2)(3 4)");
        int b = g.element_labeled("(1 3)(2 4)");
        if (a < 0 || b < 0) throw InvalidElement("this group has no labelled Klein four-subgroup");
        return Subgroup::generated(g, {a, b});
    }
    if (spec == "trivial") return Subgroup::trivial(g);
    std::vector<int> gens;
    std::istringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) gens.push_back(resolve_element(g, item));
    if (gens.empty()) throw PreconditionFailed("--normal needs generators or a named subgroup");
    return Subgroup::generated(g, gens);
}

inline Json base_report(const RunConfig& cfg) {
    Json j;
    j["command"] = cfg.command;
    j["version"] = kLibraryVersion;
    return j;
}

struct SamplerSpec {
    std::string kind;    // walk | box | ball
    std::string group;   // malcev name/file or free<r>
    long long param = 0;  // steps / side / radius
    std::vector<int> weights;
};

inline SamplerSpec parse_sampler(const std::string& text) {
    SamplerSpec spec;
    std::vector<std::string> parts;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 3) throw ParseError("sampler spec is kind:group:param=value");
    spec.kind = parts[0];
    spec.group = parts[1];
    for (std::size_t i = 2; i < parts.size(); ++i) {
        std::size_t eq = parts[i].find('=');
        if (eq == std::string::npos) throw ParseError("sampler option '" + parts[i] + "' needs =");
        std::string key = parts[i].substr(0, eq), val = parts[i].substr(eq + 1);
        if (key == "steps" || key == "side" || key == "radius") {
            spec.param = std::stoll(val);
        } else if (key == "weights") {
            std::istringstream ws(val);
            std::string w;
            while (std::getline(ws, w, ',')) spec.weights.push_back(std::stoi(w));
        } else {
            throw ParseError("unknown sampler option '" + key + "'");
        }
    }
    if (spec.kind != "walk" && spec.kind != "box" && spec.kind != "ball")
        throw ParseError("sampler kind must be walk, box or ball");
    return spec;
}

// generators used for walks on the builtin coordinate groups: the non-central
// basis directions
inline std::vector<MalcevElement> walk_generators(const MalcevGroup& g) {
    std::vector<MalcevElement> gens;
    if (g.name() == "heisenberg") {
        gens.push_back(MalcevElement{BigInt(0), BigInt(0), BigInt(1)});
        gens.push_back(MalcevElement{BigInt(0), BigInt(1), BigInt(0)});
        return gens;
    }
    if (g.name() == "ut4") {
        for (int i : {3, 4, 5}) {
            MalcevElement e(6, BigInt(0));
            e[i] = BigInt(1);
            gens.push_back(std::move(e));
        }
        return gens;
    }
    for (int i = 0; i < g.dim(); ++i) {
        MalcevElement e(g.dim(), BigInt(0));
        e[i] = BigInt(1);
        gens.push_back(std::move(e));
    }
    return gens;
}

// box growth exponents: the centre-first coordinates of the builtin groups
// grow like side^level, so weight each coordinate by its superdiagonal level
inline std::vector<int> default_box_weights(const MalcevGroup& g) {
    if (g.name() == "heisenberg") return {2, 1, 1};
    if (g.name() == "ut4") return {3, 2, 2, 1, 1, 1};
    return std::vector<int>(g.dim(), 1);
}

inline MalcevElement parse_coords(const std::string& text, int dim) {
    MalcevElement v;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(BigInt::from_string(item));
    if (static_cast<int>(v.size()) != dim)
        throw PreconditionFailed("expected " + std::to_string(dim) + " coordinates");
    return v;
}

template <class Sampler, class Ops>
Json run_one_estimate(const Ops& ops, const Sampler& sampler, const RunConfig& cfg,
                      const typename Ops::Element* target) {
    EstimateResult e = target ? estimate_P_k(ops, sampler, *target, cfg.k, cfg.trials, cfg.seed)
                              : estimate_dc_k(ops, sampler, cfg.k, cfg.trials, cfg.seed);
    return estimate_json(e);
}

}  // namespace cli_detail

inline Report run(const RunConfig& cfg);

namespace cli_detail {

inline Report run_dc(const RunConfig& cfg) {
    FiniteGroup g = resolve_group(cfg.group, cfg);
    Report rep;
    rep.body = base_report(cfg);
    rep.body["inputs"] = {{"group", cfg.group}, {"k", cfg.k}, {"order", g.order()}};
    rep.body["results"]["dc"] = rational_json(dc_k_exact(g, cfg.k));
    return rep;
}

inline Report run_pofg(const RunConfig& cfg) {
    FiniteGroup g = resolve_group(cfg.group, cfg);
    int target = resolve_element(g, cfg.target_spec);
    Report rep;
    rep.body = base_report(cfg);
    rep.body["inputs"] = {{"group", cfg.group},
                          {"k", cfg.k},
                          {"target", g.label(target)},
                          {"order", g.order()}};
    rep.body["results"]["P"] = rational_json(P_k_exact(g, target, cfg.k));
    return rep;
}

inline Report run_dphi(const RunConfig& cfg) {
    FiniteGroup g = resolve_group(cfg.group, cfg);
    GroupWord w = load_word_file(cfg.word_file, g);
    Report rep;
    rep.body = base_report(cfg);
    rep.body["inputs"] = {{"group", cfg.group},
                          {"word", cfg.word_file},
                          {"arity", w.arity()},
                          {"order", g.order()}};
    rep.body["results"]["dphi"] = rational_json(dphi_exact(g, w, cfg.cap_evals));
    return rep;
}

inline Report run_gallagher(const RunConfig& cfg) {
    FiniteGroup g = resolve_group(cfg.group, cfg);
    Subgroup n = resolve_normal(g, cfg.normal_spec);
    Report rep;
    rep.body = base_report(cfg);
    rep.body["inputs"] = {{"group", cfg.group},
                          {"normal_order", n.size()},
                          {"k", cfg.k},
                          {"full_audit", cfg.full_audit}};
    SubmultiplicativityResult sub = verify_submultiplicativity(g, n, cfg.k);
    rep.body["results"]["dc_G"] = rational_json(sub.lhs);
    rep.body["results"]["dc_N_times_dc_Q"] = rational_json(sub.rhs);
    rep.body["results"]["submultiplicative"] = sub.ok;
    bool all_ok = sub.ok;

    if (cfg.full_audit) {
        QuotientData q = quotient(g, n);
        bool identity_ok = true;
        RngStream rng = RngStream::for_trial(cfg.seed_set ? cfg.seed : 0, 0);
        for (int t = 0; t < 1000; ++t) {
            int z = static_cast<int>(rng.below(g.order()));
            int y = static_cast<int>(rng.below(g.order()));
            int gg = static_cast<int>(rng.below(g.order()));
            std::vector<int> ns;
            for (int i = 0; i < cfg.k - 1; ++i) ns.push_back(static_cast<int>(rng.below(g.order())));
            if (!check_main_identity(g, z, y, gg, ns)) identity_ok = false;
        }
        bool period_ok = true, adjacent_ok = true, theta_ok = true;
        Json period_histogram = Json::object();
        Json sample_graph;
        long long graphs = 0;
        for (int gg = 0; gg < g.order(); ++gg) {
            for (int ci = 0; ci < q.quotient.order(); ++ci) {
                int x = q.section[ci];
                GammaGraph gamma = build_gamma(g, n, gg, x, cfg.k);
                ++graphs;
                if (!check_period_property(gamma)) period_ok = false;
                if (!check_adjacent_property(gamma)) adjacent_ok = false;
                if (!check_theta_bijection(g, n, gg, x, cfg.k).ok()) theta_ok = false;
                for (const auto& comp : gamma.components) {
                    std::string key = std::to_string(comp.period);
                    period_histogram[key] = period_histogram.value(key, 0) + 1;
                }
                if (graphs == 1) {
                    Json comps = Json::array();
                    for (std::size_t ci2 = 0; ci2 < gamma.components.size(); ++ci2) {
                        LevelHistogram h = level_histogram(gamma, static_cast<int>(ci2));
                        comps.push_back({{"period", gamma.components[ci2].period},
                                         {"sizes", h.sizes},
                                         {"counts", h.counts}});
                    }
                    sample_graph = {{"g", g.label(gg)},
                                    {"x", g.label(x)},
                                    {"vertices", gamma.vertex_tuples.size()},
                                    {"edges", gamma.edges.size()},
                                    {"components", comps}};
                }
            }
        }
        rep.body["results"]["audit"] = {{"graphs", graphs},
                                        {"main_identity", identity_ok},
                                        {"period_property", period_ok},
                                        {"adjacent_property", adjacent_ok},
                                        {"theta_bijection", theta_ok},
                                        {"component_periods", period_histogram},
                                        {"sample_graph", sample_graph}};
        all_ok = all_ok && identity_ok && period_ok && adjacent_ok && theta_ok;
    }
    rep.body["results"]["all_checks_passed"] = all_ok;
    return rep;
}

inline Report run_pgroup(const RunConfig& cfg) {
    GkSpec spec{cfg.p, cfg.k, cfg.n, cfg.r, cfg.s};
    GkGroup gk = build_gk(spec, GkBuildOptions{cfg.cap_order});
    Report rep;
    rep.body = base_report(cfg);
    rep.body["inputs"] = {{"p", cfg.p}, {"k", cfg.k}, {"n", cfg.n}, {"r", cfg.r}, {"s", cfg.s}};
    rep.body["results"]["order"] = gk.group.order();
    bool all_ok = true;
    if (cfg.verify_all) {
        GkSeriesReport series = verify_gk_series(gk);
        rep.body["results"]["series_match"] = series.ok;
        if (!series.ok) rep.body["results"]["series_detail"] = series.detail;
        rep.body["results"]["centre_order"] = center(gk.group).size();
        all_ok = all_ok && series.ok;
        if (cfg.r == 1 && cfg.s == 1) {
            Subgroup sharp = sharp_subgroup(gk);
            bool sharp_nilp = is_k_step_nilpotent(subgroup_as_group(gk.group, sharp).group, cfg.k);
            rep.body["results"]["sharp_subgroup"] = {
                {"index", gk.group.order() / sharp.size()},
                {"k_step_nilpotent", sharp_nilp},
                {"quasi_corank", quasi_corank(gk, sharp)}};
            all_ok = all_ok && sharp_nilp;
        } else {
            rep.body["results"]["sharp_subgroup"] = "skipped: defined for r = s = 1";
        }
        if (cfg.n <= 2) {
            bool none_small = no_small_nilpotent_subgroups(gk, cfg.k);
            rep.body["results"]["no_small_nilpotent_subgroups"] = none_small;
            all_ok = all_ok && none_small;
        } else {
            rep.body["results"]["no_small_nilpotent_subgroups"] =
                "skipped: audit beyond maximal subgroups needs n <= 2";
        }
        rep.body["results"]["all_checks_passed"] = all_ok;
    }
    return rep;
}

inline Report run_malcev(const RunConfig& cfg) {
    MalcevGroup g = resolve_malcev(cfg.group);
    Report rep;
    rep.body = base_report(cfg);
    rep.body["inputs"] = {{"group", cfg.group}, {"dimension", g.dim()}};
    rep.body["results"]["n0"] = g.n0().to_string();
    if (cfg.quotient > 0) {
        MalcevQuotientOptions opt;
        opt.order_cap = cfg.cap_order * cfg.cap_order;  // quotients beyond the table cap still work
        opt.table_cap = static_cast<std::size_t>(cfg.cap_order);
        MalcevQuotient q = finite_quotient(g, cfg.quotient, opt);
        rep.body["results"]["quotient"] = {{"modulus", cfg.quotient}, {"order", q.group.order()}};
        ChiefFactorReport chief = chief_factors(q);
        rep.body["results"]["quotient"]["chief_factors_cyclic"] = chief.all_factors_cyclic_of_order_n;
        if (cfg.k >= 0) {
            rep.body["results"]["quotient"]["dc"] = rational_json(dc_k_exact(q.group, cfg.k));
            rep.body["results"]["quotient"]["k"] = cfg.k;
        }
    }
    return rep;
}

inline Report run_rootdensity(const RunConfig& cfg) {
    IntPolynomial poly = load_polynomial_file(cfg.poly_file);
    MalcevGroup g = cfg.group.empty() ? builtin_malcev_group("zn(" + std::to_string(poly.nvars()) + ")")
                                      : resolve_malcev(cfg.group);
    Report rep;
    rep.body = base_report(cfg);
    rep.body["inputs"] = {{"poly", cfg.poly_file},
                          {"vars", poly.nvars()},
                          {"group", cfg.group.empty() ? "zn(auto)" : cfg.group}};
    Json rows = Json::array();
    std::string csv = "n,num,den,decimal\n";
    for (long long n : cfg.primes) {
        Rational d = root_density(g, poly, n, cfg.cap_evals);
        Json row;
        row["n"] = n;
        row["density"] = rational_json(d);
        rows.push_back(row);
        csv += std::to_string(n) + "," + d.numerator().to_string() + "," +
               d.denominator().to_string() + "," + std::to_string(d.to_double()) + "\n";
    }
    rep.body["results"]["densities"] = rows;
    rep.csv = csv;
    return rep;
}

inline Report run_estimate(const RunConfig& cfg) {
    if (!cfg.seed_set) throw PreconditionFailed("stochastic commands require --seed");
    if (cfg.trials < 1) throw PreconditionFailed("estimates need --trials");
    SamplerSpec spec = parse_sampler(cfg.sampler_spec);
    Report rep;
    rep.body = base_report(cfg);
    rep.body["inputs"] = {{"sampler", cfg.sampler_spec},
                          {"k", cfg.k},
                          {"trials", cfg.trials},
                          {"seed", cfg.seed}};

    std::vector<long long> grid_values{spec.param};
    std::string grid_param;
    if (!cfg.grid.empty()) {
        std::size_t eq = cfg.grid.find('=');
        if (eq == std::string::npos) throw ParseError("--grid is <param>=<v1,v2,...>");
        grid_param = cfg.grid.substr(0, eq);
        grid_values.clear();
        std::istringstream ss(cfg.grid.substr(eq + 1));
        std::string item;
        while (std::getline(ss, item, ',')) grid_values.push_back(std::stoll(item));
        if (grid_values.empty()) throw ParseError("--grid lists no values");
    }

    Json rows = Json::array();
    std::string csv = "param,point,ci_low,ci_high,successes,trials,seed\n";
    for (long long value : grid_values) {
        SamplerSpec cur = spec;
        cur.param = value;
        Json one;
        if (cur.kind == "ball") {
            if (cur.group.rfind("free", 0) != 0)
                throw ParseError("ball samplers are ball:free<rank>:radius=<n>");
            int rank = std::stoi(cur.group.substr(4));
            FreeGroupOps ops{rank};
            FreeBallSampler sampler(rank, static_cast<int>(cur.param));
            one = run_one_estimate(ops, sampler, cfg, static_cast<const FreeWord*>(nullptr));
        } else {
            MalcevGroup g = resolve_malcev(cur.group);
            MalcevOps ops{&g};
            MalcevElement target;
            bool has_target = !cfg.target_spec.empty();
            if (has_target) target = parse_coords(cfg.target_spec, g.dim());
            if (cur.kind == "walk") {
                RandomWalkSampler<MalcevOps> sampler(
                    ops, StepDistribution<MalcevOps>::lazy_uniform(ops, walk_generators(g)),
                    static_cast<int>(cur.param));
                one = run_one_estimate(ops, sampler, cfg, has_target ? &target : nullptr);
            } else {
                std::vector<int> weights = cur.weights;
                if (weights.empty()) weights = default_box_weights(g);
                FolnerBoxSampler sampler(g, cur.param, weights);
                one = run_one_estimate(ops, sampler, cfg, has_target ? &target : nullptr);
            }
        }
        one["param"] = value;
        rows.push_back(one);
        csv += std::to_string(value) + "," + std::to_string(one["point"].get<double>()) + "," +
               std::to_string(one["ci_low"].get<double>()) + "," +
               std::to_string(one["ci_high"].get<double>()) + "," +
               std::to_string(one["successes"].get<std::uint64_t>()) + "," +
               std::to_string(cfg.trials) + "," + std::to_string(cfg.seed) + "\n";
    }
    if (!grid_param.empty()) rep.body["inputs"]["grid"] = cfg.grid;
    rep.body["results"]["estimates"] = rows;
    rep.csv = csv;
    return rep;
}

inline Report run_generic(const RunConfig& cfg) {
    if (!cfg.seed_set) throw PreconditionFailed("stochastic commands require --seed");
    if (cfg.trials < 1) throw PreconditionFailed("the experiment needs --trials");
    std::vector<int> radii = cfg.radii;
    if (radii.empty()) radii.push_back(cfg.radius);
    Report rep;
    rep.body = base_report(cfg);
    rep.body["inputs"] = {{"rank", cfg.rank}, {"trials", cfg.trials}, {"seed", cfg.seed}};
    Json rows = Json::array();
    std::string csv = "radius,delzant_frac,basis_frac,delzant_count,basis_count,trials,seed\n";
    for (int radius : radii) {
        GenericityResult r = genericity_experiment(cfg.rank, radius, cfg.trials, cfg.seed);
        Json row;
        row["radius"] = radius;
        row["delzant_frac"] = r.delzant_frac();
        row["basis_frac"] = r.basis_frac();
        row["delzant_count"] = r.delzant_count;
        row["basis_count"] = r.basis_count;
        row["sound"] = r.sound;
        rows.push_back(row);
        csv += std::to_string(radius) + "," + std::to_string(r.delzant_frac()) + "," +
               std::to_string(r.basis_frac()) + "," + std::to_string(r.delzant_count) + "," +
               std::to_string(r.basis_count) + "," + std::to_string(cfg.trials) + "," +
               std::to_string(cfg.seed) + "\n";
    }
    rep.body["results"]["sweep"] = rows;
    rep.csv = csv;
    return rep;
}

inline Report run_acceptance_command(const RunConfig& cfg) {
    std::vector<CriterionResult> results = run_acceptance(cfg.only);
    Report rep;
    rep.body = base_report(cfg);
    Json rows = Json::array();
    int failures = 0;
    for (const CriterionResult& r : results) {
        Json row;
        row["id"] = r.id;
        row["name"] = r.name;
        row["passed"] = r.passed;
        row["detail"] = r.detail;
        if (cfg.timing) row["seconds"] = r.seconds;
        rows.push_back(row);
        if (!r.passed) ++failures;
    }
    rep.body["results"]["criteria"] = rows;
    rep.body["results"]["failures"] = failures;
    return rep;
}

}  // namespace cli_detail

// single dispatch point used by both the binary and the tests
inline Report run(const RunConfig& cfg) {
    using namespace cli_detail;
    auto start = std::chrono::steady_clock::now();
    Report rep;
    if (cfg.command == "dc") {
        rep = run_dc(cfg);
    } else if (cfg.command == "pofg") {
        rep = run_pofg(cfg);
    } else if (cfg.command == "dphi") {
        rep = run_dphi(cfg);
    } else if (cfg.command == "gallagher") {
        rep = run_gallagher(cfg);
    } else if (cfg.command == "pgroup") {
        rep = run_pgroup(cfg);
    } else if (cfg.command == "malcev") {
        rep = run_malcev(cfg);
    } else if (cfg.command == "rootdensity") {
        rep = run_rootdensity(cfg);
    } else if (cfg.command == "estimate") {
        rep = run_estimate(cfg);
    } else if (cfg.command == "generic") {
        rep = run_generic(cfg);
    } else if (cfg.command == "acceptance") {
        rep = run_acceptance_command(cfg);
    } else {
        throw Error("unknown command '" + cfg.command + "'");
    }
    if (cfg.timing) {
        rep.body["timing_ms"] =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
    }
    return rep;
}

}  // namespace nilprob
