#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "nilprob/corpus.hpp"
#include "nilprob/gallagher.hpp"
#include "nilprob/genericity.hpp"
#include "nilprob/group_builders.hpp"
#include "nilprob/malcev.hpp"
#include "nilprob/nildegree.hpp"
#include "nilprob/pgroups.hpp"
#include "nilprob/pinned.hpp"
#include "nilprob/polynomial.hpp"
#include "nilprob/rng.hpp"
#include "nilprob/sampling.hpp"

namespace nilprob {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

namespace acceptance_detail {

// independent oracle: full (k+1)-tuple enumeration, no dynamic programming
inline Rational brute_force_dc(const FiniteGroup& g, int k) {
    std::vector<int> xs(k + 1, 0);
    BigInt hits(0);
    while (true) {
        if (simple_commutator(g, xs) == FiniteGroup::kIdentity) hits += BigInt(1);
        int i = 0;
        while (i <= k && ++xs[i] == g.order()) xs[i++] = 0;
        if (i > k) break;
    }
    return Rational(hits, BigInt::pow(BigInt(g.order()), static_cast<std::uint64_t>(k) + 1));
}

struct Checker {
    bool ok = true;
    std::string detail;
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
};

inline CriterionResult exact_dc_values() {
    Checker c;
    struct Row {
        const char* name;
        FiniteGroup group;
        Rational expected;
    };
    std::vector<Row> rows;
    rows.push_back({"sym3", symmetric_group(3), pinned::dc1_sym3()});
    rows.push_back({"dihedral8", dihedral_group_of_order(8), pinned::dc1_dihedral8()});
    rows.push_back({"sym4", symmetric_group(4), pinned::dc1_sym4()});
    for (const Row& r : rows) {
        Rational dp = dc_k_exact(r.group, 1);
        Rational brute = brute_force_dc(r.group, 1);
        c.expect(dp == brute, std::string(r.name) + ": DP and enumerator disagree");
        c.expect(dp == r.expected, std::string(r.name) + ": value " + dp.to_string() +
                                       " differs from pinned " + r.expected.to_string());
    }
    return {1, "exact-dc", c.ok, c.ok ? "dc1 = 1/2, 5/8, 5/24 on both code paths" : c.detail, 0};
}

inline CriterionResult gap_bound() {
    Checker c;
    int tested = 0;
    for (const CorpusEntry& e : builtin_corpus(729)) {
        CentralSeries cs = central_series(e.group);
        for (int k = 1; k <= 3; ++k) {
            if (cs.nilpotency_class.has_value() && *cs.nilpotency_class <= k) continue;
            Rational dk = dc_k_exact(e.group, k);
            ++tested;
            c.expect(dk <= nilpotence_gap_bound(k),
                     e.name + " k=" + std::to_string(k) + ": dc = " + dk.to_string() +
                         " exceeds the gap bound");
        }
    }
    return {2, "gap-bound", c.ok,
            c.ok ? std::to_string(tested) + " non-nilpotent (group,k) pairs under the bound"
                 : c.detail,
            0};
}

inline CriterionResult submultiplicativity() {
    Checker c;
    int tested = 0;
    for (const CorpusEntry& e : builtin_corpus(243)) {
        std::vector<Subgroup> normals = all_normal_subgroups(e.group);
        for (const Subgroup& n : normals) {
            for (int k = 1; k <= 2; ++k) {
                SubmultiplicativityResult r = verify_submultiplicativity(e.group, n, k);
                ++tested;
                c.expect(r.ok, e.name + " |N|=" + std::to_string(n.size()) +
                                   " k=" + std::to_string(k) + ": " + r.lhs.to_string() + " > " +
                                   r.rhs.to_string());
            }
        }
    }
    return {3, "submultiplicativity", c.ok,
            c.ok ? std::to_string(tested) + " (group, normal subgroup, k) triples verified"
                 : c.detail,
            0};
}

inline CriterionResult gamma_machinery() {
    Checker c;
    struct Instance {
        const char* name;
        FiniteGroup group;
        std::vector<int> normal_gens;
    };
    std::vector<Instance> instances;
    {
        FiniteGroup s4 = symmetric_group(4);
        std::vector<int> v4{s4.element_labeled("(1 2)(3 4)"), s4.element_labeled("(1 3)(2 4)")};
        instances.push_back({"sym4/V4", std::move(s4), v4});
    }
    {
        FiniteGroup d8 = dihedral_group_of_order(8);
        std::vector<int> z = center(d8).members();
        instances.push_back({"dihedral8/centre", std::move(d8), z});
    }
    const int k = 2;
    for (const Instance& inst : instances) {
        const FiniteGroup& g = inst.group;
        Subgroup n = Subgroup::generated(g, inst.normal_gens);
        // main identity on 1000 random tuples
        RngStream rng = RngStream::for_trial(2024, 0);
        for (int t = 0; t < 1000; ++t) {
            int z = static_cast<int>(rng.below(g.order()));
            int y = static_cast<int>(rng.below(g.order()));
            int gg = static_cast<int>(rng.below(g.order()));
            std::vector<int> ns;
            for (int i = 0; i < k - 1; ++i) ns.push_back(static_cast<int>(rng.below(g.order())));
            if (!check_main_identity(g, z, y, gg, ns)) {
                c.expect(false, std::string(inst.name) + ": main identity failed");
                break;
            }
        }
        // exhaustive graph checks and the coset inequality
        std::vector<std::vector<int>> all_n(k + 1, n.members());
        BigInt rhs_bound = f_k_count(g, all_n);
        for (int gg = 0; gg < g.order(); ++gg) {
            std::vector<std::vector<int>> rhs_sets{n.members(), {gg}};
            for (int i = 2; i <= k; ++i) rhs_sets.push_back(n.members());
            BigInt rhs = f_k_count(g, rhs_sets);
            for (int x = 0; x < g.order(); ++x) {
                GammaGraph gamma = build_gamma(g, n, gg, x, k);
                if (!check_period_property(gamma)) {
                    c.expect(false, std::string(inst.name) + ": period property failed");
                }
                if (!check_adjacent_property(gamma)) {
                    c.expect(false, std::string(inst.name) + ": adjacent relation failed");
                }
                ThetaCheckResult theta = check_theta_bijection(g, n, gg, x, k);
                c.expect(theta.ok(), std::string(inst.name) + ": theta check failed");
                std::vector<std::vector<int>> lhs_sets{coset_members(g, x, n), {gg}};
                for (int i = 2; i <= k; ++i) lhs_sets.push_back(n.members());
                c.expect(f_k_count(g, lhs_sets) <= rhs,
                         std::string(inst.name) + ": coset count inequality failed");
                if (!c.ok) return {4, "gamma-machinery", false, c.detail, 0};
            }
        }
        c.expect(rhs_bound == commutator_distribution(subgroup_as_group(g, n).group, k + 1)
                                  .counts[FiniteGroup::kIdentity],
                 std::string(inst.name) + ": unrestricted count mismatch");
    }
    return {4, "gamma-machinery", c.ok,
            c.ok ? "identity, period, adjacency, theta and coset checks all passed" : c.detail, 0};
}

inline CriterionResult pgroup_family() {
    Checker c;
    struct Case {
        int p, k, n;
    };
    for (Case cs : {Case{3, 1, 1}, Case{5, 1, 1}, Case{3, 1, 2}, Case{3, 2, 1}}) {
        GkSpec spec{cs.p, cs.k, cs.n, 1, 1};
        GkGroup gk = build_gk(spec);
        std::string tag = "G_" + std::to_string(cs.k) + "(" + std::to_string(cs.n) + ") p=" +
                          std::to_string(cs.p);
        GkSeriesReport series = verify_gk_series(gk);
        c.expect(series.ok, tag + ": " + series.detail);
        c.expect(center(gk.group).size() == cs.p, tag + ": centre order is not p");
        Subgroup sharp = sharp_subgroup(gk);
        long long index = gk.group.order() / sharp.size();
        long long pn = 1;
        for (int i = 0; i < cs.n; ++i) pn *= cs.p;
        c.expect(index == pn, tag + ": sharp subgroup index is not p^n");
        c.expect(is_k_step_nilpotent(subgroup_as_group(gk.group, sharp).group, cs.k),
                 tag + ": sharp subgroup class exceeds k");
        c.expect(no_small_nilpotent_subgroups(gk, cs.k),
                 tag + ": found a k-step nilpotent subgroup of small index");
    }
    return {5, "pgroup-family", c.ok,
            c.ok ? "series, centre, sharpness and maximal-subgroup audits passed" : c.detail, 0};
}

inline CriterionResult malcev_quotients() {
    Checker c;
    MalcevGroup h = builtin_malcev_group("heisenberg");
    c.expect(h.n0() == BigInt(2), "n0 of the Heisenberg group is not 2");
    bool threw = false;
    try {
        finite_quotient(h, 2);
    } catch (const NotCoprime&) {
        threw = true;
    }
    c.expect(threw, "modulus 2 was not rejected");
    for (long long n : {3LL, 5LL, 7LL}) {
        MalcevQuotient q = finite_quotient(h, n);
        c.expect(q.group.order() == n * n * n, "quotient order is not n^3 at n = " + std::to_string(n));
        ChiefFactorReport rep = chief_factors(q);
        c.expect(rep.all_factors_cyclic_of_order_n,
                 "chief factors are not all C_n at n = " + std::to_string(n));
    }
    MalcevQuotient q3 = finite_quotient(h, 3);
    long long commuting = 0;
    for (int a = 0; a < q3.group.order(); ++a) {
        for (int b = 0; b < q3.group.order(); ++b) {
            if (q3.group.mul(a, b) == q3.group.mul(b, a)) ++commuting;
        }
    }
    Rational pair_count(commuting, static_cast<std::int64_t>(q3.group.order()) * q3.group.order());
    Rational dp = dc_k_exact(q3.group, 1);
    c.expect(dp == pair_count, "DP and pair enumeration disagree on the mod-3 quotient");
    c.expect(dp == pinned::dc1_heisenberg_mod3(), "dc1 of the mod-3 quotient is not 11/27");
    return {6, "malcev-quotients", c.ok,
            c.ok ? "n0 = 2, coprimality enforced, |G(n)| = n^3 with C_n factors, dc1 = 11/27"
                 : c.detail,
            0};
}

inline CriterionResult root_density_criterion() {
    Checker c;
    MalcevGroup h = builtin_malcev_group("heisenberg");
    IntPolynomial x1 = IntPolynomial::variable(3, 0);
    for (long long n : {3LL, 5LL, 7LL, 11LL, 13LL}) {
        c.expect(root_density(h, x1, n) == Rational(1, n),
                 "coordinate polynomial density is not 1/" + std::to_string(n));
    }
    PolynomialParser pp("x2*w3 - x3*w2", {"x1", "x2", "x3", "w1", "w2", "w3"});
    IntPolynomial comm = pp.parse();
    Rational prev(1);
    for (const auto& [n, expected] : pinned::heisenberg_commutation_densities()) {
        Rational d = root_density(h, comm, n);
        c.expect(d == expected, "density at " + std::to_string(n) + " is " + d.to_string() +
                                    ", pinned " + expected.to_string());
        c.expect(d < prev, "densities are not strictly decreasing at " + std::to_string(n));
        prev = d;
    }
    c.expect(prev < Rational(1, 2), "density at 13 is not below 1/2");
    return {7, "root-density", c.ok,
            c.ok ? "1/n for the coordinate polynomial; pinned decreasing commutation densities"
                 : c.detail,
            0};
}

inline CriterionResult walk_convergence() {
    Checker c;
    MalcevGroup h = builtin_malcev_group("heisenberg");
    Rational q3 = dc_k_exact(finite_quotient(h, 3).group, 1);
    Rational q9 = dc_k_exact(finite_quotient(h, 9).group, 1);
    c.expect(q3 == pinned::dc1_heisenberg_mod3(), "dc1(G(3)) is not the pinned 11/27");
    c.expect(q9 == pinned::dc1_heisenberg_mod9(), "dc1(G(9)) is not the pinned 35/243");
    c.expect(q9 < q3, "the quotient sequence is not decreasing");

    MalcevOps ops{&h};
    MalcevElement gx{BigInt(0), BigInt(0), BigInt(1)};
    MalcevElement gy{BigInt(0), BigInt(1), BigInt(0)};
    RandomWalkSampler<MalcevOps> walk(ops, StepDistribution<MalcevOps>::lazy_uniform(ops, {gx, gy}),
                                      pinned::walk_steps);
    EstimateResult est = estimate_dc_k(ops, walk, 1, pinned::walk_trials, pinned::walk_seed);
    c.expect(est.ci_low <= pinned::walk_target && pinned::walk_target <= est.ci_high,
             "pinned walk target is outside the Wilson interval");
    c.expect(est.ci_high <= q9.to_double(),
             "the estimate does not sit below the m = 2 quotient value");
    char buf[160];
    std::snprintf(buf, sizeof buf, "estimate %.6f in [%.6f, %.6f], below dc1(G(9)) = 35/243",
                  est.point, est.ci_low, est.ci_high);
    return {8, "walk-convergence", c.ok, c.ok ? buf : c.detail, 0};
}

inline CriterionResult free_genericity() {
    Checker c;
    double prev_basis = 0;
    double prev_fail = 1;
    double last_basis = 0;
    bool first = true;
    std::string summary = "basis fractions";
    for (int radius : pinned::generic_radii) {
        GenericityResult r =
            genericity_experiment(2, radius, pinned::generic_trials, pinned::generic_seed);
        c.expect(r.sound, "a length-condition tuple was not a basis at radius " +
                              std::to_string(radius));
        c.expect(r.delzant_frac() <= r.basis_frac(),
                 "delzant fraction exceeds basis fraction at radius " + std::to_string(radius));
        c.expect(r.basis_frac() >= prev_basis,
                 "basis fraction decreased at radius " + std::to_string(radius));
        double fail = 1.0 - r.basis_frac();
        if (!first) {
            // at least geometric decay of the failure fraction across the
            // grid, up to one-count Monte Carlo slack
            double slack = 1.0 / pinned::generic_trials;
            c.expect(fail <= 0.5 * prev_fail + slack,
                     "failure fraction did not decay geometrically at radius " +
                         std::to_string(radius));
        }
        first = false;
        prev_fail = fail;
        prev_basis = r.basis_frac();
        last_basis = r.basis_frac();
        char buf[32];
        std::snprintf(buf, sizeof buf, " %.4f", r.basis_frac());
        summary += buf;
    }
    c.expect(last_basis >= pinned::generic_basis_threshold,
             "basis fraction at radius 20 fell below the pinned threshold");
    return {9, "free-genericity", c.ok, c.ok ? summary : c.detail, 0};
}

inline CriterionResult converse_bound() {
    Checker c;
    int tested = 0;
    for (const CorpusEntry& e : builtin_corpus(729)) {
        for (const CorpusEntry::ConverseWitness& w : e.converse) {
            Subgroup gamma(e.group, w.gamma);
            Subgroup hsub(e.group, w.h);
            // validate the witness: Gamma/H must be k-step nilpotent
            ExtractedGroup ex = subgroup_as_group(e.group, gamma);
            std::vector<int> pos(e.group.order(), -1);
            for (std::size_t i = 0; i < ex.to_parent.size(); ++i) pos[ex.to_parent[i]] = static_cast<int>(i);
            std::vector<int> inner;
            for (int m : hsub.members()) inner.push_back(pos[m]);
            FiniteGroup section = quotient(ex.group, Subgroup(ex.group, inner)).quotient;
            c.expect(is_k_step_nilpotent(section, w.k), e.name + ": recorded pair is not nilpotent");
            BigInt m(e.group.order() / gamma.size());
            BigInt d(hsub.size());
            Rational bound(BigInt(1), BigInt::pow(m, static_cast<std::uint64_t>(w.k) + 1) * d);
            ++tested;
            c.expect(dc_k_exact(e.group, w.k) >= bound,
                     e.name + ": dc^k fell below the converse bound " + bound.to_string());
        }
    }
    return {10, "converse-bound", c.ok,
            c.ok ? std::to_string(tested) + " recorded (Gamma, H, k) witnesses verified" : c.detail,
            0};
}

}  // namespace acceptance_detail

inline std::vector<CriterionResult> run_acceptance(const std::vector<std::string>& only = {}) {
    using namespace acceptance_detail;
    struct Entry {
        int id;
        const char* name;
        CriterionResult (*fn)();
    };
    const Entry criteria[] = {{1, "exact-dc", exact_dc_values},
                              {2, "gap-bound", gap_bound},
                              {3, "submultiplicativity", submultiplicativity},
                              {4, "gamma-machinery", gamma_machinery},
                              {5, "pgroup-family", pgroup_family},
                              {6, "malcev-quotients", malcev_quotients},
                              {7, "root-density", root_density_criterion},
                              {8, "walk-convergence", walk_convergence},
                              {9, "free-genericity", free_genericity},
                              {10, "converse-bound", converse_bound}};
    std::vector<CriterionResult> out;
    for (const Entry& e : criteria) {
        if (!only.empty()) {
            bool keep = false;
            for (const std::string& name : only) {
                if (name == e.name || name == std::to_string(e.id)) keep = true;
            }
            if (!keep) continue;
        }
        auto start = std::chrono::steady_clock::now();
        CriterionResult r = e.fn();
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace nilprob
