#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nilprob/bigint.hpp"
#include "nilprob/errors.hpp"
#include "nilprob/finite_group.hpp"
#include "nilprob/rational.hpp"
#include "nilprob/words.hpp"

namespace nilprob {

inline std::vector<std::int32_t> commutator_table(const FiniteGroup& g) {
    std::size_t n = g.order();
    std::vector<std::int32_t> t(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            t[a * n + b] = g.commutator(static_cast<int>(a), static_cast<int>(b));
        }
    }
    return t;
}

// counts(g) = number of level-tuples (x_1,...,x_level) with [x_1,...,x_level] = g
struct CommutatorDistribution {
    const FiniteGroup* group;
    int level;
    std::vector<BigInt> counts;
};

// One dynamic-programming pass per level: counts'(c) = sum over (h,y) with
// [h,y] = c of counts(h). Time O(level * |G|^2), space O(|G|).
inline CommutatorDistribution commutator_distribution(const FiniteGroup& g, int level) {
    if (level < 1) throw PreconditionFailed("distribution level must be >= 1");
    std::size_t n = g.order();
    std::vector<BigInt> cur(n, BigInt(1));
    if (level > 1) {
        std::vector<std::int32_t> com = commutator_table(g);
        for (int l = 2; l <= level; ++l) {
            std::vector<BigInt> next(n, BigInt(0));
            for (std::size_t h = 0; h < n; ++h) {
                if (cur[h].is_zero()) continue;
                const std::int32_t* row = com.data() + h * n;
                for (std::size_t y = 0; y < n; ++y) next[row[y]] += cur[h];
            }
            cur = std::move(next);
        }
    }
    return {&g, level, std::move(cur)};
}

// probability that a uniform (k+1)-tuple has trivial simple commutator;
// k = 0 is the probability of drawing the identity itself
inline Rational dc_k_exact(const FiniteGroup& g, int k) {
    if (k < 0) throw PreconditionFailed("k must be >= 0");
    if (k == 0) return Rational(BigInt(1), BigInt(g.order()));
    CommutatorDistribution d = commutator_distribution(g, k + 1);
    return Rational(d.counts[FiniteGroup::kIdentity],
                    BigInt::pow(BigInt(g.order()), static_cast<std::uint64_t>(k) + 1));
}

inline Rational P_k_exact(const FiniteGroup& g, int target, int k) {
    if (k < 1) throw PreconditionFailed("k must be >= 1");
    CommutatorDistribution d = commutator_distribution(g, k + 1);
    return Rational(d.counts[target], BigInt::pow(BigInt(g.order()), static_cast<std::uint64_t>(k) + 1));
}

// restricted solution count f_k(A_1,...,A_{k+1}) =
// #{(x_1,...,x_{k+1}) in A_1 x...x A_{k+1} : [x_1,...,x_{k+1}] = 1},
// computed over partial-commutator values
inline BigInt f_k_count(const FiniteGroup& g, const std::vector<std::vector<int>>& sets) {
    if (sets.empty()) throw PreconditionFailed("f_k_count needs at least one factor");
    std::size_t n = g.order();
    std::vector<BigInt> cur(n, BigInt(0));
    for (int x : sets[0]) cur[x] += BigInt(1);
    for (std::size_t i = 1; i < sets.size(); ++i) {
        std::vector<BigInt> next(n, BigInt(0));
        for (std::size_t h = 0; h < n; ++h) {
            if (cur[h].is_zero()) continue;
            for (int y : sets[i]) next[g.commutator(static_cast<int>(h), y)] += cur[h];
        }
        cur = std::move(next);
    }
    return cur[FiniteGroup::kIdentity];
}

inline BigInt f_k_count(const FiniteGroup& g, const std::vector<Subgroup>& sets) {
    std::vector<std::vector<int>> s;
    s.reserve(sets.size());
    for (const Subgroup& x : sets) s.push_back(x.members());
    return f_k_count(g, s);
}

// exact satisfaction fraction of an equation, by full enumeration of G^arity
inline Rational dphi_exact(const FiniteGroup& g, const GroupWord& w,
                           std::uint64_t eval_cap = 100000000ULL) {
    int arity = w.arity();
    double size = 1.0;
    for (int i = 0; i < arity; ++i) size *= g.order();
    if (size > static_cast<double>(eval_cap))
        throw CapExceeded("dphi enumeration of |G|^" + std::to_string(arity) + " exceeds cap");
    BigInt hits(0);
    std::vector<int> xs(arity, 0);
    FiniteGroupOps ops{&g};
    while (true) {
        if (evaluate_word(ops, w, std::span<const int>(xs)) == FiniteGroup::kIdentity) hits += BigInt(1);
        int i = 0;
        while (i < arity && ++xs[i] == g.order()) xs[i++] = 0;
        if (i == arity) break;
    }
    return Rational(hits, BigInt::pow(BigInt(g.order()), static_cast<std::uint64_t>(arity)));
}

// upper bound for dc^k of a finite group that is not k-step nilpotent
inline Rational nilpotence_gap_bound(int k) {
    BigInt d = BigInt::pow(BigInt(2), static_cast<std::uint64_t>(k) + 2);
    return Rational(d - BigInt(3), d);
}

struct DescentReport {
    Rational dc_of_quotient;   // dc^k(G/G_n)
    Rational product;          // prod of dc^k(G_{i-1}/G_i)
    Rational geometric_bound;  // gap bound to the n-th power
    std::vector<Rational> step_values;
    bool ok = false;
};

namespace detail {
// quotient of one subgroup of G by a smaller normal one, as a standalone group
inline FiniteGroup section_group(const FiniteGroup& g, const Subgroup& big, const Subgroup& small) {
    for (int m : small.members()) {
        if (!big.contains(m)) throw ChainInvalid("chain is not descending");
    }
    ExtractedGroup ex = subgroup_as_group(g, big);
    std::vector<int> inner;
    std::vector<int> pos(g.order(), -1);
    for (std::size_t i = 0; i < ex.to_parent.size(); ++i) pos[ex.to_parent[i]] = static_cast<int>(i);
    for (int m : small.members()) inner.push_back(pos[m]);
    return quotient(ex.group, Subgroup(ex.group, inner)).quotient;
}
}  // namespace detail

// Checks the geometric-decay bound along a descending chain
// G = G_0 > G_1 > ... > G_n of normal subgroups of G whose successive
// quotients are not k-step nilpotent:
//   dc^k(G/G_n) <= prod_i dc^k(G_{i-1}/G_i) <= ((2^{k+2}-3)/2^{k+2})^n.
// `chain` lists G_1,...,G_n.
inline DescentReport descent_bound_check(const FiniteGroup& g, const std::vector<Subgroup>& chain,
                                         int k) {
    DescentReport rep;
    Subgroup prev = Subgroup::whole(g);
    rep.product = Rational(1);
    for (const Subgroup& cur : chain) {
        if (!cur.is_normal()) throw ChainInvalid("chain member is not normal in the ambient group");
        FiniteGroup step = detail::section_group(g, prev, cur);
        if (is_k_step_nilpotent(step, k))
            throw ChainInvalid("a successive quotient is " + std::to_string(k) + "-step nilpotent");
        Rational v = dc_k_exact(step, k);
        rep.step_values.push_back(v);
        rep.product *= v;
        prev = cur;
    }
    FiniteGroup g_mod_last =
        chain.empty() ? g : quotient(g, chain.back()).quotient;
    rep.dc_of_quotient = dc_k_exact(g_mod_last, k);
    rep.geometric_bound = Rational::pow(nilpotence_gap_bound(k), chain.size());
    rep.ok = rep.dc_of_quotient <= rep.product && rep.product <= rep.geometric_bound;
    return rep;
}

}  // namespace nilprob
