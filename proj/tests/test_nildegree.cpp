#include <doctest.h>

#include "nilprob/gallagher.hpp"
#include "nilprob/group_builders.hpp"
#include "nilprob/nildegree.hpp"

using namespace nilprob;

namespace {

// independent oracle: enumerate all (k+1)-tuples and evaluate the commutator
// letter by letter
Rational brute_dc(const FiniteGroup& g, int k) {
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

Rational brute_P(const FiniteGroup& g, int target, int k) {
    std::vector<int> xs(k + 1, 0);
    BigInt hits(0);
    while (true) {
        if (simple_commutator(g, xs) == target) hits += BigInt(1);
        int i = 0;
        while (i <= k && ++xs[i] == g.order()) xs[i++] = 0;
        if (i > k) break;
    }
    return Rational(hits, BigInt::pow(BigInt(g.order()), static_cast<std::uint64_t>(k) + 1));
}

}  // namespace

TEST_CASE("commutator distribution basics") {
    FiniteGroup c6 = cyclic_group(6);
    CommutatorDistribution d = commutator_distribution(c6, 2);
    CHECK(d.counts[0] == BigInt(36));
    for (int g = 1; g < 6; ++g) CHECK(d.counts[g].is_zero());

    FiniteGroup s3 = symmetric_group(3);
    CommutatorDistribution d3 = commutator_distribution(s3, 2);
    CHECK(d3.counts[0] == BigInt(18));

    for (int level = 1; level <= 4; ++level) {
        CommutatorDistribution dl = commutator_distribution(s3, level);
        BigInt total(0);
        for (const BigInt& c : dl.counts) total += c;
        CHECK(total == BigInt::pow(BigInt(6), static_cast<std::uint64_t>(level)));
    }
}

TEST_CASE("exact dc values against the tuple enumerator") {
    FiniteGroup s3 = symmetric_group(3);
    FiniteGroup d8 = dihedral_group_of_order(8);
    FiniteGroup s4 = symmetric_group(4);

    CHECK(dc_k_exact(s3, 1) == Rational(1, 2));
    CHECK(brute_dc(s3, 1) == Rational(1, 2));

    // oracle-derived value: 5 conjugacy classes in the order-8 dihedral group
    CHECK(brute_dc(d8, 1) == Rational(5, 8));
    CHECK(dc_k_exact(d8, 1) == brute_dc(d8, 1));

    CHECK(dc_k_exact(s4, 1) == Rational(5, 24));
    CHECK(brute_dc(s4, 1) == Rational(5, 24));

    CHECK(dc_k_exact(s4, 2) == brute_dc(s4, 2));
    CHECK(dc_k_exact(s3, 2) == brute_dc(s3, 2));
    CHECK(dc_k_exact(s3, 3) == brute_dc(s3, 3));

    for (int k = 1; k <= 3; ++k) CHECK(dc_k_exact(cyclic_group(5), k) == Rational(1));
    CHECK(dc_k_exact(s3, 0) == Rational(1, 6));
}

TEST_CASE("P_k against the pair enumerator") {
    FiniteGroup s3 = symmetric_group(3);
    CHECK(P_k_exact(s3, FiniteGroup::kIdentity, 1) == dc_k_exact(s3, 1));
    int c3 = s3.element_labeled("(1 2 3)");
    REQUIRE(c3 >= 0);
    CHECK(brute_P(s3, c3, 1) == Rational(1, 4));
    CHECK(P_k_exact(s3, c3, 1) == Rational(1, 4));
    Rational total(0);
    for (int g = 0; g < s3.order(); ++g) total += P_k_exact(s3, g, 1);
    CHECK(total == Rational(1));
}

TEST_CASE("restricted counts f_k") {
    FiniteGroup s4 = symmetric_group(4);
    Subgroup whole = Subgroup::whole(s4);
    CommutatorDistribution d = commutator_distribution(s4, 2);
    CHECK(f_k_count(s4, std::vector<Subgroup>{whole, whole}) == d.counts[0]);

    std::vector<std::vector<int>> singletons{{0}, {0}, {0}};
    CHECK(f_k_count(s4, singletons) == BigInt(1));

    // restricted counts over the coset partition sum to the unrestricted one
    Subgroup v4 = Subgroup::generated(
        s4, {s4.element_labeled("(1 2)(3 4)"), s4.element_labeled("(1 3)(2 4)")});
    QuotientData q = quotient(s4, v4);
    BigInt total(0);
    for (int i = 0; i < q.quotient.order(); ++i) {
        for (int j = 0; j < q.quotient.order(); ++j) {
            total += f_k_count(s4, std::vector<std::vector<int>>{coset_members(s4, q.section[i], v4),
                                                                 coset_members(s4, q.section[j], v4)});
        }
    }
    CHECK(total == d.counts[0]);
}

TEST_CASE("coset inequality f_k(xN,g,N,..,N) <= f_k(N,g,N,..,N) on Sym(4)") {
    FiniteGroup s4 = symmetric_group(4);
    Subgroup v4 = Subgroup::generated(
        s4, {s4.element_labeled("(1 2)(3 4)"), s4.element_labeled("(1 3)(2 4)")});
    std::vector<int> nmem = v4.members();
    for (int k : {1, 2}) {
        for (int x = 0; x < s4.order(); ++x) {
            std::vector<int> xn = coset_members(s4, x, v4);
            for (int g = 0; g < s4.order(); ++g) {
                std::vector<std::vector<int>> lhs_sets{xn, {g}};
                std::vector<std::vector<int>> rhs_sets{nmem, {g}};
                for (int i = 2; i <= k; ++i) {
                    lhs_sets.push_back(nmem);
                    rhs_sets.push_back(nmem);
                }
                CHECK(f_k_count(s4, lhs_sets) <= f_k_count(s4, rhs_sets));
            }
        }
    }
}

TEST_CASE("dphi by enumeration") {
    FiniteGroup s3 = symmetric_group(3);
    CHECK(dphi_exact(s3, GroupWord::variable(1, 1)) == Rational(1, 6));
    CHECK(dphi_exact(s3, GroupWord::simple_commutator_word(1)) == dc_k_exact(s3, 1));
    CHECK(dphi_exact(s3, GroupWord::simple_commutator_word(2)) == dc_k_exact(s3, 2));

    FiniteGroup c2 = cyclic_group(2);
    GroupWord sq = GroupWord::variable(1, 1) * GroupWord::variable(1, 1);
    CHECK(dphi_exact(c2, sq) == Rational(1));

    CHECK_THROWS_AS(dphi_exact(symmetric_group(4), GroupWord::simple_commutator_word(5), 1000),
                    CapExceeded);
}

TEST_CASE("gap bound constants") {
    CHECK(nilpotence_gap_bound(1) == Rational(5, 8));
    CHECK(nilpotence_gap_bound(2) == Rational(13, 16));
    CHECK(nilpotence_gap_bound(3) == Rational(29, 32));
}

TEST_CASE("descent bound checks") {
    FiniteGroup s4 = symmetric_group(4);
    DescentReport empty = descent_bound_check(s4, {}, 1);
    CHECK(empty.ok);
    CHECK(empty.product == Rational(1));
    CHECK(empty.geometric_bound == Rational(1));

    Subgroup v4 = Subgroup::generated(
        s4, {s4.element_labeled("(1 2)(3 4)"), s4.element_labeled("(1 3)(2 4)")});
    DescentReport one = descent_bound_check(s4, {v4}, 1);
    CHECK(one.ok);
    CHECK(one.dc_of_quotient == Rational(1, 2));  // Sym(4)/V4 is Sym(3)
    CHECK(one.step_values.at(0) == Rational(1, 2));
    CHECK(one.geometric_bound == Rational(5, 8));

    // a two-step chain needs both quotients non-nilpotent: use Sym(4) x Sym(4)
    FiniteGroup gg = direct_product(s4, s4);
    std::vector<int> g1_members, g2_members;
    for (int a = 0; a < s4.order(); ++a) {
        for (int b = 0; b < s4.order(); ++b) {
            int idx = a * s4.order() + b;
            if (v4.contains(a)) g1_members.push_back(idx);
            if (v4.contains(a) && v4.contains(b)) g2_members.push_back(idx);
        }
    }
    Subgroup g1(gg, g1_members), g2(gg, g2_members);
    DescentReport two = descent_bound_check(gg, {g1, g2}, 1);
    CHECK(two.ok);
    CHECK(two.dc_of_quotient == Rational(1, 4));
    CHECK(two.product == Rational(1, 4));
    CHECK(two.geometric_bound == Rational(25, 64));

    // dc^1(Sym(4)) itself respects the squared gap bound
    CHECK(dc_k_exact(s4, 1) <= Rational(25, 64));

    FiniteGroup c12 = cyclic_group(12);
    Subgroup sub = Subgroup::generated(c12, {2});
    CHECK_THROWS_AS(descent_bound_check(c12, {sub}, 1), ChainInvalid);
}

TEST_CASE("dc is monotone in k and reaches 1 exactly at the class") {
    for (const FiniteGroup& g : {symmetric_group(3), symmetric_group(4), dihedral_group_of_order(8),
                                 quaternion_group(8), alternating_group(4), cyclic_group(6),
                                 dihedral_group_of_order(12), quaternion_group(16)}) {
        CentralSeries cs = central_series(g);
        Rational prev = dc_k_exact(g, 1);
        for (int k = 1; k <= 3; ++k) {
            Rational cur = dc_k_exact(g, k);
            CHECK(prev <= cur);
            bool nilp = cs.nilpotency_class.has_value() && *cs.nilpotency_class <= k;
            CHECK((cur == Rational(1)) == nilp);
            prev = cur;
        }
    }
}

TEST_CASE("dc1 equals class count over order, as a cross-check only") {
    for (const FiniteGroup& g : {symmetric_group(4), dihedral_group_of_order(8),
                                 quaternion_group(16), alternating_group(5)}) {
        Rational via_classes(static_cast<std::int64_t>(conjugacy_classes(g).size()), g.order());
        CHECK(dc_k_exact(g, 1) == via_classes);
    }
}

TEST_CASE("converse lower bound instance on Sym(4)") {
    FiniteGroup s4 = symmetric_group(4);
    Subgroup a4 = Subgroup::generated(s4, {s4.element_labeled("(1 2 3)"), s4.element_labeled("(2 3 4)")});
    REQUIRE(a4.size() == 12);
    Subgroup v4 = Subgroup::generated(
        s4, {s4.element_labeled("(1 2)(3 4)"), s4.element_labeled("(1 3)(2 4)")});
    // Gamma/H = A4/V4 is cyclic, so with m = 2, d = 4: dc^1 >= 1/(m^2 d)
    FiniteGroup a4g = subgroup_as_group(s4, a4).group;
    std::vector<int> inner;
    for (std::size_t i = 0; i < subgroup_as_group(s4, a4).to_parent.size(); ++i) {
        if (v4.contains(subgroup_as_group(s4, a4).to_parent[i])) inner.push_back(static_cast<int>(i));
    }
    CHECK(is_k_step_nilpotent(quotient(a4g, Subgroup(a4g, inner)).quotient, 1));
    CHECK(dc_k_exact(s4, 1) >= Rational(1, 16));
}
