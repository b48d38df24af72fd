#include <doctest.h>

#include <numeric>

#include "nilprob/finite_group.hpp"
#include "nilprob/group_builders.hpp"
#include "nilprob/words.hpp"

using namespace nilprob;

TEST_CASE("closure of the empty generating set is the trivial group") {
    FiniteGroup g = permutation_group(3, {});
    CHECK(g.order() == 1);
    CHECK(g.mul(0, 0) == 0);
}

TEST_CASE("closure of a transposition and a 3-cycle is Sym(3)") {
    // brute-force check: the six products of the generators exhaust the group
    FiniteGroup g = permutation_group(3, {{1, 0, 2}, {1, 2, 0}});
    CHECK(g.order() == 6);
    CHECK(validate_group_axioms(g));
}

TEST_CASE("cyclic generator closure") {
    FiniteGroup c5 = cyclic_group(5);
    CHECK(c5.order() == 5);
    CHECK(validate_group_axioms(c5));
    CHECK(c5.element_order(1) == 5);
}

TEST_CASE("simple commutators") {
    FiniteGroup c6 = cyclic_group(6);
    for (int a = 0; a < 6; ++a) {
        for (int b = 0; b < 6; ++b) CHECK(simple_commutator(c6, {a, b}) == 0);
    }
    FiniteGroup s3 = symmetric_group(3);
    for (int x = 0; x < s3.order(); ++x) CHECK(s3.commutator(x, x) == 0);
    int t12 = s3.element_labeled("(1 2)");
    int t13 = s3.element_labeled("(1 3)");
    REQUIRE(t12 >= 0);
    REQUIRE(t13 >= 0);
    int c = simple_commutator(s3, {t12, t13});
    // direct multiplication oracle: x^-1 y^-1 x y computed letter by letter
    int oracle = s3.mul(s3.mul(s3.inv(t12), s3.inv(t13)), s3.mul(t12, t13));
    CHECK(c == oracle);
    CHECK(s3.element_order(c) == 3);
}

TEST_CASE("central series of small groups") {
    FiniteGroup c6 = cyclic_group(6);
    CentralSeries s = central_series(c6);
    REQUIRE(s.lower.size() == 2);
    CHECK(s.lower[0].size() == 6);
    CHECK(s.lower[1].size() == 1);
    CHECK(s.nilpotency_class == 1);

    CentralSeries st = central_series(trivial_group());
    CHECK(st.nilpotency_class == 0);

    FiniteGroup d8 = dihedral_group_of_order(8);
    CentralSeries sd = central_series(d8);
    REQUIRE(sd.lower.size() == 3);
    CHECK(sd.lower[0].size() == 8);
    CHECK(sd.lower[1].size() == 2);
    CHECK(sd.lower[2].size() == 1);
    CHECK(sd.nilpotency_class == 2);

    FiniteGroup s3 = symmetric_group(3);
    CentralSeries ss = central_series(s3);
    CHECK(ss.lower.back().size() == 3);  // stabilizes at Alt(3)
    CHECK(!ss.nilpotency_class.has_value());

    // inclusions and [gamma_i, G] <= gamma_{i+1}
    for (std::size_t i = 0; i + 1 < sd.lower.size(); ++i) {
        for (int m : sd.lower[i + 1].members()) CHECK(sd.lower[i].contains(m));
        for (int a : sd.lower[i].members()) {
            for (int b = 0; b < d8.order(); ++b) CHECK(sd.lower[i + 1].contains(d8.commutator(a, b)));
        }
    }
    for (std::size_t i = 0; i + 1 < sd.upper.size(); ++i) {
        for (int m : sd.upper[i].members()) CHECK(sd.upper[i + 1].contains(m));
    }
}

TEST_CASE("quotients") {
    FiniteGroup s3 = symmetric_group(3);
    QuotientData qq = quotient(s3, Subgroup::whole(s3));
    CHECK(qq.quotient.order() == 1);

    QuotientData qt = quotient(s3, Subgroup::trivial(s3));
    CHECK(qt.quotient.order() == 6);

    CentralSeries ss = central_series(s3);
    Subgroup a3 = ss.lower.back();
    REQUIRE(a3.size() == 3);
    QuotientData q = quotient(s3, a3);
    CHECK(q.quotient.order() == 2);

    // projection is a homomorphism, section is a right inverse, fibers have size |N|
    for (int a = 0; a < s3.order(); ++a) {
        for (int b = 0; b < s3.order(); ++b) {
            CHECK(q.projection[s3.mul(a, b)] == q.quotient.mul(q.projection[a], q.projection[b]));
        }
    }
    for (int i = 0; i < q.quotient.order(); ++i) CHECK(q.projection[q.section[i]] == i);
    std::vector<int> fiber(q.quotient.order(), 0);
    for (int a = 0; a < s3.order(); ++a) fiber[q.projection[a]]++;
    for (int f : fiber) CHECK(f == a3.size());

    // non-normal subgroup is rejected
    int t12 = s3.element_labeled("(1 2)");
    Subgroup h = Subgroup::generated(s3, {t12});
    CHECK_THROWS_AS(quotient(s3, h), NotNormal);
}

TEST_CASE("centralizers and centers") {
    FiniteGroup s3 = symmetric_group(3);
    CHECK(centralizer(s3, 0).size() == 6);
    CHECK(center(s3).size() == 1);
    FiniteGroup q8 = quaternion_group(8);
    CHECK(q8.order() == 8);
    CHECK(center(q8).size() == 2);
    CHECK(validate_group_axioms(q8));
    // Lemma-style check: {x : [u,x] = g} is empty or a coset of C(u)
    FiniteGroup s4 = symmetric_group(4);
    int u = 5 % s4.order();
    Subgroup cu = centralizer(s4, u);
    std::vector<int> count(s4.order(), 0);
    for (int x = 0; x < s4.order(); ++x) count[s4.commutator(u, x)]++;
    for (int g = 0; g < s4.order(); ++g) {
        if (count[g] != 0) CHECK(count[g] == cu.size());
    }
}

TEST_CASE("maximal subgroups of p-groups") {
    FiniteGroup c5 = cyclic_group(5);
    auto m5 = maximal_subgroups_pgroup(c5, 5);
    REQUIRE(m5.size() == 1);
    CHECK(m5[0].size() == 1);

    FiniteGroup e9 = direct_product(cyclic_group(3), cyclic_group(3));
    auto m9 = maximal_subgroups_pgroup(e9, 3);
    CHECK(m9.size() == 4);  // p + 1 hyperplanes
    for (const auto& s : m9) {
        CHECK(s.size() == 3);
        CHECK(s.is_subgroup());
    }

    FiniteGroup es27 = extraspecial_exponent_p2(3);
    CHECK(es27.order() == 27);
    CHECK(validate_group_axioms(es27));
    auto m27 = maximal_subgroups_pgroup(es27, 3);
    CHECK(m27.size() == 4);  // Frattini quotient has rank 2
    for (const auto& s : m27) CHECK(s.size() == 9);

    CHECK_THROWS_AS(maximal_subgroups_pgroup(symmetric_group(3), 3), NotPGroup);
}

TEST_CASE("word evaluation") {
    FiniteGroup s3 = symmetric_group(3);
    GroupWord x1 = GroupWord::variable(1, 1);
    for (int g = 0; g < s3.order(); ++g) CHECK(evaluate_word(s3, x1, {g}) == g);

    FiniteGroup c4 = cyclic_group(4);
    GroupWord comm = GroupWord::simple_commutator_word(1);
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) CHECK(evaluate_word(c4, comm, {a, b}) == 0);
    }

    // x1 g x1^-1 g^-1 with g a 3-cycle and x1 a transposition is nontrivial
    int g3 = s3.element_labeled("(1 2 3)");
    REQUIRE(g3 >= 0);
    GroupWord w(1, {WordLetter<int>::variable(1), WordLetter<int>::constant_of(g3),
                    WordLetter<int>::variable(1, -1), WordLetter<int>::constant_of(g3, -1)});
    int t12 = s3.element_labeled("(1 2)");
    int val = evaluate_word(s3, w, {t12});
    int oracle = s3.mul(s3.mul(t12, g3), s3.mul(s3.inv(t12), s3.inv(g3)));
    CHECK(val == oracle);
    CHECK(val != 0);

    CHECK_THROWS_AS(evaluate_word(s3, comm, {0}), ArityMismatch);
}

TEST_CASE("word evaluation of the commutator word matches simple_commutator") {
    for (const FiniteGroup& g : {symmetric_group(3), dihedral_group_of_order(8), cyclic_group(4),
                                 alternating_group(4), quaternion_group(8)}) {
        for (int k = 1; k <= 2; ++k) {
            GroupWord w = GroupWord::simple_commutator_word(k);
            std::vector<int> xs(k + 1, 0);
            // enumerate all (k+1)-tuples
            while (true) {
                CHECK(evaluate_word(g, w, xs) == simple_commutator(g, xs));
                int i = 0;
                while (i <= k && ++xs[i] == g.order()) xs[i++] = 0;
                if (i > k) break;
            }
        }
    }
}

TEST_CASE("builtin permutation groups have the expected orders") {
    CHECK(symmetric_group(4).order() == 24);
    CHECK(symmetric_group(5).order() == 120);
    CHECK(alternating_group(4).order() == 12);
    CHECK(alternating_group(5).order() == 60);
    CHECK(dihedral_group_of_order(12).order() == 12);
    CHECK(quaternion_group(16).order() == 16);
    CHECK(validate_group_axioms(symmetric_group(5)));
    CHECK(validate_group_axioms(alternating_group(5)));
    CHECK(validate_group_axioms(quaternion_group(16)));
    CHECK(validate_group_axioms(dihedral_group_of_order(12)));
}

TEST_CASE("large groups fall back to representation-based multiplication") {
    GroupBuildOptions opt;
    opt.table_cap = 10;  // force the no-table path for Sym(4)
    std::vector<int> t = {1, 0, 2, 3};
    std::vector<int> c = {1, 2, 3, 0};
    FiniteGroup slow = permutation_group(4, {t, c}, opt);
    FiniteGroup fast = symmetric_group(4);
    REQUIRE(slow.order() == 24);
    CHECK(!slow.has_table());
    for (int a = 0; a < 24; ++a) {
        CHECK(slow.inv(a) == fast.inv(a));
        for (int b = 0; b < 24; ++b) CHECK(slow.mul(a, b) == fast.mul(a, b));
    }
}

TEST_CASE("closure cap errors") {
    GroupBuildOptions opt;
    opt.closure_cap = 10;
    std::vector<int> t = {1, 0, 2, 3};
    std::vector<int> c = {1, 2, 3, 0};
    CHECK_THROWS_AS(permutation_group(4, {t, c}, opt), CapExceeded);
}

TEST_CASE("subgroups satisfy closure and Lagrange") {
    FiniteGroup s4 = symmetric_group(4);
    for (int g = 0; g < s4.order(); g += 3) {
        Subgroup h = Subgroup::generated(s4, {g});
        CHECK(h.is_subgroup());
        CHECK(s4.order() % h.size() == 0);
    }
    Subgroup v4 = Subgroup::generated(s4, {s4.element_labeled("(1 2)(3 4)"), s4.element_labeled("(1 3)(2 4)")});
    CHECK(v4.size() == 4);
    CHECK(v4.is_normal());
    QuotientData q = quotient(s4, v4);
    CHECK(q.quotient.order() == 6);
    CHECK(!is_k_step_nilpotent(q.quotient, 1));
}

TEST_CASE("normal subgroup enumeration via conjugacy class unions") {
    FiniteGroup s4 = symmetric_group(4);
    auto normals = all_normal_subgroups(s4);
    std::vector<int> sizes;
    for (const auto& n : normals) sizes.push_back(n.size());
    CHECK(sizes == std::vector<int>{1, 4, 12, 24});
    for (const auto& n : normals) CHECK(n.is_normal());

    auto nq8 = all_normal_subgroups(quaternion_group(8));
    CHECK(nq8.size() == 6);  // 1, Z, three cyclic C4, Q8

    auto na5 = all_normal_subgroups(alternating_group(5));
    CHECK(na5.size() == 2);  // simple
}
