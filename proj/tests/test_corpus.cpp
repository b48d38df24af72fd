#include <doctest.h>

#include "nilprob/corpus.hpp"
#include "nilprob/gallagher.hpp"
#include "nilprob/nildegree.hpp"

using namespace nilprob;

TEST_CASE("corpus groups satisfy the group axioms") {
    // exhaustive associativity up to order 512, sampled above
    for (const CorpusEntry& e : builtin_corpus(729)) {
        INFO(e.name);
        CHECK(validate_group_axioms(e.group, 512, 300000));
    }
}

TEST_CASE("corpus converse witnesses are well-formed") {
    for (const CorpusEntry& e : builtin_corpus(729)) {
        for (const auto& w : e.converse) {
            Subgroup gamma(e.group, w.gamma);
            Subgroup h(e.group, w.h);
            INFO(e.name);
            CHECK(gamma.is_subgroup());
            CHECK(h.is_subgroup());
            CHECK(e.group.order() % gamma.size() == 0);
            for (int m : h.members()) CHECK(gamma.contains(m));
        }
    }
}

TEST_CASE("quotient projections are homomorphisms across the corpus") {
    for (const CorpusEntry& e : builtin_corpus(81)) {
        if (e.group.order() < 2) continue;
        for (const Subgroup& n : all_normal_subgroups(e.group)) {
            QuotientData q = quotient(e.group, n);
            INFO(e.name);
            for (int a = 0; a < e.group.order(); ++a) {
                for (int b = 0; b < e.group.order(); ++b) {
                    if (q.projection[e.group.mul(a, b)] !=
                        q.quotient.mul(q.projection[a], q.projection[b])) {
                        CHECK(false);
                        return;
                    }
                }
            }
            for (int i = 0; i < q.quotient.order(); ++i) CHECK(q.projection[q.section[i]] == i);
        }
    }
}

TEST_CASE("subgroups produced by the toolkit close and divide") {
    for (const CorpusEntry& e : builtin_corpus(243)) {
        CentralSeries cs = central_series(e.group);
        for (const Subgroup& s : cs.lower) {
            CHECK(s.is_subgroup());
            CHECK(e.group.order() % s.size() == 0);
        }
        for (const Subgroup& s : cs.upper) {
            CHECK(s.is_subgroup());
            CHECK(e.group.order() % s.size() == 0);
        }
        Subgroup c = center(e.group);
        CHECK(c.is_subgroup());
    }
}

TEST_CASE("levels are independent of the spanning traversal") {
    FiniteGroup s4 = symmetric_group(4);
    Subgroup v4 = Subgroup::generated(
        s4, {s4.element_labeled("(1 2)(3 4)"), s4.element_labeled("(1 3)(2 4)")});
    for (int g = 0; g < s4.order(); g += 4) {
        for (int x = 0; x < s4.order(); x += 6) {
            GammaGraph gg = build_gamma(s4, v4, g, x, 2);
            // recompute potentials with a different traversal: reversed edge
            // order, stack-based, same base vertices
            int nv = static_cast<int>(gg.vertex_tuples.size());
            std::vector<std::vector<std::pair<int, int>>> adj(nv);
            for (auto it = gg.edges.rbegin(); it != gg.edges.rend(); ++it) {
                adj[it->source].push_back({it->target, 1});
                adj[it->target].push_back({it->source, -1});
            }
            std::vector<long long> phi(nv, 0);
            std::vector<char> seen(nv, 0);
            for (const auto& comp : gg.components) {
                std::vector<int> stack{comp.base_vertex};
                seen[comp.base_vertex] = 1;
                phi[comp.base_vertex] = 0;
                while (!stack.empty()) {
                    int v = stack.back();
                    stack.pop_back();
                    for (auto [w, dir] : adj[v]) {
                        if (!seen[w]) {
                            seen[w] = 1;
                            phi[w] = phi[v] + dir;
                            stack.push_back(w);
                        }
                    }
                }
                for (int v : comp.vertices) {
                    long long d = comp.period;
                    CHECK(((phi[v] % d) + d) % d == gg.level_of[v]);
                }
            }
        }
    }
}

TEST_CASE("corpus dc values respect the gap bound spot checks") {
    // a light version of the full sweep: the named small groups
    FiniteGroup s5 = symmetric_group(5);
    CHECK(dc_k_exact(s5, 1) <= nilpotence_gap_bound(1));
    CHECK(dc_k_exact(s5, 2) <= nilpotence_gap_bound(2));
    FiniteGroup a5 = alternating_group(5);
    CHECK(dc_k_exact(a5, 3) <= nilpotence_gap_bound(3));
}
