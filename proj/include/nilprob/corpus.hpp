#pragma once

#include <string>
#include <vector>

#include "nilprob/finite_group.hpp"
#include "nilprob/group_builders.hpp"
#include "nilprob/pgroups.hpp"

namespace nilprob {

// Reference family of groups used by the verification suites: cyclic,
// dihedral, quaternion, symmetric/alternating up to degree 5, both
// extraspecial types of order p^3, and every block unitriangular group
// G_k(n,r,s) under the order cap.
struct CorpusEntry {
    std::string name;
    FiniteGroup group;

    // recorded pair (Gamma, H) with Gamma/H k-step nilpotent, |G:Gamma| = m,
    // |H| = d, witnessing dc^k(G) >= 1/(m^{k+1} d)
    struct ConverseWitness {
        std::vector<int> gamma;
        std::vector<int> h;
        int k = 1;
    };
    std::vector<ConverseWitness> converse;
};

inline std::vector<CorpusEntry> builtin_corpus(long long order_cap = 729) {
    std::vector<CorpusEntry> out;
    auto add = [&](std::string name, FiniteGroup g) -> CorpusEntry* {
        if (g.order() > order_cap) return nullptr;
        out.push_back(CorpusEntry{std::move(name), std::move(g), {}});
        return &out.back();
    };
    auto whole_members = [](const FiniteGroup& g) {
        std::vector<int> all(g.order());
        for (int i = 0; i < g.order(); ++i) all[i] = i;
        return all;
    };

    add("trivial", trivial_group());
    for (int n : {2, 3, 4, 5, 6, 8, 12}) {
        if (CorpusEntry* e = add("cyclic" + std::to_string(n), cyclic_group(n))) {
            e->converse.push_back({whole_members(e->group), {0}, 1});
        }
    }
    for (int order : {6, 8, 10, 12, 16}) {
        if (CorpusEntry* e = add("dihedral" + std::to_string(order), dihedral_group_of_order(order))) {
            // rotation subgroup, generated by r = index pair (x=1, y=0)
            Subgroup rot = Subgroup::generated(e->group, {2});
            e->converse.push_back({rot.members(), {0}, 1});
        }
    }
    for (int order : {8, 16}) {
        if (CorpusEntry* e = add("quaternion" + std::to_string(order), quaternion_group(order))) {
            Subgroup a = Subgroup::generated(e->group, {2});
            e->converse.push_back({a.members(), {0}, 1});
        }
    }
    if (CorpusEntry* e = add("sym3", symmetric_group(3))) {
        Subgroup a3 = Subgroup::generated(e->group, {e->group.element_labeled("(1 2 3)")});
        e->converse.push_back({a3.members(), {0}, 1});
    }
    if (CorpusEntry* e = add("sym4", symmetric_group(4))) {
        Subgroup a4 = Subgroup::generated(
            e->group, {e->group.element_labeled("(1 2 3)"), e->group.element_labeled("(2 3 4)")});
        Subgroup v4 = Subgroup::generated(
            e->group, {e->group.element_labeled("(1 2)(3 4)"), e->group.element_labeled("(1 3)(2 4)")});
        e->converse.push_back({a4.members(), v4.members(), 1});
        e->converse.push_back({v4.members(), {0}, 1});
    }
    add("sym5", symmetric_group(5));
    if (CorpusEntry* e = add("alt4", alternating_group(4))) {
        Subgroup v4 = Subgroup::generated(
            e->group, {e->group.element_labeled("(1 2)(3 4)"), e->group.element_labeled("(1 3)(2 4)")});
        e->converse.push_back({v4.members(), {0}, 1});
    }
    add("alt5", alternating_group(5));
    for (int p : {3, 5}) {
        if (CorpusEntry* e = add("extraspecial" + std::to_string(p * p * p) + "exp" +
                                     std::to_string(p * p),
                                 extraspecial_exponent_p2(p))) {
            e->converse.push_back({whole_members(e->group), center(e->group).members(), 1});
        }
    }

    for (int p : {3, 5}) {
        for (int k = 0; k <= 3; ++k) {
            for (int n = 1; n <= 2; ++n) {
                if (k == 0 && n > 1) continue;  // G_0 does not depend on n
                for (int r = 1; r <= 2; ++r) {
                    for (int s = 1; s <= 2; ++s) {
                        GkSpec spec{p, k, n, r, s};
                        if (spec.order() > BigInt(order_cap)) continue;
                        GkGroup gk = build_gk(spec, GkBuildOptions{order_cap});
                        std::string name = "gk_p" + std::to_string(p) + "_k" + std::to_string(k) +
                                           "_n" + std::to_string(n) + "_r" + std::to_string(r) +
                                           "_s" + std::to_string(s);
                        CorpusEntry entry{name, std::move(gk.group), {}};
                        if (k >= 1) {
                            // gamma_{k+1} = centre, of order p^{rs}
                            entry.converse.push_back(
                                {whole_members(entry.group), center(entry.group).members(), k});
                        }
                        if (k >= 1 && r == 1 && s == 1) {
                            GkGroup rebuilt{spec, FiniteGroup()};
                            rebuilt.group = entry.group;
                            entry.converse.push_back({sharp_subgroup(rebuilt).members(), {0}, k});
                        }
                        out.push_back(std::move(entry));
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace nilprob
