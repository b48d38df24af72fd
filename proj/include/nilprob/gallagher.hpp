#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "nilprob/errors.hpp"
#include "nilprob/finite_group.hpp"
#include "nilprob/nildegree.hpp"
#include "nilprob/rational.hpp"

namespace nilprob {

// alpha_i = y * prod_{j=2}^{i-2} [y,g,n_3,...,n_j] for 3 <= i <= k+2, where
// ns = (n_3,...,n_{k+1}) has length k-1. Returns (alpha_3,...,alpha_{k+2}).
inline std::vector<int> alpha_sequence(const FiniteGroup& G, int y, int g,
                                       const std::vector<int>& ns) {
    int k = static_cast<int>(ns.size()) + 1;
    std::vector<int> alphas{y};
    if (k >= 2) {
        int c = G.commutator(y, g);
        int a = G.mul(y, c);
        alphas.push_back(a);
        for (int j = 3; j <= k; ++j) {
            c = G.commutator(c, ns[j - 3]);
            a = G.mul(a, c);
            alphas.push_back(a);
        }
    }
    return alphas;
}

// [zy,g,n_3,...,n_{k+1}] = [z,g,n_3^{a_3^-1},...,n_{k+1}^{a_{k+1}^-1}]^{a_{k+2}} [y,g,n_3,...,n_{k+1}]
inline bool check_main_identity(const FiniteGroup& G, int z, int y, int g,
                                const std::vector<int>& ns) {
    int k = static_cast<int>(ns.size()) + 1;
    std::vector<int> lhs_args{G.mul(z, y), g};
    lhs_args.insert(lhs_args.end(), ns.begin(), ns.end());
    int lhs = simple_commutator(G, lhs_args);

    std::vector<int> alphas = alpha_sequence(G, y, g, ns);
    std::vector<int> twisted{z, g};
    for (std::size_t j = 0; j < ns.size(); ++j) {
        twisted.push_back(G.conjugate(ns[j], G.inv(alphas[j])));
    }
    int left = G.conjugate(simple_commutator(G, twisted), alphas[k - 1]);
    std::vector<int> rhs_args{y, g};
    rhs_args.insert(rhs_args.end(), ns.begin(), ns.end());
    int rhs = G.mul(left, simple_commutator(G, rhs_args));
    return lhs == rhs;
}

struct GammaEdge {
    int source;
    int target;
    int label;  // the element y of xN that induced the edge
};

struct GammaComponent {
    std::vector<int> vertices;
    int base_vertex;    // lexicographically least tuple of the component
    long long period;   // gcd of the coset order and all closed-walk directed lengths
};

// The directed labelled multigraph on N^{k-1}: an edge v ->_y w exists when
// [y,g,v] = 1 and w is the alpha-conjugated tuple of v.
struct GammaGraph {
    const FiniteGroup* group = nullptr;
    std::vector<int> normal_members;
    int g = 0;
    int x = 0;  // representative of the coset xN
    int k = 1;
    int coset_order = 1;  // order o of xN in G/N
    std::vector<std::vector<int>> vertex_tuples;
    std::vector<GammaEdge> edges;
    std::vector<int> component_of;
    std::vector<int> level_of;  // level in Z/dZ of the vertex's component
    std::vector<GammaComponent> components;

    int vertex_index(const std::vector<int>& tuple) const {
        std::size_t nn = normal_members.size();
        std::size_t idx = 0;
        for (int v : tuple) {
            std::size_t pos = std::lower_bound(normal_members.begin(), normal_members.end(), v) -
                              normal_members.begin();
            if (pos >= nn || normal_members[pos] != v)
                throw InvalidElement("tuple entry is not in the normal subgroup");
            idx = idx * nn + pos;
        }
        return static_cast<int>(idx);
    }
};

struct GammaBuildOptions {
    std::size_t vertex_cap = 1000000;
};

inline GammaGraph build_gamma(const FiniteGroup& G, const Subgroup& N, int g, int x, int k,
                              const GammaBuildOptions& opt = {}) {
    if (!N.is_normal()) throw NotNormal("gamma graph needs a normal subgroup");
    if (k < 1) throw PreconditionFailed("k must be >= 1");
    double vcount = 1;
    for (int i = 0; i < k - 1; ++i) vcount *= N.size();
    if (vcount > static_cast<double>(opt.vertex_cap))
        throw SizeCap("gamma graph vertex set |N|^(k-1) exceeds cap");

    GammaGraph gg;
    gg.group = &G;
    gg.normal_members = N.members();
    gg.g = g;
    gg.x = x;
    gg.k = k;

    int o = 1;
    {
        int p = x;
        while (!N.contains(p)) {
            p = G.mul(p, x);
            ++o;
        }
    }
    gg.coset_order = o;

    int nv = static_cast<int>(vcount);
    gg.vertex_tuples.resize(nv);
    {
        std::vector<int> idx(k - 1, 0);
        for (int v = 0; v < nv; ++v) {
            std::vector<int> tup(k - 1);
            int rem = v;
            for (int i = k - 2; i >= 0; --i) {
                tup[i] = gg.normal_members[rem % N.size()];
                rem /= N.size();
            }
            gg.vertex_tuples[v] = std::move(tup);
        }
    }

    for (int v = 0; v < nv; ++v) {
        const std::vector<int>& tup = gg.vertex_tuples[v];
        for (int n : gg.normal_members) {
            int y = G.mul(x, n);
            std::vector<int> args{y, g};
            args.insert(args.end(), tup.begin(), tup.end());
            if (simple_commutator(G, args) != FiniteGroup::kIdentity) continue;
            std::vector<int> alphas = alpha_sequence(G, y, g, tup);
            std::vector<int> target(k - 1);
            for (int i = 0; i < k - 1; ++i) target[i] = G.conjugate(tup[i], G.inv(alphas[i]));
            gg.edges.push_back({v, gg.vertex_index(target), y});
        }
    }

    // connected components of the underlying undirected graph
    std::vector<std::vector<std::pair<int, int>>> adj(nv);  // (neighbour, +-1)
    for (const GammaEdge& e : gg.edges) {
        adj[e.source].push_back({e.target, 1});
        adj[e.target].push_back({e.source, -1});
    }
    gg.component_of.assign(nv, -1);
    std::vector<long long> phi(nv, 0);  // signed walk length from the component base
    for (int v0 = 0; v0 < nv; ++v0) {
        if (gg.component_of[v0] >= 0) continue;
        int cid = static_cast<int>(gg.components.size());
        GammaComponent comp;
        comp.base_vertex = v0;
        std::vector<int> stack{v0};
        gg.component_of[v0] = cid;
        phi[v0] = 0;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            comp.vertices.push_back(v);
            for (auto [w, dir] : adj[v]) {
                if (gg.component_of[w] < 0) {
                    gg.component_of[w] = cid;
                    phi[w] = phi[v] + dir;
                    stack.push_back(w);
                }
            }
        }
        std::sort(comp.vertices.begin(), comp.vertices.end());
        gg.components.push_back(std::move(comp));
    }
    for (auto& comp : gg.components) {
        long long d = o;
        for (const GammaEdge& e : gg.edges) {
            if (gg.component_of[e.source] != gg.component_of[comp.vertices.front()]) continue;
            long long defect = phi[e.source] + 1 - phi[e.target];
            d = std::gcd(d, defect < 0 ? -defect : defect);
        }
        comp.period = d;
    }
    gg.level_of.assign(nv, 0);
    for (int v = 0; v < nv; ++v) {
        long long d = gg.components[gg.component_of[v]].period;
        gg.level_of[v] = static_cast<int>(((phi[v] % d) + d) % d);
    }
    return gg;
}

// number of y in the coset (x^i)N with [y,g,tuple] = 1
inline long long gamma_coset_count(const GammaGraph& gg, int i, const std::vector<int>& tuple) {
    const FiniteGroup& G = *gg.group;
    int rep = G.power(gg.x, i);
    long long c = 0;
    for (int n : gg.normal_members) {
        std::vector<int> args{G.mul(rep, n), gg.g};
        args.insert(args.end(), tuple.begin(), tuple.end());
        if (simple_commutator(G, args) == FiniteGroup::kIdentity) ++c;
    }
    return c;
}

struct GammaCheckWitness {
    int component = -1;
    std::string detail;
};

// The counts over x^i N depend only on (level + i) mod period, within each
// component.
inline bool check_period_property(const GammaGraph& gg,
                                  std::optional<GammaCheckWitness>* witness = nullptr) {
    for (std::size_t q = 0; q < gg.components.size(); ++q) {
        const GammaComponent& comp = gg.components[q];
        long long d = comp.period;
        std::vector<long long> cls(d, -1);
        for (int v : comp.vertices) {
            for (int i = 0; i < gg.coset_order; ++i) {
                long long j = (gg.level_of[v] + i) % d;
                long long f = gamma_coset_count(gg, i, gg.vertex_tuples[v]);
                if (cls[j] < 0) {
                    cls[j] = f;
                } else if (cls[j] != f) {
                    if (witness) {
                        *witness = GammaCheckWitness{static_cast<int>(q),
                                                     "count mismatch at level class " + std::to_string(j)};
                    }
                    return false;
                }
            }
        }
    }
    return true;
}

struct LevelHistogram {
    int component = 0;
    std::vector<long long> sizes;   // r_j = |L^{-1}(j)|
    std::vector<long long> counts;  // h_j
};

inline LevelHistogram level_histogram(const GammaGraph& gg, int component) {
    const GammaComponent& comp = gg.components[component];
    long long d = comp.period;
    LevelHistogram h;
    h.component = component;
    h.sizes.assign(d, 0);
    h.counts.assign(d, 0);
    for (int v : comp.vertices) h.sizes[gg.level_of[v]]++;
    const std::vector<int>& base = gg.vertex_tuples[comp.base_vertex];
    for (long long j = 0; j < d; ++j) {
        h.counts[j] = gamma_coset_count(gg, static_cast<int>(j % gg.coset_order), base);
    }
    return h;
}

// r_j h_{j+1} = r_{j+1} h_j for each j in Z/dZ
inline bool check_adjacent_property(const GammaGraph& gg,
                                    std::optional<GammaCheckWitness>* witness = nullptr) {
    for (std::size_t q = 0; q < gg.components.size(); ++q) {
        LevelHistogram h = level_histogram(gg, static_cast<int>(q));
        long long d = gg.components[q].period;
        for (long long j = 0; j < d; ++j) {
            long long jn = (j + 1) % d;
            if (h.sizes[j] * h.counts[jn] != h.sizes[jn] * h.counts[j]) {
                if (witness) {
                    *witness = GammaCheckWitness{static_cast<int>(q),
                                                 "adjacent relation fails at j = " + std::to_string(j)};
                }
                return false;
            }
        }
    }
    return true;
}

// for nonnegative sequences with r_j h_{j+1} = r_{j+1} h_j cyclically:
// sum r_j h_{j+1} <= sum r_j h_j
inline bool check_rearrangement_lemma(const std::vector<long long>& r,
                                      const std::vector<long long>& h) {
    if (r.empty() || r.size() != h.size())
        throw PreconditionFailed("sequences must be nonempty and of equal length");
    std::size_t d = r.size();
    for (std::size_t j = 0; j < d; ++j) {
        if (r[j] < 0 || h[j] < 0) throw PreconditionFailed("entries must be nonnegative");
        std::size_t jn = (j + 1) % d;
        if (r[j] * h[jn] != r[jn] * h[j])
            throw PreconditionFailed("proportionality hypothesis fails");
    }
    long long lhs = 0, rhs = 0;
    for (std::size_t j = 0; j < d; ++j) {
        lhs += r[j] * h[(j + 1) % d];
        rhs += r[j] * h[j];
    }
    return lhs <= rhs;
}

struct ThetaCheckResult {
    bool bijective = false;
    bool preserves_solutions = false;
    bool shifts_levels = false;
    bool ok() const { return bijective && preserves_solutions && shifts_levels; }
};

// theta: (y,g,n_3,...,n_{k+1}) -> (y^-1,g,n_3^{a_3^-1},...,n_{k+1}^{a_{k+1}^-1})
// maps xN x {g} x N^{k-1} bijectively onto x^-1 N x {g} x N^{k-1}, carries
// solutions to solutions, and raises levels by one along solution edges.
inline ThetaCheckResult check_theta_bijection(const FiniteGroup& G, const Subgroup& N, int g, int x,
                                              int k) {
    GammaGraph gg = build_gamma(G, N, g, x, k);
    ThetaCheckResult res;
    std::vector<char> hit(static_cast<std::size_t>(G.order()) * gg.vertex_tuples.size(), 0);
    bool all_distinct = true, sols_ok = true, levels_ok = true;
    for (std::size_t v = 0; v < gg.vertex_tuples.size(); ++v) {
        const std::vector<int>& tup = gg.vertex_tuples[v];
        for (int n : gg.normal_members) {
            int y = G.mul(x, n);
            std::vector<int> alphas = alpha_sequence(G, y, g, tup);
            std::vector<int> image(k - 1);
            for (int i = 0; i < k - 1; ++i) image[i] = G.conjugate(tup[i], G.inv(alphas[i]));
            int iv = gg.vertex_index(image);
            int yi = G.inv(y);
            std::size_t key = static_cast<std::size_t>(yi) * gg.vertex_tuples.size() + iv;
            if (hit[key]) all_distinct = false;
            hit[key] = 1;

            std::vector<int> args{y, g};
            args.insert(args.end(), tup.begin(), tup.end());
            bool sol = simple_commutator(G, args) == FiniteGroup::kIdentity;
            std::vector<int> args2{yi, g};
            args2.insert(args2.end(), image.begin(), image.end());
            bool sol2 = simple_commutator(G, args2) == FiniteGroup::kIdentity;
            if (sol != sol2) sols_ok = false;
            if (sol) {
                if (gg.component_of[v] != gg.component_of[iv]) {
                    levels_ok = false;
                } else {
                    long long d = gg.components[gg.component_of[v]].period;
                    if ((gg.level_of[v] + 1) % d != gg.level_of[iv] % d) levels_ok = false;
                }
            }
        }
    }
    res.bijective = all_distinct;
    res.preserves_solutions = sols_ok;
    res.shifts_levels = levels_ok;
    return res;
}

struct SubmultiplicativityResult {
    Rational lhs;  // dc^k(G)
    Rational rhs;  // dc^k(N) * dc^k(G/N)
    bool ok = false;
};

inline SubmultiplicativityResult verify_submultiplicativity(const FiniteGroup& G, const Subgroup& N,
                                                            int k) {
    if (!N.is_normal()) throw NotNormal("submultiplicativity needs a normal subgroup");
    SubmultiplicativityResult res;
    res.lhs = dc_k_exact(G, k);
    FiniteGroup ngrp = subgroup_as_group(G, N).group;
    FiniteGroup qgrp = quotient(G, N).quotient;
    res.rhs = dc_k_exact(ngrp, k) * dc_k_exact(qgrp, k);
    res.ok = res.lhs <= res.rhs;
    return res;
}

inline std::vector<int> coset_members(const FiniteGroup& G, int x, const Subgroup& N) {
    std::vector<int> out;
    out.reserve(N.size());
    for (int n : N.members()) out.push_back(G.mul(x, n));
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace nilprob
