#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "nilprob/finite_group.hpp"

namespace nilprob {

// Permutations are one-line vectors over 0..n-1 and compose left to right:
// (fg)(x) = g(f(x)).
inline std::vector<int> perm_compose(const std::vector<int>& f, const std::vector<int>& g) {
    std::vector<int> r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = g[f[i]];
    return r;
}

inline std::vector<int> perm_inverse(const std::vector<int>& f) {
    std::vector<int> r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[f[i]] = static_cast<int>(i);
    return r;
}

// cycle notation with 1-based points, identity printed as ()
inline std::string perm_cycle_label(const std::vector<int>& f) {
    std::string s;
    std::vector<char> seen(f.size(), 0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (seen[i] || f[i] == static_cast<int>(i)) continue;
        s += "(";
        std::size_t j = i;
        bool first = true;
        while (!seen[j]) {
            seen[j] = 1;
            if (!first) s += " ";
            s += std::to_string(j + 1);
            first = false;
            j = static_cast<std::size_t>(f[j]);
        }
        s += ")";
    }
    return s.empty() ? "()" : s;
}

inline FiniteGroup permutation_group(int degree, const std::vector<std::vector<int>>& gens,
                                     const GroupBuildOptions& opt = {}) {
    std::vector<int> id(degree);
    std::iota(id.begin(), id.end(), 0);
    return FiniteGroup::closure<std::vector<int>, decltype(&perm_compose), decltype(&perm_inverse),
                                decltype(&perm_cycle_label), VecHash<int>>(
        gens, &perm_compose, &perm_inverse, id, &perm_cycle_label, opt);
}

inline FiniteGroup symmetric_group(int n) {
    if (n <= 1) return FiniteGroup();
    std::vector<int> t(n), c(n);
    std::iota(t.begin(), t.end(), 0);
    std::swap(t[0], t[1]);
    for (int i = 0; i < n; ++i) c[i] = (i + 1) % n;
    if (n == 2) return permutation_group(n, {t});
    return permutation_group(n, {t, c});
}

inline FiniteGroup alternating_group(int n) {
    if (n <= 2) return FiniteGroup();
    std::vector<int> three(n);
    std::iota(three.begin(), three.end(), 0);
    three[0] = 1;
    three[1] = 2;
    three[2] = 0;
    if (n == 3) return permutation_group(n, {three});
    std::vector<int> big(n);
    std::iota(big.begin(), big.end(), 0);
    if (n % 2 == 1) {
        for (int i = 0; i < n; ++i) big[i] = (i + 1) % n;  // n-cycle, even permutation
    } else {
        big[0] = 0;
        for (int i = 1; i < n; ++i) big[i] = i % (n - 1) + 1;  // (n-1)-cycle on 2..n
    }
    return permutation_group(n, {three, big});
}

inline FiniteGroup cyclic_group(int n) {
    std::vector<std::int32_t> table(static_cast<std::size_t>(n) * n);
    std::vector<std::string> labels(n);
    for (int a = 0; a < n; ++a) {
        labels[a] = std::to_string(a);
        for (int b = 0; b < n; ++b) table[static_cast<std::size_t>(a) * n + b] = (a + b) % n;
    }
    return FiniteGroup::from_table(std::move(table), std::move(labels));
}

// dihedral group of order 2n as pairs r^x s^y
inline FiniteGroup dihedral_group_of_order(int order) {
    if (order < 2 || order % 2 != 0) throw PreconditionFailed("dihedral order must be even and >= 2");
    int n = order / 2;
    auto enc = [n](int x, int y) { return ((x % n + n) % n) * 2 + y; };
    std::vector<std::int32_t> table(static_cast<std::size_t>(order) * order);
    std::vector<std::string> labels(order);
    for (int a = 0; a < order; ++a) {
        int xa = a / 2, ya = a % 2;
        labels[a] = (xa ? "r^" + std::to_string(xa) : std::string()) + (ya ? "s" : "");
        if (labels[a].empty()) labels[a] = "e";
        for (int b = 0; b < order; ++b) {
            int xb = b / 2, yb = b % 2;
            int x = ya == 0 ? xa + xb : xa - xb;
            table[static_cast<std::size_t>(a) * order + b] = enc(x, ya ^ yb);
        }
    }
    return FiniteGroup::from_table(std::move(table), std::move(labels));
}

// generalized quaternion group of order 4m: a has order 2m, b^2 = a^m,
// b^-1 a b = a^-1; elements a^x b^y
inline FiniteGroup quaternion_group(int order) {
    if (order < 8 || order % 4 != 0) throw PreconditionFailed("quaternion order must be a multiple of 4, >= 8");
    int m = order / 4;
    int n = 2 * m;
    auto enc = [n](int x, int y) { return ((x % n + n) % n) * 2 + y; };
    std::vector<std::int32_t> table(static_cast<std::size_t>(order) * order);
    std::vector<std::string> labels(order);
    for (int a = 0; a < order; ++a) {
        int xa = a / 2, ya = a % 2;
        labels[a] = (xa ? "a^" + std::to_string(xa) : std::string()) + (ya ? "b" : "");
        if (labels[a].empty()) labels[a] = "e";
        for (int b = 0; b < order; ++b) {
            int xb = b / 2, yb = b % 2;
            int x = ya == 0 ? xa + xb : xa - xb;
            if (ya == 1 && yb == 1) x += m;  // b^2 = a^m
            table[static_cast<std::size_t>(a) * order + b] = enc(x, ya ^ yb);
        }
    }
    return FiniteGroup::from_table(std::move(table), std::move(labels));
}

// extraspecial group of order p^3 and exponent p^2 for odd p:
// <a, b | a^{p^2} = b^p = 1, b^-1 a b = a^{1+p}>; elements a^x b^y
inline FiniteGroup extraspecial_exponent_p2(int p) {
    if (p < 3 || p % 2 == 0) throw PreconditionFailed("p must be an odd prime");
    int p2 = p * p;
    int order = p2 * p;
    auto encode = [p2, p](long long x, int y) {
        return static_cast<int>((x % p2 + p2) % p2) * p + (y % p + p) % p;
    };
    // powers (1+p)^y mod p^2
    std::vector<long long> tw(p);
    tw[0] = 1;
    for (int y = 1; y < p; ++y) tw[y] = (tw[y - 1] * (1 + p)) % p2;
    std::vector<std::int32_t> table(static_cast<std::size_t>(order) * order);
    std::vector<std::string> labels(order);
    for (int a = 0; a < order; ++a) {
        int xa = a / p, ya = a % p;
        labels[a] = (xa ? "a^" + std::to_string(xa) : std::string()) +
                    (ya ? "b^" + std::to_string(ya) : std::string());
        if (labels[a].empty()) labels[a] = "e";
        for (int b = 0; b < order; ++b) {
            int xb = b / p, yb = b % p;
            long long x = xa + static_cast<long long>(xb) * tw[ya];
            table[static_cast<std::size_t>(a) * order + b] = encode(x, ya + yb);
        }
    }
    return FiniteGroup::from_table(std::move(table), std::move(labels));
}

inline FiniteGroup trivial_group() { return FiniteGroup(); }

// square matrices over F_p, flattened row-major
inline FiniteGroup matrix_group_fp(int p, int dim, const std::vector<std::vector<int>>& gens,
                                   const GroupBuildOptions& opt = {}) {
    auto mul = [p, dim](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> c(static_cast<std::size_t>(dim) * dim, 0);
        for (int i = 0; i < dim; ++i) {
            for (int k = 0; k < dim; ++k) {
                int aik = a[static_cast<std::size_t>(i) * dim + k];
                if (!aik) continue;
                for (int j = 0; j < dim; ++j) {
                    c[static_cast<std::size_t>(i) * dim + j] =
                        (c[static_cast<std::size_t>(i) * dim + j] +
                         aik * b[static_cast<std::size_t>(k) * dim + j]) %
                        p;
                }
            }
        }
        return c;
    };
    auto inv = [p, dim, mul](const std::vector<int>& a) {
        // order of a finite matrix group element: iterate a^k until identity
        std::vector<int> id(static_cast<std::size_t>(dim) * dim, 0);
        for (int i = 0; i < dim; ++i) id[static_cast<std::size_t>(i) * dim + i] = 1;
        std::vector<int> prev = id, cur = a;
        while (cur != id) {
            prev = cur;
            cur = mul(cur, a);
        }
        return prev;
    };
    auto label = [dim](const std::vector<int>& a) {
        std::string s = "[";
        for (int i = 0; i < dim; ++i) {
            if (i) s += ";";
            for (int j = 0; j < dim; ++j) {
                if (j) s += " ";
                s += std::to_string(a[static_cast<std::size_t>(i) * dim + j]);
            }
        }
        return s + "]";
    };
    std::vector<int> id(static_cast<std::size_t>(dim) * dim, 0);
    for (int i = 0; i < dim; ++i) id[static_cast<std::size_t>(i) * dim + i] = 1;
    for (const auto& g : gens) {
        if (g.size() != static_cast<std::size_t>(dim) * dim)
            throw InvalidElement("generator matrix has wrong shape");
    }
    return FiniteGroup::closure<std::vector<int>, decltype(mul), decltype(inv), decltype(label),
                                VecHash<int>>(gens, mul, inv, id, label, opt);
}

}  // namespace nilprob
