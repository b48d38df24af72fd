#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nilprob/bigint.hpp"
#include "nilprob/errors.hpp"
#include "nilprob/finite_group.hpp"

namespace nilprob {

// Block upper unitriangular subgroup of GL_{r+kn+s}(F_p): one r-row block, k
// n-row blocks, one s-row block. Free blocks are A_0..A_{k-1} (r x n),
// B_1..B_k (n x s), C (r x s) and D_{i,j} (n x n, 1 <= i <= j <= k-1).
struct GkSpec {
    int p = 3;
    int k = 1;
    int n = 1;
    int r = 1;
    int s = 1;

    void validate() const {
        if (p < 3 || p % 2 == 0) throw PreconditionFailed("p must be an odd prime");
        for (int d = 3; d * d <= p; d += 2) {
            if (p % d == 0) throw PreconditionFailed("p must be an odd prime");
        }
        if (k < 0 || n < 1 || r < 1 || s < 1) throw PreconditionFailed("need k >= 0 and n,r,s >= 1");
    }

    int dim() const { return r + k * n + s; }

    // number of free F_p entries
    long long coord_count() const {
        return static_cast<long long>(k) * r * n + static_cast<long long>(k) * n * s +
               static_cast<long long>(r) * s +
               static_cast<long long>(n) * n * k * (k - 1) / 2;
    }

    BigInt order() const { return BigInt::pow(BigInt(p), static_cast<std::uint64_t>(coord_count())); }

    // flat coordinate offsets, in the fixed order A_0..A_{k-1}, B_1..B_k, C,
    // D_{1,1}, D_{1,2}, ..., D_{k-1,k-1}
    long long a_offset(int i) const { return static_cast<long long>(i) * r * n; }
    long long b_offset(int i) const {
        return static_cast<long long>(k) * r * n + static_cast<long long>(i - 1) * n * s;
    }
    long long c_offset() const {
        return static_cast<long long>(k) * r * n + static_cast<long long>(k) * n * s;
    }
    long long d_offset(int i, int j) const {
        long long base = c_offset() + static_cast<long long>(r) * s;
        long long skipped = 0;
        for (int a = 1; a < i; ++a) skipped += k - a;  // row a holds D_{a,a..k-1}
        skipped += j - i;
        return base + skipped * n * n;
    }
};

class GkElement {
   public:
    explicit GkElement(const GkSpec& spec)
        : spec_(&spec), coords_(static_cast<std::size_t>(spec.coord_count()), 0) {}

    GkElement(const GkSpec& spec, std::vector<int> coords) : spec_(&spec), coords_(std::move(coords)) {
        if (coords_.size() != static_cast<std::size_t>(spec.coord_count()))
            throw InvalidElement("coordinate vector has wrong length");
    }

    const GkSpec& spec() const { return *spec_; }
    const std::vector<int>& coords() const { return coords_; }

    int a(int i, int row, int col) const { return coords_[spec_->a_offset(i) + row * spec_->n + col]; }
    int& a(int i, int row, int col) { return coords_[spec_->a_offset(i) + row * spec_->n + col]; }
    int b(int i, int row, int col) const { return coords_[spec_->b_offset(i) + row * spec_->s + col]; }
    int& b(int i, int row, int col) { return coords_[spec_->b_offset(i) + row * spec_->s + col]; }
    int c(int row, int col) const { return coords_[spec_->c_offset() + row * spec_->s + col]; }
    int& c(int row, int col) { return coords_[spec_->c_offset() + row * spec_->s + col]; }
    int d(int i, int j, int row, int col) const {
        return coords_[spec_->d_offset(i, j) + row * spec_->n + col];
    }
    int& d(int i, int j, int row, int col) {
        return coords_[spec_->d_offset(i, j) + row * spec_->n + col];
    }

    bool a_block_zero(int i) const { return block_zero(spec_->a_offset(i), spec_->r * spec_->n); }
    bool b_block_zero(int i) const { return block_zero(spec_->b_offset(i), spec_->n * spec_->s); }
    bool d_block_zero(int i, int j) const {
        return block_zero(spec_->d_offset(i, j), spec_->n * spec_->n);
    }

    std::vector<int> to_matrix() const {
        const GkSpec& sp = *spec_;
        int dim = sp.dim();
        std::vector<int> m(static_cast<std::size_t>(dim) * dim, 0);
        for (int i = 0; i < dim; ++i) m[static_cast<std::size_t>(i) * dim + i] = 1;
        auto put = [&](int row0, int col0, int rows, int cols, auto get) {
            for (int i = 0; i < rows; ++i) {
                for (int j = 0; j < cols; ++j)
                    m[static_cast<std::size_t>(row0 + i) * dim + col0 + j] = get(i, j);
            }
        };
        for (int i = 0; i < sp.k; ++i) {
            put(0, sp.r + i * sp.n, sp.r, sp.n, [&](int x, int y) { return a(i, x, y); });
        }
        for (int i = 1; i <= sp.k; ++i) {
            put(sp.r + (i - 1) * sp.n, sp.r + sp.k * sp.n, sp.n, sp.s,
                [&](int x, int y) { return b(i, x, y); });
        }
        put(0, sp.r + sp.k * sp.n, sp.r, sp.s, [&](int x, int y) { return c(x, y); });
        for (int i = 1; i <= sp.k - 1; ++i) {
            for (int j = i; j <= sp.k - 1; ++j) {
                put(sp.r + (i - 1) * sp.n, sp.r + j * sp.n, sp.n, sp.n,
                    [&](int x, int y) { return d(i, j, x, y); });
            }
        }
        return m;
    }

    static GkElement from_matrix(const GkSpec& sp, const std::vector<int>& m) {
        int dim = sp.dim();
        GkElement e(sp);
        auto grab = [&](int row0, int col0, int rows, int cols, auto set) {
            for (int i = 0; i < rows; ++i) {
                for (int j = 0; j < cols; ++j)
                    set(i, j, m[static_cast<std::size_t>(row0 + i) * dim + col0 + j]);
            }
        };
        for (int i = 0; i < sp.k; ++i) {
            grab(0, sp.r + i * sp.n, sp.r, sp.n, [&](int x, int y, int v) { e.a(i, x, y) = v; });
        }
        for (int i = 1; i <= sp.k; ++i) {
            grab(sp.r + (i - 1) * sp.n, sp.r + sp.k * sp.n, sp.n, sp.s,
                 [&](int x, int y, int v) { e.b(i, x, y) = v; });
        }
        grab(0, sp.r + sp.k * sp.n, sp.r, sp.s, [&](int x, int y, int v) { e.c(x, y) = v; });
        for (int i = 1; i <= sp.k - 1; ++i) {
            for (int j = i; j <= sp.k - 1; ++j) {
                grab(sp.r + (i - 1) * sp.n, sp.r + j * sp.n, sp.n, sp.n,
                     [&](int x, int y, int v) { e.d(i, j, x, y) = v; });
            }
        }
        return e;
    }

    std::string label() const {
        std::string s = "[";
        for (std::size_t i = 0; i < coords_.size(); ++i) s += std::to_string(coords_[i]);
        return s + "]";
    }

   private:
    const GkSpec* spec_;
    std::vector<int> coords_;

    bool block_zero(long long off, int len) const {
        for (int t = 0; t < len; ++t) {
            if (coords_[off + t] != 0) return false;
        }
        return true;
    }
};

// product through the closed block formulas; the generic matrix product is the
// cross-check oracle for this
inline GkElement gk_block_mul(const GkElement& x, const GkElement& y) {
    const GkSpec& sp = x.spec();
    int p = sp.p;
    GkElement z(sp);
    for (int i = 0; i < sp.k; ++i) {
        for (int u = 0; u < sp.r; ++u) {
            for (int v = 0; v < sp.n; ++v) {
                int acc = x.a(i, u, v) + y.a(i, u, v);
                for (int m = 1; m <= i; ++m) {
                    for (int t = 0; t < sp.n; ++t) acc += x.a(m - 1, u, t) * y.d(m, i, t, v);
                }
                z.a(i, u, v) = acc % p;
            }
        }
    }
    for (int i = 1; i <= sp.k; ++i) {
        for (int u = 0; u < sp.n; ++u) {
            for (int v = 0; v < sp.s; ++v) {
                int acc = x.b(i, u, v) + y.b(i, u, v);
                for (int j = i; j <= sp.k - 1; ++j) {
                    for (int t = 0; t < sp.n; ++t) acc += x.d(i, j, u, t) * y.b(j + 1, t, v);
                }
                z.b(i, u, v) = acc % p;
            }
        }
    }
    for (int u = 0; u < sp.r; ++u) {
        for (int v = 0; v < sp.s; ++v) {
            int acc = x.c(u, v) + y.c(u, v);
            for (int m = 1; m <= sp.k; ++m) {
                for (int t = 0; t < sp.n; ++t) acc += x.a(m - 1, u, t) * y.b(m, t, v);
            }
            z.c(u, v) = acc % p;
        }
    }
    for (int i = 1; i <= sp.k - 1; ++i) {
        for (int j = i; j <= sp.k - 1; ++j) {
            for (int u = 0; u < sp.n; ++u) {
                for (int v = 0; v < sp.n; ++v) {
                    int acc = x.d(i, j, u, v) + y.d(i, j, u, v);
                    for (int m = i; m <= j - 1; ++m) {
                        for (int t = 0; t < sp.n; ++t) acc += x.d(i, m, u, t) * y.d(m + 1, j, t, v);
                    }
                    z.d(i, j, u, v) = acc % p;
                }
            }
        }
    }
    return z;
}

inline GkElement gk_matrix_mul(const GkElement& x, const GkElement& y) {
    const GkSpec& sp = x.spec();
    int dim = sp.dim(), p = sp.p;
    std::vector<int> a = x.to_matrix(), b = y.to_matrix();
    std::vector<int> c(static_cast<std::size_t>(dim) * dim, 0);
    for (int i = 0; i < dim; ++i) {
        for (int t = 0; t < dim; ++t) {
            int ait = a[static_cast<std::size_t>(i) * dim + t];
            if (!ait) continue;
            for (int j = 0; j < dim; ++j) {
                c[static_cast<std::size_t>(i) * dim + j] =
                    (c[static_cast<std::size_t>(i) * dim + j] +
                     ait * b[static_cast<std::size_t>(t) * dim + j]) %
                    p;
            }
        }
    }
    return GkElement::from_matrix(sp, c);
}

struct GkBuildOptions {
    long long order_cap = 20000;
};

struct GkGroup {
    GkSpec spec;
    FiniteGroup group;

    GkElement element(int index) const {
        std::vector<int> coords(static_cast<std::size_t>(spec.coord_count()));
        for (long long i = spec.coord_count(); i-- > 0;) {
            coords[i] = index % spec.p;
            index /= spec.p;
        }
        return GkElement(spec, std::move(coords));
    }

    int index_of(const GkElement& e) const {
        long long idx = 0;
        for (int v : e.coords()) idx = idx * spec.p + v;
        return static_cast<int>(idx);
    }
};

// Elements are indexed by block-coordinate lexicographic rank, so index 0 is
// the identity and runs are reproducible.
inline GkGroup build_gk(const GkSpec& spec, const GkBuildOptions& opt = {}) {
    spec.validate();
    BigInt ord = spec.order();
    if (ord > BigInt(opt.order_cap))
        throw CapExceeded("group order " + ord.to_string() + " exceeds cap");
    int n = static_cast<int>(ord.to_i64());
    GkGroup gk{spec, FiniteGroup()};
    std::vector<GkElement> elems;
    elems.reserve(n);
    for (int i = 0; i < n; ++i) elems.push_back(gk.element(i));
    std::vector<std::int32_t> table(static_cast<std::size_t>(n) * n);
    std::vector<std::string> labels(n);
    for (int a = 0; a < n; ++a) {
        labels[a] = elems[a].label();
        for (int b = 0; b < n; ++b) {
            table[static_cast<std::size_t>(a) * n + b] = gk.index_of(gk_block_mul(elems[a], elems[b]));
        }
    }
    gk.group = FiniteGroup::from_table(std::move(table), std::move(labels));
    return gk;
}

struct GkSeriesReport {
    bool ok = true;
    std::string detail;
};

// gamma_{l+1}(G) = Z_{k+1-l}(G) = the block-vanishing subgroup with
// A_j = 0 for j < l, B_i = 0 for k-i < l, D_{i,j} = 0 for j-i < l,
// for l = 0..k; the class is exactly k+1 (k >= 1) and the centre has order
// p^{rs}.
inline GkSeriesReport verify_gk_series(const GkGroup& gk) {
    const GkSpec& sp = gk.spec;
    GkSeriesReport rep;
    CentralSeries cs = central_series(gk.group);
    auto fail = [&rep](const std::string& why) {
        rep.ok = false;
        if (!rep.detail.empty()) rep.detail += "; ";
        rep.detail += why;
    };

    if (sp.k >= 1) {
        if (!cs.nilpotency_class.has_value() || *cs.nilpotency_class != sp.k + 1)
            fail("class is not k+1");
    } else if (!cs.nilpotency_class.has_value() || *cs.nilpotency_class > 1) {
        fail("k = 0 group is not abelian");
    }

    BigInt prs = BigInt::pow(BigInt(sp.p), static_cast<std::uint64_t>(sp.r) * sp.s);
    if (BigInt(center(gk.group).size()) != prs) fail("centre order is not p^(rs)");

    for (int l = 0; l <= sp.k; ++l) {
        std::vector<int> block_set;
        for (int e = 0; e < gk.group.order(); ++e) {
            GkElement x = gk.element(e);
            bool in = true;
            for (int j = 0; j < sp.k && in; ++j) {
                if (j < l && !x.a_block_zero(j)) in = false;
            }
            for (int i = 1; i <= sp.k && in; ++i) {
                if (sp.k - i < l && !x.b_block_zero(i)) in = false;
            }
            for (int i = 1; i <= sp.k - 1 && in; ++i) {
                for (int j = i; j <= sp.k - 1 && in; ++j) {
                    if (j - i < l && !x.d_block_zero(i, j)) in = false;
                }
            }
            if (in) block_set.push_back(e);
        }
        const std::vector<int>* lower =
            l < static_cast<int>(cs.lower.size()) ? &cs.lower[l].members() : nullptr;
        if (!lower || *lower != block_set) {
            // gamma may have stabilized at the trivial group earlier
            if (!(static_cast<std::size_t>(l) >= cs.lower.size() && block_set.size() == 1 &&
                  block_set[0] == FiniteGroup::kIdentity)) {
                fail("lower series term " + std::to_string(l + 1) + " differs from block description");
            }
        }
        int upper_index = sp.k + 1 - l;
        const std::vector<int>* upper = upper_index < static_cast<int>(cs.upper.size())
                                            ? &cs.upper[upper_index].members()
                                            : nullptr;
        if (upper) {
            if (*upper != block_set) fail("upper series term Z_" + std::to_string(upper_index) +
                                          " differs from block description");
        } else if (static_cast<int>(block_set.size()) != gk.group.order()) {
            fail("upper series stabilized before Z_" + std::to_string(upper_index));
        }
    }
    return rep;
}

// the index-p^n subgroup {X : A_0(X) = 0} of G_k(n,1,1)
inline Subgroup sharp_subgroup(const GkGroup& gk) {
    if (gk.spec.r != 1 || gk.spec.s != 1)
        throw PreconditionFailed("sharp subgroup is defined for r = s = 1");
    std::vector<int> mem;
    for (int e = 0; e < gk.group.order(); ++e) {
        if (gk.element(e).a_block_zero(0)) mem.push_back(e);
    }
    return Subgroup(gk.group, std::move(mem));
}

// index < p^n forces class > k; for n <= 2 it is enough to check the group
// itself and its maximal subgroups
inline bool no_small_nilpotent_subgroups(const GkGroup& gk, int k) {
    if (gk.spec.n > 2)
        throw PreconditionFailed("subgroup audit beyond maximal subgroups is out of scope (n > 2)");
    if (is_k_step_nilpotent(gk.group, k)) return false;
    if (gk.spec.n == 2) {
        for (const Subgroup& m : maximal_subgroups_pgroup(gk.group, gk.spec.p)) {
            FiniteGroup sub = subgroup_as_group(gk.group, m).group;
            if (is_k_step_nilpotent(sub, k)) return false;
        }
    }
    return true;
}

// codimension of the image of K under the superdiagonal-block map in the
// abelianization of G_k, as an F_p vector space
inline int quasi_corank(const GkGroup& gk, const Subgroup& K) {
    const GkSpec& sp = gk.spec;
    int veclen;
    if (sp.k == 0) {
        veclen = sp.r * sp.s;
    } else {
        veclen = sp.n * (sp.r + sp.s) + (sp.k - 1) * sp.n * sp.n;
    }
    auto rho = [&](int e) {
        GkElement x = gk.element(e);
        std::vector<int> v;
        v.reserve(veclen);
        if (sp.k == 0) {
            for (int u = 0; u < sp.r; ++u) {
                for (int w = 0; w < sp.s; ++w) v.push_back(x.c(u, w));
            }
            return v;
        }
        for (int u = 0; u < sp.r; ++u) {
            for (int w = 0; w < sp.n; ++w) v.push_back(x.a(0, u, w));
        }
        for (int i = 1; i <= sp.k - 1; ++i) {
            for (int u = 0; u < sp.n; ++u) {
                for (int w = 0; w < sp.n; ++w) v.push_back(x.d(i, i, u, w));
            }
        }
        for (int u = 0; u < sp.n; ++u) {
            for (int w = 0; w < sp.s; ++w) v.push_back(x.b(sp.k, u, w));
        }
        return v;
    };
    // Gaussian elimination over F_p
    std::vector<std::vector<int>> basis;
    for (int e : K.members()) {
        std::vector<int> v = rho(e);
        for (const auto& b : basis) {
            int lead = -1;
            for (int i = 0; i < veclen; ++i) {
                if (b[i]) {
                    lead = i;
                    break;
                }
            }
            if (lead >= 0 && v[lead]) {
                // v -= v[lead]/b[lead] * b
                int inv = 1;
                for (int t = 1; t < sp.p; ++t) {
                    if (b[lead] * t % sp.p == 1) inv = t;
                }
                int f = v[lead] * inv % sp.p;
                for (int i = 0; i < veclen; ++i) v[i] = ((v[i] - f * b[i]) % sp.p + sp.p) % sp.p;
            }
        }
        bool zero = true;
        for (int x : v) {
            if (x) zero = false;
        }
        if (!zero) basis.push_back(v);
    }
    int rank = static_cast<int>(basis.size());
    int corank = veclen - rank;

    // [G : K gamma_2(G)] must equal p^corank
    CentralSeries cs = central_series(gk.group);
    std::vector<int> gens = K.members();
    if (cs.lower.size() > 1) {
        const auto& g2 = cs.lower[1].members();
        gens.insert(gens.end(), g2.begin(), g2.end());
    }
    Subgroup kg2 = Subgroup::generated(gk.group, gens);
    BigInt index(gk.group.order() / kg2.size());
    if (index != BigInt::pow(BigInt(sp.p), static_cast<std::uint64_t>(corank)))
        throw Error("quasi-corank does not match the index of K*gamma_2");
    return corank;
}

}  // namespace nilprob
