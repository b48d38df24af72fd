#pragma once

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nilprob/bigint.hpp"
#include "nilprob/errors.hpp"
#include "nilprob/finite_group.hpp"
#include "nilprob/nildegree.hpp"
#include "nilprob/polynomial.hpp"
#include "nilprob/rational.hpp"
#include "nilprob/words.hpp"

namespace nilprob {

using MalcevElement = std::vector<BigInt>;

// Torsion-free nilpotent group in exponent coordinates along a central-series
// basis, ordered centre first: multiplication and powers are the polynomials
//   (e^v)(e^w) = e^{mu(v,w)},  (e^v)^n = e^{eps(v,n)}.
class MalcevGroup {
   public:
    MalcevGroup() = default;

    static MalcevGroup create(std::string name, int dim, std::vector<IntPolynomial> mu,
                              std::vector<IntPolynomial> eps) {
        MalcevGroup g;
        g.name_ = std::move(name);
        g.dim_ = dim;
        if (static_cast<int>(mu.size()) != dim || static_cast<int>(eps.size()) != dim)
            throw Error("malcev group needs one mu and one eps polynomial per coordinate");
        for (const auto& p : mu) {
            if (p.nvars() != 2 * dim) throw Error("mu polynomials must use 2m variables");
        }
        for (const auto& p : eps) {
            if (p.nvars() != dim + 1) throw Error("eps polynomials must use m+1 variables");
        }
        g.mu_ = std::move(mu);
        g.eps_ = std::move(eps);
        BigInt n0(1);
        for (const auto& p : g.mu_) n0 = BigInt::lcm(n0, p.denominator_lcm());
        for (const auto& p : g.eps_) n0 = BigInt::lcm(n0, p.denominator_lcm());
        g.n0_ = n0;
        g.check_axioms(60);
        return g;
    }

    const std::string& name() const noexcept { return name_; }
    int dim() const noexcept { return dim_; }
    const std::vector<IntPolynomial>& mu() const noexcept { return mu_; }
    const std::vector<IntPolynomial>& eps() const noexcept { return eps_; }
    const BigInt& n0() const noexcept { return n0_; }

    MalcevElement identity() const { return MalcevElement(dim_, BigInt(0)); }

    MalcevElement mul(const MalcevElement& v, const MalcevElement& w) const {
        if (static_cast<int>(v.size()) != dim_ || static_cast<int>(w.size()) != dim_)
            throw ArityMismatch("coordinate length mismatch");
        std::vector<BigInt> args;
        args.reserve(2 * dim_);
        args.insert(args.end(), v.begin(), v.end());
        args.insert(args.end(), w.begin(), w.end());
        MalcevElement out(dim_);
        for (int i = 0; i < dim_; ++i) out[i] = mu_[i].eval_int(args);
        return out;
    }

    MalcevElement pow(const MalcevElement& v, const BigInt& n) const {
        if (static_cast<int>(v.size()) != dim_) throw ArityMismatch("coordinate length mismatch");
        std::vector<BigInt> args;
        args.reserve(dim_ + 1);
        args.insert(args.end(), v.begin(), v.end());
        args.push_back(n);
        MalcevElement out(dim_);
        for (int i = 0; i < dim_; ++i) out[i] = eps_[i].eval_int(args);
        return out;
    }

    MalcevElement inv(const MalcevElement& v) const { return pow(v, BigInt(-1)); }

    // deterministic randomized axiom audit; throws on the first violation
    void check_axioms(int trials) const {
        std::uint64_t state = 0xd1b54a32d192ed03ULL;
        auto next_small = [&state]() {
            state += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = state;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            z ^= z >> 31;
            return static_cast<std::int64_t>(z % 19) - 9;
        };
        auto rand_elem = [&]() {
            MalcevElement v(dim_);
            for (auto& c : v) c = BigInt(next_small());
            return v;
        };
        for (int t = 0; t < trials; ++t) {
            MalcevElement u = rand_elem(), v = rand_elem(), w = rand_elem();
            if (mul(u, identity()) != u || mul(identity(), u) != u)
                throw Error("malcev axioms: identity law fails");
            if (mul(mul(u, v), w) != mul(u, mul(v, w)))
                throw Error("malcev axioms: associativity fails");
            if (pow(u, BigInt(1)) != u || pow(u, BigInt(0)) != identity())
                throw Error("malcev axioms: power law fails at 0/1");
            std::int64_t a = next_small(), b = next_small();
            if (pow(u, BigInt(a + b)) != mul(pow(u, BigInt(a)), pow(u, BigInt(b))))
                throw Error("malcev axioms: power additivity fails");
            if (mul(u, inv(u)) != identity()) throw Error("malcev axioms: inverse law fails");
        }
    }

   private:
    std::string name_;
    int dim_ = 0;
    std::vector<IntPolynomial> mu_;
    std::vector<IntPolynomial> eps_;
    BigInt n0_ = BigInt(1);
};

inline MalcevElement mal_mul(const MalcevGroup& g, const MalcevElement& v, const MalcevElement& w) {
    return g.mul(v, w);
}
inline MalcevElement mal_pow(const MalcevGroup& g, const MalcevElement& v, const BigInt& n) {
    return g.pow(v, n);
}
inline MalcevElement mal_inv(const MalcevGroup& g, const MalcevElement& v) { return g.inv(v); }

struct MalcevOps {
    const MalcevGroup* g;
    using Element = MalcevElement;
    Element id() const { return g->identity(); }
    Element mul(const Element& a, const Element& b) const { return g->mul(a, b); }
    Element inv(const Element& a) const { return g->inv(a); }
    bool eq(const Element& a, const Element& b) const { return a == b; }
};

// ---- symbolic unitriangular machinery -------------------------------------

namespace unitri {

using PolyMatrix = std::vector<IntPolynomial>;  // dim x dim, row-major

inline PolyMatrix identity(int dim, int nvars) {
    PolyMatrix m(static_cast<std::size_t>(dim) * dim, IntPolynomial(nvars));
    for (int i = 0; i < dim; ++i) {
        m[static_cast<std::size_t>(i) * dim + i] = IntPolynomial::constant(nvars, Rational(1));
    }
    return m;
}

inline PolyMatrix mul(const PolyMatrix& a, const PolyMatrix& b, int dim) {
    int nvars = a[0].nvars();
    PolyMatrix c(static_cast<std::size_t>(dim) * dim, IntPolynomial(nvars));
    for (int i = 0; i < dim; ++i) {
        for (int k = 0; k < dim; ++k) {
            const IntPolynomial& aik = a[static_cast<std::size_t>(i) * dim + k];
            if (aik.is_zero()) continue;
            for (int j = 0; j < dim; ++j) {
                const IntPolynomial& bkj = b[static_cast<std::size_t>(k) * dim + j];
                if (bkj.is_zero()) continue;
                c[static_cast<std::size_t>(i) * dim + j] += aik * bkj;
            }
        }
    }
    return c;
}

// I + t*E(r,c)
inline PolyMatrix elementary(int dim, int r, int c, const IntPolynomial& t) {
    PolyMatrix m = identity(dim, t.nvars());
    m[static_cast<std::size_t>(r) * dim + c] += t;
    return m;
}

// Read exponent coordinates off a unitriangular polynomial matrix for a basis
// given in centre-first order (descending superdiagonal level). Factors are
// peeled level by level: level-l entries of a product supported on level >= l
// are plain sums of the level-l exponents.
inline std::vector<IntPolynomial> peel_coordinates(PolyMatrix p, int dim,
                                                   const std::vector<std::pair<int, int>>& basis) {
    int nvars = p[0].nvars();
    std::vector<IntPolynomial> coords(basis.size(), IntPolynomial(nvars));
    for (int level = 1; level < dim; ++level) {
        std::vector<std::size_t> idxs;
        for (std::size_t i = 0; i < basis.size(); ++i) {
            if (basis[i].second - basis[i].first == level) idxs.push_back(i);
        }
        if (idxs.empty()) continue;
        for (std::size_t i : idxs) {
            coords[i] = p[static_cast<std::size_t>(basis[i].first) * dim + basis[i].second];
        }
        // multiply by the inverse of this level's factor block, in reverse order
        for (auto it = idxs.rbegin(); it != idxs.rend(); ++it) {
            p = mul(p, elementary(dim, basis[*it].first, basis[*it].second, -coords[*it]), dim);
        }
    }
    PolyMatrix id = identity(dim, nvars);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] == id[i])) throw Error("coordinate peeling did not terminate at the identity");
    }
    return coords;
}

struct UnitriangularBasis {
    int dim;
    std::vector<std::pair<int, int>> positions;  // centre-first order
};

// mu polynomials (2m variables) for the group of unitriangular integer
// matrices with the given basis
inline std::vector<IntPolynomial> derive_mu(const UnitriangularBasis& basis) {
    int m = static_cast<int>(basis.positions.size());
    int nvars = 2 * m;
    PolyMatrix mv = identity(basis.dim, nvars), mw = identity(basis.dim, nvars);
    for (int i = 0; i < m; ++i) {
        mv = mul(mv, elementary(basis.dim, basis.positions[i].first, basis.positions[i].second,
                                IntPolynomial::variable(nvars, i)),
                 basis.dim);
        mw = mul(mw, elementary(basis.dim, basis.positions[i].first, basis.positions[i].second,
                                IntPolynomial::variable(nvars, m + i)),
                 basis.dim);
    }
    return peel_coordinates(mul(mv, mw, basis.dim), basis.dim, basis.positions);
}

// eps polynomials (m+1 variables, last one is the exponent n), using the
// binomial expansion (I+N)^n = sum_j C(n,j) N^j for nilpotent N
inline std::vector<IntPolynomial> derive_eps(const UnitriangularBasis& basis) {
    int m = static_cast<int>(basis.positions.size());
    int nvars = m + 1;
    PolyMatrix mv = identity(basis.dim, nvars);
    for (int i = 0; i < m; ++i) {
        mv = mul(mv, elementary(basis.dim, basis.positions[i].first, basis.positions[i].second,
                                IntPolynomial::variable(nvars, i)),
                 basis.dim);
    }
    PolyMatrix nil = mv;
    for (int i = 0; i < basis.dim; ++i) {
        nil[static_cast<std::size_t>(i) * basis.dim + i] -= IntPolynomial::constant(nvars, Rational(1));
    }
    IntPolynomial n = IntPolynomial::variable(nvars, m);
    PolyMatrix acc = identity(basis.dim, nvars);
    PolyMatrix npow = identity(basis.dim, nvars);
    IntPolynomial binom = IntPolynomial::constant(nvars, Rational(1));
    for (int j = 1; j < basis.dim; ++j) {
        npow = mul(npow, nil, basis.dim);
        // C(n,j) = C(n,j-1) * (n-j+1)/j
        binom *= (n - IntPolynomial::constant(nvars, Rational(j - 1))) *
                 IntPolynomial::constant(nvars, Rational(1, j));
        for (std::size_t t = 0; t < acc.size(); ++t) acc[t] += binom * npow[t];
    }
    return peel_coordinates(std::move(acc), basis.dim, basis.positions);
}

}  // namespace unitri

// ---- builtins ---------------------------------------------------------------

// zn(m), heisenberg, ut4
inline MalcevGroup builtin_malcev_group(const std::string& name) {
    if (name.rfind("zn(", 0) == 0 && name.back() == ')') {
        int m = 0;
        try {
            m = std::stoi(name.substr(3, name.size() - 4));
        } catch (...) {
            throw UnknownGroup("bad coordinate count in '" + name + "'");
        }
        if (m < 1) throw UnknownGroup("zn needs at least one coordinate");
        std::vector<IntPolynomial> mu, eps;
        for (int i = 0; i < m; ++i) {
            mu.push_back(IntPolynomial::variable(2 * m, i) + IntPolynomial::variable(2 * m, m + i));
            eps.push_back(IntPolynomial::variable(m + 1, i) * IntPolynomial::variable(m + 1, m));
        }
        return MalcevGroup::create(name, m, std::move(mu), std::move(eps));
    }
    if (name == "heisenberg") {
        // coordinates (v1,v2,v3), centre first: e1 central, [e3,e2] = e1
        int m = 3;
        auto v = [m](int i) { return IntPolynomial::variable(2 * m, i); };
        auto w = [m](int i) { return IntPolynomial::variable(2 * m, m + i); };
        std::vector<IntPolynomial> mu{v(0) + w(0) + v(2) * w(1), v(1) + w(1), v(2) + w(2)};
        auto pv = [m](int i) { return IntPolynomial::variable(m + 1, i); };
        IntPolynomial n = IntPolynomial::variable(m + 1, m);
        IntPolynomial half = IntPolynomial::constant(m + 1, Rational(1, 2));
        std::vector<IntPolynomial> eps{pv(0) * n + pv(1) * pv(2) * half * n * (n - IntPolynomial::constant(m + 1, Rational(1))),
                                       pv(1) * n, pv(2) * n};
        return MalcevGroup::create(name, m, std::move(mu), std::move(eps));
    }
    if (name == "ut4") {
        // 4x4 unitriangular integer matrices, basis centre first
        unitri::UnitriangularBasis basis{4, {{0, 3}, {0, 2}, {1, 3}, {0, 1}, {1, 2}, {2, 3}}};
        return MalcevGroup::create(name, 6, unitri::derive_mu(basis), unitri::derive_eps(basis));
    }
    throw UnknownGroup("unknown malcev group '" + name + "'");
}

// ---- finite quotients -------------------------------------------------------

struct MalcevQuotientOptions {
    long long order_cap = 200000;
    std::size_t table_cap = 5000;  // materialize the Cayley table up to this order
};

// G / G^(n): coordinate vectors mod n with multiplication mu mod n
struct MalcevQuotient {
    MalcevGroup base;
    long long modulus = 0;
    FiniteGroup group;

    std::vector<long long> coords(int index) const {
        std::vector<long long> v(base.dim());
        for (int i = base.dim(); i-- > 0;) {
            v[i] = index % modulus;
            index = static_cast<int>(index / modulus);
        }
        return v;
    }

    int index_of(std::span<const long long> v) const {
        long long idx = 0;
        for (long long c : v) idx = idx * modulus + ((c % modulus) + modulus) % modulus;
        return static_cast<int>(idx);
    }

    // componentwise reduction, a homomorphism onto the quotient
    int project(const MalcevElement& v) const {
        std::vector<long long> r(base.dim());
        for (int i = 0; i < base.dim(); ++i) r[i] = IntPolynomial::mod_of(v[i], modulus);
        return index_of(r);
    }
};

inline MalcevQuotient finite_quotient(const MalcevGroup& g, long long n,
                                      const MalcevQuotientOptions& opt = {}) {
    if (n < 2) throw PreconditionFailed("quotient modulus must be at least 2");
    if (BigInt::gcd(BigInt(n), g.n0()) != BigInt(1))
        throw NotCoprime("modulus " + std::to_string(n) + " shares a factor with n0 = " +
                         g.n0().to_string());
    double size = 1;
    for (int i = 0; i < g.dim(); ++i) size *= static_cast<double>(n);
    if (size > static_cast<double>(opt.order_cap))
        throw CapExceeded("quotient order n^m exceeds cap");
    MalcevQuotient q;
    q.base = g;
    q.modulus = n;
    int order = static_cast<int>(size);
    int dim = g.dim();
    auto mul_fn = [g, n, dim](int a, int b) {
        std::vector<long long> va(dim), vb(dim), args(2 * dim);
        for (int i = dim; i-- > 0;) {
            va[i] = a % n;
            a = static_cast<int>(a / n);
            vb[i] = b % n;
            b = static_cast<int>(b / n);
        }
        for (int i = 0; i < dim; ++i) {
            args[i] = va[i];
            args[dim + i] = vb[i];
        }
        long long idx = 0;
        for (int i = 0; i < dim; ++i) idx = idx * n + g.mu()[i].eval_mod(args, n);
        return static_cast<int>(idx);
    };
    auto inv_fn = [g, n, dim](int a) {
        std::vector<long long> va(dim + 1);
        for (int i = dim; i-- > 0;) {
            va[i] = a % n;
            a = static_cast<int>(a / n);
        }
        va[dim] = n - 1;  // the exponent -1 mod n
        long long idx = 0;
        for (int i = 0; i < dim; ++i) idx = idx * n + g.eps()[i].eval_mod(va, n);
        return static_cast<int>(idx);
    };
    auto label_fn = [n, dim](int a) {
        std::vector<long long> v(dim);
        for (int i = dim; i-- > 0;) {
            v[i] = a % n;
            a = static_cast<int>(a / n);
        }
        std::string s = "(";
        for (int i = 0; i < dim; ++i) {
            if (i) s += ",";
            s += std::to_string(v[i]);
        }
        return s + ")";
    };
    q.group = FiniteGroup::from_callback(order, mul_fn, inv_fn, label_fn, opt.table_cap);
    return q;
}

// sizes and cyclic-factor witnesses for the chain <e_1> <= <e_1,e_2> <= ...
struct ChiefFactorReport {
    std::vector<long long> subgroup_sizes;
    bool all_factors_cyclic_of_order_n = true;
};

inline ChiefFactorReport chief_factors(const MalcevQuotient& q) {
    ChiefFactorReport rep;
    const int dim = q.base.dim();
    std::vector<int> gens;
    Subgroup prev = Subgroup::trivial(q.group);
    long long prev_size = 1;
    for (int i = 0; i < dim; ++i) {
        std::vector<long long> unit(dim, 0);
        unit[i] = 1;
        gens.push_back(q.index_of(unit));
        Subgroup cur = Subgroup::generated(q.group, gens);
        rep.subgroup_sizes.push_back(cur.size());
        if (cur.size() != prev_size * q.modulus) rep.all_factors_cyclic_of_order_n = false;
        for (long long j = 1; j < q.modulus && rep.all_factors_cyclic_of_order_n; ++j) {
            std::vector<long long> ej(dim, 0);
            ej[i] = j;
            if (prev.contains(q.index_of(ej))) rep.all_factors_cyclic_of_order_n = false;
        }
        prev = cur;
        prev_size = cur.size();
    }
    return rep;
}

// ---- root densities ---------------------------------------------------------

// Exact density of the vanishing locus of p mod n over coordinate vectors.
// Variables that do not occur in p cancel out of the fraction, so only the
// occurring ones are enumerated.
inline Rational root_density(const MalcevGroup& g, const IntPolynomial& p, long long n,
                             std::uint64_t eval_cap = 100000000ULL) {
    if (BigInt::gcd(BigInt(n), g.n0()) != BigInt(1))
        throw NotCoprime("modulus shares a factor with the group's n0");
    if (BigInt::gcd(BigInt(n), p.denominator_lcm()) != BigInt(1))
        throw NotCoprime("modulus shares a factor with a coefficient denominator");
    std::vector<int> occurring;
    for (int i = 0; i < p.nvars(); ++i) {
        if (p.degree_in(i) > 0) occurring.push_back(i);
    }
    double size = 1;
    for (std::size_t i = 0; i < occurring.size(); ++i) size *= static_cast<double>(n);
    if (size > static_cast<double>(eval_cap)) throw CapExceeded("root density enumeration exceeds cap");
    std::vector<long long> args(p.nvars(), 0);
    BigInt zeros(0);
    std::vector<long long> cursor(occurring.size(), 0);
    while (true) {
        for (std::size_t i = 0; i < occurring.size(); ++i) args[occurring[i]] = cursor[i];
        if (p.eval_mod(args, n) == 0) zeros += BigInt(1);
        std::size_t i = 0;
        while (i < cursor.size() && ++cursor[i] == n) cursor[i++] = 0;
        if (i == cursor.size()) break;
    }
    return Rational(zeros, BigInt::pow(BigInt(n), occurring.size()));
}

// ---- equations, derivatives, quotient sequences -----------------------------

inline MalcevElement eval_equation(const MalcevGroup& g, const Word<MalcevElement>& w,
                                   const std::vector<MalcevElement>& assignment) {
    MalcevOps ops{&g};
    return evaluate_word(ops, w, std::span<const MalcevElement>(assignment));
}

// phi(x)^-1 phi(xu), as a new evaluable map
template <class DomOps, class CodOps>
struct GroupMap {
    std::function<typename CodOps::Element(const typename DomOps::Element&)> f;
};

template <class DomOps, class CodOps>
GroupMap<DomOps, CodOps> derivative_map(const DomOps& dom, const CodOps& cod,
                                        const GroupMap<DomOps, CodOps>& phi,
                                        const typename DomOps::Element& u) {
    auto fn = phi.f;
    return {[dom, cod, fn, u](const typename DomOps::Element& x) {
        return cod.mul(cod.inv(fn(x)), fn(dom.mul(x, u)));
    }};
}

template <class Ops>
struct TupleOps {
    Ops base;
    int arity;
    using Element = std::vector<typename Ops::Element>;
    Element id() const { return Element(arity, base.id()); }
    Element mul(const Element& a, const Element& b) const {
        Element r(arity);
        for (int i = 0; i < arity; ++i) r[i] = base.mul(a[i], b[i]);
        return r;
    }
    Element inv(const Element& a) const {
        Element r(arity);
        for (int i = 0; i < arity; ++i) r[i] = base.inv(a[i]);
        return r;
    }
    bool eq(const Element& a, const Element& b) const {
        for (int i = 0; i < arity; ++i) {
            if (!base.eq(a[i], b[i])) return false;
        }
        return true;
    }
};

template <class DomOps, class CodOps>
struct DegreeSample {
    std::vector<typename DomOps::Element> directions;  // d+1 of them
    typename DomOps::Element at;
};

template <class DomOps, class CodOps>
struct DegreeVerdict {
    bool consistent = true;
    std::optional<std::string> witness;
};

// Sampled test that all (d+1)-fold derivatives vanish. `refuted` carries a
// witness; `consistent` is evidence, not proof.
template <class DomOps, class CodOps>
DegreeVerdict<DomOps, CodOps> degree_at_most(const DomOps& dom, const CodOps& cod,
                                             const GroupMap<DomOps, CodOps>& phi, int d,
                                             const std::vector<DegreeSample<DomOps, CodOps>>& samples) {
    if (samples.empty()) throw PreconditionFailed("degree check needs at least one sample");
    DegreeVerdict<DomOps, CodOps> verdict;
    for (std::size_t s = 0; s < samples.size(); ++s) {
        const auto& sample = samples[s];
        if (static_cast<int>(sample.directions.size()) != d + 1)
            throw PreconditionFailed("each sample needs d+1 derivative directions");
        GroupMap<DomOps, CodOps> cur = phi;
        for (const auto& u : sample.directions) cur = derivative_map(dom, cod, cur, u);
        if (!cod.eq(cur.f(sample.at), cod.id())) {
            verdict.consistent = false;
            verdict.witness = "sample " + std::to_string(s) + " has a nonvanishing derivative";
            return verdict;
        }
    }
    return verdict;
}

// exact d(phi) over the finite quotients G/G^(n) for each modulus; for a
// nested modulus chain the sequence must be non-increasing
inline std::vector<Rational> dphi_quotient_sequence(const MalcevGroup& g,
                                                    const Word<MalcevElement>& w,
                                                    const std::vector<long long>& moduli,
                                                    const MalcevQuotientOptions& opt = {},
                                                    std::uint64_t eval_cap = 100000000ULL) {
    std::vector<Rational> out;
    for (long long n : moduli) {
        MalcevQuotient q = finite_quotient(g, n, opt);
        std::vector<WordLetter<int>> letters;
        for (const auto& l : w.letters()) {
            if (l.var > 0) {
                letters.push_back(WordLetter<int>::variable(l.var, l.sign));
            } else {
                letters.push_back(WordLetter<int>::constant_of(q.project(l.constant), l.sign));
            }
        }
        out.push_back(dphi_exact(q.group, GroupWord(w.arity(), std::move(letters)), eval_cap));
    }
    bool nested = true;
    for (std::size_t i = 0; i + 1 < moduli.size(); ++i) {
        if (moduli[i + 1] % moduli[i] != 0) nested = false;
    }
    if (nested) {
        for (std::size_t i = 0; i + 1 < out.size(); ++i) {
            if (out[i] < out[i + 1])
                throw Error("quotient sequence is not non-increasing over a nested modulus chain");
        }
    }
    return out;
}

}  // namespace nilprob
