#include <doctest.h>

#include <random>

#include "nilprob/malcev.hpp"
#include "nilprob/nildegree.hpp"

using namespace nilprob;

namespace {

MalcevElement elem(std::initializer_list<std::int64_t> v) {
    MalcevElement e;
    for (std::int64_t x : v) e.push_back(BigInt(x));
    return e;
}

// numeric unitriangular matrix product of basis factors, the oracle for the
// symbolic derivations
std::vector<std::int64_t> matrix_of(const std::vector<std::pair<int, int>>& basis, int dim,
                                    const std::vector<std::int64_t>& coords) {
    std::vector<std::int64_t> m(static_cast<std::size_t>(dim) * dim, 0);
    for (int i = 0; i < dim; ++i) m[static_cast<std::size_t>(i) * dim + i] = 1;
    for (std::size_t b = 0; b < basis.size(); ++b) {
        std::vector<std::int64_t> f(static_cast<std::size_t>(dim) * dim, 0);
        for (int i = 0; i < dim; ++i) f[static_cast<std::size_t>(i) * dim + i] = 1;
        f[static_cast<std::size_t>(basis[b].first) * dim + basis[b].second] = coords[b];
        std::vector<std::int64_t> r(static_cast<std::size_t>(dim) * dim, 0);
        for (int i = 0; i < dim; ++i) {
            for (int k = 0; k < dim; ++k) {
                if (!m[static_cast<std::size_t>(i) * dim + k]) continue;
                for (int j = 0; j < dim; ++j) {
                    r[static_cast<std::size_t>(i) * dim + j] +=
                        m[static_cast<std::size_t>(i) * dim + k] * f[static_cast<std::size_t>(k) * dim + j];
                }
            }
        }
        m = std::move(r);
    }
    return m;
}

}  // namespace

TEST_CASE("zn coordinates add componentwise") {
    MalcevGroup zn2 = builtin_malcev_group("zn(2)");
    CHECK(zn2.dim() == 2);
    CHECK(zn2.n0() == BigInt(1));
    CHECK(mal_mul(zn2, elem({1, 2}), elem({3, 4})) == elem({4, 6}));
    CHECK(mal_pow(zn2, elem({2, -3}), BigInt(5)) == elem({10, -15}));
}

TEST_CASE("heisenberg builtin matches the 3x3 matrix oracle") {
    MalcevGroup h = builtin_malcev_group("heisenberg");
    CHECK(h.dim() == 3);
    CHECK(h.n0() == BigInt(2));
    CHECK(mal_mul(h, elem({0, 0, 1}), elem({0, 1, 0})) == elem({1, 1, 1}));
    CHECK(mal_pow(h, elem({0, 1, 1}), BigInt(2)) == elem({1, 2, 2}));
    CHECK(mal_pow(h, elem({3, -2, 5}), BigInt(0)) == h.identity());

    std::mt19937 rng(21);
    for (int t = 0; t < 200; ++t) {
        MalcevElement v = elem({static_cast<std::int64_t>(rng() % 9) - 4, static_cast<std::int64_t>(rng() % 9) - 4, static_cast<std::int64_t>(rng() % 9) - 4});
        CHECK(mal_mul(h, v, mal_inv(h, v)) == h.identity());
    }

    // the polynomials themselves agree with the symbolic matrix derivation
    unitri::UnitriangularBasis basis{3, {{0, 2}, {1, 2}, {0, 1}}};
    std::vector<IntPolynomial> mu = unitri::derive_mu(basis);
    std::vector<IntPolynomial> eps = unitri::derive_eps(basis);
    for (int i = 0; i < 3; ++i) {
        CHECK(mu[i] == h.mu()[i]);
        CHECK(eps[i] == h.eps()[i]);
    }
}

TEST_CASE("ut4 builtin against direct 4x4 matrix arithmetic") {
    MalcevGroup u = builtin_malcev_group("ut4");
    CHECK(u.dim() == 6);
    CHECK(u.n0() == BigInt(6));

    std::vector<std::pair<int, int>> basis{{0, 3}, {0, 2}, {1, 3}, {0, 1}, {1, 2}, {2, 3}};
    std::mt19937 rng(31);
    for (int t = 0; t < 300; ++t) {
        std::vector<std::int64_t> v(6), w(6);
        for (auto& c : v) c = static_cast<std::int64_t>(rng() % 7) - 3;
        for (auto& c : w) c = static_cast<std::int64_t>(rng() % 7) - 3;
        MalcevElement mv, mw;
        for (auto c : v) mv.push_back(BigInt(c));
        for (auto c : w) mw.push_back(BigInt(c));
        MalcevElement prod = mal_mul(u, mv, mw);

        auto a = matrix_of(basis, 4, v);
        auto b = matrix_of(basis, 4, w);
        std::vector<std::int64_t> ab(16, 0);
        for (int i = 0; i < 4; ++i) {
            for (int k = 0; k < 4; ++k) {
                for (int j = 0; j < 4; ++j) ab[i * 4 + j] += a[i * 4 + k] * b[k * 4 + j];
            }
        }
        std::vector<std::int64_t> pc(6);
        for (int i = 0; i < 6; ++i) pc[i] = prod[i].to_i64();
        CHECK(matrix_of(basis, 4, pc) == ab);
    }

    // powers against repeated multiplication
    for (int t = 0; t < 50; ++t) {
        std::vector<std::int64_t> v(6);
        for (auto& c : v) c = static_cast<std::int64_t>(rng() % 5) - 2;
        MalcevElement mv;
        for (auto c : v) mv.push_back(BigInt(c));
        MalcevElement acc = u.identity();
        for (int e = 0; e <= 5; ++e) {
            CHECK(mal_pow(u, mv, BigInt(e)) == acc);
            acc = mal_mul(u, acc, mv);
        }
        CHECK(mal_pow(u, mv, BigInt(-3)) == mal_inv(u, mal_pow(u, mv, BigInt(3))));
    }
}

TEST_CASE("builtin groups satisfy the axioms on many random triples") {
    for (const char* name : {"zn(2)", "heisenberg", "ut4"}) {
        MalcevGroup g = builtin_malcev_group(name);
        g.check_axioms(10000 / 3);
    }
    CHECK_THROWS_AS(builtin_malcev_group("so3"), UnknownGroup);
}

TEST_CASE("finite quotients") {
    MalcevGroup z = builtin_malcev_group("zn(1)");
    MalcevQuotient c5 = finite_quotient(z, 5);
    CHECK(c5.group.order() == 5);
    CHECK(c5.group.element_order(c5.index_of(std::vector<long long>{1})) == 5);

    MalcevGroup h = builtin_malcev_group("heisenberg");
    CHECK_THROWS_AS(finite_quotient(h, 2), NotCoprime);

    for (long long n : {3LL, 5LL, 7LL}) {
        MalcevQuotient q = finite_quotient(h, n);
        CHECK(q.group.order() == n * n * n);
        ChiefFactorReport rep = chief_factors(q);
        CHECK(rep.all_factors_cyclic_of_order_n);
        CHECK(rep.subgroup_sizes == std::vector<long long>{n, n * n, n * n * n});
    }

    // invariants of G(3) match the p = 3 extraspecial exponent-p group
    MalcevQuotient q3 = finite_quotient(h, 3);
    CHECK(validate_group_axioms(q3.group));
    CentralSeries cs = central_series(q3.group);
    CHECK(cs.nilpotency_class == 2);
    CHECK(center(q3.group).size() == 3);
    for (int e = 1; e < q3.group.order(); ++e) CHECK(q3.group.element_order(e) == 3);

    CHECK_THROWS_AS(finite_quotient(h, 101, MalcevQuotientOptions{200000, 5000}), CapExceeded);
}

TEST_CASE("projection is a homomorphism") {
    MalcevGroup h = builtin_malcev_group("heisenberg");
    MalcevQuotient q = finite_quotient(h, 5);
    std::mt19937 rng(77);
    for (int t = 0; t < 500; ++t) {
        MalcevElement a = elem({static_cast<std::int64_t>(rng() % 21) - 10, static_cast<std::int64_t>(rng() % 21) - 10, static_cast<std::int64_t>(rng() % 21) - 10});
        MalcevElement b = elem({static_cast<std::int64_t>(rng() % 21) - 10, static_cast<std::int64_t>(rng() % 21) - 10, static_cast<std::int64_t>(rng() % 21) - 10});
        CHECK(q.project(mal_mul(h, a, b)) == q.group.mul(q.project(a), q.project(b)));
    }
}

TEST_CASE("dc of the mod-3 Heisenberg quotient is 11/27") {
    MalcevGroup h = builtin_malcev_group("heisenberg");
    MalcevQuotient q = finite_quotient(h, 3);
    // exhaustive pair count oracle
    long long commuting = 0;
    for (int a = 0; a < 27; ++a) {
        for (int b = 0; b < 27; ++b) {
            if (q.group.mul(a, b) == q.group.mul(b, a)) ++commuting;
        }
    }
    CHECK(Rational(commuting, 27 * 27) == Rational(11, 27));
    CHECK(dc_k_exact(q.group, 1) == Rational(11, 27));
}

TEST_CASE("root densities") {
    MalcevGroup h = builtin_malcev_group("heisenberg");
    IntPolynomial x1 = IntPolynomial::variable(3, 0);
    for (long long n : {3LL, 5LL, 7LL, 11LL, 13LL}) {
        CHECK(root_density(h, x1, n) == Rational(1, n));
    }
    CHECK(root_density(h, IntPolynomial::constant(3, Rational(4)), 5) == Rational(0));
    CHECK(root_density(h, IntPolynomial(3), 5) == Rational(1));  // zero polynomial vanishes everywhere

    // commutation polynomial on pairs: density of commuting pairs in G(3)
    PolynomialParser pp("x2*w3 - x3*w2", {"x1", "x2", "x3", "w1", "w2", "w3"});
    IntPolynomial comm = pp.parse();
    CHECK(root_density(h, comm, 3) == Rational(11, 27));

    // single-variable bound: density <= deg(p)/n for a nonzero polynomial
    MalcevGroup z = builtin_malcev_group("zn(1)");
    PolynomialParser pq("x^2 - 1", {"x"});
    IntPolynomial sq = pq.parse();
    for (long long n : {3LL, 5LL, 7LL, 11LL}) {
        CHECK(root_density(z, sq, n) <= Rational(2, n));
    }

    CHECK_THROWS_AS(root_density(h, x1, 2), NotCoprime);
    IntPolynomial halfpoly = IntPolynomial::constant(3, Rational(1, 3));
    CHECK_THROWS_AS(root_density(h, halfpoly, 3), NotCoprime);
}

TEST_CASE("equation evaluation over malcev coordinates") {
    MalcevGroup h = builtin_malcev_group("heisenberg");
    using MWord = Word<MalcevElement>;
    MWord var = MWord::variable(1, 1);
    MalcevElement v = elem({2, -1, 3});
    CHECK(eval_equation(h, var, {v}) == v);

    MWord comm = MWord::simple_commutator_word(1);
    CHECK(eval_equation(h, comm, {elem({0, 0, 1}), elem({0, 1, 0})}) == elem({1, 0, 0}));
    // central first coordinate commutes with everything
    CHECK(eval_equation(h, comm, {elem({5, 0, 0}), elem({-2, 7, 4})}) == h.identity());
}

TEST_CASE("derivatives of maps") {
    MalcevGroup h = builtin_malcev_group("heisenberg");
    MalcevOps ops{&h};
    using Map = GroupMap<MalcevOps, MalcevOps>;

    Map constant{[&h](const MalcevElement&) { return elem({3, 1, 4}); }};
    Map dconst = derivative_map(ops, ops, constant, elem({1, 2, 3}));
    CHECK(dconst.f(elem({5, 5, 5})) == h.identity());

    // homomorphism x -> x restricted: derivative is the constant phi(u)
    Map identity_map{[](const MalcevElement& x) { return x; }};
    MalcevElement u = elem({0, 1, 2});
    Map did = derivative_map(ops, ops, identity_map, u);
    for (int t = 0; t < 5; ++t) {
        CHECK(did.f(elem({t, -t, 2 * t})) == u);
    }

    // squaring has degree 2: third derivatives vanish, some second does not
    Map square{[&h](const MalcevElement& x) { return h.mul(x, x); }};
    std::vector<DegreeSample<MalcevOps, MalcevOps>> s3;
    std::mt19937 rng(5);
    for (int t = 0; t < 20; ++t) {
        DegreeSample<MalcevOps, MalcevOps> s;
        for (int i = 0; i < 3; ++i) {
            s.directions.push_back(elem({static_cast<std::int64_t>(rng() % 5) - 2, static_cast<std::int64_t>(rng() % 5) - 2, static_cast<std::int64_t>(rng() % 5) - 2}));
        }
        s.at = elem({static_cast<std::int64_t>(rng() % 5) - 2, static_cast<std::int64_t>(rng() % 5) - 2, static_cast<std::int64_t>(rng() % 5) - 2});
        s3.push_back(std::move(s));
    }
    CHECK(degree_at_most(ops, ops, square, 2, s3).consistent);

    std::vector<DegreeSample<MalcevOps, MalcevOps>> s2;
    DegreeSample<MalcevOps, MalcevOps> w;
    w.directions = {elem({0, 1, 0}), elem({0, 0, 1})};
    w.at = elem({0, 0, 0});
    s2.push_back(w);
    CHECK(!degree_at_most(ops, ops, square, 1, s2).consistent);

    // nested derivative equals direct double difference
    Map dd = derivative_map(ops, ops, derivative_map(ops, ops, square, u), elem({1, 1, 1}));
    MalcevElement x = elem({2, 0, -1});
    MalcevElement u2 = elem({1, 1, 1});
    auto phi = [&](const MalcevElement& y) { return h.mul(y, y); };
    MalcevElement d1x = h.mul(h.inv(phi(x)), phi(h.mul(x, u)));
    MalcevElement d1xu2 = h.mul(h.inv(phi(h.mul(x, u2))), phi(h.mul(h.mul(x, u2), u)));
    CHECK(dd.f(x) == h.mul(h.inv(d1x), d1xu2));
}

TEST_CASE("degree check on coordinate projections") {
    MalcevGroup z = builtin_malcev_group("zn(2)");
    MalcevOps zops{&z};
    MalcevGroup z1 = builtin_malcev_group("zn(1)");
    MalcevOps z1ops{&z1};
    GroupMap<MalcevOps, MalcevOps> proj{[](const MalcevElement& v) {
        return MalcevElement{v[0], BigInt(0)};
    }};
    std::vector<DegreeSample<MalcevOps, MalcevOps>> samples;
    std::mt19937 rng(9);
    for (int t = 0; t < 10; ++t) {
        DegreeSample<MalcevOps, MalcevOps> s;
        s.directions = {MalcevElement{BigInt(static_cast<std::int64_t>(rng() % 9) - 4),
                                      BigInt(static_cast<std::int64_t>(rng() % 9) - 4)},
                        MalcevElement{BigInt(static_cast<std::int64_t>(rng() % 9) - 4),
                                      BigInt(static_cast<std::int64_t>(rng() % 9) - 4)}};
        s.at = MalcevElement{BigInt(1), BigInt(1)};
        samples.push_back(std::move(s));
    }
    CHECK(degree_at_most(zops, zops, proj, 1, samples).consistent);
    std::vector<DegreeSample<MalcevOps, MalcevOps>> one;
    DegreeSample<MalcevOps, MalcevOps> s0;
    s0.directions = {MalcevElement{BigInt(1), BigInt(0)}};
    s0.at = MalcevElement{BigInt(0), BigInt(0)};
    one.push_back(s0);
    CHECK(!degree_at_most(zops, zops, proj, 0, one).consistent);
    (void)z1ops;
}

TEST_CASE("word maps built from equations have the expected degree") {
    // phi(h) = w(h*g) * w(g)^-1 for the two-variable commutator word is
    // polynomial; its fourth derivatives vanish on samples
    MalcevGroup h = builtin_malcev_group("heisenberg");
    using TOps = TupleOps<MalcevOps>;
    MalcevOps base{&h};
    TOps dom{base, 2};
    MalcevOps cod{&h};
    std::vector<MalcevElement> g{elem({1, 2, 1}), elem({0, 1, 1})};
    Word<MalcevElement> wrd = Word<MalcevElement>::simple_commutator_word(1);
    GroupMap<TOps, MalcevOps> phi{[&h, g, wrd](const std::vector<MalcevElement>& x) {
        std::vector<MalcevElement> shifted(2);
        for (int i = 0; i < 2; ++i) shifted[i] = h.mul(x[i], g[i]);
        MalcevElement at_g = eval_equation(h, wrd, g);
        return h.mul(eval_equation(h, wrd, shifted), h.inv(at_g));
    }};
    std::mt19937 rng(13);
    auto rand_tuple = [&]() {
        std::vector<MalcevElement> t(2);
        for (auto& e : t) e = elem({static_cast<std::int64_t>(rng() % 5) - 2, static_cast<std::int64_t>(rng() % 5) - 2, static_cast<std::int64_t>(rng() % 5) - 2});
        return t;
    };
    std::vector<DegreeSample<TOps, MalcevOps>> samples;
    for (int t = 0; t < 10; ++t) {
        DegreeSample<TOps, MalcevOps> s;
        for (int i = 0; i < 4; ++i) s.directions.push_back(rand_tuple());
        s.at = rand_tuple();
        samples.push_back(std::move(s));
    }
    CHECK(degree_at_most(dom, cod, phi, 3, samples).consistent);
}

TEST_CASE("quotient sequences of dphi") {
    MalcevGroup h = builtin_malcev_group("heisenberg");
    using MWord = Word<MalcevElement>;

    std::vector<Rational> vals =
        dphi_quotient_sequence(h, MWord::variable(1, 1), {3, 5, 7});
    CHECK(vals == std::vector<Rational>{Rational(1, 27), Rational(1, 125), Rational(1, 343)});

    std::vector<Rational> comm =
        dphi_quotient_sequence(h, MWord::simple_commutator_word(1), {3, 9});
    CHECK(comm[0] == Rational(11, 27));
    CHECK(comm[1] <= comm[0]);
    // oracle: count solutions of ab = cd mod 9 over (Z/9)^4
    long long sols = 0;
    for (int a = 0; a < 9; ++a) {
        for (int b = 0; b < 9; ++b) {
            for (int c = 0; c < 9; ++c) {
                for (int d = 0; d < 9; ++d) {
                    if ((a * b - c * d) % 9 == 0) ++sols;
                }
            }
        }
    }
    CHECK(comm[1] == Rational(sols, 9LL * 9 * 9 * 9));
    CHECK(comm[1] == Rational(35, 243));

    // a word whose free variable has exponent sum 1 pins one coset per
    // quotient: x1 * c has density 1/n^m everywhere
    MalcevGroup z2 = builtin_malcev_group("zn(2)");
    MWord shifted = MWord::variable(1, 1) *
                    MWord::constant(1, MalcevElement{BigInt(3), BigInt(-1)});
    std::vector<Rational> zvals = dphi_quotient_sequence(z2, shifted, {2, 4, 8});
    CHECK(zvals == std::vector<Rational>{Rational(1, 4), Rational(1, 16), Rational(1, 64)});
}
