#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "nilprob/genericity.hpp"

using namespace nilprob;

namespace {

FreeWord word(std::initializer_list<int> ls) { return FreeWord{std::vector<int>(ls)}; }

}  // namespace

TEST_CASE("free word reduction") {
    CHECK(fw_mul(word({1}), word({-1})) == word({}));
    CHECK(fw_mul(word({1, 2}), word({-2, -1})) == word({}));
    CHECK(fw_mul(word({1, 2}), word({2})) == word({1, 2, 2}));
    CHECK(fw_inv(word({1, 2, -1})) == word({1, -2, -1}));
    CHECK(fw_distance(word({1}), word({1})) == 0);
    CHECK(fw_distance(word({1}), word({2})) == 2);
    CHECK(fw_label(word({1, -2, 1})) == "aBa");
}

TEST_CASE("ball sizes match enumeration for rank 2") {
    // enumerate reduced words of length <= 6 directly
    long long count = 1;
    std::vector<std::vector<int>> frontier{{}};
    for (int l = 1; l <= 6; ++l) {
        std::vector<std::vector<int>> next;
        for (const auto& w : frontier) {
            for (int cand : {1, -1, 2, -2}) {
                if (!w.empty() && w.back() == -cand) continue;
                auto nw = w;
                nw.push_back(cand);
                next.push_back(std::move(nw));
            }
        }
        count += static_cast<long long>(next.size());
        CHECK(BigInt(static_cast<std::int64_t>(next.size())) == sphere_size(2, l));
        frontier = std::move(next);
    }
    CHECK(BigInt(count) == ball_size(2, 6));
    // closed form: 1 + 2r((2r-1)^n - 1)/(2r-2)
    CHECK(ball_size(2, 6).to_i64() == 1 + 2 * (729 - 1));
}

TEST_CASE("stallings rank on known tuples") {
    CHECK(stallings_rank({word({1}), word({2})}) == 2);
    CHECK(stallings_rank({word({1}), word({1, 1})}) == 1);
    CHECK(stallings_rank({word({1, 1}), word({2, 2}), word({1, 2, 1, 2})}) == 3);
    CHECK(stallings_rank({word({1, 2}), word({1, 2})}) == 1);  // duplicates collapse
    CHECK(stallings_rank({word({})}) == 0);
    CHECK(stallings_rank({word({1, 2, -1})}) == 1);
    CHECK(stallings_rank({word({1}), word({2}), word({1, 2})}) == 2);
}

TEST_CASE("folding is confluent across insertion orders") {
    std::mt19937 rng(123);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<FreeWord> tuple;
        int count = 2 + static_cast<int>(rng() % 3);
        for (int i = 0; i < count; ++i) {
            FreeWord w;
            int len = 1 + static_cast<int>(rng() % 6);
            for (int j = 0; j < len; ++j) {
                int cand;
                do {
                    cand = (static_cast<int>(rng() % 2) + 1) * (rng() % 2 ? 1 : -1);
                } while (!w.letters.empty() && w.letters.back() == -cand);
                w.letters.push_back(cand);
            }
            tuple.push_back(std::move(w));
        }
        CoreGraph a = fold_loops(tuple);
        CHECK(a.is_folded());
        std::vector<FreeWord> shuffled = tuple;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        CoreGraph b = fold_loops(shuffled);
        CHECK(b.is_folded());
        CHECK(a.canonical_form() == b.canonical_form());
        CHECK(a.rank() == b.rank());
    }
}

TEST_CASE("delzant length condition") {
    CHECK(delzant_condition({word({1}), word({2})}, 1));
    CHECK(!delzant_condition({word({1}), word({1, 2})}, 1));  // sufficient, not necessary
    CHECK(stallings_rank({word({1}), word({1, 2})}) == 2);
    CHECK(!delzant_condition({word({})}, 1));
    CHECK(!delzant_condition({word({1}), word({})}, 1));
    CHECK(delzant_condition({word({1, 1}), word({2, 2})}, 2));
    CHECK_THROWS_AS(delzant_condition({word({1})}, 0), PreconditionFailed);
}

TEST_CASE("delzant condition is sound for freeness on sampled tuples") {
    FreeBallSampler ball(2, 8);
    for (int t = 0; t < 2000; ++t) {
        RngStream rng = RngStream::for_trial(5150, t);
        std::vector<FreeWord> tuple{ball.sample(rng), ball.sample(rng)};
        if (delzant_condition(tuple, 1)) CHECK(stallings_rank(tuple) == 2);
    }
}

TEST_CASE("gromov products are exact") {
    FreeWord base{};
    CHECK(gromov_product(base, word({1, 2}), word({1, -2})) == Rational(1));
    CHECK(gromov_product(base, word({1}), word({2})) == Rational(0));
    CHECK(gromov_product(base, word({1, 2, 1}), word({1, 2})) == Rational(2));
    CHECK(gromov_product(word({1}), word({1, 2}), word({1, -2, -2})) == Rational(0));
    // word lengths give even distance sums, so the half never materializes
    std::mt19937 rng(4);
    FreeBallSampler ball(2, 6);
    for (int t = 0; t < 200; ++t) {
        RngStream rs = RngStream::for_trial(606, t);
        Rational p = gromov_product(ball.sample(rs), ball.sample(rs), ball.sample(rs));
        CHECK(p.is_integer());
    }
}

TEST_CASE("delzant walk bound") {
    // geodesic ray x^i with a = 1
    std::vector<FreeWord> ray;
    FreeWord cur{};
    for (int i = 0; i < 8; ++i) {
        ray.push_back(cur);
        cur = fw_mul(cur, word({1}));
    }
    CHECK(delzant_walk_bound_check(ray, 1));

    // partial products of a reduced word over a condition-passing tuple:
    // |w|_X >= length of w over the tuple alphabet
    std::vector<FreeWord> z{word({1, 1}), word({2, 2})};
    CHECK(delzant_condition(z, 2));
    std::mt19937 rng(9);
    std::vector<FreeWord> pts{FreeWord{}};
    FreeWord acc{};
    int prev = 0;
    for (int i = 0; i < 10; ++i) {
        int pick;
        do {
            pick = (static_cast<int>(rng() % 2) + 1) * (rng() % 2 ? 1 : -1);
        } while (pick == -prev);
        prev = pick;
        FreeWord step = pick > 0 ? z[pick - 1] : fw_inv(z[-pick - 1]);
        acc = fw_mul(acc, step);
        pts.push_back(acc);
    }
    CHECK(delzant_walk_bound_check(pts, 2));
    CHECK(fw_length(pts.back()) >= 10);  // |w|_X >= word length over the tuple

    std::vector<FreeWord> bad{FreeWord{}, word({1}), word({})};
    CHECK_THROWS_AS(delzant_walk_bound_check(bad, 1), PreconditionFailed);
}

TEST_CASE("genericity experiment on single words from small balls") {
    // four of the five elements of the rank-2 radius-1 ball generate freely
    GenericityResult r = genericity_experiment(1, 1, 50000, 99, 2);
    CHECK(r.sound);
    CHECK(r.delzant_frac() <= r.basis_frac());
    CHECK(std::abs(r.basis_frac() - 0.8) < 0.01);

    // same picture inside the rank-1 ball {1, a, a^-1}: all but the identity
    GenericityResult r1 = genericity_experiment(1, 1, 50000, 99);
    CHECK(r1.sound);
    CHECK(std::abs(r1.basis_frac() - 2.0 / 3.0) < 0.01);
}

TEST_CASE("forced duplicate tuples are counted as non-bases") {
    FreeWord g = word({1, 2, 1});
    CHECK(stallings_rank({g, g}) == 1);
}

TEST_CASE("genericity experiment fractions rise with the radius") {
    GenericityResult r5 = genericity_experiment(2, 5, 3000, 12345);
    GenericityResult r10 = genericity_experiment(2, 10, 3000, 12345);
    CHECK(r5.sound);
    CHECK(r10.sound);
    CHECK(r5.delzant_frac() <= r5.basis_frac());
    CHECK(r10.delzant_frac() <= r10.basis_frac());
    CHECK(r5.basis_frac() <= r10.basis_frac());
}
