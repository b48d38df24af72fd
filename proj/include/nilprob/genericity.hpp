#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nilprob/errors.hpp"
#include "nilprob/free_words.hpp"
#include "nilprob/rational.hpp"
#include "nilprob/rng.hpp"
#include "nilprob/sampling.hpp"
#include "nilprob/stallings.hpp"

namespace nilprob {

// |ab| >= max(|a|,|b|) + d0 over the symmetrized tuple with a != b^-1; a
// sufficient condition for the tuple to be a free basis (free groups have
// delta = 0, so d0 = 1 suffices). The 2r symmetrized entries must be pairwise
// distinct, so tuples with repeats, mutual inverses or the identity fail and
// the condition stays sound for tuples rather than sets.
inline bool delzant_condition(const std::vector<FreeWord>& tuple, int d0 = 1) {
    if (d0 < 1) throw PreconditionFailed("d0 must be at least 1");
    for (const FreeWord& g : tuple) {
        if (fw_length(g) == 0) return false;
    }
    std::vector<FreeWord> sym;
    for (const FreeWord& g : tuple) {
        sym.push_back(g);
        sym.push_back(fw_inv(g));
    }
    for (std::size_t i = 0; i < sym.size(); ++i) {
        for (std::size_t j = i + 1; j < sym.size(); ++j) {
            if (sym[i] == sym[j]) return false;
        }
    }
    for (const FreeWord& a : sym) {
        for (const FreeWord& b : sym) {
            if (fw_inv(b) == a) continue;
            if (fw_length(fw_mul(a, b)) < std::max(fw_length(a), fw_length(b)) + d0) return false;
        }
    }
    return true;
}

// (y.z)_x = (d(x,y) + d(x,z) - d(y,z)) / 2, kept exact
inline Rational gromov_product(const FreeWord& x, const FreeWord& y, const FreeWord& z) {
    return Rational(fw_distance(x, y) + fw_distance(x, z) - fw_distance(y, z), 2);
}

// Hypothesis: d(x_{n+2}, x_n) >= max(d(x_{n+2},x_{n+1}), d(x_{n+1},x_n)) + a
// (delta = 0); conclusion checked: d(x_n, x_m) >= a|m-n| for all pairs.
inline bool delzant_walk_bound_check(const std::vector<FreeWord>& points, int a) {
    if (a < 1) throw PreconditionFailed("a must be at least 1");
    for (std::size_t n = 0; n + 2 < points.size(); ++n) {
        int d02 = fw_distance(points[n], points[n + 2]);
        int d01 = fw_distance(points[n], points[n + 1]);
        int d12 = fw_distance(points[n + 1], points[n + 2]);
        if (d02 < std::max(d01, d12) + a)
            throw PreconditionFailed("walk hypothesis fails at index " + std::to_string(n));
    }
    for (std::size_t n = 0; n < points.size(); ++n) {
        for (std::size_t m = n + 1; m < points.size(); ++m) {
            if (fw_distance(points[n], points[m]) < a * static_cast<int>(m - n)) return false;
        }
    }
    return true;
}

struct GenericityResult {
    int rank = 0;
    int radius = 0;
    std::uint64_t trials = 0;
    std::uint64_t delzant_count = 0;
    std::uint64_t basis_count = 0;
    bool sound = true;  // no sampled tuple passed the length condition without being a basis
    std::uint64_t seed = 0;

    double delzant_frac() const { return static_cast<double>(delzant_count) / trials; }
    double basis_frac() const { return static_cast<double>(basis_count) / trials; }
};

// Sample r-tuples with independent uniform coordinates from the radius-n ball
// of the ambient free group (rank `ambient_rank`, by default the tuple size)
// and measure how often the length condition holds and how often the tuple
// freely generates a rank-r subgroup (exact, via folding).
inline GenericityResult genericity_experiment(int rank, int radius, std::uint64_t trials,
                                              std::uint64_t seed, int ambient_rank = 0) {
    if (trials < 1) throw PreconditionFailed("need at least one trial");
    if (ambient_rank == 0) ambient_rank = rank;
    FreeBallSampler sampler(ambient_rank, radius);
    GenericityResult res;
    res.rank = rank;
    res.radius = radius;
    res.trials = trials;
    res.seed = seed;
    for (std::uint64_t t = 0; t < trials; ++t) {
        RngStream rng = RngStream::for_trial(seed, t);
        std::vector<FreeWord> tuple;
        tuple.reserve(rank);
        for (int i = 0; i < rank; ++i) tuple.push_back(sampler.sample(rng));
        bool delzant = delzant_condition(tuple, 1);
        bool basis = stallings_rank(tuple) == rank;
        if (delzant) ++res.delzant_count;
        if (basis) ++res.basis_count;
        if (delzant && !basis) res.sound = false;
    }
    return res;
}

}  // namespace nilprob
