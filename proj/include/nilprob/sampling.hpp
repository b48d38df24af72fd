#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "nilprob/errors.hpp"
#include "nilprob/free_words.hpp"
#include "nilprob/malcev.hpp"
#include "nilprob/rng.hpp"
#include "nilprob/words.hpp"

namespace nilprob {

struct EstimateResult {
    double point = 0;
    std::uint64_t trials = 0;
    double ci_low = 0;
    double ci_high = 0;
    std::uint64_t seed = 0;
    std::uint64_t successes = 0;
};

// 95% Wilson score interval
inline EstimateResult make_estimate(std::uint64_t successes, std::uint64_t trials,
                                    std::uint64_t seed) {
    if (trials == 0) throw PreconditionFailed("estimates need at least one trial");
    const double z = 1.959963984540054;
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double centre = (p + z2 / (2 * n)) / denom;
    double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    EstimateResult r;
    r.point = p;
    r.trials = trials;
    r.ci_low = successes == 0 ? 0.0 : std::max(0.0, centre - half);
    r.ci_high = successes == trials ? 1.0 : std::min(1.0, centre + half);
    r.seed = seed;
    r.successes = successes;
    return r;
}

// symmetric finitely supported step measure with positive identity weight
template <class Ops>
struct StepDistribution {
    std::vector<std::pair<typename Ops::Element, double>> support;

    void validate(const Ops& ops) const {
        double total = 0;
        bool has_id = false;
        for (const auto& [e, w] : support) {
            if (w <= 0) throw PreconditionFailed("step weights must be positive");
            total += w;
            if (ops.eq(e, ops.id())) has_id = true;
        }
        if (std::abs(total - 1.0) > 1e-9) throw PreconditionFailed("step weights must sum to 1");
        if (!has_id) throw PreconditionFailed("step distribution must give the identity positive weight");
        for (const auto& [e, w] : support) {
            typename Ops::Element ei = ops.inv(e);
            double wi = -1;
            for (const auto& [f, v] : support) {
                if (ops.eq(f, ei)) wi = v;
            }
            if (std::abs(wi - w) > 1e-9)
                throw PreconditionFailed("step distribution must be symmetric");
        }
    }

    // lazy uniform measure on {1} and the generators with their inverses
    static StepDistribution lazy_uniform(const Ops& ops,
                                         const std::vector<typename Ops::Element>& gens) {
        StepDistribution d;
        double w = 1.0 / (2.0 * gens.size() + 1.0);
        d.support.push_back({ops.id(), w});
        for (const auto& g : gens) {
            d.support.push_back({g, w});
            d.support.push_back({ops.inv(g), w});
        }
        return d;
    }

    const typename Ops::Element& draw(RngStream& rng) const {
        double u = rng.unit();
        double acc = 0;
        for (const auto& [e, w] : support) {
            acc += w;
            if (u < acc) return e;
        }
        return support.back().first;
    }
};

// product of `steps` independent draws from the step measure
template <class Ops>
class RandomWalkSampler {
   public:
    RandomWalkSampler(Ops ops, StepDistribution<Ops> steps, int length)
        : ops_(ops), steps_(std::move(steps)), length_(length) {
        if (length_ < 0) throw PreconditionFailed("walk length must be nonnegative");
        steps_.validate(ops_);
    }

    using Element = typename Ops::Element;

    Element sample(RngStream& rng) const {
        Element acc = ops_.id();
        for (int i = 0; i < length_; ++i) acc = ops_.mul(acc, steps_.draw(rng));
        return acc;
    }

    const Ops& ops() const { return ops_; }
    int length() const { return length_; }

   private:
    Ops ops_;
    StepDistribution<Ops> steps_;
    int length_;
};

// uniform coordinates with |v_i| <= side^{weight_i}
class FolnerBoxSampler {
   public:
    FolnerBoxSampler(const MalcevGroup& g, long long side, std::vector<int> weights)
        : group_(&g), side_(side), weights_(std::move(weights)) {
        if (static_cast<int>(weights_.size()) != g.dim())
            throw PreconditionFailed("one weight per coordinate");
        if (side_ < 1) throw PreconditionFailed("box side must be positive");
        for (int w : weights_) {
            if (w < 1) throw PreconditionFailed("weights must be positive");
        }
    }

    using Element = MalcevElement;

    long long bound(int i) const {
        long long b = 1;
        for (int t = 0; t < weights_[i]; ++t) b *= side_;
        return b;
    }

    Element sample(RngStream& rng) const {
        MalcevElement v(group_->dim());
        for (int i = 0; i < group_->dim(); ++i) {
            long long b = bound(i);
            v[i] = BigInt(static_cast<std::int64_t>(rng.below(2 * b + 1)) - b);
        }
        return v;
    }

   private:
    const MalcevGroup* group_;
    long long side_;
    std::vector<int> weights_;
};

// exact uniform sampling over the radius-n ball of a free group: pick the
// length with probability |S(l)|/|B(n)|, then a uniform reduced word
class FreeBallSampler {
   public:
    FreeBallSampler(int rank, int radius) : rank_(rank), radius_(radius) {
        if (rank < 1 || radius < 0) throw PreconditionFailed("rank >= 1 and radius >= 0");
        BigInt total = ball_size(rank, radius);
        if (!total.fits_i64()) throw CapExceeded("ball size exceeds 63 bits");
        cumulative_.push_back(1);
        for (int l = 1; l <= radius; ++l) {
            cumulative_.push_back(cumulative_.back() + sphere_size(rank, l).to_i64());
        }
    }

    using Element = FreeWord;

    Element sample(RngStream& rng) const {
        std::uint64_t u = rng.below(static_cast<std::uint64_t>(cumulative_.back()));
        int length = 0;
        while (u >= static_cast<std::uint64_t>(cumulative_[length])) ++length;
        FreeWord w;
        w.letters.reserve(length);
        for (int i = 0; i < length; ++i) {
            if (i == 0) {
                std::uint64_t c = rng.below(2 * static_cast<std::uint64_t>(rank_));
                int letter = static_cast<int>(c / 2) + 1;
                w.letters.push_back(c % 2 ? -letter : letter);
            } else {
                std::uint64_t c = rng.below(2 * static_cast<std::uint64_t>(rank_) - 1);
                int banned = -w.letters.back();  // skip the cancelling letter
                int pick = 0;
                std::uint64_t seen = 0;
                for (int cand = 1; cand <= rank_ && !pick; ++cand) {
                    for (int sgn : {1, -1}) {
                        int letter = sgn * cand;
                        if (letter == banned) continue;
                        if (seen == c) {
                            pick = letter;
                            break;
                        }
                        ++seen;
                    }
                }
                w.letters.push_back(pick);
            }
        }
        return w;
    }

    int rank() const { return rank_; }
    int radius() const { return radius_; }

   private:
    int rank_;
    int radius_;
    std::vector<std::int64_t> cumulative_;
};

// one trial of the (k+1)-tuple commutator test; exposed so that tests can
// re-run trials in any order
template <class Ops, class Sampler>
bool commutator_trial(const Ops& ops, const Sampler& sampler,
                      const typename Ops::Element& target, int k, std::uint64_t seed,
                      std::uint64_t trial) {
    RngStream rng = RngStream::for_trial(seed, trial);
    typename Ops::Element acc = sampler.sample(rng);
    for (int i = 1; i <= k; ++i) {
        typename Ops::Element x = sampler.sample(rng);
        acc = ops.mul(ops.mul(ops.inv(acc), ops.inv(x)), ops.mul(acc, x));
    }
    return ops.eq(acc, target);
}

template <class Ops, class Sampler>
EstimateResult estimate_P_k(const Ops& ops, const Sampler& sampler,
                            const typename Ops::Element& target, int k, std::uint64_t trials,
                            std::uint64_t seed) {
    if (trials < 1) throw PreconditionFailed("need at least one trial");
    std::uint64_t successes = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        if (commutator_trial(ops, sampler, target, k, seed, t)) ++successes;
    }
    return make_estimate(successes, trials, seed);
}

template <class Ops, class Sampler>
EstimateResult estimate_dc_k(const Ops& ops, const Sampler& sampler, int k, std::uint64_t trials,
                             std::uint64_t seed) {
    return estimate_P_k(ops, sampler, ops.id(), k, trials, seed);
}

template <class Ops, class Sampler>
bool dphi_trial(const Ops& ops, const Sampler& sampler, const Word<typename Ops::Element>& w,
                std::uint64_t seed, std::uint64_t trial) {
    RngStream rng = RngStream::for_trial(seed, trial);
    std::vector<typename Ops::Element> assignment;
    assignment.reserve(w.arity());
    for (int i = 0; i < w.arity(); ++i) assignment.push_back(sampler.sample(rng));
    return ops.eq(evaluate_word(ops, w, std::span<const typename Ops::Element>(assignment)),
                  ops.id());
}

template <class Ops, class Sampler>
EstimateResult estimate_dphi(const Ops& ops, const Sampler& sampler,
                             const Word<typename Ops::Element>& w, std::uint64_t trials,
                             std::uint64_t seed) {
    if (trials < 1) throw PreconditionFailed("need at least one trial");
    std::uint64_t successes = 0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        if (dphi_trial(ops, sampler, w, seed, t)) ++successes;
    }
    return make_estimate(successes, trials, seed);
}

}  // namespace nilprob
