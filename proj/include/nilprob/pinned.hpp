#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "nilprob/rational.hpp"

// Frozen reference values for the verification suite. Exact rationals were
// produced by the enumeration oracles in tests/, the statistical targets by
// pilot runs of the samplers at the seeds recorded here; the suite re-derives
// the oracle values and checks the pinned copies against them.
namespace nilprob::pinned {

// dc^1 of the three reference groups (tuple-enumerator oracle)
inline Rational dc1_sym3() { return Rational(1, 2); }
inline Rational dc1_dihedral8() { return Rational(5, 8); }
inline Rational dc1_sym4() { return Rational(5, 24); }

// mod-n commutation densities of the Heisenberg pair polynomial
// (enumeration oracle over (Z/n)^4)
inline std::vector<std::pair<long long, Rational>> heisenberg_commutation_densities() {
    return {{3, Rational(11, 27)},
            {5, Rational(29, 125)},
            {7, Rational(55, 343)},
            {11, Rational(131, 1331)},
            {13, Rational(181, 2197)}};
}

// dc^1 of the mod-3 and mod-9 Heisenberg quotients (enumeration oracle)
inline Rational dc1_heisenberg_mod3() { return Rational(11, 27); }
inline Rational dc1_heisenberg_mod9() { return Rational(35, 243); }

// lazy generator walk on the Heisenberg group: 200 steps, 1e5 trials, seed 42
inline constexpr std::uint64_t walk_seed = 42;
inline constexpr std::uint64_t walk_trials = 100000;
inline constexpr int walk_steps = 200;
inline constexpr double walk_target = 0.01325;  // pilot point estimate

// free-group genericity sweep: rank 2, 1e4 trials per radius, seed 7
inline constexpr std::uint64_t generic_seed = 7;
inline constexpr std::uint64_t generic_trials = 10000;
inline const int generic_radii[4] = {5, 10, 15, 20};
inline constexpr double generic_basis_threshold = 0.99;  // pilot basis fraction at radius 20

}  // namespace nilprob::pinned
