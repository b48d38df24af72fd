#pragma once

#include <cstdint>

namespace nilprob {

// splitmix64 stream; per-trial streams are derived by hashing (seed, trial),
// so results do not depend on any execution schedule
class RngStream {
   public:
    explicit RngStream(std::uint64_t state) : state_(state) {}

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static RngStream for_trial(std::uint64_t seed, std::uint64_t trial) {
        return RngStream(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ (trial * 0xbf58476d1ce4e5b9ULL)));
    }

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    // uniform in [0, n), unbiased by rejection
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

   private:
    std::uint64_t state_;
};

}  // namespace nilprob
