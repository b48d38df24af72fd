#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <vector>

#include "nilprob/bigint.hpp"
#include "nilprob/errors.hpp"

namespace nilprob {

// Reduced word in a free group: letters +i / -i for generator i (1-based),
// with no adjacent cancelling pair.
struct FreeWord {
    std::vector<int> letters;

    friend bool operator==(const FreeWord& a, const FreeWord& b) { return a.letters == b.letters; }
    friend bool operator<(const FreeWord& a, const FreeWord& b) { return a.letters < b.letters; }
};

inline int fw_length(const FreeWord& w) { return static_cast<int>(w.letters.size()); }

inline FreeWord fw_mul(const FreeWord& a, const FreeWord& b) {
    FreeWord r = a;
    for (int l : b.letters) {
        if (!r.letters.empty() && r.letters.back() == -l) {
            r.letters.pop_back();
        } else {
            r.letters.push_back(l);
        }
    }
    return r;
}

inline FreeWord fw_inv(const FreeWord& a) {
    FreeWord r;
    r.letters.reserve(a.letters.size());
    for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it) r.letters.push_back(-*it);
    return r;
}

inline std::string fw_label(const FreeWord& w) {
    if (w.letters.empty()) return "1";
    std::string s;
    for (int l : w.letters) {
        char c = static_cast<char>('a' + (l > 0 ? l : -l) - 1);
        s += l > 0 ? c : static_cast<char>(std::toupper(c));
    }
    return s;
}

struct FreeGroupOps {
    int rank;
    using Element = FreeWord;
    Element id() const { return FreeWord{}; }
    Element mul(const Element& a, const Element& b) const { return fw_mul(a, b); }
    Element inv(const Element& a) const { return fw_inv(a); }
    bool eq(const Element& a, const Element& b) const { return a == b; }
};

// |S(l)| = 2r(2r-1)^{l-1} reduced words of length l, |S(0)| = 1
inline BigInt sphere_size(int rank, int length) {
    if (length == 0) return BigInt(1);
    return BigInt(2 * rank) * BigInt::pow(BigInt(2 * rank - 1), static_cast<std::uint64_t>(length) - 1);
}

inline BigInt ball_size(int rank, int radius) {
    BigInt total(1);
    for (int l = 1; l <= radius; ++l) total += sphere_size(rank, l);
    return total;
}

// word metric distance d(u,v) = |u^-1 v|
inline int fw_distance(const FreeWord& u, const FreeWord& v) {
    return fw_length(fw_mul(fw_inv(u), v));
}

}  // namespace nilprob
