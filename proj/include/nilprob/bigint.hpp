#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "nilprob/errors.hpp"

namespace nilprob {

// Arbitrary-precision signed integer. Magnitude is a little-endian base-2^32
// limb array; values up to four limbs live inline so the counting workloads
// (which rarely leave 128 bits) do not touch the heap.
class BigInt {
   public:
    BigInt() = default;

    BigInt(std::int64_t v) {  // NOLINT: implicit by design
        assign_i64(v);
    }

    static BigInt from_string(const std::string& s) {
        BigInt r;
        std::size_t i = 0;
        bool neg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
            neg = (s[i] == '-');
            ++i;
        }
        if (i >= s.size()) throw Error("BigInt: empty numeral");
        for (; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') throw Error("BigInt: bad digit in '" + s + "'");
            r.mul_small_add(10, static_cast<std::uint32_t>(s[i] - '0'));
        }
        if (neg && r.n_ != 0) r.sign_ = -1;
        return r;
    }

    bool is_zero() const noexcept { return n_ == 0; }
    int sign() const noexcept { return sign_; }

    bool fits_i64() const noexcept {
        if (n_ > 2) return false;
        std::uint64_t m = mag_u64();
        if (sign_ >= 0) return m <= 0x7fffffffffffffffULL;
        return m <= 0x8000000000000000ULL;
    }

    std::int64_t to_i64() const {
        if (!fits_i64()) throw Error("BigInt: value does not fit in 64 bits");
        std::uint64_t m = mag_u64();
        if (sign_ < 0) return static_cast<std::int64_t>(~m + 1);
        return static_cast<std::int64_t>(m);
    }

    double to_double() const noexcept {
        double m = 0.0;
        const std::uint32_t* d = limbs();
        for (std::uint32_t i = n_; i-- > 0;) m = m * 4294967296.0 + static_cast<double>(d[i]);
        return sign_ < 0 ? -m : m;
    }

    friend bool operator==(const BigInt& a, const BigInt& b) noexcept {
        return a.sign_ == b.sign_ && cmp_mag(a.limbs(), a.n_, b.limbs(), b.n_) == 0;
    }
    friend bool operator!=(const BigInt& a, const BigInt& b) noexcept { return !(a == b); }
    friend bool operator<(const BigInt& a, const BigInt& b) noexcept { return cmp(a, b) < 0; }
    friend bool operator>(const BigInt& a, const BigInt& b) noexcept { return cmp(a, b) > 0; }
    friend bool operator<=(const BigInt& a, const BigInt& b) noexcept { return cmp(a, b) <= 0; }
    friend bool operator>=(const BigInt& a, const BigInt& b) noexcept { return cmp(a, b) >= 0; }

    static int cmp(const BigInt& a, const BigInt& b) noexcept {
        if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
        int c = cmp_mag(a.limbs(), a.n_, b.limbs(), b.n_);
        return a.sign_ < 0 ? -c : c;
    }

    BigInt operator-() const {
        BigInt r = *this;
        r.sign_ = static_cast<std::int8_t>(-r.sign_);
        return r;
    }

    BigInt abs() const {
        BigInt r = *this;
        if (r.sign_ < 0) r.sign_ = 1;
        return r;
    }

    friend BigInt operator+(const BigInt& a, const BigInt& b) { return add_signed(a, b, false); }
    friend BigInt operator-(const BigInt& a, const BigInt& b) { return add_signed(a, b, true); }

    friend BigInt operator*(const BigInt& a, const BigInt& b) {
        if (a.n_ == 0 || b.n_ == 0) return BigInt();
        BigInt r;
        r.set_size(a.n_ + b.n_);
        mul_mag(a.limbs(), a.n_, b.limbs(), b.n_, r.mutable_limbs());
        r.trim();
        r.sign_ = static_cast<std::int8_t>(a.sign_ * b.sign_);
        return r;
    }

    BigInt& operator+=(const BigInt& o) { return *this = *this + o; }
    BigInt& operator-=(const BigInt& o) { return *this = *this - o; }
    BigInt& operator*=(const BigInt& o) { return *this = *this * o; }

    // Truncated division: quotient rounds toward zero, remainder has the
    // dividend's sign. Throws on zero divisor.
    static std::pair<BigInt, BigInt> divmod(const BigInt& a, const BigInt& b) {
        if (b.n_ == 0) throw Error("BigInt: division by zero");
        int c = cmp_mag(a.limbs(), a.n_, b.limbs(), b.n_);
        if (c < 0) return {BigInt(), a};
        BigInt q, r;
        if (b.n_ == 1) {
            std::uint32_t d = b.limbs()[0];
            q.set_size(a.n_);
            std::uint64_t rem = 0;
            const std::uint32_t* ad = a.limbs();
            std::uint32_t* qd = q.mutable_limbs();
            for (std::uint32_t i = a.n_; i-- > 0;) {
                std::uint64_t cur = (rem << 32) | ad[i];
                qd[i] = static_cast<std::uint32_t>(cur / d);
                rem = cur % d;
            }
            q.trim();
            r = BigInt(static_cast<std::int64_t>(rem));
        } else {
            divmod_mag(a, b, q, r);
        }
        q.sign_ = q.n_ == 0 ? 0 : static_cast<std::int8_t>(a.sign_ * b.sign_);
        r.sign_ = r.n_ == 0 ? 0 : a.sign_;
        return {q, r};
    }

    friend BigInt operator/(const BigInt& a, const BigInt& b) { return divmod(a, b).first; }
    friend BigInt operator%(const BigInt& a, const BigInt& b) { return divmod(a, b).second; }

    static BigInt gcd(BigInt a, BigInt b) {
        a.sign_ = a.n_ ? 1 : 0;
        b.sign_ = b.n_ ? 1 : 0;
        while (!b.is_zero()) {
            BigInt r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    static BigInt lcm(const BigInt& a, const BigInt& b) {
        if (a.is_zero() || b.is_zero()) return BigInt();
        BigInt g = gcd(a, b);
        return (a.abs() / g) * b.abs();
    }

    static BigInt pow(const BigInt& base, std::uint64_t e) {
        BigInt r(1), b = base;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }

    std::string to_string() const {
        if (n_ == 0) return "0";
        std::vector<std::uint32_t> chunks;  // base 1e9, little-endian
        BigInt t = abs();
        while (!t.is_zero()) {
            std::uint64_t rem = 0;
            std::uint32_t* d = t.mutable_limbs();
            for (std::uint32_t i = t.n_; i-- > 0;) {
                std::uint64_t cur = (rem << 32) | d[i];
                d[i] = static_cast<std::uint32_t>(cur / 1000000000u);
                rem = cur % 1000000000u;
            }
            t.trim();
            chunks.push_back(static_cast<std::uint32_t>(rem));
        }
        std::string s = sign_ < 0 ? "-" : "";
        s += std::to_string(chunks.back());
        for (std::size_t i = chunks.size() - 1; i-- > 0;) {
            std::string part = std::to_string(chunks[i]);
            s += std::string(9 - part.size(), '0') + part;
        }
        return s;
    }

    std::size_t hash() const noexcept {
        std::uint64_t h = sign_ < 0 ? 0x9e3779b97f4a7c15ULL : 0x243f6a8885a308d3ULL;
        const std::uint32_t* d = limbs();
        for (std::uint32_t i = 0; i < n_; ++i) {
            h ^= d[i];
            h *= 0x100000001b3ULL;
        }
        return static_cast<std::size_t>(h);
    }

   private:
    static constexpr std::uint32_t kInl = 4;

    std::array<std::uint32_t, kInl> inl_{};
    std::vector<std::uint32_t> heap_;  // engaged iff capacity exceeded kInl
    std::uint32_t n_ = 0;              // limb count, top limb nonzero
    std::int8_t sign_ = 0;             // 0 iff n_ == 0

    const std::uint32_t* limbs() const noexcept { return heap_.empty() ? inl_.data() : heap_.data(); }
    std::uint32_t* mutable_limbs() noexcept { return heap_.empty() ? inl_.data() : heap_.data(); }

    void set_size(std::uint32_t n) {
        if (n > kInl && heap_.size() < n) {
            bool was_inline = heap_.empty();
            heap_.resize(n, 0);
            if (was_inline) std::copy(inl_.begin(), inl_.begin() + n_, heap_.begin());
        }
        std::uint32_t* d = mutable_limbs();
        for (std::uint32_t i = n_; i < n; ++i) d[i] = 0;
        n_ = n;
    }

    void trim() noexcept {
        const std::uint32_t* d = limbs();
        while (n_ > 0 && d[n_ - 1] == 0) --n_;
        if (n_ == 0) sign_ = 0;
    }

    void assign_i64(std::int64_t v) {
        heap_.clear();
        if (v == 0) {
            n_ = 0;
            sign_ = 0;
            return;
        }
        sign_ = v < 0 ? -1 : 1;
        std::uint64_t m = v < 0 ? ~static_cast<std::uint64_t>(v) + 1 : static_cast<std::uint64_t>(v);
        inl_[0] = static_cast<std::uint32_t>(m);
        inl_[1] = static_cast<std::uint32_t>(m >> 32);
        n_ = inl_[1] ? 2 : 1;
    }

    std::uint64_t mag_u64() const noexcept {
        const std::uint32_t* d = limbs();
        std::uint64_t m = n_ > 0 ? d[0] : 0;
        if (n_ > 1) m |= static_cast<std::uint64_t>(d[1]) << 32;
        return m;
    }

    // this = this*f + carry, magnitude only
    void mul_small_add(std::uint32_t f, std::uint32_t add) {
        std::uint64_t carry = add;
        std::uint32_t* d = mutable_limbs();
        for (std::uint32_t i = 0; i < n_; ++i) {
            std::uint64_t cur = static_cast<std::uint64_t>(d[i]) * f + carry;
            d[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        if (carry) {
            set_size(n_ + 1);
            mutable_limbs()[n_ - 1] = static_cast<std::uint32_t>(carry);
        }
        if (n_ && sign_ == 0) sign_ = 1;
        trim();
    }

    static int cmp_mag(const std::uint32_t* a, std::uint32_t an, const std::uint32_t* b,
                       std::uint32_t bn) noexcept {
        if (an != bn) return an < bn ? -1 : 1;
        for (std::uint32_t i = an; i-- > 0;) {
            if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
        }
        return 0;
    }

    static std::uint32_t add_mag(const std::uint32_t* a, std::uint32_t an, const std::uint32_t* b,
                                 std::uint32_t bn, std::uint32_t* out) noexcept {
        if (an < bn) {
            std::swap(a, b);
            std::swap(an, bn);
        }
        std::uint64_t carry = 0;
        for (std::uint32_t i = 0; i < bn; ++i) {
            std::uint64_t cur = static_cast<std::uint64_t>(a[i]) + b[i] + carry;
            out[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        for (std::uint32_t i = bn; i < an; ++i) {
            std::uint64_t cur = static_cast<std::uint64_t>(a[i]) + carry;
            out[i] = static_cast<std::uint32_t>(cur);
            carry = cur >> 32;
        }
        out[an] = static_cast<std::uint32_t>(carry);
        return an + (carry ? 1 : 0);
    }

    // requires mag(a) >= mag(b)
    static std::uint32_t sub_mag(const std::uint32_t* a, std::uint32_t an, const std::uint32_t* b,
                                 std::uint32_t bn, std::uint32_t* out) noexcept {
        std::int64_t borrow = 0;
        for (std::uint32_t i = 0; i < an; ++i) {
            std::int64_t cur = static_cast<std::int64_t>(a[i]) - (i < bn ? b[i] : 0) - borrow;
            borrow = cur < 0 ? 1 : 0;
            if (cur < 0) cur += (1LL << 32);
            out[i] = static_cast<std::uint32_t>(cur);
        }
        while (an > 0 && out[an - 1] == 0) --an;
        return an;
    }

    static void mul_mag(const std::uint32_t* a, std::uint32_t an, const std::uint32_t* b,
                        std::uint32_t bn, std::uint32_t* out) noexcept {
        std::fill(out, out + an + bn, 0u);
        for (std::uint32_t i = 0; i < an; ++i) {
            std::uint64_t carry = 0;
            std::uint64_t ai = a[i];
            for (std::uint32_t j = 0; j < bn; ++j) {
                std::uint64_t cur = ai * b[j] + out[i + j] + carry;
                out[i + j] = static_cast<std::uint32_t>(cur);
                carry = cur >> 32;
            }
            out[i + bn] = static_cast<std::uint32_t>(carry);
        }
    }

    static BigInt add_signed(const BigInt& a, const BigInt& b, bool negate_b) {
        int bs = negate_b ? -b.sign_ : b.sign_;
        BigInt r;
        if (a.sign_ == 0) {
            r = b;
            r.sign_ = static_cast<std::int8_t>(bs);
            return r;
        }
        if (bs == 0) return a;
        if (a.sign_ == bs) {
            r.set_size(std::max(a.n_, b.n_) + 1);
            r.n_ = add_mag(a.limbs(), a.n_, b.limbs(), b.n_, r.mutable_limbs());
            r.sign_ = a.sign_;
            return r;
        }
        int c = cmp_mag(a.limbs(), a.n_, b.limbs(), b.n_);
        if (c == 0) return BigInt();
        if (c > 0) {
            r.set_size(a.n_);
            r.n_ = sub_mag(a.limbs(), a.n_, b.limbs(), b.n_, r.mutable_limbs());
            r.sign_ = a.sign_;
        } else {
            r.set_size(b.n_);
            r.n_ = sub_mag(b.limbs(), b.n_, a.limbs(), a.n_, r.mutable_limbs());
            r.sign_ = static_cast<std::int8_t>(bs);
        }
        return r;
    }

    // Knuth-style normalized long division of magnitudes; bn >= 2 and
    // mag(a) >= mag(b) are established by the caller.
    static void divmod_mag(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
        std::uint32_t shift = 0;
        {
            std::uint32_t top = b.limbs()[b.n_ - 1];
            while (!(top & 0x80000000u)) {
                top <<= 1;
                ++shift;
            }
        }
        std::vector<std::uint32_t> u(a.n_ + 1, 0), v(b.n_, 0);
        shl_into(a.limbs(), a.n_, shift, u);
        shl_into(b.limbs(), b.n_, shift, v);
        std::uint32_t n = b.n_;
        std::uint32_t m = a.n_ - n;

        q.set_size(m + 1);
        std::uint32_t* qd = q.mutable_limbs();
        const std::uint64_t base = 1ULL << 32;
        for (std::uint32_t j = m + 1; j-- > 0;) {
            std::uint64_t top2 = (static_cast<std::uint64_t>(u[j + n]) << 32) | u[j + n - 1];
            std::uint64_t qhat = top2 / v[n - 1];
            std::uint64_t rhat = top2 % v[n - 1];
            while (qhat >= base ||
                   qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2])) {
                --qhat;
                rhat += v[n - 1];
                if (rhat >= base) break;
            }
            // multiply-subtract qhat*v from u[j..j+n]
            std::int64_t borrow = 0;
            std::uint64_t carry = 0;
            for (std::uint32_t i = 0; i < n; ++i) {
                std::uint64_t p = qhat * v[i] + carry;
                carry = p >> 32;
                std::int64_t t = static_cast<std::int64_t>(u[i + j]) -
                                 static_cast<std::int64_t>(p & 0xffffffffu) - borrow;
                borrow = t < 0 ? 1 : 0;
                if (t < 0) t += static_cast<std::int64_t>(base);
                u[i + j] = static_cast<std::uint32_t>(t);
            }
            std::int64_t t = static_cast<std::int64_t>(u[j + n]) -
                             static_cast<std::int64_t>(carry) - borrow;
            if (t < 0) {
                // qhat was one too large: add v back
                --qhat;
                std::uint64_t c2 = 0;
                for (std::uint32_t i = 0; i < n; ++i) {
                    std::uint64_t s = static_cast<std::uint64_t>(u[i + j]) + v[i] + c2;
                    u[i + j] = static_cast<std::uint32_t>(s);
                    c2 = s >> 32;
                }
                t += static_cast<std::int64_t>(c2);
            }
            u[j + n] = static_cast<std::uint32_t>(t);
            qd[j] = static_cast<std::uint32_t>(qhat);
        }
        q.trim();

        r.set_size(n);
        std::uint32_t* rd = r.mutable_limbs();
        // shift remainder back right
        for (std::uint32_t i = 0; i < n; ++i) {
            std::uint64_t lo = u[i] >> shift;
            std::uint64_t hi = (shift && i + 1 < n + 1) ? (static_cast<std::uint64_t>(u[i + 1]) << (32 - shift)) : 0;
            rd[i] = static_cast<std::uint32_t>(lo | hi);
        }
        r.trim();
    }

    static void shl_into(const std::uint32_t* src, std::uint32_t n, std::uint32_t shift,
                         std::vector<std::uint32_t>& dst) noexcept {
        std::uint32_t carry = 0;
        for (std::uint32_t i = 0; i < n; ++i) {
            dst[i] = (src[i] << shift) | carry;
            carry = shift ? static_cast<std::uint32_t>(src[i] >> (32 - shift)) : 0;
        }
        if (n < dst.size()) dst[n] = carry;
    }
};

struct BigIntHash {
    std::size_t operator()(const BigInt& v) const noexcept { return v.hash(); }
};

}  // namespace nilprob
