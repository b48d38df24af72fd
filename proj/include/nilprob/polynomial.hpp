#pragma once

#include <cctype>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nilprob/bigint.hpp"
#include "nilprob/errors.hpp"
#include "nilprob/rational.hpp"

namespace nilprob {

// Multivariate polynomial with rational coefficients. Terms are kept in a
// sorted map keyed by exponent vector, so iteration order is deterministic.
class IntPolynomial {
   public:
    using Monomial = std::vector<int>;

    explicit IntPolynomial(int nvars = 0) : nvars_(nvars) {}

    static IntPolynomial constant(int nvars, Rational c) {
        IntPolynomial p(nvars);
        p.add_term(Monomial(nvars, 0), std::move(c));
        return p;
    }

    static IntPolynomial variable(int nvars, int index) {
        if (index < 0 || index >= nvars) throw PreconditionFailed("variable index out of range");
        IntPolynomial p(nvars);
        Monomial m(nvars, 0);
        m[index] = 1;
        p.add_term(std::move(m), Rational(1));
        return p;
    }

    int nvars() const noexcept { return nvars_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    const std::map<Monomial, Rational>& terms() const noexcept { return terms_; }

    int total_degree() const noexcept {
        int d = 0;
        for (const auto& [m, c] : terms_) {
            int t = 0;
            for (int e : m) t += e;
            d = std::max(d, t);
        }
        return d;
    }

    int degree_in(int var) const noexcept {
        int d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m[var]);
        return d;
    }

    void add_term(Monomial m, Rational c) {
        if (static_cast<int>(m.size()) != nvars_) throw PreconditionFailed("monomial arity mismatch");
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(std::move(m), std::move(c));
        } else {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
        IntPolynomial r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }

    friend IntPolynomial operator-(const IntPolynomial& a, const IntPolynomial& b) {
        IntPolynomial r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }

    IntPolynomial operator-() const {
        IntPolynomial r(nvars_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }

    friend IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
        IntPolynomial r(a.nvars_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                Monomial m(a.nvars_);
                for (int i = 0; i < a.nvars_; ++i) m[i] = ma[i] + mb[i];
                r.add_term(std::move(m), ca * cb);
            }
        }
        return r;
    }

    IntPolynomial& operator+=(const IntPolynomial& o) { return *this = *this + o; }
    IntPolynomial& operator-=(const IntPolynomial& o) { return *this = *this - o; }
    IntPolynomial& operator*=(const IntPolynomial& o) { return *this = *this * o; }

    friend bool operator==(const IntPolynomial& a, const IntPolynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    Rational eval(std::span<const Rational> args) const {
        if (static_cast<int>(args.size()) != nvars_) throw ArityMismatch("polynomial arity mismatch");
        Rational sum(0);
        for (const auto& [m, c] : terms_) {
            Rational t = c;
            for (int i = 0; i < nvars_; ++i) {
                for (int e = 0; e < m[i]; ++e) t *= args[i];
            }
            sum += t;
        }
        return sum;
    }

    // evaluate at integers; the result must be an integer
    BigInt eval_int(std::span<const BigInt> args) const {
        if (static_cast<int>(args.size()) != nvars_) throw ArityMismatch("polynomial arity mismatch");
        BigInt num(0), den(1);
        for (const auto& [m, c] : terms_) {
            BigInt t = c.numerator();
            for (int i = 0; i < nvars_; ++i) {
                for (int e = 0; e < m[i]; ++e) t *= args[i];
            }
            // num/den += t/c.den
            num = num * c.denominator() + t * den;
            den *= c.denominator();
        }
        auto [q, r] = BigInt::divmod(num, den);
        if (!r.is_zero())
            throw NonIntegerResult("polynomial value " + num.to_string() + "/" + den.to_string() +
                                   " is not an integer");
        return q;
    }

    // least common multiple of the coefficient denominators
    BigInt denominator_lcm() const {
        BigInt l(1);
        for (const auto& [m, c] : terms_) l = BigInt::lcm(l, c.denominator());
        return l;
    }

    // evaluation mod n; coefficient denominators must be invertible mod n
    long long eval_mod(std::span<const long long> args, long long n) const {
        if (static_cast<int>(args.size()) != nvars_) throw ArityMismatch("polynomial arity mismatch");
        long long sum = 0;
        for (const auto& [m, c] : terms_) {
            long long t = mod_of(c.numerator(), n) * inverse_mod(mod_of(c.denominator(), n), n) % n;
            for (int i = 0; i < nvars_; ++i) {
                long long base = ((args[i] % n) + n) % n;
                for (int e = 0; e < m[i]; ++e) t = t * base % n;
            }
            sum = (sum + t) % n;
        }
        return sum;
    }

    static long long mod_of(const BigInt& v, long long n) {
        BigInt r = v % BigInt(n);
        long long x = r.to_i64() % n;
        return x < 0 ? x + n : x;
    }

    static long long inverse_mod(long long a, long long n) {
        long long t = 0, newt = 1, r = n, newr = ((a % n) + n) % n;
        while (newr != 0) {
            long long q = r / newr;
            t -= q * newt;
            std::swap(t, newt);
            r -= q * newr;
            std::swap(r, newr);
        }
        if (r != 1) throw NotCoprime("no inverse of " + std::to_string(a) + " mod " + std::to_string(n));
        return ((t % n) + n) % n;
    }

    std::string to_string(const std::vector<std::string>& var_names) const {
        if (terms_.empty()) return "0";
        std::string s;
        for (const auto& [m, c] : terms_) {
            std::string t = c.to_string();
            for (int i = 0; i < nvars_; ++i) {
                if (m[i] == 0) continue;
                t += "*" + var_names[i];
                if (m[i] > 1) t += "^" + std::to_string(m[i]);
            }
            if (!s.empty() && t[0] != '-') s += "+";
            s += t;
        }
        return s;
    }

   private:
    int nvars_;
    std::map<Monomial, Rational> terms_;
};

// Recursive-descent parser for polynomial expressions over named variables:
// sums of products of integers, rationals a/b, and powered variables, with
// parentheses.
class PolynomialParser {
   public:
    PolynomialParser(std::string text, std::vector<std::string> var_names)
        : text_(std::move(text)), vars_(std::move(var_names)) {}

    IntPolynomial parse() {
        pos_ = 0;
        IntPolynomial p = parse_expr();
        skip_space();
        if (pos_ != text_.size()) throw ParseError("unexpected trailing input in polynomial");
        return p;
    }

   private:
    std::string text_;
    std::vector<std::string> vars_;
    std::size_t pos_ = 0;

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    IntPolynomial parse_expr() {
        bool neg = false;
        skip_space();
        if (eat('-')) {
            neg = true;
        } else {
            eat('+');
        }
        IntPolynomial acc = parse_term();
        if (neg) acc = -acc;
        while (true) {
            skip_space();
            if (eat('+')) {
                acc += parse_term();
            } else if (eat('-')) {
                acc -= parse_term();
            } else {
                break;
            }
        }
        return acc;
    }

    IntPolynomial parse_term() {
        IntPolynomial acc = parse_factor();
        while (true) {
            skip_space();
            if (eat('*')) {
                acc *= parse_factor();
            } else if (eat('/')) {
                IntPolynomial d = parse_factor();
                if (d.terms().size() != 1 || d.total_degree() != 0)
                    throw ParseError("division is only supported by constants");
                acc *= IntPolynomial::constant(acc.nvars(), Rational(1) / d.terms().begin()->second);
            } else {
                break;
            }
        }
        return acc;
    }

    IntPolynomial parse_factor() {
        skip_space();
        if (pos_ >= text_.size()) throw ParseError("unexpected end of polynomial");
        if (eat('(')) {
            IntPolynomial p = parse_expr();
            if (!eat(')')) throw ParseError("missing closing parenthesis");
            return maybe_power(std::move(p));
        }
        char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string num;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                num += text_[pos_++];
            }
            return maybe_power(
                IntPolynomial::constant(static_cast<int>(vars_.size()), Rational(BigInt::from_string(num))));
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                           text_[pos_] == '_')) {
                name += text_[pos_++];
            }
            for (std::size_t i = 0; i < vars_.size(); ++i) {
                if (vars_[i] == name) {
                    return maybe_power(
                        IntPolynomial::variable(static_cast<int>(vars_.size()), static_cast<int>(i)));
                }
            }
            throw ParseError("unknown variable '" + name + "'");
        }
        throw ParseError(std::string("unexpected character '") + c + "' in polynomial");
    }

    IntPolynomial maybe_power(IntPolynomial base) {
        skip_space();
        if (!eat('^')) return base;
        skip_space();
        std::string num;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            num += text_[pos_++];
        }
        if (num.empty()) throw ParseError("missing exponent after '^'");
        int e = std::stoi(num);
        IntPolynomial r = IntPolynomial::constant(base.nvars(), Rational(1));
        for (int i = 0; i < e; ++i) r *= base;
        return r;
    }
};

}  // namespace nilprob
