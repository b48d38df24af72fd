#pragma once

#include <span>
#include <string>
#include <vector>

#include "nilprob/errors.hpp"
#include "nilprob/finite_group.hpp"

namespace nilprob {

// One letter of a word in F_k * G: either a signed variable x_i^{+-1}
// (var >= 1) or a signed constant from the group (var == 0).
template <class Elem>
struct WordLetter {
    int var = 0;
    int sign = 1;
    Elem constant{};

    static WordLetter variable(int i, int sign = 1) { return {i, sign, Elem{}}; }
    static WordLetter constant_of(Elem c, int sign = 1) { return {0, sign, std::move(c)}; }
};

template <class Elem>
class Word {
   public:
    Word(int arity, std::vector<WordLetter<Elem>> letters)
        : arity_(arity), letters_(std::move(letters)) {
        if (arity_ < 0) throw PreconditionFailed("word arity must be nonnegative");
        for (const auto& l : letters_) {
            if (l.sign != 1 && l.sign != -1) throw PreconditionFailed("letter sign must be +-1");
            if (l.var < 0 || l.var > arity_) throw PreconditionFailed("variable index exceeds arity");
        }
    }

    int arity() const noexcept { return arity_; }
    const std::vector<WordLetter<Elem>>& letters() const noexcept { return letters_; }

    Word inverse() const {
        std::vector<WordLetter<Elem>> rev(letters_.rbegin(), letters_.rend());
        for (auto& l : rev) l.sign = -l.sign;
        return Word(arity_, std::move(rev));
    }

    Word operator*(const Word& o) const {
        std::vector<WordLetter<Elem>> cat = letters_;
        cat.insert(cat.end(), o.letters_.begin(), o.letters_.end());
        return Word(std::max(arity_, o.arity_), std::move(cat));
    }

    static Word variable(int arity, int i, int sign = 1) {
        return Word(arity, {WordLetter<Elem>::variable(i, sign)});
    }

    static Word constant(int arity, Elem c) {
        return Word(arity, {WordLetter<Elem>::constant_of(std::move(c))});
    }

    // the word [a,b] = a^-1 b^-1 a b
    static Word commutator(const Word& a, const Word& b) {
        return a.inverse() * b.inverse() * a * b;
    }

    // [x_1,...,x_{k+1}] in k+1 variables; k = 0 gives the single letter x_1
    static Word simple_commutator_word(int k) {
        Word w = variable(k + 1, 1);
        for (int j = 2; j <= k + 1; ++j) w = commutator(w, variable(k + 1, j));
        return w;
    }

   private:
    int arity_;
    std::vector<WordLetter<Elem>> letters_;
};

using GroupWord = Word<int>;

// Element operations bundle for a finite group, used by the generic word
// evaluator and the samplers.
struct FiniteGroupOps {
    const FiniteGroup* g;
    using Element = int;
    Element id() const noexcept { return FiniteGroup::kIdentity; }
    Element mul(Element a, Element b) const { return g->mul(a, b); }
    Element inv(Element a) const { return g->inv(a); }
    bool eq(Element a, Element b) const noexcept { return a == b; }
};

template <class Ops>
typename Ops::Element evaluate_word(const Ops& ops, const Word<typename Ops::Element>& w,
                                    std::span<const typename Ops::Element> assignment) {
    if (static_cast<int>(assignment.size()) != w.arity())
        throw ArityMismatch("assignment length " + std::to_string(assignment.size()) +
                            " does not match arity " + std::to_string(w.arity()));
    typename Ops::Element acc = ops.id();
    for (const auto& l : w.letters()) {
        typename Ops::Element v = l.var > 0 ? assignment[l.var - 1] : l.constant;
        if (l.sign < 0) v = ops.inv(v);
        acc = ops.mul(acc, v);
    }
    return acc;
}

inline int evaluate_word(const FiniteGroup& g, const GroupWord& w, const std::vector<int>& assignment) {
    FiniteGroupOps ops{&g};
    return evaluate_word(ops, w, std::span<const int>(assignment));
}

}  // namespace nilprob
