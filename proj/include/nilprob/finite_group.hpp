#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "nilprob/errors.hpp"

namespace nilprob {

struct GroupBuildOptions {
    std::size_t closure_cap = 200000;  // hard cap on closure size
    std::size_t table_cap = 20000;     // largest order with a materialized Cayley table
};

template <class T>
struct VecHash {
    std::size_t operator()(const std::vector<T>& v) const noexcept {
        std::size_t h = 0x243f6a8885a308d3ULL;
        for (const T& x : v) {
            h ^= static_cast<std::size_t>(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return h;
    }
};

// A finite group on element indices 0..order-1, identity at index 0.
// Small groups carry a full Cayley table; larger ones keep the concrete
// element representations and multiply through them.
class FiniteGroup {
   public:
    static constexpr int kIdentity = 0;

    FiniteGroup() : order_(1), table_{0}, inv_{0}, labels_{"e"} {}

    // table is row-major order*order; table[a*order+b] = a*b, identity must be 0
    static FiniteGroup from_table(std::vector<std::int32_t> table,
                                  std::vector<std::string> labels = {}) {
        FiniteGroup g;
        std::size_t n = 1;
        while (n * n < table.size()) ++n;
        if (n * n != table.size() || n == 0) throw InvalidElement("multiplication table is not square");
        g.order_ = static_cast<int>(n);
        g.table_ = std::move(table);
        for (std::int32_t v : g.table_) {
            if (v < 0 || v >= g.order_) throw InvalidElement("table entry out of range");
        }
        for (int a = 0; a < g.order_; ++a) {
            if (g.table_[static_cast<std::size_t>(a) * n] != a || g.table_[static_cast<std::size_t>(a)] != a)
                throw InvalidElement("index 0 is not a two-sided identity");
        }
        g.inv_.assign(n, -1);
        for (int a = 0; a < g.order_; ++a) {
            for (int b = 0; b < g.order_; ++b) {
                if (g.table_[static_cast<std::size_t>(a) * n + b] == kIdentity &&
                    g.table_[static_cast<std::size_t>(b) * n + a] == kIdentity) {
                    g.inv_[a] = b;
                    break;
                }
            }
            if (g.inv_[a] < 0) throw InvalidElement("element has no two-sided inverse");
        }
        if (!labels.empty() && labels.size() != n) throw InvalidElement("label count mismatch");
        g.labels_ = std::move(labels);
        return g;
    }

    // Breadth-first closure of the generators, identity first, ties broken by
    // generator order, so element indexing is reproducible across runs.
    template <class Rep, class MulFn, class InvFn, class LabelFn, class Hash = std::hash<Rep>>
    static FiniteGroup closure(const std::vector<Rep>& gens, MulFn mul, InvFn inv, Rep identity,
                               LabelFn label, const GroupBuildOptions& opt = {}) {
        std::vector<Rep> elems;
        std::unordered_map<Rep, int, Hash> index;
        elems.push_back(identity);
        index.emplace(identity, 0);
        std::size_t head = 0;
        while (head < elems.size()) {
            Rep cur = elems[head++];
            for (const Rep& g : gens) {
                Rep next = mul(cur, g);
                if (index.emplace(next, static_cast<int>(elems.size())).second) {
                    elems.push_back(std::move(next));
                    if (elems.size() > opt.closure_cap)
                        throw CapExceeded("closure exceeded cap of " + std::to_string(opt.closure_cap));
                }
            }
        }
        FiniteGroup g;
        g.table_.clear();
        g.labels_.clear();
        g.order_ = static_cast<int>(elems.size());
        g.inv_.assign(elems.size(), 0);
        for (std::size_t i = 0; i < elems.size(); ++i) {
            auto it = index.find(inv(elems[i]));
            if (it == index.end()) throw InvalidElement("inverse escaped the closure");
            g.inv_[i] = it->second;
        }
        if (elems.size() <= opt.table_cap) {
            g.table_.resize(elems.size() * elems.size());
            for (std::size_t a = 0; a < elems.size(); ++a) {
                for (std::size_t b = 0; b < elems.size(); ++b) {
                    auto it = index.find(mul(elems[a], elems[b]));
                    if (it == index.end()) throw InvalidElement("product escaped the closure");
                    g.table_[a * elems.size() + b] = it->second;
                }
            }
            g.labels_.reserve(elems.size());
            for (const Rep& e : elems) g.labels_.push_back(label(e));
        } else {
            g.ops_ = std::make_shared<RepOps<Rep, MulFn, LabelFn, Hash>>(std::move(elems),
                                                                         std::move(index), mul, label);
        }
        return g;
    }

    // group backed by index-level callbacks; the table is materialized only up
    // to the given cap
    static FiniteGroup from_callback(int order, std::function<int(int, int)> mul,
                                     std::function<int(int)> inv,
                                     std::function<std::string(int)> label,
                                     std::size_t table_cap = 20000) {
        FiniteGroup g;
        g.table_.clear();
        g.labels_.clear();
        g.order_ = order;
        g.inv_.resize(order);
        for (int a = 0; a < order; ++a) g.inv_[a] = inv(a);
        if (static_cast<std::size_t>(order) <= table_cap) {
            g.table_.resize(static_cast<std::size_t>(order) * order);
            g.labels_.reserve(order);
            for (int a = 0; a < order; ++a) {
                g.labels_.push_back(label(a));
                for (int b = 0; b < order; ++b) g.table_[static_cast<std::size_t>(a) * order + b] = mul(a, b);
            }
        } else {
            g.ops_ = std::make_shared<FnOps>(std::move(mul), std::move(label));
        }
        return g;
    }

    int order() const noexcept { return order_; }

    int mul(int a, int b) const {
        if (!table_.empty()) return table_[static_cast<std::size_t>(a) * order_ + b];
        return ops_->mul(a, b);
    }

    int inv(int a) const noexcept { return inv_[a]; }

    int conjugate(int a, int b) const { return mul(mul(inv_[b], a), b); }  // a^b = b^-1 a b

    int commutator(int a, int b) const {  // [a,b] = a^-1 b^-1 a b
        return mul(mul(inv_[a], inv_[b]), mul(a, b));
    }

    int power(int a, std::int64_t e) const {
        if (e < 0) return power(inv_[a], -e);
        int r = kIdentity, b = a;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    int element_order(int a) const {
        int x = a, n = 1;
        while (x != kIdentity) {
            x = mul(x, a);
            ++n;
        }
        return n;
    }

    bool has_table() const noexcept { return !table_.empty(); }

    std::string label(int a) const {
        if (!labels_.empty()) return labels_[a];
        if (ops_) return ops_->label(a);
        return std::to_string(a);
    }

    // index of the element with the given label, or -1
    int element_labeled(const std::string& s) const {
        for (int i = 0; i < order_; ++i) {
            if (label(i) == s) return i;
        }
        return -1;
    }

   private:
    struct OpsBase {
        virtual ~OpsBase() = default;
        virtual int mul(int, int) const = 0;
        virtual std::string label(int) const = 0;
    };

    template <class Rep, class MulFn, class LabelFn, class Hash>
    struct RepOps : OpsBase {
        std::vector<Rep> elems;
        std::unordered_map<Rep, int, Hash> index;
        MulFn mul_fn;
        LabelFn label_fn;
        RepOps(std::vector<Rep> e, std::unordered_map<Rep, int, Hash> ix, MulFn m, LabelFn l)
            : elems(std::move(e)), index(std::move(ix)), mul_fn(std::move(m)), label_fn(std::move(l)) {}
        int mul(int a, int b) const override {
            auto it = index.find(mul_fn(elems[a], elems[b]));
            if (it == index.end()) throw InvalidElement("product escaped the closure");
            return it->second;
        }
        std::string label(int a) const override { return label_fn(elems[a]); }
    };

    struct FnOps : OpsBase {
        std::function<int(int, int)> mul_fn;
        std::function<std::string(int)> label_fn;
        FnOps(std::function<int(int, int)> m, std::function<std::string(int)> l)
            : mul_fn(std::move(m)), label_fn(std::move(l)) {}
        int mul(int a, int b) const override { return mul_fn(a, b); }
        std::string label(int a) const override { return label_fn(a); }
    };

    int order_;
    std::vector<std::int32_t> table_;
    std::vector<std::int32_t> inv_;
    std::vector<std::string> labels_;
    std::shared_ptr<const OpsBase> ops_;
};

// Subgroup of a fixed parent group: sorted member list plus membership mask.
class Subgroup {
   public:
    Subgroup(const FiniteGroup& parent, std::vector<int> members)
        : parent_(&parent), members_(std::move(members)), mask_(parent.order(), 0) {
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
        for (int m : members_) {
            if (m < 0 || m >= parent.order()) throw InvalidElement("subgroup member out of range");
            mask_[m] = 1;
        }
    }

    static Subgroup trivial(const FiniteGroup& g) { return Subgroup(g, {FiniteGroup::kIdentity}); }

    static Subgroup whole(const FiniteGroup& g) {
        std::vector<int> all(g.order());
        for (int i = 0; i < g.order(); ++i) all[i] = i;
        return Subgroup(g, std::move(all));
    }

    static Subgroup generated(const FiniteGroup& g, const std::vector<int>& gens) {
        std::vector<char> seen(g.order(), 0);
        std::vector<int> members{FiniteGroup::kIdentity};
        seen[FiniteGroup::kIdentity] = 1;
        std::vector<int> gen_set;
        for (int x : gens) {
            if (!seen[x]) {
                seen[x] = 1;
                members.push_back(x);
            }
            gen_set.push_back(x);
            gen_set.push_back(g.inv(x));
        }
        std::size_t head = 0;
        while (head < members.size()) {
            int cur = members[head++];
            for (int x : gen_set) {
                int nxt = g.mul(cur, x);
                if (!seen[nxt]) {
                    seen[nxt] = 1;
                    members.push_back(nxt);
                }
            }
        }
        return Subgroup(g, std::move(members));
    }

    const FiniteGroup& parent() const noexcept { return *parent_; }
    int size() const noexcept { return static_cast<int>(members_.size()); }
    const std::vector<int>& members() const noexcept { return members_; }
    bool contains(int x) const noexcept { return mask_[x] != 0; }

    bool is_subgroup() const {
        if (!contains(FiniteGroup::kIdentity)) return false;
        if (parent_->order() % size() != 0) return false;
        for (int a : members_) {
            if (!contains(parent_->inv(a))) return false;
            for (int b : members_) {
                if (!contains(parent_->mul(a, b))) return false;
            }
        }
        return true;
    }

    bool is_normal() const {
        for (int g = 0; g < parent_->order(); ++g) {
            for (int n : members_) {
                if (!contains(parent_->conjugate(n, g))) return false;
            }
        }
        return true;
    }

    friend bool operator==(const Subgroup& a, const Subgroup& b) noexcept {
        return a.parent_ == b.parent_ && a.members_ == b.members_;
    }

   private:
    const FiniteGroup* parent_;
    std::vector<int> members_;
    std::vector<char> mask_;
};

struct QuotientData {
    FiniteGroup quotient;
    std::vector<int> projection;  // parent index -> quotient index
    std::vector<int> section;     // quotient index -> least coset representative
};

// Left-coset quotient G/N; verifies normality first.
inline QuotientData quotient(const FiniteGroup& g, const Subgroup& n) {
    if (&n.parent() != &g) throw InvalidElement("subgroup belongs to a different group");
    if (!n.is_normal()) throw NotNormal("subgroup is not normal");
    int order = g.order();
    std::vector<int> coset_id(order, -1);
    std::vector<int> section;
    for (int x = 0; x < order; ++x) {
        if (coset_id[x] >= 0) continue;
        int id = static_cast<int>(section.size());
        section.push_back(x);
        for (int m : n.members()) coset_id[g.mul(x, m)] = id;
    }
    int q = static_cast<int>(section.size());
    std::vector<std::int32_t> table(static_cast<std::size_t>(q) * q);
    std::vector<std::string> labels(q);
    for (int i = 0; i < q; ++i) {
        labels[i] = g.label(section[i]) + "N";
        for (int j = 0; j < q; ++j) {
            table[static_cast<std::size_t>(i) * q + j] = coset_id[g.mul(section[i], section[j])];
        }
    }
    QuotientData out{FiniteGroup::from_table(std::move(table), std::move(labels)), std::move(coset_id),
                     std::move(section)};
    return out;
}

// Re-index a subgroup as a standalone group (identity stays first because the
// parent identity has the least index).
struct ExtractedGroup {
    FiniteGroup group;
    std::vector<int> to_parent;  // new index -> parent index
};

inline ExtractedGroup subgroup_as_group(const FiniteGroup& g, const Subgroup& s) {
    const std::vector<int>& mem = s.members();
    std::vector<int> pos(g.order(), -1);
    for (std::size_t i = 0; i < mem.size(); ++i) pos[mem[i]] = static_cast<int>(i);
    std::size_t n = mem.size();
    std::vector<std::int32_t> table(n * n);
    std::vector<std::string> labels(n);
    for (std::size_t a = 0; a < n; ++a) {
        labels[a] = g.label(mem[a]);
        for (std::size_t b = 0; b < n; ++b) {
            int p = pos[g.mul(mem[a], mem[b])];
            if (p < 0) throw InvalidElement("member set is not closed under multiplication");
            table[a * n + b] = p;
        }
    }
    return {FiniteGroup::from_table(std::move(table), std::move(labels)), mem};
}

inline FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
    std::size_t na = a.order(), nb = b.order(), n = na * nb;
    std::vector<std::int32_t> table(n * n);
    std::vector<std::string> labels(n);
    for (std::size_t x = 0; x < n; ++x) {
        int xa = static_cast<int>(x / nb), xb = static_cast<int>(x % nb);
        labels[x] = "(" + a.label(xa) + "," + b.label(xb) + ")";
        for (std::size_t y = 0; y < n; ++y) {
            int ya = static_cast<int>(y / nb), yb = static_cast<int>(y % nb);
            table[x * n + y] =
                static_cast<std::int32_t>(a.mul(xa, ya) * static_cast<int>(nb) + b.mul(xb, yb));
        }
    }
    return FiniteGroup::from_table(std::move(table), std::move(labels));
}

// xs folds left: [x1,...,xk] = [[x1,...,x_{k-1}],xk]; a single element is itself
inline int simple_commutator(const FiniteGroup& g, const std::vector<int>& xs) {
    if (xs.empty()) throw PreconditionFailed("simple_commutator needs at least one element");
    int acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = g.commutator(acc, xs[i]);
    return acc;
}

inline Subgroup centralizer(const FiniteGroup& g, int x) {
    std::vector<int> mem;
    for (int a = 0; a < g.order(); ++a) {
        if (g.mul(a, x) == g.mul(x, a)) mem.push_back(a);
    }
    return Subgroup(g, std::move(mem));
}

inline Subgroup center(const FiniteGroup& g) {
    std::vector<int> mem;
    for (int a = 0; a < g.order(); ++a) {
        bool central = true;
        for (int b = 0; b < g.order() && central; ++b) {
            if (g.mul(a, b) != g.mul(b, a)) central = false;
        }
        if (central) mem.push_back(a);
    }
    return Subgroup(g, std::move(mem));
}

struct CentralSeries {
    std::vector<Subgroup> lower;          // gamma_1 = G down to stabilization
    std::vector<Subgroup> upper;          // Z_0 = 1 up to stabilization
    std::optional<int> nilpotency_class;  // least k with gamma_{k+1} trivial
};

inline CentralSeries central_series(const FiniteGroup& g) {
    CentralSeries out;
    out.lower.push_back(Subgroup::whole(g));
    while (true) {
        const Subgroup& cur = out.lower.back();
        std::vector<char> seen(g.order(), 0);
        std::vector<int> gens;
        for (int a : cur.members()) {
            for (int b = 0; b < g.order(); ++b) {
                int c = g.commutator(a, b);
                if (!seen[c]) {
                    seen[c] = 1;
                    gens.push_back(c);
                }
            }
        }
        Subgroup next = Subgroup::generated(g, gens);
        if (next.size() == cur.size()) break;
        out.lower.push_back(std::move(next));
        if (out.lower.back().size() == 1) break;
    }
    if (out.lower.back().size() == 1) {
        out.nilpotency_class = static_cast<int>(out.lower.size()) - 1;
    }

    out.upper.push_back(Subgroup::trivial(g));
    while (true) {
        const Subgroup& cur = out.upper.back();
        std::vector<int> mem;
        for (int a = 0; a < g.order(); ++a) {
            bool in_next = true;
            for (int b = 0; b < g.order() && in_next; ++b) {
                if (!cur.contains(g.commutator(a, b))) in_next = false;
            }
            if (in_next) mem.push_back(a);
        }
        Subgroup next(g, std::move(mem));
        if (next.size() == cur.size()) break;
        out.upper.push_back(std::move(next));
        if (out.upper.back().size() == g.order()) break;
    }
    return out;
}

inline bool is_k_step_nilpotent(const FiniteGroup& g, int k) {
    CentralSeries s = central_series(g);
    return s.nilpotency_class.has_value() && *s.nilpotency_class <= k;
}

inline std::vector<std::vector<int>> conjugacy_classes(const FiniteGroup& g) {
    std::vector<char> seen(g.order(), 0);
    std::vector<std::vector<int>> classes;
    for (int a = 0; a < g.order(); ++a) {
        if (seen[a]) continue;
        std::vector<int> cls;
        for (int b = 0; b < g.order(); ++b) {
            int c = g.conjugate(a, b);
            if (!seen[c]) {
                seen[c] = 1;
                cls.push_back(c);
            }
        }
        std::sort(cls.begin(), cls.end());
        classes.push_back(std::move(cls));
    }
    return classes;
}

// All normal subgroups, generated from unions of conjugacy classes: grow each
// known normal subgroup by one extra class and close until no new subgroup
// appears.
inline std::vector<Subgroup> all_normal_subgroups(const FiniteGroup& g) {
    std::vector<std::vector<int>> classes = conjugacy_classes(g);
    std::vector<Subgroup> found;
    std::vector<std::vector<int>> keys;
    auto add = [&](Subgroup s) -> bool {
        for (const auto& k : keys) {
            if (k == s.members()) return false;
        }
        keys.push_back(s.members());
        found.push_back(std::move(s));
        return true;
    };
    add(Subgroup::trivial(g));
    std::size_t head = 0;
    while (head < found.size()) {
        std::vector<int> base = found[head].members();
        for (const auto& cls : classes) {
            if (found[head].contains(cls[0])) continue;
            std::vector<int> gens = base;
            gens.insert(gens.end(), cls.begin(), cls.end());
            add(Subgroup::generated(g, gens));
        }
        ++head;
    }
    std::sort(found.begin(), found.end(), [](const Subgroup& a, const Subgroup& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.members() < b.members();
    });
    return found;
}

// All index-p subgroups of a p-group, as pullbacks of hyperplanes of the
// Frattini quotient G/[G,G]G^p.
inline std::vector<Subgroup> maximal_subgroups_pgroup(const FiniteGroup& g, int p) {
    {
        int n = g.order();
        if (n <= 1) throw NotPGroup("trivial group has no maximal subgroups");
        while (n % p == 0) n /= p;
        if (n != 1) throw NotPGroup("group order is not a power of " + std::to_string(p));
    }
    // Frattini subgroup [G,G]G^p
    std::vector<char> seen(g.order(), 0);
    std::vector<int> gens;
    for (int a = 0; a < g.order(); ++a) {
        int ap = g.power(a, p);
        if (!seen[ap]) {
            seen[ap] = 1;
            gens.push_back(ap);
        }
        for (int b = 0; b < g.order(); ++b) {
            int c = g.commutator(a, b);
            if (!seen[c]) {
                seen[c] = 1;
                gens.push_back(c);
            }
        }
    }
    Subgroup frattini = Subgroup::generated(g, gens);
    QuotientData q = quotient(g, frattini);
    int vn = q.quotient.order();
    int rank = 0;
    {
        int t = vn;
        while (t > 1) {
            t /= p;
            ++rank;
        }
    }
    // greedy basis of the quotient viewed as a vector space over F_p
    std::vector<int> basis;
    {
        Subgroup span = Subgroup::trivial(q.quotient);
        for (int v = 0; v < vn && static_cast<int>(basis.size()) < rank; ++v) {
            if (span.contains(v)) continue;
            basis.push_back(v);
            std::vector<int> bgens = span.members();
            bgens.push_back(v);
            span = Subgroup::generated(q.quotient, bgens);
        }
    }
    // coordinates of every quotient element in that basis
    std::vector<std::vector<int>> coords(vn);
    {
        std::vector<int> exps(rank, 0);
        while (true) {
            int elem = FiniteGroup::kIdentity;
            for (int i = 0; i < rank; ++i) elem = q.quotient.mul(elem, q.quotient.power(basis[i], exps[i]));
            coords[elem] = exps;
            int i = 0;
            while (i < rank && ++exps[i] == p) exps[i++] = 0;
            if (i == rank) break;
        }
    }
    // hyperplane functionals: nonzero vectors with leading coefficient 1
    std::vector<Subgroup> out;
    std::vector<int> f(rank, 0);
    while (true) {
        int lead = -1;
        for (int i = rank; i-- > 0;) {
            if (f[i] != 0) lead = i;
        }
        if (lead >= 0 && f[lead] == 1) {
            std::vector<int> mem;
            for (int x = 0; x < g.order(); ++x) {
                const std::vector<int>& c = coords[q.projection[x]];
                int dot = 0;
                for (int i = 0; i < rank; ++i) dot += f[i] * c[i];
                if (dot % p == 0) mem.push_back(x);
            }
            out.push_back(Subgroup(g, std::move(mem)));
        }
        int i = 0;
        while (i < rank && ++f[i] == p) f[i++] = 0;
        if (i == rank) break;
    }
    return out;
}

// Exhaustive axiom check for small groups, sampled for large ones.
inline bool validate_group_axioms(const FiniteGroup& g, int exhaustive_cap = 512,
                                  int samples = 1000000) {
    int n = g.order();
    for (int a = 0; a < n; ++a) {
        if (g.mul(FiniteGroup::kIdentity, a) != a || g.mul(a, FiniteGroup::kIdentity) != a) return false;
        if (g.mul(a, g.inv(a)) != FiniteGroup::kIdentity) return false;
        if (g.mul(g.inv(a), a) != FiniteGroup::kIdentity) return false;
        if (g.inv(g.inv(a)) != a) return false;
    }
    if (n <= exhaustive_cap) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                int ab = g.mul(a, b);
                for (int c = 0; c < n; ++c) {
                    if (g.mul(ab, c) != g.mul(a, g.mul(b, c))) return false;
                }
            }
        }
    } else {
        std::uint64_t state = 0x9e3779b97f4a7c15ULL;
        auto next = [&state, n]() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            return static_cast<int>(state % static_cast<std::uint64_t>(n));
        };
        for (int i = 0; i < samples; ++i) {
            int a = next(), b = next(), c = next();
            if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) return false;
        }
    }
    return true;
}

}  // namespace nilprob
