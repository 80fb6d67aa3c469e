// Tableau translation of LTL over trace-indexed atoms into a transition-based generalized
// Buchi automaton: each state is a set of NNF obligations, expanded on the fly.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <map>
#include <tuple>

#include "ahltl/synccheck.hpp"

namespace ahltl {

namespace {

enum class K { True, False, Lit, NLit, And, Or, X, U, R, GF };

struct LNode {
    K kind;
    int var = -1;
    int prop = -1;
    std::vector<int> kids;
};

class Store {
public:
    int num_vars;

    explicit Store(int nv) : num_vars(nv) {
        t_ = intern({K::True, -1, -1, {}});
        f_ = intern({K::False, -1, -1, {}});
    }

    const LNode& at(int id) const { return nodes_[id]; }
    int tt() const { return t_; }
    int ff() const { return f_; }

    int lit(int var, int prop, bool positive) { return intern({positive ? K::Lit : K::NLit, var, prop, {}}); }

    int junction(K kind, std::vector<int> kids) {
        const int unit = kind == K::And ? t_ : f_;
        const int zero = kind == K::And ? f_ : t_;
        std::vector<int> flat;
        for (int k : kids) {
            if (nodes_[k].kind == kind) flat.insert(flat.end(), nodes_[k].kids.begin(), nodes_[k].kids.end());
            else flat.push_back(k);
        }
        std::sort(flat.begin(), flat.end());
        flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
        std::vector<int> keep;
        for (int k : flat) {
            if (k == zero) return zero;
            if (k != unit) keep.push_back(k);
        }
        for (int k : keep) {
            const LNode& n = nodes_[k];
            if (n.kind != K::Lit) continue;
            int opposite = find({K::NLit, n.var, n.prop, {}});
            if (opposite >= 0 && std::binary_search(keep.begin(), keep.end(), opposite)) return zero;
        }
        if (keep.empty()) return unit;
        if (keep.size() == 1) return keep.front();
        return intern({kind, -1, -1, std::move(keep)});
    }

    int next(int a) {
        if (a == t_ || a == f_) return a;
        return intern({K::X, -1, -1, {a}});
    }
    int until(int a, int b) {
        if (b == t_ || b == f_) return b;
        if (a == f_) return b;
        return intern({K::U, -1, -1, {a, b}});
    }
    int release(int a, int b) {
        if (b == t_ || b == f_) return b;
        if (a == t_) return b;
        return intern({K::R, -1, -1, {a, b}});
    }
    // G F a for a temporal-free a: one obligation, acceptance carried by its mark alone.
    int infinitely(int a) {
        if (a == t_ || a == f_) return a;
        return intern({K::GF, -1, -1, {a}});
    }

private:
    using Key = std::tuple<int, int, int, std::vector<int>>;
    static Key key(const LNode& n) { return {static_cast<int>(n.kind), n.var, n.prop, n.kids}; }
    int find(const LNode& n) const {
        auto it = index_.find(key(n));
        return it == index_.end() ? -1 : it->second;
    }
    int intern(LNode n) {
        auto k = key(n);
        auto it = index_.find(k);
        if (it != index_.end()) return it->second;
        nodes_.push_back(std::move(n));
        int id = static_cast<int>(nodes_.size()) - 1;
        index_.emplace(std::move(k), id);
        return id;
    }

    std::vector<LNode> nodes_;
    std::map<Key, int> index_;
    int t_ = -1;
    int f_ = -1;
};

class Translator {
public:
    Translator(const std::vector<std::string>& vars, const std::vector<std::string>& aps)
        : vars_(vars), aps_(aps), store_(static_cast<int>(vars.size())) {}

    int nnf(const Expr& e, bool neg) {
        Store& s = store_;
        switch (e->op) {
            case Op::True: return neg ? s.ff() : s.tt();
            case Op::False: return neg ? s.tt() : s.ff();
            case Op::Atom: return s.lit(var_of(e->var), prop_of(e->prop), !neg);
            case Op::Not: return nnf(e->lhs, !neg);
            case Op::And: return s.junction(neg ? K::Or : K::And, {nnf(e->lhs, neg), nnf(e->rhs, neg)});
            case Op::Or: return s.junction(neg ? K::And : K::Or, {nnf(e->lhs, neg), nnf(e->rhs, neg)});
            case Op::Implies:
                if (neg) return s.junction(K::And, {nnf(e->lhs, false), nnf(e->rhs, true)});
                return s.junction(K::Or, {nnf(e->lhs, true), nnf(e->rhs, false)});
            case Op::Iff: {
                int a = nnf(e->lhs, false), na = nnf(e->lhs, true);
                int b = nnf(e->rhs, false), nb = nnf(e->rhs, true);
                if (neg) return s.junction(K::Or, {s.junction(K::And, {a, nb}), s.junction(K::And, {na, b})});
                return s.junction(K::Or, {s.junction(K::And, {a, b}), s.junction(K::And, {na, nb})});
            }
            case Op::Next: return s.next(nnf(e->lhs, neg));
            case Op::Until:
                if (neg) return s.release(nnf(e->lhs, true), nnf(e->rhs, true));
                return s.until(nnf(e->lhs, false), nnf(e->rhs, false));
            case Op::Globally:
                if (!neg && e->lhs->op == Op::Finally && is_temporal_free(e->lhs->lhs))
                    return s.infinitely(nnf(e->lhs->lhs, false));
                if (neg) return s.until(s.tt(), nnf(e->lhs, true));
                return s.release(s.ff(), nnf(e->lhs, false));
            case Op::Finally:
                if (neg && e->lhs->op == Op::Globally && is_temporal_free(e->lhs->lhs))
                    return s.infinitely(nnf(e->lhs->lhs, true));
                if (neg) return s.release(s.ff(), nnf(e->lhs, true));
                return s.until(s.tt(), nnf(e->lhs, false));
        }
        return s.ff();
    }

    BuchiAutomaton build(const Expr& psi) {
        const int root = nnf(psi, false);
        BuchiAutomaton a;
        a.num_vars = static_cast<int>(vars_.size());

        std::map<std::vector<int>, int> ids;
        std::vector<std::vector<int>> pending;
        auto state_of = [&](std::vector<int> set) {
            auto [it, fresh] = ids.emplace(set, a.num_states());
            if (fresh) {
                a.add_state();
                pending.push_back(std::move(set));
            }
            return it->second;
        };
        std::vector<int> init_set;
        if (root != store_.tt()) init_set.push_back(root);
        a.initial.push_back(state_of(init_set));
        if (root == store_.ff()) return a;

        // Transitions are added after all untils are known, so marks can be completed.
        struct RawEdge {
            int src;
            int dst;
            Cube guard;
            MarkSet postponed;
        };
        std::vector<RawEdge> raw;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            const int src = static_cast<int>(i);
            std::vector<Term> terms{Term{Cube::top(store_.num_vars), {}, 0}};
            for (int f : pending[i]) {
                terms = product(terms, expand(f));
                if (terms.empty()) break;
            }
            for (Term& t : terms) {
                int dst = state_of(t.next);
                raw.push_back({src, dst, std::move(t.cube), t.postponed});
            }
        }
        if (untils_.size() > 64) throw ResourceError("formula has more than 64 until subformulas");
        a.num_marks = static_cast<int>(untils_.size());
        const MarkSet all = a.all_marks();
        for (auto& e : raw) a.out[e.src].push_back({e.dst, std::move(e.guard), all & ~e.postponed});
        return a;
    }

private:
    struct Term {
        Cube cube;
        std::vector<int> next;  // sorted
        MarkSet postponed;
    };

    int var_of(const std::string& v) const {
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == v) return static_cast<int>(i);
        throw Error("trace variable '" + v + "' is not among the automaton variables");
    }
    int prop_of(const std::string& p) const {
        for (std::size_t i = 0; i < aps_.size(); ++i)
            if (aps_[i] == p) return static_cast<int>(i);
        throw ModelError("unknown proposition '" + p + "'");
    }

    static bool subsumes(const Term& a, const Term& b) {
        for (std::size_t v = 0; v < a.cube.pos.size(); ++v) {
            if ((a.cube.pos[v] & ~b.cube.pos[v]) || (a.cube.neg[v] & ~b.cube.neg[v])) return false;
        }
        if ((a.postponed & ~b.postponed) != 0) return false;
        return std::includes(b.next.begin(), b.next.end(), a.next.begin(), a.next.end());
    }

    static std::uint64_t signature(const Term& t) {
        std::uint64_t sig = t.postponed;
        for (std::size_t v = 0; v < t.cube.pos.size(); ++v) {
            sig |= std::rotl(t.cube.pos[v], static_cast<int>(7 * v + 1));
            sig |= std::rotl(t.cube.neg[v], static_cast<int>(7 * v + 33));
        }
        for (int n : t.next) sig |= std::uint64_t{1} << (static_cast<unsigned>(n) * 11U % 64U);
        return sig;
    }

    static int weight(const Term& t) {
        int w = std::popcount(t.postponed) + static_cast<int>(t.next.size());
        for (std::size_t v = 0; v < t.cube.pos.size(); ++v) w += std::popcount(t.cube.pos[v]) + std::popcount(t.cube.neg[v]);
        return w;
    }

    // Drops every term subsumed by another; of identical terms the first one stays. A term can
    // only be subsumed by a strictly lighter one or an identical one, so lighter terms go first.
    static std::vector<Term> prune(std::vector<Term> terms) {
        const std::size_t n = terms.size();
        if (n < 2) return terms;
        std::vector<int> w(n);
        std::vector<std::uint64_t> sig(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = weight(terms[i]);
            sig[i] = signature(terms[i]);
        }
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return w[a] < w[b]; });
        std::vector<std::size_t> kept;
        std::vector<char> keep(n, 0);
        for (std::size_t i : order) {
            bool covered = false;
            for (std::size_t k : kept) {
                if ((sig[k] & ~sig[i]) == 0 && subsumes(terms[k], terms[i])) {
                    covered = true;
                    break;
                }
            }
            if (!covered) {
                kept.push_back(i);
                keep[i] = 1;
            }
        }
        std::vector<Term> out;
        out.reserve(kept.size());
        for (std::size_t i = 0; i < n; ++i)
            if (keep[i]) out.push_back(std::move(terms[i]));
        return out;
    }

    static std::vector<Term> product(const std::vector<Term>& a, const std::vector<Term>& b) {
        std::vector<Term> out;
        for (const Term& x : a) {
            for (const Term& y : b) {
                Cube c = x.cube.meet(y.cube);
                if (!c.consistent()) continue;
                std::vector<int> nx;
                std::set_union(x.next.begin(), x.next.end(), y.next.begin(), y.next.end(), std::back_inserter(nx));
                out.push_back({std::move(c), std::move(nx), x.postponed | y.postponed});
            }
        }
        return prune(std::move(out));
    }

    MarkSet until_bit(int id) {
        auto it = untils_.find(id);
        if (it == untils_.end()) {
            int idx = static_cast<int>(untils_.size());
            if (idx >= 64) throw ResourceError("formula has more than 64 until subformulas");
            it = untils_.emplace(id, idx).first;
        }
        return MarkSet{1} << it->second;
    }

    const std::vector<Term>& expand(int id) {
        if (auto it = memo_.find(id); it != memo_.end()) return it->second;
        const LNode n = store_.at(id);
        std::vector<Term> res;
        const Cube top = Cube::top(store_.num_vars);
        switch (n.kind) {
            case K::True: res.push_back({top, {}, 0}); break;
            case K::False: break;
            case K::Lit:
            case K::NLit: {
                Cube c = top;
                (n.kind == K::Lit ? c.pos : c.neg)[n.var] |= Valuation{1} << n.prop;
                res.push_back({std::move(c), {}, 0});
                break;
            }
            case K::And: {
                res.push_back({top, {}, 0});
                for (int k : n.kids) res = product(res, expand(k));
                break;
            }
            case K::Or:
                for (int k : n.kids) {
                    const auto& part = expand(k);
                    res.insert(res.end(), part.begin(), part.end());
                }
                res = prune(std::move(res));
                break;
            case K::X: res.push_back({top, {n.kids[0]}, 0}); break;
            case K::U: {
                const MarkSet bit = until_bit(id);
                res = expand(n.kids[1]);
                auto later = product(expand(n.kids[0]), {Term{top, {id}, bit}});
                res.insert(res.end(), later.begin(), later.end());
                res = prune(std::move(res));
                break;
            }
            case K::R: {
                res = product(expand(n.kids[0]), expand(n.kids[1]));
                auto later = product(expand(n.kids[1]), {Term{top, {id}, 0}});
                res.insert(res.end(), later.begin(), later.end());
                res = prune(std::move(res));
                break;
            }
            case K::GF: {
                res = product(expand(n.kids[0]), {Term{top, {id}, 0}});
                res.push_back({top, {id}, until_bit(id)});
                res = prune(std::move(res));
                break;
            }
        }
        return memo_.emplace(id, std::move(res)).first->second;
    }

    const std::vector<std::string>& vars_;
    const std::vector<std::string>& aps_;
    Store store_;
    std::map<int, std::vector<Term>> memo_;
    std::map<int, int> untils_;
};

}  // namespace

BuchiAutomaton ltl_to_buchi(const Expr& psi, const std::vector<std::string>& vars, const std::vector<std::string>& aps) {
    if (vars.size() > 32) throw Error("too many trace variables");
    Translator t(vars, aps);
    return trim(t.build(psi));
}

}  // namespace ahltl
