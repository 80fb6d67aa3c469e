// Bounded evaluator for asynchronous formulas. Traces and trajectories are lassos; the E/A
// modality is decided either by enumerating trajectories or exactly, on the product of the
// pointer configurations with a Buchi automaton for the body.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "ahltl/oracle.hpp"

namespace ahltl {

namespace {

Valuation prop_mask(const std::vector<std::string>& aps, const std::string& name) {
    for (std::size_t i = 0; i < aps.size(); ++i)
        if (aps[i] == name) return Valuation{1} << i;
    if (name.find('&') == std::string::npos) throw ModelError("unknown proposition '" + name + "'");
    Valuation mask = 0;
    std::size_t start = 0;
    while (start <= name.size()) {
        std::size_t end = name.find('&', start);
        if (end == std::string::npos) end = name.size();
        mask |= prop_mask(aps, name.substr(start, end - start));
        start = end + 1;
    }
    return mask;
}

class SlotEvaluator {
public:
    SlotEvaluator(const Word& w, const std::vector<std::string>& vars, const std::vector<std::string>& aps)
        : w_(w), vars_(vars), aps_(aps), n_(w.size()) {
        next_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) next_[i] = w.next_slot(i);
    }

    std::vector<char> eval(const Expr& e) {
        switch (e->op) {
            case Op::True: return std::vector<char>(n_, 1);
            case Op::False: return std::vector<char>(n_, 0);
            case Op::Atom: {
                const int v = var_of(e->var);
                const Valuation mask = prop_mask(aps_, e->prop);
                std::vector<char> r(n_);
                for (std::size_t i = 0; i < n_; ++i) r[i] = (slot_letter(i)[v] & mask) == mask;
                return r;
            }
            case Op::Not: {
                auto r = eval(e->lhs);
                for (auto& x : r) x = !x;
                return r;
            }
            case Op::And: return combine(e, [](bool a, bool b) { return a && b; });
            case Op::Or: return combine(e, [](bool a, bool b) { return a || b; });
            case Op::Implies: return combine(e, [](bool a, bool b) { return !a || b; });
            case Op::Iff: return combine(e, [](bool a, bool b) { return a == b; });
            case Op::Next: {
                auto a = eval(e->lhs);
                std::vector<char> r(n_);
                for (std::size_t i = 0; i < n_; ++i) r[i] = a[next_[i]];
                return r;
            }
            case Op::Until: return until(eval(e->lhs), eval(e->rhs));
            case Op::Finally: return until(std::vector<char>(n_, 1), eval(e->lhs));
            case Op::Globally: {
                auto a = eval(e->lhs);
                std::vector<char> r = a;
                for (bool changed = true; changed;) {
                    changed = false;
                    for (std::size_t i = n_; i-- > 0;) {
                        const char v = a[i] && r[next_[i]];
                        if (v != r[i]) {
                            r[i] = v;
                            changed = true;
                        }
                    }
                }
                return r;
            }
        }
        return std::vector<char>(n_, 0);
    }

private:
    const Letter& slot_letter(std::size_t i) const { return i < w_.stem.size() ? w_.stem[i] : w_.loop[i - w_.stem.size()]; }

    int var_of(const std::string& v) const {
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i] == v) return static_cast<int>(i);
        throw Error("trace variable '" + v + "' has no component in the word");
    }

    template <class F>
    std::vector<char> combine(const Expr& e, F f) {
        auto a = eval(e->lhs);
        auto b = eval(e->rhs);
        for (std::size_t i = 0; i < n_; ++i) a[i] = f(a[i], b[i]);
        return a;
    }

    std::vector<char> until(const std::vector<char>& a, const std::vector<char>& b) {
        std::vector<char> r = b;
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t i = n_; i-- > 0;) {
                const char v = b[i] || (a[i] && r[next_[i]]);
                if (v != r[i]) {
                    r[i] = v;
                    changed = true;
                }
            }
        }
        return r;
    }

    const Word& w_;
    const std::vector<std::string>& vars_;
    const std::vector<std::string>& aps_;
    std::size_t n_;
    std::vector<std::size_t> next_;
};

}  // namespace

std::vector<char> eval_slots(const Word& w, const Expr& psi, const std::vector<std::string>& vars,
                             const std::vector<std::string>& aps) {
    if (w.loop.empty()) throw Error("eval_slots: empty loop");
    SlotEvaluator ev(w, vars, aps);
    return ev.eval(psi);
}

bool eval_word_at(const Word& w, const Expr& psi, const std::vector<std::string>& vars,
                  const std::vector<std::string>& aps, std::size_t position) {
    return eval_slots(w, psi, vars, aps)[w.slot(position)];
}

std::optional<Word> composite_word(const std::vector<LetterLasso>& traces, const Trajectory& t, std::size_t cap) {
    const std::size_t n = traces.size();
    const BasicLasso<VarSet> sched{t.stem, t.loop};
    std::vector<std::size_t> cfg(n + 1, 0);
    std::map<std::vector<std::size_t>, std::size_t> seen;
    std::vector<Letter> seq;
    for (std::size_t k = 0;; ++k) {
        auto [it, fresh] = seen.emplace(cfg, k);
        if (!fresh) {
            Word w;
            w.stem.assign(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(it->second));
            w.loop.assign(seq.begin() + static_cast<std::ptrdiff_t>(it->second), seq.end());
            return w;
        }
        if (k >= cap) return std::nullopt;
        Letter l(n);
        for (std::size_t i = 0; i < n; ++i) l[i] = traces[i].stem.size() > cfg[i] ? traces[i].stem[cfg[i]]
                                                                                    : traces[i].loop[cfg[i] - traces[i].stem.size()];
        seq.push_back(std::move(l));
        const VarSet moved = sched.stem.size() > cfg[n] ? sched.stem[cfg[n]] : sched.loop[cfg[n] - sched.stem.size()];
        for (std::size_t i = 0; i < n; ++i)
            if ((moved >> i) & 1U) cfg[i] = traces[i].next_slot(cfg[i]);
        cfg[n] = sched.next_slot(cfg[n]);
    }
}

std::optional<bool> eval_letters(const std::vector<LetterLasso>& traces, const Trajectory& t, const Expr& psi,
                                 const std::vector<std::string>& vars, const std::vector<std::string>& aps,
                                 std::size_t cap) {
    if (static_cast<int>(traces.size()) != t.num_vars || vars.size() != traces.size())
        throw Error("eval_letters: arity mismatch");
    auto w = composite_word(traces, t, cap);
    if (!w) return std::nullopt;
    return eval_word_at(*w, psi, vars, aps, 0);
}

std::optional<bool> eval_body(const KripkeStructure& k, const std::vector<Lasso>& traces, const Trajectory& t,
                              const Expr& psi, const std::vector<std::string>& vars, std::size_t cap) {
    std::vector<LetterLasso> ls;
    for (const auto& l : traces) ls.push_back(letters(k, l));
    return eval_letters(ls, t, psi, vars, k.aps, cap);
}

std::vector<Trajectory> enumerate_trajectories(int num_vars, int bound) {
    if (num_vars < 1 || num_vars > 16) throw Error("enumerate_trajectories: unsupported variable count");
    if (bound < 1) throw Error("enumerate_trajectories: bound must be at least 1");
    const VarSet all = (VarSet{1} << num_vars) - 1;
    double total = 0;
    for (int len = 1; len <= bound; ++len) total += len * std::pow(static_cast<double>(all), len);
    if (total > 5e6) throw ResourceError("trajectory enumeration exceeds 5e6 candidates");

    std::set<std::pair<std::vector<VarSet>, std::vector<VarSet>>> found;
    std::vector<VarSet> seq;
    auto emit = [&]() {
        for (std::size_t s = 0; s < seq.size(); ++s) {
            Trajectory t;
            t.num_vars = num_vars;
            t.stem.assign(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(s));
            t.loop.assign(seq.begin() + static_cast<std::ptrdiff_t>(s), seq.end());
            if (!t.is_fair()) continue;
            t = normalize(std::move(t));
            found.emplace(t.stem, t.loop);
        }
    };
    auto rec = [&](auto&& self, int len) -> void {
        if (static_cast<int>(seq.size()) == len) {
            emit();
            return;
        }
        for (VarSet v = 1; v <= all; ++v) {
            seq.push_back(v);
            self(self, len);
            seq.pop_back();
        }
    };
    for (int len = 1; len <= bound; ++len) rec(rec, len);

    std::vector<Trajectory> out;
    for (const auto& [stem, loop] : found) out.push_back(Trajectory{stem, loop, num_vars});
    std::stable_sort(out.begin(), out.end(), [](const Trajectory& a, const Trajectory& b) {
        return a.stem.size() + a.loop.size() < b.stem.size() + b.loop.size();
    });
    return out;
}

bool traces_complete(const KripkeStructure& k, int bound) {
    const int n = k.num_states();
    std::vector<char> reach(n, 0);
    std::vector<int> stack(k.init.begin(), k.init.end());
    for (int s : stack) reach[s] = 1;
    while (!stack.empty()) {
        int s = stack.back();
        stack.pop_back();
        for (int t : k.succ[s])
            if (!reach[t]) {
                reach[t] = 1;
                stack.push_back(t);
            }
    }
    // Finitely many traces iff no reachable state on a cycle has a choice.
    for (int s = 0; s < n; ++s) {
        if (!reach[s] || k.succ[s].size() <= 1) continue;
        std::vector<char> seen(n, 0);
        std::vector<int> todo(k.succ[s].begin(), k.succ[s].end());
        while (!todo.empty()) {
            int v = todo.back();
            todo.pop_back();
            if (v == s) return false;
            if (seen[v]) continue;
            seen[v] = 1;
            for (int w : k.succ[v]) todo.push_back(w);
        }
    }
    return longest_simple_lasso(k) <= bound;
}

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::Holds: return "HOLDS";
        case Outcome::Fails: return "FAILS";
        case Outcome::Inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

namespace {

// One component of the asynchronous product: a fixed trace or a free walk through K.
struct Component {
    bool free = false;
    LetterLasso fixed;
};

struct ProductWitness {
    std::vector<Lasso> free_traces;  // in component order, free components only
    Trajectory trajectory;
};

// Explores configurations (pointer per component) x automaton states; each step reads the
// current letter tuple and advances a nonempty set of components.
class AsyncProduct {
public:
    AsyncProduct(const KripkeStructure& k, const std::vector<Component>& comps, const BuchiAutomaton& a,
                 bool lockstep_only, std::size_t cap)
        : k_(k), comps_(comps), a_(a), lockstep_(lockstep_only), cap_(cap) {
        n_ = static_cast<int>(comps.size());
        if (a.num_marks + n_ > 64) throw ResourceError("too many acceptance marks for the product");
        radix_.resize(n_);
        double total = a.num_states();
        for (int j = 0; j < n_; ++j) {
            radix_[j] = comps[j].free ? k.num_states() : static_cast<int>(comps[j].fixed.size());
            total *= radix_[j];
        }
        if (total > static_cast<double>(cap)) throw ResourceError("asynchronous product exceeds the state cap");
        index_.assign(static_cast<std::size_t>(total), -1);
    }

    std::optional<ProductWitness> search() {
        if (a_.num_states() == 0) return std::nullopt;
        explore();
        const MarkSet required = a_.all_marks() | (((MarkSet{1} << n_) - 1) << a_.num_marks);
        auto run = find_accepting_run(graph_, required);
        if (!run) return std::nullopt;
        return rebuild(*run);
    }

private:
    using Code = std::uint64_t;

    Code encode(const std::vector<int>& pos, int q) const {
        Code c = 0;
        for (int j = 0; j < n_; ++j) c = c * radix_[j] + pos[j];
        return c * a_.num_states() + q;
    }
    void decode(Code c, std::vector<int>& pos, int& q) const {
        q = static_cast<int>(c % a_.num_states());
        c /= a_.num_states();
        for (int j = n_ - 1; j >= 0; --j) {
            pos[j] = static_cast<int>(c % radix_[j]);
            c /= radix_[j];
        }
    }

    int node(Code c) {
        int& slot = index_[c];
        if (slot < 0) {
            slot = static_cast<int>(codes_.size());
            codes_.push_back(c);
            graph_.adj.emplace_back();
            moves_.emplace_back();
        }
        return slot;
    }

    Valuation letter_of(int j, int p) const {
        if (comps_[j].free) return k_.labels[p];
        const auto& l = comps_[j].fixed;
        return static_cast<std::size_t>(p) < l.stem.size() ? l.stem[p] : l.loop[p - l.stem.size()];
    }

    void explore() {
        std::vector<int> pos(n_, 0);
        auto seed = [&](auto&& self, int j) -> void {
            if (j == n_) {
                for (int q : a_.initial) graph_.init.push_back(node(encode(pos, q)));
                return;
            }
            if (!comps_[j].free) {
                pos[j] = 0;
                self(self, j + 1);
                return;
            }
            for (int s : k_.init) {
                pos[j] = s;
                self(self, j + 1);
            }
        };
        seed(seed, 0);

        const VarSet all = (VarSet{1} << n_) - 1;
        Letter letter(n_);
        std::vector<int> target(n_);
        for (std::size_t idx = 0; idx < codes_.size(); ++idx) {
            int q = 0;
            decode(codes_[idx], pos, q);
            for (int j = 0; j < n_; ++j) letter[j] = letter_of(j, pos[j]);
            for (const Transition& t : a_.out[q]) {
                if (!t.guard.matches(letter)) continue;
                for (VarSet moved = lockstep_ ? all : 1; moved <= all; ++moved) {
                    const MarkSet marks = t.marks | (static_cast<MarkSet>(moved) << a_.num_marks);
                    auto step = [&](auto&& self, int j) -> void {
                        if (j == n_) {
                            const int dst = node(encode(target, t.dst));
                            graph_.adj[idx].push_back({dst, marks});
                            moves_[idx].push_back(moved);
                            return;
                        }
                        if (!((moved >> j) & 1U)) {
                            target[j] = pos[j];
                            self(self, j + 1);
                        } else if (!comps_[j].free) {
                            target[j] = static_cast<int>(comps_[j].fixed.next_slot(pos[j]));
                            self(self, j + 1);
                        } else {
                            for (int s : k_.succ[pos[j]]) {
                                target[j] = s;
                                self(self, j + 1);
                            }
                        }
                    };
                    step(step, 0);
                }
            }
        }
    }

    ProductWitness rebuild(const AcceptingRun& run) const {
        std::vector<int> nodes = run.nodes.stem;
        nodes.insert(nodes.end(), run.nodes.loop.begin(), run.nodes.loop.end());
        std::vector<int> edges = run.stem_edges;
        edges.insert(edges.end(), run.loop_edges.begin(), run.loop_edges.end());
        const std::size_t s = run.nodes.stem.size();
        const std::size_t total = nodes.size();

        std::vector<VarSet> moved(total);
        std::vector<std::vector<int>> pos(total, std::vector<int>(n_));
        for (std::size_t i = 0; i < total; ++i) {
            moved[i] = moves_[nodes[i]][edges[i]];
            int q = 0;
            decode(codes_[nodes[i]], pos[i], q);
        }

        ProductWitness w;
        w.trajectory.num_vars = n_;
        w.trajectory.stem.assign(moved.begin(), moved.begin() + static_cast<std::ptrdiff_t>(s));
        w.trajectory.loop.assign(moved.begin() + static_cast<std::ptrdiff_t>(s), moved.end());
        w.trajectory = normalize(std::move(w.trajectory));

        for (int j = 0; j < n_; ++j) {
            if (!comps_[j].free) continue;
            Lasso l;
            // First pass over all nodes, then the loop again, entered through the closing edge.
            l.stem.push_back(pos[0][j]);
            for (std::size_t i = 0; i + 1 < total; ++i)
                if ((moved[i] >> j) & 1U) l.stem.push_back(pos[i + 1][j]);
            if ((moved[total - 1] >> j) & 1U) l.loop.push_back(pos[s][j]);
            for (std::size_t i = s; i + 1 < total; ++i)
                if ((moved[i] >> j) & 1U) l.loop.push_back(pos[i + 1][j]);
            w.free_traces.push_back(normalize(std::move(l)));
        }
        return w;
    }

    const KripkeStructure& k_;
    const std::vector<Component>& comps_;
    const BuchiAutomaton& a_;
    bool lockstep_;
    std::size_t cap_;
    int n_ = 0;
    std::vector<int> radix_;
    std::vector<int> index_;
    std::vector<Code> codes_;
    MarkedGraph graph_;
    std::vector<std::vector<VarSet>> moves_;
};

std::vector<Expr> chain(const Expr& e, Op op) {
    if (e->op != op) return {e};
    auto l = chain(e->lhs, op);
    auto r = chain(e->rhs, op);
    l.insert(l.end(), r.begin(), r.end());
    return l;
}

bool trajectory_independent(const Expr& e) {
    return is_temporal_free(e) || (vars_of(e).size() <= 1 && !has_next(e));
}

enum class Tri { False, True, Unknown };

struct Disjuncts {
    std::vector<Expr> items;
    std::vector<int> order;

    void reset() {
        order.resize(items.size());
        std::iota(order.begin(), order.end(), 0);
    }
};

struct Sub {
    Tri value = Tri::Unknown;
    bool witnessed = false;     // value is backed by the traces below (and maybe a trajectory)
    std::vector<Lasso> traces;  // for the variables from the current depth on
    std::optional<Trajectory> trajectory;
};

class Oracle {
public:
    Oracle(const KripkeStructure& k, const Formula& phi, int trace_bound, int traj_bound, const OracleOptions& opt)
        : k_(k), phi_(phi), opt_(opt), trace_bound_(trace_bound) {
        for (const auto& p : props_of(phi.body)) ensure_prop(k_, p);
        vars_ = phi.vars();
        n_ = static_cast<int>(vars_.size());
        universe_ = enumerate_lassos(k_, trace_bound);
        for (const auto& l : universe_) universe_letters_.push_back(letters(k_, l));
        complete_ = traces_complete(k_, trace_bound);
        if (opt.lockstep_only) trajectories_ = {lockstep_trajectory(n_)};
        else trajectories_ = enumerate_trajectories(n_, traj_bound);

        // Body shape `guard -> rest`: guard conjuncts that no trajectory can influence are
        // checked as soon as their traces are chosen.
        const Expr& body = phi.body;
        std::vector<Expr> dependent;
        Expr rest = body;
        if (body->op == Op::Implies) {
            rest = body->rhs;
            for (const Expr& c : chain(body->lhs, Op::And)) {
                if (!trajectory_independent(c)) {
                    dependent.push_back(c);
                    continue;
                }
                Guard g{c, -1, {}, {}, {}};
                for (const auto& v : vars_of(c)) {
                    g.vars.push_back(v);
                    g.var_idx.push_back(phi.var_index(v));
                    g.last_var = std::max(g.last_var, g.var_idx.back());
                }
                guards_.push_back(std::move(g));
            }
        }
        if (!guards_.empty()) {
            if (!dependent.empty()) leaf_disjuncts_.items.push_back(lnot(conjunction(dependent)));
            for (const Expr& d : chain(rest, Op::Or)) leaf_disjuncts_.items.push_back(d);
        } else {
            leaf_disjuncts_.items = chain(body, Op::Or);
        }
        negated_body_ = lnot(body);
        all_.resize(universe_.size());
        std::iota(all_.begin(), all_.end(), 0);
        prefilter();
        if (body->op == Op::Implies) {
            free_disjuncts_.items.push_back(lnot(body->lhs));
            for (const Expr& d : chain(body->rhs, Op::Or)) free_disjuncts_.items.push_back(d);
        } else {
            free_disjuncts_.items = chain(body, Op::Or);
        }
        leaf_disjuncts_.reset();
        free_disjuncts_.reset();
    }

    BoundedVerdict run(int traj_bound) {
        BoundedVerdict v;
        v.trace_bound = trace_bound_;
        v.traj_bound = traj_bound;
        v.traces_complete = complete_;
        std::vector<int> chosen;
        Sub s = solve(0, chosen);
        v.outcome = s.value == Tri::True ? Outcome::Holds : s.value == Tri::False ? Outcome::Fails : Outcome::Inconclusive;
        if (s.value != Tri::Unknown && s.witnessed) {
            for (std::size_t i = 0; i < s.traces.size(); ++i) {
                v.witness_vars.push_back(vars_[i]);
                v.witness.push_back(s.traces[i]);
            }
            v.trajectory = s.trajectory;
        }
        v.assignments = assignments_;
        v.note = note_;
        return v;
    }

private:
    struct Guard {
        Expr expr;
        int last_var;  // -1 when the guard mentions no variable
        std::map<std::vector<int>, bool> memo;
        std::vector<std::string> vars;
        std::vector<int> var_idx;
    };

    // Keyed by node identity; every formula passed here is owned by the oracle.
    const BuchiAutomaton& automaton(const Expr& e) {
        auto it = automata_.find(e.get());
        if (it == automata_.end()) it = automata_.emplace(e.get(), ltl_to_buchi(e, vars_, k_.aps)).first;
        return it->second;
    }

    bool guard_value(Guard& g, const std::vector<int>& key) {
        auto it = g.memo.find(key);
        if (it != g.memo.end()) return it->second;
        bool val;
        if (key.empty()) {
            Word w;
            w.loop.push_back(Letter{});
            val = eval_word_at(w, g.expr, g.vars, k_.aps, 0);
        } else {
            std::vector<LetterLasso> comps;
            for (int u : key) comps.push_back(universe_letters_[u]);
            val = eval_word_at(zip_word(comps, opt_.period_cap), g.expr, g.vars, k_.aps, 0);
        }
        g.memo.emplace(key, val);
        return val;
    }

    // Universe indices for variable d that pass every guard mentioning d alone.
    void prefilter() {
        candidates_.assign(n_, {});
        for (int d = 0; d < n_; ++d) {
            for (std::size_t u = 0; u < universe_.size(); ++u) {
                bool keep = true;
                for (Guard& g : guards_) {
                    if (g.var_idx.size() != 1 || g.var_idx[0] != d) continue;
                    keep = keep && guard_value(g, {static_cast<int>(u)});
                }
                if (keep) candidates_[d].push_back(static_cast<int>(u));
            }
        }
    }

    // False when an assigned guard conjunct fails, which makes the body true for every trajectory.
    bool guards_hold(int depth, const std::vector<int>& chosen) {
        for (Guard& g : guards_) {
            if (g.last_var != depth - 1) continue;
            std::vector<int> key;
            for (int i : g.var_idx) key.push_back(chosen[i]);
            if (!guard_value(g, key)) return false;
        }
        return true;
    }

    std::vector<Lasso> chosen_traces(const std::vector<int>& chosen) const {
        std::vector<Lasso> out;
        for (int i : chosen) out.push_back(universe_[i]);
        return out;
    }

    // `part` is the formula the product decided; for a disjunct, holding it is enough for the body.
    bool check_trajectory(const std::vector<Lasso>& traces, const Trajectory& t, const Expr& part, bool expect) {
        auto v = eval_body(k_, traces, t, part, vars_, opt_.period_cap);
        if (!v) {
            note_ = "composite period cap reached while re-checking a product witness";
            return false;
        }
        if (*v != expect) throw Error("oracle: product witness disagrees with the lasso evaluator");
        return true;
    }

    // Exact decision for variables depth..n-1 left free: an E-run of the product exists.
    std::optional<ProductWitness> product_search(const std::vector<int>& chosen, const Expr& body) {
        std::vector<Component> comps(n_);
        for (int j = 0; j < n_; ++j) {
            if (j < static_cast<int>(chosen.size())) comps[j].fixed = universe_letters_[chosen[j]];
            else comps[j].free = true;
        }
        AsyncProduct p(k_, comps, automaton(body), opt_.lockstep_only, opt_.product_cap);
        return p.search();
    }

    std::vector<Lasso> combined(const std::vector<int>& chosen, const ProductWitness& w) const {
        std::vector<Lasso> all = chosen_traces(chosen);
        all.insert(all.end(), w.free_traces.begin(), w.free_traces.end());
        return all;
    }

    Sub exact_suffix(const std::vector<int>& chosen, Disjuncts& disjuncts, bool existential) {
        const int depth = static_cast<int>(chosen.size());
        Sub s;
        try {
            if (existential) {
                for (std::size_t pos = 0; pos < disjuncts.order.size(); ++pos) {
                    const int which = disjuncts.order[pos];
                    auto w = product_search(chosen, disjuncts.items[which]);
                    if (!w) continue;
                    // The disjunct that succeeded is tried first next time.
                    std::rotate(disjuncts.order.begin(), disjuncts.order.begin() + static_cast<std::ptrdiff_t>(pos),
                                disjuncts.order.begin() + static_cast<std::ptrdiff_t>(pos) + 1);
                    auto all = combined(chosen, *w);
                    if (!check_trajectory(all, w->trajectory, disjuncts.items[which], true)) return s;
                    s.value = Tri::True;
                    s.witnessed = true;
                    s.traces.assign(all.begin() + depth, all.end());
                    s.trajectory = w->trajectory;
                    return s;
                }
                s.value = Tri::False;
                s.witnessed = true;
                return s;
            }
            auto w = product_search(chosen, negated_body_);
            if (w) {
                auto all = combined(chosen, *w);
                if (!check_trajectory(all, w->trajectory, phi_.body, false)) return s;
                s.value = Tri::False;
                s.witnessed = true;
                s.traces.assign(all.begin() + depth, all.end());
                s.trajectory = w->trajectory;
                return s;
            }
            s.value = Tri::True;
            s.witnessed = true;
        } catch (const ResourceError& e) {
            note_ = e.what();
            s.value = Tri::Unknown;
        }
        return s;
    }

    Sub leaf(const std::vector<int>& chosen) {
        ++assignments_;
        const bool is_e = *phi_.modality == Modality::E;
        const std::vector<Lasso> traces = chosen_traces(chosen);
        std::vector<LetterLasso> ls;
        for (int i : chosen) ls.push_back(universe_letters_[i]);
        for (const Trajectory& t : trajectories_) {
            auto v = eval_letters(ls, t, phi_.body, vars_, k_.aps, opt_.period_cap);
            if (!v) {
                note_ = "composite period cap reached";
                continue;
            }
            if (*v == is_e) {
                Sub s;
                s.value = is_e ? Tri::True : Tri::False;
                s.witnessed = true;
                s.trajectory = t;
                return s;
            }
        }
        if (!opt_.exact_trajectories) return {};
        return exact_suffix(chosen, leaf_disjuncts_, is_e);
    }

    Sub solve(int depth, std::vector<int>& chosen) {
        if (!guards_hold(depth, chosen)) {
            Sub s;
            s.value = Tri::True;
            s.witnessed = true;
            return s;
        }
        if (depth == n_) return leaf(chosen);

        const bool is_e = *phi_.modality == Modality::E;
        if (opt_.exact_trajectories) {
            const Quant want = is_e ? Quant::Exists : Quant::Forall;
            bool uniform = true;
            for (int i = depth; i < n_; ++i) uniform = uniform && phi_.prefix[i].quant == want;
            if (uniform) return exact_suffix(chosen, free_disjuncts_, is_e);
        }

        const bool exists = phi_.prefix[depth].quant == Quant::Exists;
        const Tri decisive = exists ? Tri::True : Tri::False;
        bool unknown = false;
        // Under a forall, traces failing a guard of their own give a true child and are skipped.
        const std::vector<int>& range = exists ? all_ : candidates_[depth];
        for (int i : range) {
            chosen.push_back(i);
            Sub child = solve(depth + 1, chosen);
            chosen.pop_back();
            if (child.value == decisive) {
                Sub s;
                s.value = decisive;
                s.witnessed = child.witnessed;
                s.traces.push_back(universe_[i]);
                s.traces.insert(s.traces.end(), child.traces.begin(), child.traces.end());
                s.trajectory = child.trajectory;
                return s;
            }
            if (child.value == Tri::Unknown) unknown = true;
        }
        Sub s;
        if (!unknown && complete_) s.value = exists ? Tri::False : Tri::True;
        return s;
    }

    KripkeStructure k_;
    const Formula& phi_;
    OracleOptions opt_;
    int trace_bound_;
    std::vector<std::string> vars_;
    int n_ = 0;
    std::vector<Lasso> universe_;
    std::vector<LetterLasso> universe_letters_;
    bool complete_ = false;
    std::vector<Trajectory> trajectories_;
    std::vector<Guard> guards_;
    std::vector<std::vector<int>> candidates_;
    std::vector<int> all_;
    Disjuncts leaf_disjuncts_;
    Disjuncts free_disjuncts_;
    std::map<const Node*, BuchiAutomaton> automata_;
    Expr negated_body_;
    std::size_t assignments_ = 0;
    std::string note_;
};

}  // namespace

BoundedVerdict oracle_check(const KripkeStructure& k, const Formula& phi, int trace_bound, int traj_bound,
                            const OracleOptions& options) {
    if (phi.is_hyperltl()) throw Error("oracle_check expects an E or A formula");
    check_well_formed(phi);
    if (trace_bound < 1 || traj_bound < 1) throw Error("oracle_check: bounds must be at least 1");
    if (phi.prefix.empty()) throw Error("oracle_check: formula has no trace quantifier");
    Oracle o(k, phi, trace_bound, traj_bound, options);
    return o.run(traj_bound);
}

std::optional<Trajectory> find_trajectory(const KripkeStructure& k_in, const std::vector<Lasso>& traces,
                                          const Expr& psi, const std::vector<std::string>& vars, bool lockstep_only) {
    if (traces.size() != vars.size() || traces.empty()) throw Error("find_trajectory: arity mismatch");
    KripkeStructure k = k_in;
    for (const auto& p : props_of(psi)) ensure_prop(k, p);
    std::vector<Component> comps(traces.size());
    for (std::size_t j = 0; j < traces.size(); ++j) comps[j].fixed = letters(k, traces[j]);
    const BuchiAutomaton a = ltl_to_buchi(psi, vars, k.aps);
    AsyncProduct p(k, comps, a, lockstep_only, 2000000);
    auto w = p.search();
    if (!w) return std::nullopt;
    return w->trajectory;
}

}  // namespace ahltl
