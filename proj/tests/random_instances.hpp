#pragma once

// Random small instances shared by the unit tests and the acceptance binary.

#include <random>
#include <string>
#include <vector>

#include "ahltl/formula.hpp"
#include "ahltl/model.hpp"
#include "ahltl/synccheck.hpp"

namespace ahltl::testing {

using Rng = std::mt19937;

inline int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// Arbitrary total structure. With `finite_traces` the reachable cycles are deterministic, so the
// structure has finitely many traces and bounded enumeration sees all of them.
inline KripkeStructure random_kripke(Rng& rng, int max_states, const std::vector<std::string>& props,
                                     bool finite_traces) {
    KripkeStructure k;
    k.aps = props;
    const int n = pick(rng, 1, max_states);
    for (int s = 0; s < n; ++s) {
        Valuation label = 0;
        for (std::size_t p = 0; p < props.size(); ++p)
            if (coin(rng)) label |= Valuation{1} << p;
        k.add_state("s" + std::to_string(s), label);
    }
    if (finite_traces) {
        for (int s = 0; s < n; ++s) {
            const bool sink = s == n - 1 || coin(rng, 0.3);
            if (sink) {
                if (s + 1 < n && coin(rng, 0.2)) {
                    k.add_transition(s, s + 1);
                } else {
                    k.add_transition(s, s);
                }
                continue;
            }
            const int fan = pick(rng, 1, 2);
            for (int i = 0; i < fan; ++i) k.add_transition(s, pick(rng, s + 1, n - 1));
        }
        // A successor that was made a two-state cycle partner must point back and nowhere else.
        for (int s = 0; s + 1 < n; ++s) {
            if (k.succ[s].size() == 1 && k.succ[s][0] == s + 1 && k.succ[s + 1].size() == 1 && k.succ[s + 1][0] == s + 1) {
                if (coin(rng, 0.5)) k.succ[s + 1][0] = s;
            }
        }
        k.init.push_back(0);
        if (n > 1 && coin(rng, 0.3)) k.init.push_back(pick(rng, 1, n - 1));
    } else {
        for (int s = 0; s < n; ++s) {
            const int fan = pick(rng, 1, 2);
            for (int i = 0; i < fan; ++i) k.add_transition(s, pick(rng, 0, n - 1));
        }
        k.init.push_back(pick(rng, 0, n - 1));
        if (n > 1 && coin(rng, 0.3)) {
            int other = pick(rng, 0, n - 1);
            if (other != k.init[0]) k.init.push_back(other);
        }
    }
    k.validate();
    return k;
}

inline Expr random_state_formula(Rng& rng, const std::vector<std::string>& vars, const std::vector<std::string>& props,
                                 int depth = 1) {
    if (depth == 0 || coin(rng, 0.4)) {
        Expr a = atom(props[pick(rng, 0, static_cast<int>(props.size()) - 1)],
                      vars[pick(rng, 0, static_cast<int>(vars.size()) - 1)]);
        return coin(rng, 0.3) ? lnot(a) : a;
    }
    Expr l = random_state_formula(rng, vars, props, depth - 1);
    Expr r = random_state_formula(rng, vars, props, depth - 1);
    switch (pick(rng, 0, 2)) {
        case 0: return land(l, r);
        case 1: return lor(l, r);
        default: return iff(l, r);
    }
}

// Next-free formula over one trace variable.
inline Expr random_monadic(Rng& rng, const std::string& var, const std::vector<std::string>& props, int depth = 2) {
    auto leaf = [&]() {
        Expr a = atom(props[pick(rng, 0, static_cast<int>(props.size()) - 1)], var);
        return coin(rng, 0.3) ? lnot(a) : a;
    };
    if (depth == 0) return leaf();
    switch (pick(rng, 0, 5)) {
        case 0: return finally(random_monadic(rng, var, props, depth - 1));
        case 1: return globally(random_monadic(rng, var, props, depth - 1));
        case 2: return until(random_monadic(rng, var, props, depth - 1), random_monadic(rng, var, props, depth - 1));
        case 3: return land(random_monadic(rng, var, props, depth - 1), random_monadic(rng, var, props, depth - 1));
        case 4: return lor(random_monadic(rng, var, props, depth - 1), random_monadic(rng, var, props, depth - 1));
        default: return leaf();
    }
}

// G of a conjunction of p[x] <-> p[y]; with `same_props` every pair uses the same proposition set.
inline Expr random_phase(Rng& rng, const std::vector<std::string>& vars, const std::vector<std::string>& props,
                         bool same_props, bool all_props = false) {
    std::vector<std::string> chosen;
    for (const auto& p : props)
        if (all_props || coin(rng)) chosen.push_back(p);
    if (chosen.empty()) chosen.push_back(props[pick(rng, 0, static_cast<int>(props.size()) - 1)]);
    std::vector<Expr> parts;
    const int pairs = vars.size() > 2 ? pick(rng, 1, 2) : 1;
    for (int i = 0; i < pairs; ++i) {
        int x = pick(rng, 0, static_cast<int>(vars.size()) - 1);
        int y = pick(rng, 0, static_cast<int>(vars.size()) - 2);
        if (y >= x) ++y;
        std::vector<std::string> use = chosen;
        if (!same_props && coin(rng, 0.5)) use = {props[pick(rng, 0, static_cast<int>(props.size()) - 1)]};
        for (const auto& p : use) parts.push_back(iff(atom(p, vars[x]), atom(p, vars[y])));
    }
    return globally(conjunction(parts));
}

// Boolean combination of a state formula, monadic formulas and one phase formula in positive polarity.
inline Expr random_admissible(Rng& rng, const std::vector<std::string>& vars, const std::vector<std::string>& props,
                              bool same_props) {
    Expr ph = random_phase(rng, vars, props, same_props);
    auto mono = [&]() { return random_monadic(rng, vars[pick(rng, 0, static_cast<int>(vars.size()) - 1)], props, 2); };
    switch (pick(rng, 0, 5)) {
        case 0: return ph;
        case 1: return implies(random_state_formula(rng, vars, props), ph);
        case 2: return land(ph, mono());
        case 3: return lor(mono(), ph);
        case 4: return implies(random_state_formula(rng, vars, props), land(mono(), ph));
        default: return implies(land(random_state_formula(rng, vars, props), mono()), ph);
    }
}

// Simple admissible body whose monadic parts read only the phase propositions, so that the
// accelerating construction accepts it.
inline Expr random_simple_admissible(Rng& rng, const std::vector<std::string>& vars,
                                     const std::vector<std::string>& props) {
    std::vector<std::string> P;
    for (const auto& p : props)
        if (coin(rng)) P.push_back(p);
    if (P.empty()) P.push_back(props[pick(rng, 0, static_cast<int>(props.size()) - 1)]);
    Expr ph = random_phase(rng, vars, P, true, true);
    auto mono = [&]() { return random_monadic(rng, vars[pick(rng, 0, static_cast<int>(vars.size()) - 1)], P, 2); };
    switch (pick(rng, 0, 5)) {
        case 0: return ph;
        case 1: return implies(random_state_formula(rng, vars, props), ph);
        case 2: return land(ph, mono());
        case 3: return lor(mono(), ph);
        case 4: return implies(random_state_formula(rng, vars, props), land(mono(), ph));
        default: return implies(land(random_state_formula(rng, vars, props), mono()), ph);
    }
}

// Co-phase in positive polarity (or, equivalently, a phase formula in negative polarity).
inline Expr random_coadmissible(Rng& rng, const std::vector<std::string>& vars, const std::vector<std::string>& props) {
    Expr ph = random_phase(rng, vars, props, true);
    auto mono = [&]() { return random_monadic(rng, vars[pick(rng, 0, static_cast<int>(vars.size()) - 1)], props, 1); };
    switch (pick(rng, 0, 3)) {
        case 0: return finally(lnot(ph->lhs));
        case 1: return implies(ph, mono());
        case 2: return lor(random_state_formula(rng, vars, props), finally(lnot(ph->lhs)));
        default: return land(mono(), lnot(ph));
    }
}

// Generalized Buchi automaton with random cube guards over `num_props` propositions per variable.
inline BuchiAutomaton random_automaton(Rng& rng, int num_vars, int num_props, int max_states, int max_marks) {
    BuchiAutomaton a;
    a.num_vars = num_vars;
    a.num_marks = pick(rng, 0, max_marks);
    const int n = pick(rng, 1, max_states);
    for (int q = 0; q < n; ++q) a.add_state();
    a.initial.push_back(0);
    if (n > 1 && coin(rng, 0.3)) a.initial.push_back(pick(rng, 1, n - 1));
    for (int q = 0; q < n; ++q) {
        const int fan = pick(rng, 1, 3);
        for (int e = 0; e < fan; ++e) {
            Cube g = Cube::top(num_vars);
            for (int v = 0; v < num_vars; ++v)
                for (int p = 0; p < num_props; ++p) {
                    const int lit = pick(rng, 0, 3);
                    if (lit == 0) g.pos[v] |= Valuation{1} << p;
                    if (lit == 1) g.neg[v] |= Valuation{1} << p;
                }
            MarkSet m = 0;
            for (int i = 0; i < a.num_marks; ++i)
                if (coin(rng, 0.4)) m |= MarkSet{1} << i;
            a.out[q].push_back({pick(rng, 0, n - 1), g, m});
        }
    }
    return a;
}

inline Word random_word(Rng& rng, int num_vars, int num_props, int max_stem = 3, int max_loop = 3) {
    auto letter = [&]() {
        Letter l(num_vars, 0);
        for (auto& x : l) x = static_cast<Valuation>(pick(rng, 0, (1 << num_props) - 1));
        return l;
    };
    Word w;
    const int stem = pick(rng, 0, max_stem);
    const int loop = pick(rng, 1, max_loop);
    for (int i = 0; i < stem; ++i) w.stem.push_back(letter());
    for (int i = 0; i < loop; ++i) w.loop.push_back(letter());
    return w;
}

}  // namespace ahltl::testing
