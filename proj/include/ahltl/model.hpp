#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ahltl/error.hpp"

namespace ahltl {

// A valuation of the atomic propositions, one bit per proposition index.
using Valuation = std::uint64_t;
inline constexpr int kMaxProps = 64;

// Set of trace variables, one bit per variable index.
using VarSet = std::uint32_t;

struct KripkeStructure {
    std::vector<std::string> aps;
    std::vector<std::string> names;
    std::vector<Valuation> labels;
    std::vector<std::vector<int>> succ;
    std::vector<int> init;

    int num_states() const { return static_cast<int>(names.size()); }
    std::size_t num_transitions() const;
    int prop_index(std::string_view name) const;
    int state_index(std::string_view name) const;
    bool holds(int state, int prop) const { return (labels[state] >> prop) & 1U; }

    int add_state(std::string name, Valuation label);
    void add_transition(int from, int to);
    int add_prop(const std::string& name);

    // Throws ModelError when an invariant (totality, ranges) is violated.
    void validate() const;
};

// Resolves a proposition name, materializing conjunctions written "a&b" on demand.
int ensure_prop(KripkeStructure& k, const std::string& name);

KripkeStructure parse_kripke(std::string_view text);
std::string print_kripke(const KripkeStructure& k);

// Ultimately periodic sequence stem . loop^omega.
template <class T>
struct BasicLasso {
    std::vector<T> stem;
    std::vector<T> loop;

    std::size_t size() const { return stem.size() + loop.size(); }
    const T& at(std::size_t i) const {
        if (i < stem.size()) return stem[i];
        return loop[(i - stem.size()) % loop.size()];
    }
    // Index into stem++loop of position i.
    std::size_t slot(std::size_t i) const {
        if (i < stem.size()) return i;
        return stem.size() + (i - stem.size()) % loop.size();
    }
    std::size_t next_slot(std::size_t s) const { return s + 1 < size() ? s + 1 : stem.size(); }
    bool operator==(const BasicLasso&) const = default;
    auto operator<=>(const BasicLasso&) const = default;
};

using Lasso = BasicLasso<int>;
using LetterLasso = BasicLasso<Valuation>;

// Shortest loop period, then stem rolled back into the loop as far as possible.
template <class T>
BasicLasso<T> normalize(BasicLasso<T> l) {
    const std::size_t n = l.loop.size();
    for (std::size_t p = 1; p <= n; ++p) {
        if (n % p != 0) continue;
        bool periodic = true;
        for (std::size_t i = p; i < n && periodic; ++i) periodic = l.loop[i] == l.loop[i - p];
        if (periodic) {
            l.loop.resize(p);
            break;
        }
    }
    while (!l.stem.empty() && l.stem.back() == l.loop.back()) {
        l.loop.insert(l.loop.begin(), l.loop.back());
        l.loop.pop_back();
        l.stem.pop_back();
    }
    return l;
}

struct Trajectory {
    std::vector<VarSet> stem;
    std::vector<VarSet> loop;
    int num_vars = 0;

    VarSet at(std::size_t i) const {
        if (i < stem.size()) return stem[i];
        return loop[(i - stem.size()) % loop.size()];
    }
    bool is_fair() const;
    bool well_formed() const;
    bool operator==(const Trajectory&) const = default;
};

Trajectory lockstep_trajectory(int num_vars);
Trajectory normalize(Trajectory t);

// A trace variable bound to a trace and a pointer into it.
struct PointedTrace {
    Lasso trace;
    std::size_t pointer = 0;
};

struct TraceAssignment {
    std::vector<std::string> vars;
    std::vector<PointedTrace> traces;
};

bool is_path(const KripkeStructure& k, const Lasso& l, bool from_init = true);
LetterLasso letters(const KripkeStructure& k, const Lasso& l);

// All lassos from an initial state with |stem|+|loop| <= bound, in normalized form.
std::vector<Lasso> enumerate_lassos(const KripkeStructure& k, int bound);

// Length of the longest lasso from an initial state that repeats no state.
int longest_simple_lasso(const KripkeStructure& k, long budget = 200000);

// Expansion into the stuttering structure: state s stays s, its stutter copy is s + num_states.
std::vector<Lasso> expand(const std::vector<Lasso>& traces, const Trajectory& t, int num_states);
std::pair<std::vector<Lasso>, Trajectory> compress(const std::vector<Lasso>& traces, int num_states);

bool is_stuttering_expansion(const LetterLasso& a, const LetterLasso& b);

}  // namespace ahltl
