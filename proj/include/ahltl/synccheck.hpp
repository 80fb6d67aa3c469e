#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ahltl/formula.hpp"
#include "ahltl/model.hpp"

namespace ahltl {

using MarkSet = std::uint64_t;

// Conjunction of literals, per trace variable: bits that must be set and bits that must be clear.
struct Cube {
    std::vector<Valuation> pos;
    std::vector<Valuation> neg;

    static Cube top(int num_vars) { return {std::vector<Valuation>(num_vars, 0), std::vector<Valuation>(num_vars, 0)}; }
    bool matches(const std::vector<Valuation>& letter) const;
    bool consistent() const;
    // Conjunction; the result is inconsistent when the cubes contradict each other.
    Cube meet(const Cube& other) const;
    bool operator==(const Cube&) const = default;
    auto operator<=>(const Cube&) const = default;
};

struct Transition {
    int dst;
    Cube guard;
    MarkSet marks;
};

// Transition-based generalized Buchi automaton over tuples of valuations, one per trace variable.
// A run is accepting when every mark in [0, num_marks) occurs infinitely often.
struct BuchiAutomaton {
    int num_vars = 0;
    int num_marks = 0;
    std::vector<std::vector<Transition>> out;
    std::vector<int> initial;
    // Kripke states of variables projected away since the last complementation (outermost first).
    std::vector<std::vector<int>> tags;

    int num_states() const { return static_cast<int>(out.size()); }
    std::size_t num_transitions() const;
    MarkSet all_marks() const { return num_marks >= 64 ? ~MarkSet{0} : ((MarkSet{1} << num_marks) - 1); }
    int add_state();
};

using Letter = std::vector<Valuation>;
using Word = BasicLasso<Letter>;

// Zips per-variable letter lassos into one lasso over tuples.
Word zip_word(const std::vector<LetterLasso>& components, std::size_t period_cap = 100000);

BuchiAutomaton ltl_to_buchi(const Expr& psi, const std::vector<std::string>& vars, const std::vector<std::string>& aps);

// Synchronized product with K on the last trace variable, which is then projected away.
BuchiAutomaton product_with_kripke(const BuchiAutomaton& a, const KripkeStructure& k);
BuchiAutomaton intersect(const BuchiAutomaton& a, const BuchiAutomaton& b);
BuchiAutomaton complement_buchi(const BuchiAutomaton& a, const std::vector<std::vector<Valuation>>& alphabet,
                                std::size_t state_cap = 100000);
// Removes states that cannot reach an accepting cycle.
BuchiAutomaton trim(const BuchiAutomaton& a);
bool is_weak(const BuchiAutomaton& a);

bool accepts(const BuchiAutomaton& a, const Word& w);
bool is_empty(const BuchiAutomaton& a);

// Explicit graph with marked edges, used by the emptiness checks here and in the oracle.
struct MarkedEdge {
    int dst;
    MarkSet marks;
};
struct MarkedGraph {
    std::vector<std::vector<MarkedEdge>> adj;
    std::vector<int> init;
};
// A reachable cycle whose edges carry every mark in `required`. Edge indices refer to adj[node];
// stem_edges[i] leaves nodes.stem[i], loop_edges[i] leaves nodes.loop[i] (the last one closes the cycle).
struct AcceptingRun {
    Lasso nodes;
    std::vector<int> stem_edges;
    std::vector<int> loop_edges;
};
std::optional<AcceptingRun> find_accepting_run(const MarkedGraph& g, MarkSet required);
std::optional<Lasso> find_accepting_lasso(const MarkedGraph& g, MarkSet required);

enum class Verdict { Holds, Fails, Resource };
const char* to_string(Verdict v);

struct CheckOptions {
    std::size_t state_cap = 100000;
};

struct CheckResult {
    Verdict verdict = Verdict::Resource;
    std::vector<std::string> witness_vars;
    std::vector<Lasso> witness;
    std::string note;
    std::size_t largest_automaton = 0;
};

// Synchronous HyperLTL model checking: folds the quantifier prefix innermost-out.
CheckResult check_hyperltl(const KripkeStructure& k, const Formula& phi, const CheckOptions& options = {});

// Letters occurring as labels in K, used as the complementation alphabet.
std::vector<Valuation> label_alphabet(const KripkeStructure& k);

}  // namespace ahltl
