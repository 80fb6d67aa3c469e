#pragma once

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ahltl/error.hpp"

namespace ahltl {

enum class Op { True, False, Atom, Not, And, Or, Implies, Iff, Next, Until, Globally, Finally };

struct Node;
using Expr = std::shared_ptr<const Node>;

struct Node {
    Op op;
    std::string prop;  // Atom only
    std::string var;   // Atom only
    Expr lhs;
    Expr rhs;
};

Expr mk_true();
Expr mk_false();
Expr atom(std::string prop, std::string var);
Expr lnot(Expr a);
Expr land(Expr a, Expr b);
Expr lor(Expr a, Expr b);
Expr implies(Expr a, Expr b);
Expr iff(Expr a, Expr b);
Expr next(Expr a);
Expr until(Expr a, Expr b);
Expr globally(Expr a);
Expr finally(Expr a);
Expr conjunction(const std::vector<Expr>& parts);  // empty -> true
Expr disjunction(const std::vector<Expr>& parts);  // empty -> false

enum class Quant { Forall, Exists };
enum class Modality { E, A };

struct Quantifier {
    Quant quant;
    std::string var;
    bool operator==(const Quantifier&) const = default;
};

// Asynchronous formulas carry a modality; synchronous HyperLTL formulas do not.
struct Formula {
    std::vector<Quantifier> prefix;
    std::optional<Modality> modality;
    Expr body;

    bool is_hyperltl() const { return !modality.has_value(); }
    std::vector<std::string> vars() const;
    int var_index(std::string_view v) const;
};

Formula parse_formula(std::string_view text);
Expr parse_body(std::string_view text);

std::string to_string(const Expr& e);
std::string to_string(const Formula& f);

bool equal(const Expr& a, const Expr& b);
bool is_temporal_free(const Expr& e);
bool has_next(const Expr& e);
std::set<std::string> vars_of(const Expr& e);
std::set<std::string> props_of(const Expr& e);
std::size_t count_temporal(const Expr& e);

// Rewrites And, Implies, Iff, G and F into Not, Or, Until, Next.
Expr desugar(const Expr& e);

// Rename trace variables in a body; unmapped variables are kept.
Expr rename_vars(const Expr& e, const std::vector<std::pair<std::string, std::string>>& mapping);

// Throws FormulaError if the formula is not closed or quantifies a variable twice.
void check_well_formed(const Formula& f);

// Phase-formula analysis.

struct PhaseSpec {
    std::string lhs;
    std::string rhs;
    std::vector<std::string> props;  // sorted, nonempty
    bool operator==(const PhaseSpec&) const = default;
};

enum class FragmentClass { SimpleAdmissible, Admissible, CoAdmissible, StateMonadicOnly, NotAdmissible };
enum class Polarity { Positive, Negative };

const char* to_string(FragmentClass c);

struct AdmissibilityReport {
    FragmentClass cls = FragmentClass::NotAdmissible;
    std::vector<PhaseSpec> phase;
    // Polarity of the phase formula itself; a co-phase site in positive position counts as negative.
    Polarity polarity = Polarity::Positive;
    bool cophase_site = false;
    std::vector<Expr> sites;
    std::vector<Expr> monadic_parts;
    std::vector<Expr> state_parts;
    std::string reason;

    bool has_phase() const { return !sites.empty(); }
    std::vector<std::string> shared_props() const;  // empty unless all specs agree
};

AdmissibilityReport classify(const Expr& body, const std::vector<Quantifier>& prefix);

// The phase formula G(conjunction of all atomic phase formulas) described by a report.
Expr phase_formula(const AdmissibilityReport& report);
Expr atomic_phase(const PhaseSpec& spec);

// Replaces the phase occurrence. For a co-phase site the replacement is negated so the result
// is psi with the phase formula itself replaced by xi.
Expr substitute_phase(const Expr& psi, const AdmissibilityReport& report, const Expr& xi);

// Replaces the syntactic site (phase or co-phase node) with the given formula, verbatim.
Expr replace_phase_site(const Expr& psi, const AdmissibilityReport& report, const Expr& replacement);

// Negation pushed through temporal operators, stopping at temporal-free subformulas.
Expr negate_nnf(const Expr& e);
Formula negate_to_positive(const Formula& phi);

Expr cophase_to_monadic(const std::vector<PhaseSpec>& specs);

}  // namespace ahltl
