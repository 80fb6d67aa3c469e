#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ahltl/formula.hpp"
#include "ahltl/model.hpp"
#include "ahltl/synccheck.hpp"

namespace ahltl {

inline constexpr const char* kStutterProp = "st";

// Adds a stutter copy `<name>_st` of every state (index s + |S|), labelled L(s) plus st.
KripkeStructure build_stuttering(const KripkeStructure& k);

Expr change_formula(const std::vector<std::string>& props, const std::string& var);
Expr move_formula(const std::string& var);
Expr align_formula(const PhaseSpec& spec);
// (phase, fair)
std::pair<Expr, Expr> phase_and_fair(const std::vector<PhaseSpec>& specs, const std::vector<std::string>& vars);
Expr missalign_formula(const std::vector<PhaseSpec>& specs);

// Simple cycles of the graph with one edge lhs -> rhs per spec; each cycle lists spec indices.
std::vector<std::vector<int>> spec_cycles(const std::vector<PhaseSpec>& specs, std::size_t cap = 10000);
Expr block_formula(const std::vector<PhaseSpec>& specs);

Expr build_psi_sync(const Expr& psi, const AdmissibilityReport& report, const std::vector<std::string>& vars);
Expr build_psi_esync(const Expr& psi, const AdmissibilityReport& report, const std::vector<std::string>& vars);

// A synchronous instance whose verdict (inverted when negate_verdict is set) decides the input.
struct Reduction {
    KripkeStructure model;
    Formula formula;
    bool negate_verdict = false;
    FragmentClass cls = FragmentClass::NotAdmissible;
    std::string method;
    std::string route;
};

Reduction reduce_stutter(const KripkeStructure& k, const Formula& phi);

// Runs the synchronous backend on a reduction and maps the verdict back.
CheckResult check_reduced(const Reduction& r, const CheckOptions& options = {});

}  // namespace ahltl
