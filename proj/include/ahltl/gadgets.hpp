#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ahltl/formula.hpp"
#include "ahltl/model.hpp"

namespace ahltl {

struct PcpInstance {
    std::vector<std::string> alphabet;  // single-character symbols
    std::vector<std::pair<std::string, std::string>> dominos;  // (w_i, v_i)

    // Throws ModelError unless the alphabet has two symbols and every word is a nonempty word over it.
    void validate() const;
};

// "b/ca,a/ab" -> dominos; the alphabet is the set of letters used, padded to two symbols if needed.
PcpInstance parse_dominos(std::string_view text);

struct PcpOptions {
    // Use the type constraint verbatim: (w & !v) U end for the w-trace, which cannot hold at the
    // unlabelled initial state, so every instance satisfies the formula vacuously.
    bool literal_type = false;
    // Add disjuncts that accept pairs whose letter or domino counts differ.
    bool length_guards = true;
};

inline constexpr const char* kPcpVarW = "pw";
inline constexpr const char* kPcpVarV = "pv";

// Initial state `init`, end state `end`, chains `w<i>_s<j>`, `w<i>_u<j>` and their v mirrors.
KripkeStructure pcp_structure(const PcpInstance& inst);
Formula pcp_formula(const PcpInstance& inst, const PcpOptions& options = {});

struct Gadget {
    KripkeStructure model;
    Formula formula;
};

Gadget pcp_gadget(const PcpInstance& inst, const PcpOptions& options = {});

// The w-word and v-word spelled by a pair of traces of the PCP structure (letters at lc states),
// and the domino indices (1-based) in visiting order.
struct PcpReading {
    std::string w_word;
    std::string v_word;
    std::vector<int> w_dominos;
    std::vector<int> v_dominos;
};
PcpReading read_pcp_traces(const KripkeStructure& k, const Lasso& tw, const Lasso& tv);

inline constexpr const char* kSyncProp = "sync";

// The g mapping: X doubles, U waits for non-sync positions.
Expr sync_translate(const Expr& psi, const std::vector<std::string>& vars);

// Every transition (s0, s1) becomes s0 -> u_s0_s1 -> s1 with the middle state labelled {sync}.
KripkeStructure pspace_structure(const KripkeStructure& k);
Gadget pspace_gadget(const KripkeStructure& k, const Formula& phi);

}  // namespace ahltl
