#pragma once

// The worked trace assignments for align, missalign, phase and block, shared by the unit tests
// and the acceptance binary. Letters are over {a, b, c, st}.

#include <string>
#include <vector>

#include "ahltl/oracle.hpp"
#include "ahltl/stutter.hpp"

namespace ahltl::testing {

inline constexpr Valuation kA = 1, kB = 2, kC = 4, kSt = 8;

inline const std::vector<std::string>& example_aps() {
    static const std::vector<std::string> aps{"a", "b", "c", "st"};
    return aps;
}

inline const std::vector<std::string>& example_vars() {
    static const std::vector<std::string> vars{"p1", "p2", "p3"};
    return vars;
}

inline bool example_eval(const std::vector<LetterLasso>& traces, const Expr& e, std::size_t pos) {
    std::vector<std::string> vars(example_vars().begin(), example_vars().begin() + traces.size());
    return eval_word_at(zip_word(traces), e, vars, example_aps(), pos);
}

struct WorkedTraceResults {
    bool align_everywhere_1 = false;  // Pi^1: align at every position
    bool not_align_2 = false;         // Pi^2: align fails at position 0
    bool missalign_3 = false;         // Pi^3: missalign at position 1
    bool phase_3trace = false;        // three traces: phase at position 0
    bool block_3trace = false;        // three traces: block at position 1
};

inline WorkedTraceResults run_worked_traces() {
    const PhaseSpec a12{"p1", "p2", {"a"}};
    WorkedTraceResults r;

    const std::vector<LetterLasso> pi1{LetterLasso{{0, kSt}, {kA}}, LetterLasso{{0, 0}, {kA}}};
    r.align_everywhere_1 = true;
    for (std::size_t pos = 0; pos < 6; ++pos)
        r.align_everywhere_1 = r.align_everywhere_1 && example_eval(pi1, align_formula(a12), pos);

    const std::vector<LetterLasso> pi2{LetterLasso{{0}, {kA}}, LetterLasso{{0, 0}, {kA}}};
    r.not_align_2 = !example_eval(pi2, align_formula(a12), 0);

    const std::vector<LetterLasso> pi3{LetterLasso{{kA}, {0}}, LetterLasso{{kA, 0}, {kA}}};
    r.missalign_3 = example_eval(pi3, missalign_formula({a12}), 1);

    const std::vector<PhaseSpec> ring{{"p1", "p2", {"a"}}, {"p2", "p3", {"b"}}, {"p3", "p1", {"c"}}};
    const std::vector<LetterLasso> three{LetterLasso{{0, 0, kA}, {kC}}, LetterLasso{{0, 0, kB}, {kA}},
                                         LetterLasso{{0, 0, kC}, {kB}}};
    const std::vector<std::string> vars = example_vars();
    r.phase_3trace = example_eval(three, phase_and_fair(ring, vars).first, 0);
    r.block_3trace = example_eval(three, block_formula(ring), 1);
    return r;
}

}  // namespace ahltl::testing
