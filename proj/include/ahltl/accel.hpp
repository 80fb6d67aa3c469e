#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ahltl/formula.hpp"
#include "ahltl/model.hpp"
#include "ahltl/stutter.hpp"

namespace ahltl {

// Colour of a state: its label restricted to the phase propositions.
struct ColorFn {
    Valuation mask = 0;

    Valuation operator()(const KripkeStructure& k, int s) const { return k.labels[s] & mask; }
    static ColorFn of(const KripkeStructure& k, const std::vector<std::string>& props);
};

struct AccelStructure {
    KripkeStructure model;
    ColorFn color;
    int base_states = 0;
    // sink_of[s] is the index of s_bot in `model`, or -1 when s cannot be a sink.
    std::vector<int> sink_of;
    // For an accelerated edge (s, t): the K-states strictly between s and t.
    std::map<std::pair<int, int>, std::vector<int>> edge_witness;
    // For a sink-capable s: an infinite same-colour K-path starting at s.
    std::map<int, Lasso> sink_witness;

    bool is_sink(int v) const { return v >= base_states; }
};

// The sink copy of s is named `<name>_bot`; only states that can be a sink get one.
AccelStructure build_accelerated(const KripkeStructure& k, const std::vector<std::string>& props);

// Replays every stored witness against K; throws ModelError on the first mismatch.
void check_witnesses(const AccelStructure& acc, const KripkeStructure& k);

Lasso acc_path(const AccelStructure& acc, const KripkeStructure& k, const Lasso& rho);
Lasso dec_path(const AccelStructure& acc, const KripkeStructure& k, const Lasso& rho_acc);

// Colours of rho at position 0 and at every colour change, with the final colour repeated once
// when there are finitely many changes. Loops are unrolled until the sequence becomes periodic.
BasicLasso<Valuation> color_changes(const KripkeStructure& k, const ColorFn& color, const Lasso& rho);

Reduction reduce_accel(const KripkeStructure& k, const Formula& phi);

}  // namespace ahltl
