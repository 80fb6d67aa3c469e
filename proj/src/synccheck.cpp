#include <algorithm>

#include "ahltl/synccheck.hpp"

namespace ahltl {

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "HOLDS";
        case Verdict::Fails: return "FAILS";
        case Verdict::Resource: return "RESOURCE";
    }
    return "?";
}

namespace {

MarkedGraph final_graph(const BuchiAutomaton& a) {
    MarkedGraph g;
    g.init = a.initial;
    g.adj.resize(a.out.size());
    for (int q = 0; q < a.num_states(); ++q)
        for (const auto& t : a.out[q]) g.adj[q].push_back({t.dst, t.marks});
    return g;
}

}  // namespace

CheckResult check_hyperltl(const KripkeStructure& k_in, const Formula& phi, const CheckOptions& options) {
    if (!phi.is_hyperltl()) throw Error("check_hyperltl expects a formula without trajectory modality");
    check_well_formed(phi);
    KripkeStructure k = k_in;
    for (const auto& p : props_of(phi.body)) ensure_prop(k, p);

    CheckResult result;
    const std::vector<std::string> vars = phi.vars();
    const int n = static_cast<int>(vars.size());
    try {
        bool neg = n > 0 && phi.prefix.back().quant == Quant::Forall;
        BuchiAutomaton a = ltl_to_buchi(neg ? lnot(phi.body) : phi.body, vars, k.aps);
        result.largest_automaton = a.out.size();
        const std::vector<Valuation> labels = label_alphabet(k);
        for (int i = n - 1; i >= 0; --i) {
            const bool want = phi.prefix[i].quant == Quant::Forall;
            if (neg != want) {
                a = complement_buchi(a, std::vector<std::vector<Valuation>>(i + 1, labels), options.state_cap);
                a.tags.clear();
                neg = want;
            }
            a = trim(product_with_kripke(a, k));
            result.largest_automaton = std::max(result.largest_automaton, a.out.size());
            if (a.out.size() > options.state_cap) throw ResourceError("product exceeds state cap");
        }
        std::optional<Lasso> run = find_accepting_lasso(final_graph(a), a.all_marks());
        const bool holds = neg ? !run.has_value() : run.has_value();
        result.verdict = holds ? Verdict::Holds : Verdict::Fails;
        if (run && !a.tags.empty()) {
            const std::size_t block = a.tags[run->loop.front()].size();
            for (std::size_t j = 0; j < block; ++j) {
                Lasso l;
                for (int node : run->stem) l.stem.push_back(a.tags[node][j]);
                for (int node : run->loop) l.loop.push_back(a.tags[node][j]);
                result.witness.push_back(normalize(std::move(l)));
                result.witness_vars.push_back(vars[j]);
            }
        }
    } catch (const ResourceError& e) {
        result.verdict = Verdict::Resource;
        result.note = e.what();
    }
    return result;
}

}  // namespace ahltl
