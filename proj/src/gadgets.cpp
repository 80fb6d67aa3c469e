#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "ahltl/gadgets.hpp"

namespace ahltl {

namespace {

const std::set<std::string> kPcpReserved{"v", "w", "lc", "end"};

bool reserved_pcp_name(const std::string& s) {
    if (kPcpReserved.count(s)) return true;
    if (s.size() > 3 && s.compare(0, 3, "dom") == 0)
        return std::all_of(s.begin() + 3, s.end(), [](unsigned char c) { return std::isdigit(c); });
    return false;
}

}  // namespace

void PcpInstance::validate() const {
    if (alphabet.size() < 2) throw ModelError("PCP alphabet needs at least two symbols");
    std::set<std::string> seen;
    for (const auto& a : alphabet) {
        if (a.size() != 1 || !std::isalpha(static_cast<unsigned char>(a[0])))
            throw ModelError("PCP symbol '" + a + "' must be a single letter");
        if (reserved_pcp_name(a)) throw ModelError("PCP symbol '" + a + "' clashes with a reserved proposition");
        if (!seen.insert(a).second) throw ModelError("PCP symbol '" + a + "' listed twice");
    }
    if (dominos.empty()) throw ModelError("PCP instance has no dominos");
    for (const auto& [w, v] : dominos) {
        for (const std::string* word : {&w, &v}) {
            if (word->empty()) throw ModelError("PCP words must be nonempty");
            for (char c : *word)
                if (!seen.count(std::string(1, c)))
                    throw ModelError(std::string("letter '") + c + "' is not in the PCP alphabet");
        }
    }
}

PcpInstance parse_dominos(std::string_view text) {
    PcpInstance inst;
    std::set<char> letters;
    std::stringstream ss{std::string(text)};
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        if (item.empty()) continue;
        const auto slash = item.find('/');
        if (slash == std::string::npos || item.find('/', slash + 1) != std::string::npos)
            throw ParseError("domino '" + item + "' is not of the form top/bottom", 1, 1);
        inst.dominos.push_back({item.substr(0, slash), item.substr(slash + 1)});
        for (char c : item)
            if (c != '/') letters.insert(c);
    }
    for (char c : letters) inst.alphabet.push_back(std::string(1, c));
    // A one-letter instance is padded with an unused symbol.
    for (char c = 'a'; inst.alphabet.size() < 2 && c <= 'z'; ++c) {
        std::string s(1, c);
        if (!letters.count(c) && !reserved_pcp_name(s)) inst.alphabet.push_back(s);
    }
    std::sort(inst.alphabet.begin(), inst.alphabet.end());
    inst.validate();
    return inst;
}

KripkeStructure pcp_structure(const PcpInstance& inst) {
    inst.validate();
    KripkeStructure k;
    for (const auto& a : inst.alphabet) k.add_prop(a);
    const int pv = k.add_prop("v");
    const int pw = k.add_prop("w");
    const int lc = k.add_prop("lc");
    const int end = k.add_prop("end");
    std::vector<int> dom;
    for (std::size_t i = 0; i < inst.dominos.size(); ++i) dom.push_back(k.add_prop("dom" + std::to_string(i + 1)));
    auto bit = [](int p) { return Valuation{1} << p; };

    const int init = k.add_state("init", 0);
    const int s_end = k.add_state("end", bit(end));
    k.init = {init};
    k.add_transition(s_end, s_end);
    // Without this edge no trace reaches the end state.
    k.add_transition(init, s_end);

    for (std::size_t i = 0; i < inst.dominos.size(); ++i) {
        for (int side = 0; side < 2; ++side) {
            const std::string& word = side == 0 ? inst.dominos[i].first : inst.dominos[i].second;
            const char tag = side == 0 ? 'w' : 'v';
            const Valuation kind = bit(side == 0 ? pw : pv);
            int prev = init;
            for (std::size_t j = 0; j < word.size(); ++j) {
                const std::string idx = std::to_string(i + 1) + "_";
                const Valuation letter = bit(k.prop_index(std::string(1, word[j])));
                const int s = k.add_state(tag + idx + "s" + std::to_string(j + 1), kind | letter | bit(lc));
                Valuation u_label = kind;
                if (j + 1 == word.size()) u_label |= bit(dom[i]);
                const int u = k.add_state(tag + idx + "u" + std::to_string(j + 1), u_label);
                k.add_transition(prev, s);
                k.add_transition(s, u);
                prev = u;
            }
            k.add_transition(prev, init);
        }
    }
    k.validate();
    return k;
}

Formula pcp_formula(const PcpInstance& inst, const PcpOptions& options) {
    inst.validate();
    const std::string tw = kPcpVarW;
    const std::string tv = kPcpVarV;
    auto A = [](const char* p, const std::string& var) { return atom(p, var); };

    std::vector<Expr> type;
    if (options.literal_type) {
        type.push_back(until(land(A("w", tw), lnot(A("v", tw))), A("end", tw)));
        type.push_back(until(land(lnot(A("w", tv)), A("v", tv)), A("end", tv)));
    } else {
        type.push_back(until(lnot(A("v", tw)), A("end", tw)));
        type.push_back(finally(A("w", tw)));
        type.push_back(until(lnot(A("w", tv)), A("end", tv)));
        type.push_back(finally(A("v", tv)));
    }

    std::vector<Expr> dom_w, dom_v, dom_differs;
    for (std::size_t i = 0; i < inst.dominos.size(); ++i) {
        const std::string d = "dom" + std::to_string(i + 1);
        dom_w.push_back(atom(d, tw));
        dom_v.push_back(atom(d, tv));
        dom_differs.push_back(lnot(iff(atom(d, tw), atom(d, tv))));
    }
    const Expr any_dom_w = disjunction(dom_w);
    const Expr any_dom_v = disjunction(dom_v);
    const Expr domino = land(globally(iff(any_dom_w, any_dom_v)), finally(disjunction(dom_differs)));

    std::vector<Expr> letter_differs;
    for (const auto& a : inst.alphabet) letter_differs.push_back(lnot(iff(atom(a, tw), atom(a, tv))));
    const Expr lc_agree = iff(A("lc", tw), A("lc", tv));
    const Expr word = land(globally(lc_agree), finally(disjunction(letter_differs)));

    std::vector<Expr> reasons{domino, word};
    if (options.length_guards) {
        reasons.push_back(until(lc_agree, lor(land(A("end", tw), A("lc", tv)), land(A("end", tv), A("lc", tw)))));
        reasons.push_back(until(iff(any_dom_w, any_dom_v),
                                lor(land(A("end", tw), any_dom_v), land(A("end", tv), any_dom_w))));
    }

    Formula f;
    f.prefix = {{Quant::Forall, tw}, {Quant::Forall, tv}};
    f.modality = Modality::E;
    f.body = implies(conjunction(type), disjunction(reasons));
    return f;
}

Gadget pcp_gadget(const PcpInstance& inst, const PcpOptions& options) {
    return {pcp_structure(inst), pcp_formula(inst, options)};
}

PcpReading read_pcp_traces(const KripkeStructure& k, const Lasso& tw, const Lasso& tv) {
    PcpReading r;
    const int lc = k.prop_index("lc");
    const int end = k.prop_index("end");
    auto read = [&](const Lasso& t, std::string& word, std::vector<int>& dominos) {
        for (std::size_t i = 0; i < t.size(); ++i) {
            const int s = t.at(i);
            if (k.holds(s, end)) break;
            if (k.holds(s, lc)) {
                for (int p = 0; p < static_cast<int>(k.aps.size()); ++p)
                    if (k.aps[p].size() == 1 && k.holds(s, p) && !reserved_pcp_name(k.aps[p])) word += k.aps[p];
            }
            for (int p = 0; p < static_cast<int>(k.aps.size()); ++p)
                if (k.holds(s, p) && k.aps[p].size() > 3 && reserved_pcp_name(k.aps[p]))
                    dominos.push_back(std::stoi(k.aps[p].substr(3)));
        }
    };
    read(tw, r.w_word, r.w_dominos);
    read(tv, r.v_word, r.v_dominos);
    return r;
}

Expr sync_translate(const Expr& psi, const std::vector<std::string>& vars) {
    std::vector<Expr> quiet;
    for (const auto& v : vars) quiet.push_back(lnot(atom(kSyncProp, v)));
    const Expr none_sync = conjunction(quiet);
    auto g = [&](auto&& self, const Expr& e) -> Expr {
        switch (e->op) {
            case Op::True:
            case Op::False:
            case Op::Atom: return e;
            case Op::Not: return lnot(self(self, e->lhs));
            case Op::And: return land(self(self, e->lhs), self(self, e->rhs));
            case Op::Or: return lor(self(self, e->lhs), self(self, e->rhs));
            case Op::Implies: return implies(self(self, e->lhs), self(self, e->rhs));
            case Op::Iff: return iff(self(self, e->lhs), self(self, e->rhs));
            case Op::Next: return next(next(self(self, e->lhs)));
            case Op::Until:
                return until(implies(none_sync, self(self, e->lhs)), land(self(self, e->rhs), none_sync));
            // F and G are the usual abbreviations of U, translated through the rule above.
            case Op::Finally: return finally(land(self(self, e->lhs), none_sync));
            case Op::Globally: return globally(implies(none_sync, self(self, e->lhs)));
        }
        return e;
    };
    return g(g, psi);
}

KripkeStructure pspace_structure(const KripkeStructure& k) {
    k.validate();
    if (k.prop_index(kSyncProp) >= 0) throw ModelError("proposition 'sync' is reserved for the PSPACE gadget");
    KripkeStructure out;
    out.aps = k.aps;
    const int sync = out.add_prop(kSyncProp);
    for (int s = 0; s < k.num_states(); ++s) out.add_state(k.names[s], k.labels[s]);
    out.init = k.init;
    for (int s = 0; s < k.num_states(); ++s) {
        for (int t : k.succ[s]) {
            const std::string name = "u_" + k.names[s] + "_" + k.names[t];
            if (out.state_index(name) >= 0) throw ModelError("state name '" + name + "' clashes with a sync state");
            const int u = out.add_state(name, Valuation{1} << sync);
            out.add_transition(s, u);
            out.add_transition(u, t);
        }
    }
    out.validate();
    return out;
}

Gadget pspace_gadget(const KripkeStructure& k, const Formula& phi) {
    if (!phi.is_hyperltl()) throw FormulaError(FormulaErrorKind::Malformed, "the PSPACE gadget expects a HyperLTL formula");
    check_well_formed(phi);
    const std::vector<std::string> vars = phi.vars();
    Gadget g;
    g.model = pspace_structure(k);

    std::vector<Expr> agree, all_sync, none_sync;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        all_sync.push_back(atom(kSyncProp, vars[i]));
        none_sync.push_back(lnot(atom(kSyncProp, vars[i])));
        for (std::size_t j = i + 1; j < vars.size(); ++j)
            agree.push_back(iff(atom(kSyncProp, vars[i]), atom(kSyncProp, vars[j])));
    }
    agree.push_back(iff(conjunction(all_sync), next(conjunction(none_sync))));
    g.formula.prefix = phi.prefix;
    g.formula.modality = Modality::E;
    g.formula.body = land(sync_translate(phi.body, vars), globally(conjunction(agree)));
    return g;
}

}  // namespace ahltl
