#include <algorithm>
#include <map>

#include "ahltl/formula.hpp"

namespace ahltl {

const char* to_string(FragmentClass c) {
    switch (c) {
        case FragmentClass::SimpleAdmissible: return "SimpleAdmissible";
        case FragmentClass::Admissible: return "Admissible";
        case FragmentClass::CoAdmissible: return "CoAdmissible";
        case FragmentClass::StateMonadicOnly: return "StateMonadicOnly";
        case FragmentClass::NotAdmissible: return "NotAdmissible";
    }
    return "?";
}

std::vector<std::string> AdmissibilityReport::shared_props() const {
    if (phase.empty()) return {};
    for (const auto& s : phase)
        if (s.props != phase.front().props) return {};
    return phase.front().props;
}

namespace {

enum class Pol { Pos, Neg, Mixed };

Pol flip(Pol p) {
    if (p == Pol::Pos) return Pol::Neg;
    if (p == Pol::Neg) return Pol::Pos;
    return Pol::Mixed;
}

void flatten(const Expr& e, Op op, std::vector<Expr>& out) {
    if (e->op == op) {
        flatten(e->lhs, op, out);
        flatten(e->rhs, op, out);
    } else {
        out.push_back(e);
    }
}

// Collects (prop, x, y) triples of a conjunction of p[x] <-> p[y] atoms with x != y.
bool atomic_phase_conj(const Expr& e, std::vector<std::pair<std::string, std::pair<std::string, std::string>>>& out) {
    std::vector<Expr> parts;
    flatten(e, Op::And, parts);
    for (const Expr& c : parts) {
        if (c->op != Op::Iff || c->lhs->op != Op::Atom || c->rhs->op != Op::Atom) return false;
        if (c->lhs->prop != c->rhs->prop || c->lhs->var == c->rhs->var) return false;
        out.push_back({c->lhs->prop, {c->lhs->var, c->rhs->var}});
    }
    return true;
}

using Triples = std::vector<std::pair<std::string, std::pair<std::string, std::string>>>;

bool phase_leaf(const Expr& e, Triples& out) {
    return e->op == Op::Globally && atomic_phase_conj(e->lhs, out);
}

// F !R, or F of a disjunction of negated conjunctions of atomic phase formulas.
bool cophase_leaf(const Expr& e, Triples& out) {
    if (e->op != Op::Finally) return false;
    std::vector<Expr> parts;
    flatten(e->lhs, Op::Or, parts);
    for (const Expr& d : parts)
        if (d->op != Op::Not || !atomic_phase_conj(d->lhs, out)) return false;
    return true;
}

struct Group {
    bool cophase = false;
    Pol pol = Pol::Pos;
    std::vector<Expr> sites;
    Triples triples;
};

class Classifier {
public:
    std::vector<Group> groups;
    std::vector<Expr> monadic;
    std::vector<Expr> state;
    std::string failure;

    void visit(const Expr& e, Pol pol) {
        if (!failure.empty()) return;
        if (is_temporal_free(e)) {
            state.push_back(e);
            return;
        }
        switch (e->op) {
            case Op::Not: visit(e->lhs, flip(pol)); return;
            case Op::Implies:
                visit(e->lhs, flip(pol));
                visit(e->rhs, pol);
                return;
            case Op::Iff:
                visit(e->lhs, Pol::Mixed);
                visit(e->rhs, Pol::Mixed);
                return;
            case Op::And:
            case Op::Or: chain(e, pol); return;
            default: leaf(e, pol); return;
        }
    }

private:
    void chain(const Expr& e, Pol pol) {
        std::vector<Expr> parts;
        flatten(e, e->op, parts);
        const bool want_cophase = e->op == Op::Or;
        Group merged;
        merged.cophase = want_cophase;
        merged.pol = pol;
        for (const Expr& c : parts) {
            Triples t;
            bool match = want_cophase ? cophase_leaf(c, t) : phase_leaf(c, t);
            if (match && vars_of(c).size() > 1) {
                merged.sites.push_back(c);
                merged.triples.insert(merged.triples.end(), t.begin(), t.end());
            } else {
                visit(c, pol);
            }
        }
        if (!merged.sites.empty()) groups.push_back(std::move(merged));
    }

    void leaf(const Expr& e, Pol pol) {
        Triples t;
        if (phase_leaf(e, t) && vars_of(e).size() > 1) {
            groups.push_back({false, pol, {e}, std::move(t)});
            return;
        }
        t.clear();
        if (cophase_leaf(e, t) && vars_of(e).size() > 1) {
            groups.push_back({true, pol, {e}, std::move(t)});
            return;
        }
        if (vars_of(e).size() <= 1) {
            if (has_next(e)) {
                failure = "monadic subformula uses X and is not stutter-invariant: " + to_string(e);
                return;
            }
            monadic.push_back(e);
            return;
        }
        failure = "temporal subformula relates several traces outside a phase formula: " + to_string(e);
    }
};

std::vector<PhaseSpec> specs_from(const Triples& triples) {
    std::vector<PhaseSpec> specs;
    for (const auto& [prop, vars] : triples) {
        auto it = std::find_if(specs.begin(), specs.end(),
                               [&](const PhaseSpec& s) { return s.lhs == vars.first && s.rhs == vars.second; });
        if (it == specs.end()) {
            specs.push_back({vars.first, vars.second, {}});
            it = specs.end() - 1;
        }
        if (std::find(it->props.begin(), it->props.end(), prop) == it->props.end()) it->props.push_back(prop);
    }
    for (auto& s : specs) std::sort(s.props.begin(), s.props.end());
    return specs;
}

}  // namespace

AdmissibilityReport classify(const Expr& body, const std::vector<Quantifier>& prefix) {
    AdmissibilityReport r;
    for (const auto& v : vars_of(body)) {
        bool bound = std::any_of(prefix.begin(), prefix.end(), [&](const Quantifier& q) { return q.var == v; });
        if (!bound) {
            r.reason = "trace variable '" + v + "' is not quantified";
            return r;
        }
    }
    Classifier c;
    c.visit(body, Pol::Pos);
    r.monadic_parts = c.monadic;
    r.state_parts = c.state;
    if (!c.failure.empty()) {
        r.reason = c.failure;
        return r;
    }
    if (c.groups.empty()) {
        r.cls = FragmentClass::StateMonadicOnly;
        return r;
    }
    if (c.groups.size() > 1) {
        r.reason = "more than one phase formula occurrence (phase formulas only merge inside one conjunction)";
        return r;
    }
    const Group& g = c.groups.front();
    if (g.pol == Pol::Mixed) {
        r.reason = "phase formula occurs under <-> and has no single polarity";
        return r;
    }
    r.phase = specs_from(g.triples);
    r.sites = g.sites;
    r.cophase_site = g.cophase;
    const Pol phase_pol = g.cophase ? flip(g.pol) : g.pol;
    r.polarity = phase_pol == Pol::Pos ? Polarity::Positive : Polarity::Negative;
    if (r.polarity == Polarity::Negative) {
        r.cls = FragmentClass::CoAdmissible;
    } else {
        r.cls = r.shared_props().empty() ? FragmentClass::Admissible : FragmentClass::SimpleAdmissible;
    }
    return r;
}

Expr atomic_phase(const PhaseSpec& spec) {
    std::vector<Expr> parts;
    for (const auto& p : spec.props) parts.push_back(iff(atom(p, spec.lhs), atom(p, spec.rhs)));
    return conjunction(parts);
}

Expr phase_formula(const AdmissibilityReport& report) {
    if (report.sites.size() == 1 && !report.cophase_site) return report.sites.front();
    std::vector<Expr> parts;
    for (const auto& s : report.phase) parts.push_back(atomic_phase(s));
    return globally(conjunction(parts));
}

namespace {

Expr rebuild(const Expr& e, const AdmissibilityReport& report, const Expr& replacement) {
    if (e.get() == report.sites.front().get()) return replacement;
    for (std::size_t i = 1; i < report.sites.size(); ++i)
        if (e.get() == report.sites[i].get()) return nullptr;
    if (!e->lhs) return e;
    Expr l = rebuild(e->lhs, report, replacement);
    Expr r = e->rhs ? rebuild(e->rhs, report, replacement) : nullptr;
    if (e->op == Op::And || e->op == Op::Or) {
        if (!l) return r;
        if (!r) return l;
    }
    if (l == e->lhs && r == e->rhs) return e;
    return std::make_shared<const Node>(Node{e->op, {}, {}, l, r});
}

}  // namespace

Expr replace_phase_site(const Expr& psi, const AdmissibilityReport& report, const Expr& replacement) {
    if (!report.has_phase()) throw Error("formula has no phase formula occurrence to replace");
    return rebuild(psi, report, replacement);
}

Expr substitute_phase(const Expr& psi, const AdmissibilityReport& report, const Expr& xi) {
    return replace_phase_site(psi, report, report.cophase_site ? lnot(xi) : xi);
}

Expr negate_nnf(const Expr& e) {
    if (is_temporal_free(e)) {
        if (e->op == Op::Not) return e->lhs;
        if (e->op == Op::True) return mk_false();
        if (e->op == Op::False) return mk_true();
        return lnot(e);
    }
    switch (e->op) {
        case Op::Not: return e->lhs;
        case Op::And: return lor(negate_nnf(e->lhs), negate_nnf(e->rhs));
        case Op::Or: return land(negate_nnf(e->lhs), negate_nnf(e->rhs));
        case Op::Implies: return land(e->lhs, negate_nnf(e->rhs));
        case Op::Iff: return iff(e->lhs, negate_nnf(e->rhs));
        case Op::Next: return next(negate_nnf(e->lhs));
        case Op::Globally: return finally(negate_nnf(e->lhs));
        case Op::Finally: return globally(negate_nnf(e->lhs));
        case Op::Until: {
            Expr na = negate_nnf(e->lhs);
            Expr nb = negate_nnf(e->rhs);
            return lor(until(nb, land(na, nb)), globally(nb));
        }
        default: return lnot(e);
    }
}

Formula negate_to_positive(const Formula& phi) {
    if (!phi.modality || *phi.modality != Modality::A)
        throw Error("negate_to_positive expects a formula with the A modality");
    Formula out;
    for (const auto& q : phi.prefix)
        out.prefix.push_back({q.quant == Quant::Forall ? Quant::Exists : Quant::Forall, q.var});
    out.modality = Modality::E;
    out.body = negate_nnf(phi.body);
    return out;
}

Expr cophase_to_monadic(const std::vector<PhaseSpec>& specs) {
    if (specs.empty()) throw Error("cophase_to_monadic: no atomic phase formulas");
    std::vector<Expr> clauses;
    for (const auto& s : specs) {
        for (const auto& p : s.props) {
            Expr pi = atom(p, s.lhs);
            Expr pj = atom(p, s.rhs);
            clauses.push_back(lor(land(finally(pi), finally(lnot(pj))), land(finally(lnot(pi)), finally(pj))));
        }
    }
    return disjunction(clauses);
}

}  // namespace ahltl
