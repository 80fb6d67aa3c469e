#include <algorithm>
#include <functional>

#include "ahltl/stutter.hpp"

namespace ahltl {

KripkeStructure build_stuttering(const KripkeStructure& k) {
    k.validate();
    if (k.prop_index(kStutterProp) >= 0) throw ModelError("proposition 'st' is reserved for the stuttering construction");
    KripkeStructure out;
    out.aps = k.aps;
    const int st = out.add_prop(kStutterProp);
    const int n = k.num_states();
    for (int s = 0; s < n; ++s) out.add_state(k.names[s], k.labels[s]);
    for (int s = 0; s < n; ++s) {
        const std::string name = k.names[s] + "_st";
        if (k.state_index(name) >= 0) throw ModelError("state name '" + name + "' clashes with a stutter copy");
        out.add_state(name, k.labels[s] | (Valuation{1} << st));
    }
    out.init = k.init;
    for (int s = 0; s < n; ++s) {
        for (int t : k.succ[s]) {
            out.add_transition(s, t);
            out.add_transition(s + n, t);
        }
        out.add_transition(s, s + n);
        out.add_transition(s + n, s + n);
    }
    return out;
}

Expr change_formula(const std::vector<std::string>& props, const std::string& var) {
    std::vector<Expr> parts;
    for (const auto& p : props)
        parts.push_back(lnot(iff(atom(p, var), next(until(atom(kStutterProp, var), atom(p, var))))));
    return disjunction(parts);
}

Expr move_formula(const std::string& var) { return next(lnot(atom(kStutterProp, var))); }

Expr align_formula(const PhaseSpec& spec) {
    const Expr mi = move_formula(spec.lhs);
    const Expr mj = move_formula(spec.rhs);
    const Expr ci = change_formula(spec.props, spec.lhs);
    const Expr cj = change_formula(spec.props, spec.rhs);
    return conjunction({implies(land(mi, mj), iff(ci, cj)), implies(land(mi, lnot(mj)), lnot(ci)),
                        implies(land(lnot(mi), mj), lnot(cj))});
}

std::pair<Expr, Expr> phase_and_fair(const std::vector<PhaseSpec>& specs, const std::vector<std::string>& vars) {
    std::vector<Expr> aligns;
    for (const auto& s : specs) aligns.push_back(align_formula(s));
    std::vector<Expr> fair;
    for (const auto& v : vars) fair.push_back(globally(finally(lnot(atom(kStutterProp, v)))));
    return {conjunction(aligns), conjunction(fair)};
}

Expr missalign_formula(const std::vector<PhaseSpec>& specs) {
    std::vector<Expr> parts;
    for (const auto& s : specs) {
        Expr still_i = globally(lnot(change_formula(s.props, s.lhs)));
        Expr still_j = globally(lnot(change_formula(s.props, s.rhs)));
        parts.push_back(lnot(iff(still_i, still_j)));
    }
    return disjunction(parts);
}

std::vector<std::vector<int>> spec_cycles(const std::vector<PhaseSpec>& specs, std::size_t cap) {
    std::vector<std::string> nodes;
    auto id = [&](const std::string& v) {
        auto it = std::find(nodes.begin(), nodes.end(), v);
        if (it != nodes.end()) return static_cast<int>(it - nodes.begin());
        nodes.push_back(v);
        return static_cast<int>(nodes.size()) - 1;
    };
    std::vector<std::pair<int, int>> edges;
    for (const auto& s : specs) edges.push_back({id(s.lhs), id(s.rhs)});
    const int n = static_cast<int>(nodes.size());

    // Each simple cycle is reported once, from its smallest vertex.
    std::vector<std::vector<int>> cycles;
    std::vector<char> on_path(n, 0);
    std::vector<int> path;
    std::function<void(int, int)> extend = [&](int start, int v) {
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (edges[e].first != v) continue;
            const int w = edges[e].second;
            if (w == start) {
                path.push_back(static_cast<int>(e));
                cycles.push_back(path);
                path.pop_back();
                if (cycles.size() > cap) throw ResourceError("phase formula has too many simple cycles");
            } else if (w > start && !on_path[w]) {
                on_path[w] = 1;
                path.push_back(static_cast<int>(e));
                extend(start, w);
                path.pop_back();
                on_path[w] = 0;
            }
        }
    };
    for (int s = 0; s < n; ++s) {
        on_path[s] = 1;
        extend(s, s);
        on_path[s] = 0;
    }
    return cycles;
}

Expr block_formula(const std::vector<PhaseSpec>& specs) {
    std::vector<Expr> options;
    for (const auto& cycle : spec_cycles(specs)) {
        std::vector<Expr> parts;
        for (int e : cycle) {
            const PhaseSpec& s = specs[e];
            parts.push_back(land(change_formula(s.props, s.lhs), lnot(change_formula(s.props, s.rhs))));
        }
        options.push_back(conjunction(parts));
    }
    return disjunction(options);
}

namespace {

void require_positive_phase(const AdmissibilityReport& report) {
    if (report.cls != FragmentClass::Admissible && report.cls != FragmentClass::SimpleAdmissible &&
        report.cls != FragmentClass::StateMonadicOnly)
        throw FragmentError(std::string("expected an admissible body, got ") + to_string(report.cls));
    if (report.has_phase() && report.polarity != Polarity::Positive)
        throw FragmentError("phase formula occurs with negative polarity");
}

}  // namespace

Expr build_psi_sync(const Expr& psi, const AdmissibilityReport& report, const std::vector<std::string>& vars) {
    require_positive_phase(report);
    auto [phase, fair] = phase_and_fair(report.phase, vars);
    if (!report.has_phase()) return implies(fair, psi);
    const Expr ph = phase_formula(report);
    const Expr bad = until(phase, lor(missalign_formula(report.phase), block_formula(report.phase)));
    const Expr replacement = land(lnot(bad), implies(globally(phase), ph));
    return implies(fair, substitute_phase(psi, report, replacement));
}

Expr build_psi_esync(const Expr& psi, const AdmissibilityReport& report, const std::vector<std::string>& vars) {
    require_positive_phase(report);
    auto [phase, fair] = phase_and_fair(report.phase, vars);
    if (!report.has_phase()) return land(fair, psi);
    const Expr ph = phase_formula(report);
    return land(fair, substitute_phase(psi, report, land(globally(phase), ph)));
}

Reduction reduce_stutter(const KripkeStructure& k, const Formula& phi_in) {
    if (phi_in.is_hyperltl()) throw FragmentError("the stuttering reduction expects an E or A formula");
    check_well_formed(phi_in);
    Reduction r;
    r.method = "stutter";
    Formula phi = phi_in;
    if (*phi.modality == Modality::A) {
        phi = negate_to_positive(phi_in);
        r.negate_verdict = true;
        r.route = "duality: A checked as the negated E formula; ";
    }
    const bool all_forall = std::all_of(phi.prefix.begin(), phi.prefix.end(),
                                        [](const Quantifier& q) { return q.quant == Quant::Forall; });
    const bool all_exists = std::all_of(phi.prefix.begin(), phi.prefix.end(),
                                        [](const Quantifier& q) { return q.quant == Quant::Exists; });
    if (!all_forall && !all_exists)
        throw FragmentError("the stuttering reduction needs a quantifier prefix without alternation");

    const AdmissibilityReport report = classify(phi.body, phi.prefix);
    r.cls = report.cls;
    const std::vector<std::string> vars = phi.vars();
    Expr body;
    switch (report.cls) {
        case FragmentClass::NotAdmissible: throw FragmentError("body is not admissible: " + report.reason);
        case FragmentClass::CoAdmissible: {
            // The co-phase occurrence becomes a disjunction of monadic formulas; what is left
            // does not depend on the trajectory.
            const Expr monadic = cophase_to_monadic(report.phase);
            const Expr rewritten = substitute_phase(phi.body, report, lnot(monadic));
            auto [phase, fair] = phase_and_fair({}, vars);
            body = all_forall ? implies(fair, rewritten) : land(fair, rewritten);
            r.route += "co-phase rewritten to monadic formulas";
            break;
        }
        default:
            body = all_forall ? build_psi_sync(phi.body, report, vars) : build_psi_esync(phi.body, report, vars);
            r.route += all_forall ? "forall prefix, psi_sync" : "exists prefix, psi_esync";
            break;
    }
    r.model = build_stuttering(k);
    r.formula.prefix = phi.prefix;
    r.formula.body = body;
    return r;
}

CheckResult check_reduced(const Reduction& r, const CheckOptions& options) {
    CheckResult c = check_hyperltl(r.model, r.formula, options);
    if (r.negate_verdict && c.verdict != Verdict::Resource)
        c.verdict = c.verdict == Verdict::Holds ? Verdict::Fails : Verdict::Holds;
    return c;
}

}  // namespace ahltl
