#include <algorithm>
#include <deque>
#include <optional>
#include <set>
#include <sstream>

#include "ahltl/accel.hpp"

namespace ahltl {

ColorFn ColorFn::of(const KripkeStructure& k, const std::vector<std::string>& props) {
    ColorFn c;
    for (const auto& p : props) {
        const int i = k.prop_index(p);
        if (i < 0) throw ModelError("phase proposition '" + p + "' is not in the model");
        c.mask |= Valuation{1} << i;
    }
    return c;
}

namespace {

// Same-colour search from s: accelerated successors with their shortest witnesses.
void explore_from(const KripkeStructure& k, const ColorFn& color, int s, AccelStructure& acc) {
    const Valuation c = color(k, s);
    std::vector<int> parent(k.num_states(), -2);
    std::deque<int> queue{s};
    parent[s] = -1;
    auto chain = [&](int v) {
        std::vector<int> out;
        for (int u = v; u != s; u = parent[u]) out.push_back(u);
        std::reverse(out.begin(), out.end());
        return out;
    };
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int t : k.succ[u]) {
            if (color(k, t) != c) {
                if (!acc.edge_witness.count({s, t})) acc.edge_witness[{s, t}] = chain(u);
            } else if (parent[t] == -2) {
                parent[t] = u;
                queue.push_back(t);
            }
        }
    }
}

// An infinite same-colour path from s, found as a back edge of a DFS restricted to s's colour.
std::optional<Lasso> same_color_lasso(const KripkeStructure& k, const ColorFn& color, int s) {
    const Valuation c = color(k, s);
    std::vector<int> mark(k.num_states(), 0);  // 0 new, 1 on the DFS path, 2 done
    std::vector<int> path{s};
    std::vector<std::size_t> next_child{0};
    mark[s] = 1;
    while (!path.empty()) {
        const int u = path.back();
        std::size_t& i = next_child.back();
        if (i == k.succ[u].size()) {
            mark[u] = 2;
            path.pop_back();
            next_child.pop_back();
            continue;
        }
        const int t = k.succ[u][i++];
        if (color(k, t) != c) continue;
        if (mark[t] == 1) {
            auto at = std::find(path.begin(), path.end(), t);
            Lasso l;
            l.stem.assign(path.begin(), at);
            l.loop.assign(at, path.end());
            return l;
        }
        if (mark[t] == 0) {
            mark[t] = 1;
            path.push_back(t);
            next_child.push_back(0);
        }
    }
    return std::nullopt;
}

}  // namespace

AccelStructure build_accelerated(const KripkeStructure& k, const std::vector<std::string>& props) {
    k.validate();
    if (props.empty()) throw FragmentError("acceleration needs a nonempty set of phase propositions");
    AccelStructure acc;
    acc.color = ColorFn::of(k, props);
    const int n = k.num_states();
    acc.base_states = n;
    acc.sink_of.assign(n, -1);

    KripkeStructure& out = acc.model;
    out.aps = k.aps;
    for (int s = 0; s < n; ++s) out.add_state(k.names[s], k.labels[s]);
    out.init = k.init;
    for (int s = 0; s < n; ++s) {
        explore_from(k, acc.color, s, acc);
        if (auto l = same_color_lasso(k, acc.color, s)) {
            const std::string name = k.names[s] + "_bot";
            if (k.state_index(name) >= 0) throw ModelError("state name '" + name + "' clashes with a sink copy");
            acc.sink_of[s] = out.add_state(name, k.labels[s]);
            acc.sink_witness[s] = *l;
        }
    }
    for (const auto& [edge, via] : acc.edge_witness) out.add_transition(edge.first, edge.second);
    for (int s = 0; s < n; ++s) {
        if (acc.sink_of[s] < 0) continue;
        out.add_transition(s, acc.sink_of[s]);
        out.add_transition(acc.sink_of[s], acc.sink_of[s]);
    }
    // In a total K every path either changes colour or stays in one colour forever, so every
    // original state keeps an outgoing edge.
    out.validate();
    return acc;
}

void check_witnesses(const AccelStructure& acc, const KripkeStructure& k) {
    for (const auto& [edge, via] : acc.edge_witness) {
        std::vector<int> walk{edge.first};
        walk.insert(walk.end(), via.begin(), via.end());
        walk.push_back(edge.second);
        const Valuation c = acc.color(k, edge.first);
        for (std::size_t i = 0; i + 1 < walk.size(); ++i) {
            const auto& out = k.succ[walk[i]];
            if (std::find(out.begin(), out.end(), walk[i + 1]) == out.end())
                throw ModelError("witness of " + k.names[edge.first] + " -> " + k.names[edge.second] +
                                 " is not a path");
            if (acc.color(k, walk[i]) != c) throw ModelError("witness changes colour before its last step");
        }
        if (acc.color(k, edge.second) == c) throw ModelError("accelerated edge does not change colour");
    }
    for (const auto& [s, l] : acc.sink_witness) {
        if (l.at(0) != s || !is_path(k, l, false)) throw ModelError("sink witness of " + k.names[s] + " is not a path");
        for (std::size_t i = 0; i < l.size(); ++i)
            if (acc.color(k, l.at(i)) != acc.color(k, s)) throw ModelError("sink witness changes colour");
    }
}

Lasso acc_path(const AccelStructure& acc, const KripkeStructure& k, const Lasso& rho) {
    if (!is_path(k, rho, false)) throw ModelError("acc_path: input is not a path of K");
    // Kept positions are tracked by lasso slot; the first slot kept twice closes the loop.
    std::vector<int> kept;
    std::vector<std::size_t> kept_slot;
    std::size_t slot = 0;
    kept.push_back(rho.at(0));
    kept_slot.push_back(0);
    const std::size_t horizon = rho.stem.size() + 2 * rho.loop.size() + 1;
    for (std::size_t i = 1; i < horizon; ++i) {
        const std::size_t next = rho.next_slot(slot);
        const int prev_state = rho.at(slot);
        const int state = rho.at(next);
        slot = next;
        if (acc.color(k, prev_state) == acc.color(k, state)) continue;
        auto seen = std::find(kept_slot.begin(), kept_slot.end(), slot);
        if (seen != kept_slot.end() && slot >= rho.stem.size()) {
            const std::size_t from = static_cast<std::size_t>(seen - kept_slot.begin());
            Lasso out;
            out.stem.assign(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(from));
            out.loop.assign(kept.begin() + static_cast<std::ptrdiff_t>(from), kept.end());
            return normalize(out);
        }
        kept.push_back(state);
        kept_slot.push_back(slot);
    }
    // No colour change inside the loop: finitely many changes, pad with the sink of the last one.
    const int last = kept.back();
    if (acc.sink_of[last] < 0) throw ModelError("acc_path: " + k.names[last] + " has no sink copy");
    Lasso out;
    out.stem = kept;
    out.loop = {acc.sink_of[last]};
    return normalize(out);
}

Lasso dec_path(const AccelStructure& acc, const KripkeStructure& k, const Lasso& rho_acc) {
    if (!is_path(acc.model, rho_acc, false)) throw ModelError("dec_path: input is not a path of the accelerated structure");
    if (acc.is_sink(rho_acc.at(0))) throw ModelError("dec_path: path starts in a sink");
    auto checked = [&](Lasso l) {
        if (!is_path(k, l, false)) throw ModelError("dec_path: expansion is not a path of K");
        return l;
    };
    std::vector<int> stem;
    std::vector<int> loop;
    // Expands the step from position i to i + 1 into `out`, starting with the state at i.
    // Returns true when a sink was entered, in which case stem/loop are final.
    auto expand_step = [&](std::vector<int>& out, std::size_t i) {
        const int u = rho_acc.at(i);
        const int v = rho_acc.at(i + 1);
        if (acc.is_sink(v)) {
            const Lasso& w = acc.sink_witness.at(u);
            out.insert(out.end(), w.stem.begin(), w.stem.end());
            return true;
        }
        out.push_back(u);
        const auto& via = acc.edge_witness.at({u, v});
        out.insert(out.end(), via.begin(), via.end());
        return false;
    };
    for (std::size_t i = 0; i < rho_acc.stem.size(); ++i) {
        if (expand_step(stem, i)) {
            Lasso out{stem, acc.sink_witness.at(rho_acc.at(i)).loop};
            return checked(normalize(out));
        }
    }
    for (std::size_t i = rho_acc.stem.size(); i < rho_acc.size(); ++i) {
        if (expand_step(loop, i)) {
            stem.insert(stem.end(), loop.begin(), loop.end());
            Lasso out{stem, acc.sink_witness.at(rho_acc.at(i)).loop};
            return checked(normalize(out));
        }
    }
    return checked(normalize(Lasso{stem, loop}));
}

BasicLasso<Valuation> color_changes(const KripkeStructure& k, const ColorFn& color, const Lasso& rho) {
    std::vector<Valuation> seq{color(k, rho.at(0))};
    std::vector<std::size_t> seq_slot{0};
    std::size_t slot = 0;
    const std::size_t horizon = rho.stem.size() + 2 * rho.loop.size() + 1;
    for (std::size_t i = 1; i < horizon; ++i) {
        const std::size_t next = rho.next_slot(slot);
        const Valuation before = color(k, rho.at(slot));
        const Valuation after = color(k, rho.at(next));
        slot = next;
        if (before == after) continue;
        auto seen = std::find(seq_slot.begin(), seq_slot.end(), slot);
        if (seen != seq_slot.end() && slot >= rho.stem.size()) {
            const auto from = seen - seq_slot.begin();
            BasicLasso<Valuation> out;
            out.stem.assign(seq.begin(), seq.begin() + from);
            out.loop.assign(seq.begin() + from, seq.end());
            return normalize(out);
        }
        seq.push_back(after);
        seq_slot.push_back(slot);
    }
    BasicLasso<Valuation> out;
    out.stem = seq;
    out.loop = {seq.back()};
    return normalize(out);
}

Reduction reduce_accel(const KripkeStructure& k_in, const Formula& phi) {
    if (phi.is_hyperltl()) throw FragmentError("the accelerating construction expects an E formula");
    if (*phi.modality != Modality::E)
        throw FragmentError("the accelerating construction handles the E modality only; "
                            "A formulas negate into co-admissible bodies, use the stuttering reduction");
    check_well_formed(phi);
    const AdmissibilityReport report = classify(phi.body, phi.prefix);

    Reduction r;
    r.method = "accel";
    r.cls = report.cls;
    r.formula.prefix = phi.prefix;
    r.formula.body = phi.body;

    KripkeStructure k = k_in;
    for (const auto& p : props_of(phi.body)) ensure_prop(k, p);

    if (report.cls == FragmentClass::StateMonadicOnly) {
        // Without a phase formula the body does not depend on the trajectory.
        r.model = k;
        r.route = "no phase formula; body checked synchronously on K";
        return r;
    }
    if (report.cls != FragmentClass::SimpleAdmissible) {
        std::string why = report.reason;
        if (report.cls == FragmentClass::Admissible && report.phase.size() > 1) {
            for (const auto& s : report.phase) {
                if (s.props == report.phase.front().props) continue;
                std::ostringstream os;
                os << "atomic phase formulas (" << report.phase.front().lhs << ", " << report.phase.front().rhs
                   << ") and (" << s.lhs << ", " << s.rhs << ") use different propositions";
                why = os.str();
                break;
            }
        }
        throw FragmentError(std::string("body is ") + to_string(report.cls) + ", not simple admissible" +
                            (why.empty() ? "" : ": " + why));
    }
    if (report.polarity != Polarity::Positive)
        throw FragmentError("phase formula occurs with negative polarity; use the stuttering reduction");

    const std::vector<std::string> P = report.shared_props();
    const std::set<std::string> allowed(P.begin(), P.end());
    for (const Expr& m : report.monadic_parts) {
        for (const auto& p : props_of(m)) {
            if (allowed.count(p)) continue;
            throw FragmentError("monadic subformula " + to_string(m) + " reads '" + p +
                                "', which is not a phase proposition; acceleration would contract it. "
                                "Use the stuttering reduction (no quantifier alternation) or the bounded oracle");
        }
    }

    AccelStructure acc = build_accelerated(k, P);
    r.model = std::move(acc.model);
    std::ostringstream os;
    os << "accelerated on P = {";
    for (std::size_t i = 0; i < P.size(); ++i) os << (i ? ", " : "") << P[i];
    os << "}";
    r.route = os.str();
    return r;
}

}  // namespace ahltl
