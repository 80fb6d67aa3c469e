#include "ahltl/model.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace ahltl {

std::size_t KripkeStructure::num_transitions() const {
    std::size_t n = 0;
    for (const auto& s : succ) n += s.size();
    return n;
}

int KripkeStructure::prop_index(std::string_view name) const {
    for (std::size_t i = 0; i < aps.size(); ++i)
        if (aps[i] == name) return static_cast<int>(i);
    return -1;
}

int KripkeStructure::state_index(std::string_view name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

int KripkeStructure::add_state(std::string name, Valuation label) {
    names.push_back(std::move(name));
    labels.push_back(label);
    succ.emplace_back();
    return num_states() - 1;
}

void KripkeStructure::add_transition(int from, int to) {
    auto& out = succ.at(from);
    if (std::find(out.begin(), out.end(), to) == out.end()) out.push_back(to);
}

int KripkeStructure::add_prop(const std::string& name) {
    if (int i = prop_index(name); i >= 0) return i;
    if (static_cast<int>(aps.size()) >= kMaxProps)
        throw ModelError("too many atomic propositions (limit " + std::to_string(kMaxProps) + ")");
    aps.push_back(name);
    return static_cast<int>(aps.size()) - 1;
}

void KripkeStructure::validate() const {
    const int n = num_states();
    if (n == 0) throw ModelError("structure has no states");
    if (labels.size() != names.size() || succ.size() != names.size())
        throw ModelError("inconsistent state tables");
    if (init.empty()) throw ModelError("no initial state");
    for (int s : init)
        if (s < 0 || s >= n) throw ModelError("initial state out of range");
    const Valuation allowed = aps.size() >= 64 ? ~Valuation{0} : ((Valuation{1} << aps.size()) - 1);
    for (int s = 0; s < n; ++s) {
        if (succ[s].empty()) throw ModelError("state '" + names[s] + "' has no outgoing transition");
        for (int t : succ[s])
            if (t < 0 || t >= n) throw ModelError("transition target out of range at '" + names[s] + "'");
        if (labels[s] & ~allowed) throw ModelError("label of '" + names[s] + "' uses an undeclared proposition");
    }
}

int ensure_prop(KripkeStructure& k, const std::string& name) {
    if (int i = k.prop_index(name); i >= 0) return i;
    if (name.find('&') == std::string::npos) throw ModelError("unknown proposition '" + name + "'");
    std::vector<int> parts;
    std::stringstream ss(name);
    std::string part;
    while (std::getline(ss, part, '&')) {
        int p = k.prop_index(part);
        if (p < 0) throw ModelError("unknown proposition '" + part + "' in '" + name + "'");
        parts.push_back(p);
    }
    int idx = k.add_prop(name);
    for (int s = 0; s < k.num_states(); ++s) {
        bool all = std::all_of(parts.begin(), parts.end(), [&](int p) { return k.holds(s, p); });
        if (all) k.labels[s] |= Valuation{1} << idx;
    }
    return idx;
}

namespace {

struct Token {
    std::string text;
    int column;
};

bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '&' || c == '\'' || c == '.';
}

class LineLexer {
public:
    LineLexer(std::string_view line, int line_no) : line_(line), line_no_(line_no) {}

    void skip_ws() {
        while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
    }
    bool at_end() {
        skip_ws();
        return pos_ >= line_.size();
    }
    int column() const { return static_cast<int>(pos_) + 1; }

    Token ident() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < line_.size() && ident_char(line_[pos_])) ++pos_;
        if (start == pos_) fail("expected identifier");
        return {std::string(line_.substr(start, pos_ - start)), static_cast<int>(start) + 1};
    }
    bool accept(std::string_view lit) {
        skip_ws();
        if (line_.substr(pos_, lit.size()) == lit) {
            pos_ += lit.size();
            return true;
        }
        return false;
    }
    void expect(std::string_view lit) {
        if (!accept(lit)) fail("expected '" + std::string(lit) + "'");
    }
    bool peek_ident() {
        skip_ws();
        return pos_ < line_.size() && ident_char(line_[pos_]);
    }
    [[noreturn]] void fail(const std::string& msg) {
        skip_ws();
        throw ParseError(msg, line_no_, column());
    }
    int line_no() const { return line_no_; }

private:
    std::string_view line_;
    std::size_t pos_ = 0;
    int line_no_;
};

struct PendingRef {
    Token tok;
    int line;
};

}  // namespace

KripkeStructure parse_kripke(std::string_view text) {
    KripkeStructure k;
    bool saw_aps = false;
    bool saw_init = false;
    std::vector<PendingRef> init_refs;
    std::vector<std::pair<PendingRef, PendingRef>> trans_refs;
    std::vector<std::pair<Token, std::vector<Token>>> derived;
    std::vector<std::pair<int, std::vector<Token>>> pending_labels;

    int line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        LineLexer lx(line, line_no);
        if (lx.at_end()) continue;
        Token head = lx.ident();
        if (head.text == "aps") {
            lx.expect(":");
            if (saw_aps) throw ParseError("duplicate 'aps' section", line_no, head.column);
            saw_aps = true;
            while (!lx.at_end()) {
                Token p = lx.ident();
                if (k.prop_index(p.text) >= 0)
                    throw ParseError("duplicate proposition '" + p.text + "'", line_no, p.column);
                k.add_prop(p.text);
            }
        } else if (head.text == "init") {
            lx.expect(":");
            saw_init = true;
            while (!lx.at_end()) init_refs.push_back({lx.ident(), line_no});
        } else if (head.text == "state") {
            Token name = lx.ident();
            if (k.state_index(name.text) >= 0)
                throw ParseError("duplicate state '" + name.text + "'", line_no, name.column);
            lx.expect("{");
            std::vector<Token> props;
            while (!lx.accept("}")) {
                if (!lx.peek_ident()) lx.fail("expected proposition or '}'");
                props.push_back(lx.ident());
            }
            if (!lx.at_end()) lx.fail("trailing input after state label");
            int s = k.add_state(name.text, 0);
            pending_labels.emplace_back(s, std::move(props));
        } else if (head.text == "trans") {
            Token from = lx.ident();
            lx.expect("->");
            Token to = lx.ident();
            if (!lx.at_end()) lx.fail("trailing input after transition");
            trans_refs.push_back({{from, line_no}, {to, line_no}});
        } else if (head.text == "derive") {
            Token name = lx.ident();
            lx.expect("=");
            std::vector<Token> parts{lx.ident()};
            while (lx.accept("&")) parts.push_back(lx.ident());
            if (!lx.at_end()) lx.fail("trailing input after derived proposition");
            derived.emplace_back(name, std::move(parts));
        } else {
            throw ParseError("unknown directive '" + head.text + "'", line_no, head.column);
        }
    }
    if (!saw_aps) throw ParseError("missing 'aps' section", line_no, 1);
    if (!saw_init) throw ParseError("missing 'init' section", line_no, 1);

    for (auto& [s, props] : pending_labels) {
        for (const Token& p : props) {
            int idx = k.prop_index(p.text);
            if (idx < 0) throw ModelError("unknown proposition '" + p.text + "' in label of '" + k.names[s] + "'");
            k.labels[s] |= Valuation{1} << idx;
        }
    }
    auto resolve = [&](const PendingRef& r) {
        int s = k.state_index(r.tok.text);
        if (s < 0) throw ParseError("unknown state '" + r.tok.text + "'", r.line, r.tok.column);
        return s;
    };
    for (const auto& r : init_refs) {
        int s = resolve(r);
        if (std::find(k.init.begin(), k.init.end(), s) == k.init.end()) k.init.push_back(s);
    }
    for (const auto& [from, to] : trans_refs) k.add_transition(resolve(from), resolve(to));

    for (const auto& [name, parts] : derived) {
        if (k.prop_index(name.text) >= 0) throw ModelError("derived proposition '" + name.text + "' already declared");
        std::vector<int> idx;
        for (const Token& p : parts) {
            int i = k.prop_index(p.text);
            if (i < 0) throw ModelError("unknown proposition '" + p.text + "' in derivation of '" + name.text + "'");
            idx.push_back(i);
        }
        int d = k.add_prop(name.text);
        for (int s = 0; s < k.num_states(); ++s)
            if (std::all_of(idx.begin(), idx.end(), [&](int i) { return k.holds(s, i); }))
                k.labels[s] |= Valuation{1} << d;
    }

    k.validate();
    return k;
}

std::string print_kripke(const KripkeStructure& k) {
    std::ostringstream out;
    out << "aps:";
    for (const auto& p : k.aps) out << ' ' << p;
    out << "\ninit:";
    for (int s : k.init) out << ' ' << k.names[s];
    out << '\n';
    for (int s = 0; s < k.num_states(); ++s) {
        out << "state " << k.names[s] << " {";
        bool first = true;
        for (std::size_t p = 0; p < k.aps.size(); ++p) {
            if (!k.holds(s, static_cast<int>(p))) continue;
            out << (first ? "" : " ") << k.aps[p];
            first = false;
        }
        out << "}\n";
    }
    for (int s = 0; s < k.num_states(); ++s)
        for (int t : k.succ[s]) out << "trans " << k.names[s] << " -> " << k.names[t] << '\n';
    return out.str();
}

bool Trajectory::well_formed() const {
    if (loop.empty() || num_vars <= 0 || num_vars > 32) return false;
    const VarSet all = num_vars == 32 ? ~VarSet{0} : ((VarSet{1} << num_vars) - 1);
    auto ok = [&](VarSet v) { return v != 0 && (v & ~all) == 0; };
    return std::all_of(stem.begin(), stem.end(), ok) && std::all_of(loop.begin(), loop.end(), ok);
}

bool Trajectory::is_fair() const {
    VarSet seen = 0;
    for (VarSet v : loop) seen |= v;
    const VarSet all = num_vars == 32 ? ~VarSet{0} : ((VarSet{1} << num_vars) - 1);
    return (seen & all) == all;
}

Trajectory lockstep_trajectory(int num_vars) {
    Trajectory t;
    t.num_vars = num_vars;
    t.loop = {num_vars == 32 ? ~VarSet{0} : ((VarSet{1} << num_vars) - 1)};
    return t;
}

Trajectory normalize(Trajectory t) {
    BasicLasso<VarSet> l{std::move(t.stem), std::move(t.loop)};
    l = normalize(std::move(l));
    t.stem = std::move(l.stem);
    t.loop = std::move(l.loop);
    return t;
}

bool is_path(const KripkeStructure& k, const Lasso& l, bool from_init) {
    if (l.loop.empty()) return false;
    const int n = k.num_states();
    auto edge = [&](int a, int b) {
        if (a < 0 || a >= n || b < 0 || b >= n) return false;
        return std::find(k.succ[a].begin(), k.succ[a].end(), b) != k.succ[a].end();
    };
    std::vector<int> seq = l.stem;
    seq.insert(seq.end(), l.loop.begin(), l.loop.end());
    if (from_init && std::find(k.init.begin(), k.init.end(), seq.front()) == k.init.end()) return false;
    for (std::size_t i = 0; i + 1 < seq.size(); ++i)
        if (!edge(seq[i], seq[i + 1])) return false;
    return edge(l.loop.back(), l.loop.front());
}

LetterLasso letters(const KripkeStructure& k, const Lasso& l) {
    LetterLasso out;
    for (int s : l.stem) out.stem.push_back(k.labels.at(s));
    for (int s : l.loop) out.loop.push_back(k.labels.at(s));
    return out;
}

std::vector<Lasso> enumerate_lassos(const KripkeStructure& k, int bound) {
    if (bound < 1) throw Error("enumerate_lassos: bound must be at least 1");
    std::set<Lasso> found;
    std::vector<int> path;

    auto dfs = [&](auto&& self) -> void {
        const int last = path.back();
        for (int t : k.succ[last]) {
            for (std::size_t j = 0; j < path.size(); ++j) {
                if (path[j] != t) continue;
                Lasso l;
                l.stem.assign(path.begin(), path.begin() + static_cast<std::ptrdiff_t>(j));
                l.loop.assign(path.begin() + static_cast<std::ptrdiff_t>(j), path.end());
                found.insert(normalize(std::move(l)));
            }
            if (static_cast<int>(path.size()) < bound) {
                path.push_back(t);
                self(self);
                path.pop_back();
            }
        }
    };
    for (int s : k.init) {
        path.assign(1, s);
        dfs(dfs);
    }
    std::vector<Lasso> out(found.begin(), found.end());
    std::stable_sort(out.begin(), out.end(), [](const Lasso& a, const Lasso& b) { return a.size() < b.size(); });
    return out;
}

int longest_simple_lasso(const KripkeStructure& k, long budget) {
    int best = 0;
    long steps = 0;
    std::vector<char> on_path(k.num_states(), 0);
    bool exhausted = false;
    auto dfs = [&](auto&& self, int s, int depth) -> void {
        if (exhausted) return;
        if (++steps > budget) {
            exhausted = true;
            return;
        }
        on_path[s] = 1;
        best = std::max(best, depth);
        for (int t : k.succ[s])
            if (!on_path[t]) self(self, t, depth + 1);
        on_path[s] = 0;
    };
    for (int s : k.init) dfs(dfs, s, 1);
    return exhausted ? k.num_states() : best;
}

std::vector<Lasso> expand(const std::vector<Lasso>& traces, const Trajectory& t, int num_states) {
    const std::size_t n = traces.size();
    if (static_cast<int>(n) != t.num_vars) throw Error("expand: trajectory arity does not match trace count");
    const std::size_t tstem = t.stem.size();
    const std::size_t tsize = tstem + t.loop.size();

    // Configuration: trajectory slot, then per trace (pointer slot, stutter flag).
    std::vector<std::size_t> cfg(1 + 2 * n, 0);
    std::map<std::vector<std::size_t>, std::size_t> seen;
    std::vector<std::vector<int>> out(n);
    for (std::size_t k = 0;; ++k) {
        auto [it, fresh] = seen.emplace(cfg, k);
        if (!fresh) {
            const std::size_t loop_start = it->second;
            std::vector<Lasso> result(n);
            for (std::size_t i = 0; i < n; ++i) {
                result[i].stem.assign(out[i].begin(), out[i].begin() + static_cast<std::ptrdiff_t>(loop_start));
                result[i].loop.assign(out[i].begin() + static_cast<std::ptrdiff_t>(loop_start), out[i].end());
                result[i] = normalize(std::move(result[i]));
            }
            return result;
        }
        for (std::size_t i = 0; i < n; ++i) {
            int s = traces[i].at(cfg[1 + 2 * i]);
            out[i].push_back(cfg[2 + 2 * i] ? s + num_states : s);
        }
        const VarSet moving = cfg[0] < tstem ? t.stem[cfg[0]] : t.loop[cfg[0] - tstem];
        for (std::size_t i = 0; i < n; ++i) {
            if ((moving >> i) & 1U) {
                cfg[1 + 2 * i] = traces[i].next_slot(cfg[1 + 2 * i]);
                cfg[2 + 2 * i] = 0;
            } else {
                cfg[2 + 2 * i] = 1;
            }
        }
        cfg[0] = cfg[0] + 1 < tsize ? cfg[0] + 1 : tstem;
    }
}

std::pair<std::vector<Lasso>, Trajectory> compress(const std::vector<Lasso>& traces, int num_states) {
    const std::size_t n = traces.size();
    if (n == 0 || n > 32) throw Error("compress: unsupported number of traces");
    auto is_st = [&](int s) { return s >= num_states; };

    std::vector<Lasso> plain(n);
    std::size_t stem = 0;
    std::size_t period = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const Lasso& l = traces[i];
        if (l.loop.empty()) throw Error("compress: empty loop");
        if (std::all_of(l.loop.begin(), l.loop.end(), is_st))
            throw Error("compress: trace " + std::to_string(i) + " is unfair (stutters forever)");
        if (is_st(l.at(0))) throw Error("compress: trace " + std::to_string(i) + " starts in a stutter state");
        for (int s : l.stem)
            if (!is_st(s)) plain[i].stem.push_back(s);
        for (int s : l.loop)
            if (!is_st(s)) plain[i].loop.push_back(s);
        plain[i] = normalize(std::move(plain[i]));
        stem = std::max(stem, l.stem.size());
        period = std::lcm(period, l.loop.size());
        if (period > 100000) throw ResourceError("compress: composite period too large");
    }

    Trajectory t;
    t.num_vars = static_cast<int>(n);
    for (std::size_t k = 0; k < stem + period; ++k) {
        VarSet moved = 0;
        for (std::size_t i = 0; i < n; ++i)
            if (!is_st(traces[i].at(k + 1))) moved |= VarSet{1} << i;
        if (moved == 0) continue;
        (k < stem ? t.stem : t.loop).push_back(moved);
    }
    return {std::move(plain), normalize(std::move(t))};
}

bool is_stuttering_expansion(const LetterLasso& a, const LetterLasso& b) {
    if (a.loop.empty() || b.loop.empty()) return false;
    if (a.at(0) != b.at(0)) return false;
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    auto id = [&](std::size_t i, std::size_t j) { return i * nb + j; };

    // Edges of the product graph; the flag marks steps where a advances.
    std::vector<std::vector<std::pair<std::size_t, bool>>> adj(na * nb);
    std::vector<char> reached(na * nb, 0);
    std::vector<std::size_t> stack{id(0, 0)};
    reached[id(0, 0)] = 1;
    while (!stack.empty()) {
        std::size_t v = stack.back();
        stack.pop_back();
        std::size_t i = v / nb;
        std::size_t j = v % nb;
        std::size_t j2 = b.next_slot(j);
        std::size_t i2 = a.next_slot(i);
        const Valuation lb = j2 < b.stem.size() ? b.stem[j2] : b.loop[j2 - b.stem.size()];
        const Valuation la_stay = i < a.stem.size() ? a.stem[i] : a.loop[i - a.stem.size()];
        const Valuation la_move = i2 < a.stem.size() ? a.stem[i2] : a.loop[i2 - a.stem.size()];
        if (la_stay == lb) adj[v].emplace_back(id(i, j2), false);
        if (la_move == lb) adj[v].emplace_back(id(i2, j2), true);
        for (auto [w, adv] : adj[v]) {
            (void)adv;
            if (!reached[w]) {
                reached[w] = 1;
                stack.push_back(w);
            }
        }
    }

    // Tarjan SCC over the reachable part; accept when an advance edge stays inside one component.
    const std::size_t total = na * nb;
    std::vector<int> index(total, -1), low(total, 0), comp(total, -1);
    std::vector<char> on_stack(total, 0);
    std::vector<std::size_t> scc_stack;
    int counter = 0;
    int ncomp = 0;
    auto strong = [&](auto&& self, std::size_t v) -> void {
        index[v] = low[v] = counter++;
        scc_stack.push_back(v);
        on_stack[v] = 1;
        for (auto [w, adv] : adj[v]) {
            (void)adv;
            if (index[w] < 0) {
                self(self, w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            std::size_t w;
            do {
                w = scc_stack.back();
                scc_stack.pop_back();
                on_stack[w] = 0;
                comp[w] = ncomp;
            } while (w != v);
            ++ncomp;
        }
    };
    strong(strong, id(0, 0));
    for (std::size_t v = 0; v < total; ++v) {
        if (!reached[v]) continue;
        for (auto [w, adv] : adj[v])
            if (adv && comp[w] == comp[v]) return true;
    }
    return false;
}

}  // namespace ahltl
