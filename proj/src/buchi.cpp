#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "ahltl/synccheck.hpp"

namespace ahltl {

bool Cube::matches(const std::vector<Valuation>& letter) const {
    for (std::size_t v = 0; v < pos.size(); ++v)
        if ((letter[v] & pos[v]) != pos[v] || (letter[v] & neg[v]) != 0) return false;
    return true;
}

bool Cube::consistent() const {
    for (std::size_t v = 0; v < pos.size(); ++v)
        if (pos[v] & neg[v]) return false;
    return true;
}

Cube Cube::meet(const Cube& other) const {
    Cube c = *this;
    for (std::size_t v = 0; v < pos.size(); ++v) {
        c.pos[v] |= other.pos[v];
        c.neg[v] |= other.neg[v];
    }
    return c;
}

std::size_t BuchiAutomaton::num_transitions() const {
    std::size_t n = 0;
    for (const auto& o : out) n += o.size();
    return n;
}

int BuchiAutomaton::add_state() {
    out.emplace_back();
    if (!tags.empty()) tags.emplace_back();
    return num_states() - 1;
}

Word zip_word(const std::vector<LetterLasso>& components, std::size_t period_cap) {
    std::size_t stem = 0;
    std::size_t period = 1;
    for (const auto& c : components) {
        if (c.loop.empty()) throw Error("zip_word: empty loop");
        stem = std::max(stem, c.stem.size());
        period = std::lcm(period, c.loop.size());
        if (period > period_cap) throw ResourceError("zip_word: composite period exceeds cap");
    }
    Word w;
    for (std::size_t i = 0; i < stem + period; ++i) {
        Letter l;
        for (const auto& c : components) l.push_back(c.at(i));
        (i < stem ? w.stem : w.loop).push_back(std::move(l));
    }
    return w;
}

namespace {

// Iterative Tarjan; returns the component index of each node (or -1 when not visited).
std::vector<int> scc(const std::vector<std::vector<int>>& adj, const std::vector<int>& roots, int& count) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<char> on_stack(n, 0);
    std::vector<int> stack;
    std::vector<std::pair<int, std::size_t>> call;
    int counter = 0;
    count = 0;
    for (int r : roots) {
        if (index[r] >= 0) continue;
        call.push_back({r, 0});
        index[r] = low[r] = counter++;
        stack.push_back(r);
        on_stack[r] = 1;
        while (!call.empty()) {
            auto& [v, i] = call.back();
            if (i < adj[v].size()) {
                int w = adj[v][i++];
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = count;
                } while (w != v);
                ++count;
            }
            int done = v;
            call.pop_back();
            if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    return comp;
}

std::vector<std::vector<int>> plain_adjacency(const MarkedGraph& g) {
    std::vector<std::vector<int>> adj(g.adj.size());
    for (std::size_t v = 0; v < g.adj.size(); ++v)
        for (const auto& e : g.adj[v]) adj[v].push_back(e.dst);
    return adj;
}

MarkedGraph graph_of(const BuchiAutomaton& a) {
    MarkedGraph g;
    g.init = a.initial;
    g.adj.resize(a.out.size());
    for (int q = 0; q < a.num_states(); ++q)
        for (const auto& t : a.out[q]) g.adj[q].push_back({t.dst, t.marks});
    return g;
}

// Marks carried by edges internal to each component, and whether the component has any such edge.
void component_marks(const MarkedGraph& g, const std::vector<int>& comp, int count, std::vector<MarkSet>& marks,
                     std::vector<char>& nontrivial) {
    marks.assign(count, 0);
    nontrivial.assign(count, 0);
    for (std::size_t v = 0; v < g.adj.size(); ++v) {
        if (comp[v] < 0) continue;
        for (const auto& e : g.adj[v]) {
            if (comp[e.dst] != comp[v]) continue;
            marks[comp[v]] |= e.marks;
            nontrivial[comp[v]] = 1;
        }
    }
}

// Shortest path inside one component from src to a node satisfying `goal`.
// Returns the visited nodes (starting with src) and the edge index taken out of each but the last.
template <class Goal>
std::pair<std::vector<int>, std::vector<int>> bfs_within(const MarkedGraph& g, const std::vector<int>& comp, int src,
                                                         Goal goal) {
    std::map<int, std::pair<int, int>> parent{{src, {-1, -1}}};
    std::deque<int> queue{src};
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (goal(v)) {
            std::vector<int> nodes, edges;
            for (int x = v; x != -1; x = parent[x].first) {
                nodes.push_back(x);
                if (parent[x].first != -1) edges.push_back(parent[x].second);
            }
            std::reverse(nodes.begin(), nodes.end());
            std::reverse(edges.begin(), edges.end());
            return {nodes, edges};
        }
        for (std::size_t i = 0; i < g.adj[v].size(); ++i) {
            const int w = g.adj[v][i].dst;
            if (comp[w] != comp[src] || parent.count(w)) continue;
            parent[w] = {v, static_cast<int>(i)};
            queue.push_back(w);
        }
    }
    return {};
}

}  // namespace

std::optional<AcceptingRun> find_accepting_run(const MarkedGraph& g, MarkSet required) {
    const int n = static_cast<int>(g.adj.size());
    if (n == 0) return std::nullopt;
    std::vector<int> depth(n, -1), parent(n, -1), parent_edge(n, -1);
    std::deque<int> queue;
    for (int s : g.init) {
        if (depth[s] >= 0) continue;
        depth[s] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i < g.adj[v].size(); ++i) {
            const int w = g.adj[v][i].dst;
            if (depth[w] >= 0) continue;
            depth[w] = depth[v] + 1;
            parent[w] = v;
            parent_edge[w] = static_cast<int>(i);
            queue.push_back(w);
        }
    }
    int count = 0;
    std::vector<int> comp = scc(plain_adjacency(g), g.init, count);
    std::vector<MarkSet> marks;
    std::vector<char> nontrivial;
    component_marks(g, comp, count, marks, nontrivial);

    int root = -1;
    for (int v = 0; v < n; ++v) {
        if (depth[v] < 0 || comp[v] < 0) continue;
        const int c = comp[v];
        if (!nontrivial[c] || (marks[c] & required) != required) continue;
        if (root < 0 || depth[v] < depth[root]) root = v;
    }
    if (root < 0) return std::nullopt;
    const int rc = comp[root];

    AcceptingRun run;
    for (int x = root; parent[x] != -1; x = parent[x]) {
        run.nodes.stem.push_back(parent[x]);
        run.stem_edges.push_back(parent_edge[x]);
    }
    std::reverse(run.nodes.stem.begin(), run.nodes.stem.end());
    std::reverse(run.stem_edges.begin(), run.stem_edges.end());

    // Walk a cycle from root that collects every required mark, then return to root.
    std::vector<int> loop{root};
    std::vector<int> loop_edges;
    int cur = root;
    MarkSet covered = 0;
    auto append = [&](const std::pair<std::vector<int>, std::vector<int>>& path) {
        for (std::size_t i = 1; i < path.first.size(); ++i) loop.push_back(path.first[i]);
        loop_edges.insert(loop_edges.end(), path.second.begin(), path.second.end());
        for (std::size_t i = 0; i < path.second.size(); ++i)
            covered |= g.adj[path.first[i]][path.second[i]].marks;
    };
    auto internal_edge = [&](int from, MarkSet want) -> int {
        for (std::size_t i = 0; i < g.adj[from].size(); ++i) {
            const auto& e = g.adj[from][i];
            if (comp[e.dst] == rc && (want == 0 || (e.marks & want))) return static_cast<int>(i);
        }
        return -1;
    };
    auto step = [&](int from, int edge) {
        loop.push_back(g.adj[from][edge].dst);
        loop_edges.push_back(edge);
        covered |= g.adj[from][edge].marks;
        cur = g.adj[from][edge].dst;
    };
    while ((covered & required) != required) {
        const MarkSet missing = required & ~covered;
        auto path = bfs_within(g, comp, cur, [&](int v) { return internal_edge(v, missing) >= 0; });
        append(path);
        const int from = path.first.back();
        step(from, internal_edge(from, missing));
    }
    if (loop_edges.empty()) step(root, internal_edge(root, 0));
    if (cur != root) {
        auto path = bfs_within(g, comp, cur, [&](int v) {
            for (const auto& e : g.adj[v])
                if (e.dst == root) return true;
            return false;
        });
        append(path);
        const int from = path.first.back();
        for (std::size_t i = 0; i < g.adj[from].size(); ++i) {
            if (g.adj[from][i].dst == root) {
                step(from, static_cast<int>(i));
                break;
            }
        }
    }
    loop.pop_back();
    run.nodes.loop = std::move(loop);
    run.loop_edges = std::move(loop_edges);
    return run;
}

std::optional<Lasso> find_accepting_lasso(const MarkedGraph& g, MarkSet required) {
    auto run = find_accepting_run(g, required);
    if (!run) return std::nullopt;
    return run->nodes;
}

bool is_empty(const BuchiAutomaton& a) { return !find_accepting_lasso(graph_of(a), a.all_marks()).has_value(); }

bool accepts(const BuchiAutomaton& a, const Word& w) {
    const int len = static_cast<int>(w.size());
    MarkedGraph g;
    g.adj.resize(static_cast<std::size_t>(a.num_states()) * len);
    for (int q = 0; q < a.num_states(); ++q) {
        for (int p = 0; p < len; ++p) {
            const Letter& letter = w.at(static_cast<std::size_t>(p));
            const int np = static_cast<int>(w.next_slot(static_cast<std::size_t>(p)));
            for (const auto& t : a.out[q])
                if (t.guard.matches(letter)) g.adj[q * len + p].push_back({t.dst * len + np, t.marks});
        }
    }
    for (int q : a.initial) g.init.push_back(q * len);
    return find_accepting_lasso(g, a.all_marks()).has_value();
}

BuchiAutomaton trim(const BuchiAutomaton& a) {
    MarkedGraph g = graph_of(a);
    int count = 0;
    std::vector<int> comp = scc(plain_adjacency(g), g.init, count);
    std::vector<MarkSet> marks;
    std::vector<char> nontrivial;
    component_marks(g, comp, count, marks, nontrivial);
    const MarkSet all = a.all_marks();

    const int n = a.num_states();
    std::vector<std::vector<int>> rev(n);
    for (int q = 0; q < n; ++q)
        for (const auto& t : a.out[q]) rev[t.dst].push_back(q);
    std::vector<char> useful(n, 0);
    std::vector<int> stack;
    for (int q = 0; q < n; ++q) {
        if (comp[q] >= 0 && nontrivial[comp[q]] && (marks[comp[q]] & all) == all) {
            useful[q] = 1;
            stack.push_back(q);
        }
    }
    while (!stack.empty()) {
        int q = stack.back();
        stack.pop_back();
        for (int p : rev[q])
            if (!useful[p] && comp[p] >= 0) {
                useful[p] = 1;
                stack.push_back(p);
            }
    }

    BuchiAutomaton r;
    r.num_vars = a.num_vars;
    r.num_marks = a.num_marks;
    std::vector<int> remap(n, -1);
    for (int q = 0; q < n; ++q) {
        if (!useful[q]) continue;
        remap[q] = static_cast<int>(r.out.size());
        r.out.emplace_back();
        if (!a.tags.empty()) r.tags.push_back(a.tags[q]);
    }
    for (int q = 0; q < n; ++q) {
        if (remap[q] < 0) continue;
        for (const auto& t : a.out[q])
            if (remap[t.dst] >= 0) r.out[remap[q]].push_back({remap[t.dst], t.guard, t.marks});
    }
    for (int q : a.initial)
        if (remap[q] >= 0) r.initial.push_back(remap[q]);
    if (r.initial.empty()) {
        r.out.emplace_back();
        if (!a.tags.empty()) r.tags.emplace_back();
        r.initial.push_back(0);
    }
    return r;
}

bool is_weak(const BuchiAutomaton& a) {
    MarkedGraph g = graph_of(a);
    std::vector<int> roots(a.num_states());
    std::iota(roots.begin(), roots.end(), 0);
    int count = 0;
    std::vector<int> comp = scc(plain_adjacency(g), roots, count);
    std::vector<MarkSet> marks;
    std::vector<char> nontrivial;
    component_marks(g, comp, count, marks, nontrivial);
    const MarkSet all = a.all_marks();
    for (int q = 0; q < a.num_states(); ++q) {
        const int c = comp[q];
        if ((marks[c] & all) != all) continue;
        for (const auto& t : a.out[q])
            if (comp[t.dst] == c && (t.marks & all) != all) return false;
    }
    return true;
}

BuchiAutomaton product_with_kripke(const BuchiAutomaton& a, const KripkeStructure& k) {
    if (a.num_vars < 1) throw Error("product_with_kripke: automaton has no trace variable left");
    const int last = a.num_vars - 1;
    BuchiAutomaton r;
    r.num_vars = last;
    r.num_marks = a.num_marks;
    r.tags.clear();

    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> todo;
    auto id_of = [&](int q, int s) {
        auto [it, fresh] = ids.emplace(std::make_pair(q, s), static_cast<int>(r.out.size()));
        if (fresh) {
            r.out.emplace_back();
            std::vector<int> tag{s};
            if (!a.tags.empty()) tag.insert(tag.end(), a.tags[q].begin(), a.tags[q].end());
            r.tags.push_back(std::move(tag));
            todo.push_back({q, s});
        }
        return it->second;
    };
    for (int q : a.initial)
        for (int s : k.init) r.initial.push_back(id_of(q, s));

    for (std::size_t i = 0; i < todo.size(); ++i) {
        auto [q, s] = todo[i];
        const int src = static_cast<int>(i);
        const Valuation label = k.labels[s];
        std::set<std::tuple<int, Cube, MarkSet>> seen;
        for (const auto& t : a.out[q]) {
            if ((label & t.guard.pos[last]) != t.guard.pos[last] || (label & t.guard.neg[last]) != 0) continue;
            Cube g{std::vector<Valuation>(t.guard.pos.begin(), t.guard.pos.end() - 1),
                   std::vector<Valuation>(t.guard.neg.begin(), t.guard.neg.end() - 1)};
            for (int s2 : k.succ[s]) {
                int dst = id_of(t.dst, s2);
                if (seen.emplace(dst, g, t.marks).second) r.out[src].push_back({dst, g, t.marks});
            }
        }
    }
    return r;
}

BuchiAutomaton intersect(const BuchiAutomaton& a, const BuchiAutomaton& b) {
    if (a.num_vars != b.num_vars) throw Error("intersect: variable counts differ");
    if (a.num_marks + b.num_marks > 64) throw ResourceError("intersect: more than 64 acceptance marks");
    BuchiAutomaton r;
    r.num_vars = a.num_vars;
    r.num_marks = a.num_marks + b.num_marks;
    std::map<std::pair<int, int>, int> ids;
    std::vector<std::pair<int, int>> todo;
    auto id_of = [&](int p, int q) {
        auto [it, fresh] = ids.emplace(std::make_pair(p, q), static_cast<int>(r.out.size()));
        if (fresh) {
            r.out.emplace_back();
            if (!a.tags.empty()) r.tags.push_back(a.tags[p]);
            todo.push_back({p, q});
        }
        return it->second;
    };
    for (int p : a.initial)
        for (int q : b.initial) r.initial.push_back(id_of(p, q));
    for (std::size_t i = 0; i < todo.size(); ++i) {
        auto [p, q] = todo[i];
        for (const auto& x : a.out[p]) {
            for (const auto& y : b.out[q]) {
                Cube g = x.guard.meet(y.guard);
                if (!g.consistent()) continue;
                int dst = id_of(x.dst, y.dst);
                r.out[i].push_back({dst, std::move(g), x.marks | (y.marks << a.num_marks)});
            }
        }
    }
    return r;
}

namespace {

struct LetterTable {
    std::vector<Letter> letters;
    std::vector<Cube> guards;
};

LetterTable letters_for(const BuchiAutomaton& a, const std::vector<std::vector<Valuation>>& alphabet) {
    const int nv = a.num_vars;
    if (static_cast<int>(alphabet.size()) != nv) throw Error("complement: alphabet arity mismatch");
    std::vector<Valuation> mask(nv, 0);
    for (const auto& o : a.out)
        for (const auto& t : o)
            for (int v = 0; v < nv; ++v) mask[v] |= t.guard.pos[v] | t.guard.neg[v];
    std::vector<std::vector<Valuation>> per_var(nv);
    for (int v = 0; v < nv; ++v) {
        std::set<Valuation> s;
        for (Valuation x : alphabet[v]) s.insert(x & mask[v]);
        per_var[v].assign(s.begin(), s.end());
    }
    LetterTable table;
    Letter cur(nv, 0);
    auto rec = [&](auto&& self, int v) -> void {
        if (v == nv) {
            Cube c = Cube::top(nv);
            for (int i = 0; i < nv; ++i) {
                c.pos[i] = cur[i];
                c.neg[i] = mask[i] & ~cur[i];
            }
            table.letters.push_back(cur);
            table.guards.push_back(std::move(c));
            return;
        }
        for (Valuation x : per_var[v]) {
            cur[v] = x;
            self(self, v + 1);
        }
    };
    rec(rec, 0);
    if (table.letters.size() > 1000000) throw ResourceError("complement: alphabet too large");
    return table;
}

// Successor lists per (state, letter) for a state-based automaton given as edge lists.
using SuccTable = std::vector<std::vector<std::vector<int>>>;

BuchiAutomaton breakpoint_complement(const BuchiAutomaton& a, const LetterTable& lt, std::size_t cap) {
    MarkedGraph g = graph_of(a);
    std::vector<int> roots(a.num_states());
    std::iota(roots.begin(), roots.end(), 0);
    int count = 0;
    std::vector<int> comp = scc(plain_adjacency(g), roots, count);
    std::vector<MarkSet> marks;
    std::vector<char> nontrivial;
    component_marks(g, comp, count, marks, nontrivial);
    const MarkSet all = a.all_marks();
    std::vector<char> accepting(a.num_states(), 0);
    for (int q = 0; q < a.num_states(); ++q)
        accepting[q] = nontrivial[comp[q]] && (marks[comp[q]] & all) == all;

    const std::size_t nl = lt.letters.size();
    SuccTable succ(a.num_states(), std::vector<std::vector<int>>(nl));
    for (int q = 0; q < a.num_states(); ++q)
        for (std::size_t l = 0; l < nl; ++l) {
            for (const auto& t : a.out[q])
                if (t.guard.matches(lt.letters[l])) succ[q][l].push_back(t.dst);
            std::sort(succ[q][l].begin(), succ[q][l].end());
            succ[q][l].erase(std::unique(succ[q][l].begin(), succ[q][l].end()), succ[q][l].end());
        }

    using Key = std::pair<std::vector<int>, std::vector<int>>;
    BuchiAutomaton r;
    r.num_vars = a.num_vars;
    r.num_marks = 1;
    std::map<Key, int> ids;
    std::vector<Key> todo;
    auto id_of = [&](Key k) {
        auto [it, fresh] = ids.emplace(k, static_cast<int>(r.out.size()));
        if (fresh) {
            if (r.out.size() >= cap) throw ResourceError("complement: state cap exceeded");
            r.out.emplace_back();
            todo.push_back(std::move(k));
        }
        return it->second;
    };
    std::vector<int> init(a.initial.begin(), a.initial.end());
    std::sort(init.begin(), init.end());
    init.erase(std::unique(init.begin(), init.end()), init.end());
    r.initial.push_back(id_of({init, {}}));

    auto post = [&](const std::vector<int>& set, std::size_t l) {
        std::vector<int> res;
        for (int q : set) res.insert(res.end(), succ[q][l].begin(), succ[q][l].end());
        std::sort(res.begin(), res.end());
        res.erase(std::unique(res.begin(), res.end()), res.end());
        return res;
    };
    auto only_accepting = [&](std::vector<int> set) {
        set.erase(std::remove_if(set.begin(), set.end(), [&](int q) { return !accepting[q]; }), set.end());
        return set;
    };
    for (std::size_t i = 0; i < todo.size(); ++i) {
        const Key cur = todo[i];
        const bool breakpoint = cur.second.empty();
        for (std::size_t l = 0; l < nl; ++l) {
            std::vector<int> s2 = post(cur.first, l);
            std::vector<int> o2 = only_accepting(breakpoint ? s2 : post(cur.second, l));
            int dst = id_of({std::move(s2), std::move(o2)});
            r.out[i].push_back({dst, lt.guards[l], breakpoint ? MarkSet{1} : MarkSet{0}});
        }
    }
    return r;
}

// Degeneralized copy: state (q, j) with j counting consecutively collected marks; j == m is accepting.
struct Nba {
    int n = 0;
    std::vector<int> init;
    std::vector<char> accepting;
    SuccTable succ;
};

Nba degeneralize(const BuchiAutomaton& a, const LetterTable& lt) {
    const int m = a.num_marks;
    const int levels = m + 1;
    Nba nba;
    nba.n = a.num_states() * levels;
    nba.accepting.assign(nba.n, 0);
    nba.succ.assign(nba.n, std::vector<std::vector<int>>(lt.letters.size()));
    for (int q = 0; q < a.num_states(); ++q) {
        for (int j = 0; j <= m; ++j) {
            const int node = q * levels + j;
            nba.accepting[node] = j == m;
            const int base = j == m ? 0 : j;
            for (std::size_t l = 0; l < lt.letters.size(); ++l) {
                for (const auto& t : a.out[q]) {
                    if (!t.guard.matches(lt.letters[l])) continue;
                    int j2 = base;
                    while (j2 < m && ((t.marks >> j2) & 1U)) ++j2;
                    nba.succ[node][l].push_back(t.dst * levels + j2);
                }
            }
        }
    }
    for (int q : a.initial) nba.init.push_back(q * levels);
    return nba;
}

// Keeps only states that are reachable and can still reach an accepting cycle.
void prune_useless(Nba& nba) {
    const int n = nba.n;
    std::vector<std::vector<int>> adj(n);
    std::vector<std::vector<int>> rev(n);
    for (int q = 0; q < n; ++q)
        for (const auto& dsts : nba.succ[q])
            for (int q2 : dsts) {
                adj[q].push_back(q2);
                rev[q2].push_back(q);
            }
    std::vector<char> reach(n, 0);
    std::vector<int> stack;
    for (int q : nba.init)
        if (!reach[q]) {
            reach[q] = 1;
            stack.push_back(q);
        }
    while (!stack.empty()) {
        const int q = stack.back();
        stack.pop_back();
        for (int q2 : adj[q])
            if (!reach[q2]) {
                reach[q2] = 1;
                stack.push_back(q2);
            }
    }
    std::vector<int> roots;
    for (int q = 0; q < n; ++q)
        if (reach[q]) roots.push_back(q);
    int count = 0;
    const std::vector<int> comp = scc(adj, roots, count);
    std::vector<int> size(count, 0);
    for (int q : roots) ++size[comp[q]];
    std::vector<char> useful(n, 0);
    for (int q : roots) {
        if (!nba.accepting[q]) continue;
        const bool cyclic = size[comp[q]] > 1 || std::find(adj[q].begin(), adj[q].end(), q) != adj[q].end();
        if (cyclic && !useful[q]) {
            useful[q] = 1;
            stack.push_back(q);
        }
    }
    while (!stack.empty()) {
        const int q = stack.back();
        stack.pop_back();
        for (int q2 : rev[q])
            if (reach[q2] && !useful[q2]) {
                useful[q2] = 1;
                stack.push_back(q2);
            }
    }
    for (int q = 0; q < n; ++q) {
        if (!useful[q]) {
            for (auto& dsts : nba.succ[q]) dsts.clear();
            nba.accepting[q] = 0;
            continue;
        }
        for (auto& dsts : nba.succ[q]) {
            dsts.erase(std::remove_if(dsts.begin(), dsts.end(), [&](int q2) { return !useful[q2]; }), dsts.end());
            std::sort(dsts.begin(), dsts.end());
            dsts.erase(std::unique(dsts.begin(), dsts.end()), dsts.end());
        }
    }
    nba.init.erase(std::remove_if(nba.init.begin(), nba.init.end(), [&](int q) { return !useful[q]; }),
                   nba.init.end());
}

// Rank-based complement restricted to tight level rankings: a subset phase that guesses the
// point from which the odd ranking of a rejected word is tight.
BuchiAutomaton rank_complement(const BuchiAutomaton& a, const LetterTable& lt, std::size_t cap) {
    Nba nba = degeneralize(a, lt);
    prune_useless(nba);
    const int n = nba.n;
    const std::size_t nl = lt.letters.size();

    // (phase, ranking, obligations); in the subset phase the ranking holds 0 for present states.
    using Key = std::tuple<char, std::vector<int>, std::vector<char>>;
    BuchiAutomaton r;
    r.num_vars = a.num_vars;
    r.num_marks = 1;
    std::map<Key, int> ids;
    std::vector<Key> todo;
    auto id_of = [&](Key k) {
        auto [it, fresh] = ids.emplace(k, static_cast<int>(r.out.size()));
        if (fresh) {
            if (r.out.size() >= cap) throw ResourceError("complement: state cap exceeded");
            r.out.emplace_back();
            todo.push_back(std::move(k));
        }
        return it->second;
    };
    std::vector<int> s0(n, -1);
    for (int q : nba.init) s0[q] = 0;
    r.initial.push_back(id_of({0, s0, std::vector<char>(n, 0)}));

    auto is_tight = [&](const std::vector<int>& f) {
        int top = -1;
        for (int x : f) top = std::max(top, x);
        if (top < 0) return true;
        if (top % 2 == 0) return false;
        std::vector<char> used(top + 1, 0);
        for (int x : f)
            if (x >= 0) used[x] = 1;
        for (int odd = 1; odd <= top; odd += 2)
            if (!used[odd]) return false;
        return true;
    };
    // Calls emit(f) for every tight ranking of `reached` with f[q] <= bound[q] and even ranks
    // on accepting states. A branch is cut once the states left cannot fill the odd ranks that
    // are still missing below the current maximum.
    const std::size_t work_cap = cap > std::numeric_limits<std::size_t>::max() / 64 ? cap : cap * 64;
    std::size_t work = 0;
    auto rankings = [&](const std::vector<int>& reached, const std::vector<int>& bound, auto&& emit) {
        std::vector<int> f(n, -1);
        int top_bound = 0;
        for (int q : reached) top_bound = std::max(top_bound, bound[q]);
        std::vector<int> used(top_bound + 2, 0);
        int top = -1;
        auto missing = [&]() {
            if (top < 0) return 0;
            const int need = top % 2 == 0 ? top + 1 : top;
            int m = 0;
            for (int odd = 1; odd <= need; odd += 2) m += used[odd] == 0;
            return m;
        };
        auto rec = [&](auto&& self, std::size_t idx) -> void {
            if (++work > work_cap) throw ResourceError("complement: ranking enumeration cap exceeded");
            if (missing() > static_cast<int>(reached.size() - idx)) return;
            if (idx == reached.size()) {
                if (is_tight(f)) emit(f);
                return;
            }
            const int q = reached[idx];
            const int saved_top = top;
            for (int rank = bound[q]; rank >= 0; --rank) {
                if (nba.accepting[q] && rank % 2 == 1) continue;
                f[q] = rank;
                ++used[rank];
                top = std::max(saved_top, rank);
                self(self, idx + 1);
                --used[rank];
            }
            top = saved_top;
            f[q] = -1;
        };
        rec(rec, 0);
    };

    for (std::size_t i = 0; i < todo.size(); ++i) {
        const Key cur = todo[i];
        const char phase = std::get<0>(cur);
        const std::vector<int>& f = std::get<1>(cur);
        const std::vector<char>& o = std::get<2>(cur);
        const bool o_empty = std::none_of(o.begin(), o.end(), [](char c) { return c != 0; });
        for (std::size_t l = 0; l < nl; ++l) {
            std::vector<int> bound(n, -1);
            std::vector<char> from_o(n, 0);
            for (int q = 0; q < n; ++q) {
                if (f[q] < 0) continue;
                for (int q2 : nba.succ[q][l]) {
                    bound[q2] = bound[q2] < 0 ? f[q] : std::min(bound[q2], f[q]);
                    if (o[q]) from_o[q2] = 1;
                }
            }
            std::vector<int> reached;
            for (int q = 0; q < n; ++q)
                if (bound[q] >= 0) reached.push_back(q);

            if (phase == 0) {
                std::vector<int> subset(n, -1);
                for (int q : reached) subset[q] = 0;
                const int next = id_of({0, subset, std::vector<char>(n, 0)});
                r.out[i].push_back({next, lt.guards[l], MarkSet{0}});
                int rejecting = 0;
                for (int q : reached) rejecting += !nba.accepting[q];
                std::vector<int> top(n, -1);
                for (int q : reached) top[q] = std::max(0, 2 * rejecting - 1);
                rankings(reached, top, [&](const std::vector<int>& f2) {
                    int dst = id_of({1, f2, std::vector<char>(n, 0)});
                    r.out[i].push_back({dst, lt.guards[l], MarkSet{0}});
                });
                continue;
            }
            rankings(reached, bound, [&](const std::vector<int>& f2) {
                std::vector<char> o2(n, 0);
                for (int q : reached)
                    if (f2[q] % 2 == 0 && (o_empty || from_o[q])) o2[q] = 1;
                int dst = id_of({1, f2, std::move(o2)});
                r.out[i].push_back({dst, lt.guards[l], o_empty ? MarkSet{1} : MarkSet{0}});
            });
        }
    }
    return r;
}

}  // namespace

BuchiAutomaton complement_buchi(const BuchiAutomaton& a, const std::vector<std::vector<Valuation>>& alphabet,
                                std::size_t state_cap) {
    const BuchiAutomaton t = trim(a);
    const LetterTable lt = letters_for(t, alphabet);
    BuchiAutomaton r = is_weak(t) ? breakpoint_complement(t, lt, state_cap) : rank_complement(t, lt, state_cap);
    return trim(r);
}

std::vector<Valuation> label_alphabet(const KripkeStructure& k) {
    std::set<Valuation> s(k.labels.begin(), k.labels.end());
    return {s.begin(), s.end()};
}

}  // namespace ahltl
