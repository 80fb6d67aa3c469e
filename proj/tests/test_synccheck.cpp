#include "doctest.h"

#include "ahltl/corpus.hpp"
#include "ahltl/oracle.hpp"
#include "ahltl/synccheck.hpp"
#include "random_instances.hpp"

using namespace ahltl;

namespace {

const std::vector<Valuation> kAll2{0, 1, 2, 3};

// Bounded search for a K-path completing w on the last variable.
bool has_completion(const BuchiAutomaton& a, const KripkeStructure& k, const Word& w, int bound) {
    for (const Lasso& rho : enumerate_lassos(k, bound)) {
        std::vector<LetterLasso> parts;
        for (int v = 0; v + 1 < a.num_vars; ++v) {
            LetterLasso c;
            for (const auto& l : w.stem) c.stem.push_back(l[v]);
            for (const auto& l : w.loop) c.loop.push_back(l[v]);
            parts.push_back(c);
        }
        parts.push_back(letters(k, rho));
        if (accepts(a, zip_word(parts))) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("cube matching and meet") {
    Cube c = Cube::top(2);
    c.pos[0] = 1;
    c.neg[1] = 2;
    CHECK(c.matches({1, 1}));
    CHECK_FALSE(c.matches({0, 1}));
    CHECK_FALSE(c.matches({1, 2}));
    Cube d = Cube::top(2);
    d.neg[0] = 1;
    CHECK_FALSE(c.meet(d).consistent());
    CHECK(c.meet(Cube::top(2)) == c);
}

TEST_CASE("word zipping aligns stems and loops") {
    Word w = zip_word({LetterLasso{{1}, {2}}, LetterLasso{{}, {0, 3}}});
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(w.at(i)[0] == (i == 0 ? 1U : 2U));
        CHECK(w.at(i)[1] == (i % 2 == 0 ? 0U : 3U));
    }
}

TEST_CASE("accepting lasso search") {
    MarkedGraph g;
    g.adj = {{{1, 0}}, {{1, 0}, {2, 1}}, {{1, 2}}};
    g.init = {0};
    auto run = find_accepting_lasso(g, 3);
    REQUIRE(run.has_value());
    CHECK(run->at(0) == 0);
    CHECK(std::find(run->loop.begin(), run->loop.end(), 2) != run->loop.end());
    g.adj[2] = {{2, 2}};
    CHECK_FALSE(find_accepting_lasso(g, 3).has_value());
}

TEST_CASE("property: LTL translation agrees with the direct evaluator") {
    testing::Rng rng(31);
    const std::vector<std::string> vars{"p", "q"};
    const std::vector<std::string> props{"a", "b"};
    for (int round = 0; round < 150; ++round) {
        Expr psi = testing::coin(rng) ? testing::random_admissible(rng, vars, props, false)
                                      : testing::random_monadic(rng, "q", props, 3);
        if (testing::coin(rng, 0.3)) psi = lor(next(psi), testing::random_state_formula(rng, vars, props));
        CAPTURE(to_string(psi));
        BuchiAutomaton a = ltl_to_buchi(psi, vars, props);
        for (int i = 0; i < 20; ++i) {
            Word w = testing::random_word(rng, 2, 2);
            CHECK(accepts(a, w) == eval_word_at(w, psi, vars, props, 0));
        }
    }
}

TEST_CASE("property: intersection is language intersection") {
    testing::Rng rng(32);
    for (int round = 0; round < 60; ++round) {
        BuchiAutomaton a = testing::random_automaton(rng, 2, 2, 3, 2);
        BuchiAutomaton b = testing::random_automaton(rng, 2, 2, 3, 2);
        BuchiAutomaton ab = intersect(a, b);
        for (int i = 0; i < 40; ++i) {
            Word w = testing::random_word(rng, 2, 2);
            CHECK(accepts(ab, w) == (accepts(a, w) && accepts(b, w)));
        }
    }
}

TEST_CASE("property: complement accepts exactly the rejected words") {
    testing::Rng rng(33);
    for (int round = 0; round < 60; ++round) {
        BuchiAutomaton a = testing::random_automaton(rng, 1, 2, 3, 2);
        BuchiAutomaton c = complement_buchi(a, {kAll2});
        for (int i = 0; i < 40; ++i) {
            Word w = testing::random_word(rng, 1, 2);
            CHECK(accepts(c, w) != accepts(a, w));
        }
    }
}

TEST_CASE("property: trimming and emptiness") {
    testing::Rng rng(34);
    for (int round = 0; round < 60; ++round) {
        BuchiAutomaton a = testing::random_automaton(rng, 1, 2, 4, 2);
        BuchiAutomaton t = trim(a);
        bool some = false;
        for (int i = 0; i < 40; ++i) {
            Word w = testing::random_word(rng, 1, 2);
            const bool acc = accepts(a, w);
            some = some || acc;
            CHECK(accepts(t, w) == acc);
        }
        if (some) CHECK_FALSE(is_empty(a));
    }
}

TEST_CASE("property: the Kripke product projects the last variable") {
    testing::Rng rng(35);
    for (int round = 0; round < 60; ++round) {
        KripkeStructure k = testing::random_kripke(rng, 2, {"a", "b"}, false);
        BuchiAutomaton a = testing::random_automaton(rng, 2, 2, 2, 1);
        BuchiAutomaton p = product_with_kripke(a, k);
        CHECK(p.num_vars == 1);
        for (int i = 0; i < 20; ++i) {
            Word w = testing::random_word(rng, 1, 2, 2, 2);
            CHECK(accepts(p, w) == has_completion(a, k, w, 8));
        }
    }
}

TEST_CASE("synchronous model checking on small structures") {
    KripkeStructure k = parse_kripke(corpus_text("selfloop.kr"));
    CheckResult r = check_hyperltl(k, parse_formula("forall p. forall q. (b[p] <-> b[q]) U G (a[p] <-> a[q])"));
    CHECK(r.verdict == Verdict::Fails);
    REQUIRE(r.witness.size() == 2);
    CHECK(is_path(k, r.witness[0]));
    CHECK(is_path(k, r.witness[1]));
    CHECK(check_hyperltl(k, parse_formula("forall p. exists q. G (a[p] <-> a[q])")).verdict == Verdict::Holds);
    CHECK(check_hyperltl(k, parse_formula("exists p. G !a[p]")).verdict == Verdict::Holds);
    CHECK(check_hyperltl(k, parse_formula("forall p. F a[p]")).verdict == Verdict::Fails);
}

TEST_CASE("property: synchronous checking agrees with the lockstep oracle") {
    const std::vector<std::string> props{"a", "b"};
    const std::vector<std::string> vars{"p", "q"};
    int compared = 0;
    for (int seed = 0; seed < 40; ++seed) {
        testing::Rng rng(seed + 700);
        KripkeStructure k = testing::random_kripke(rng, 3, props, true);
        Formula f;
        for (const auto& v : vars) f.prefix.push_back({testing::coin(rng) ? Quant::Exists : Quant::Forall, v});
        f.body = testing::random_admissible(rng, vars, props, false);
        CAPTURE(to_string(f));
        const Verdict v = check_hyperltl(k, f).verdict;
        Formula e = f;
        e.modality = Modality::E;
        OracleOptions opt;
        opt.lockstep_only = true;
        const BoundedVerdict o = oracle_check(k, e, 6, 1, opt);
        if (o.outcome == Outcome::Inconclusive) continue;
        ++compared;
        CHECK((v == Verdict::Holds) == (o.outcome == Outcome::Holds));
    }
    CHECK(compared > 20);
}
