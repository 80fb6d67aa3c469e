#include "doctest.h"

#include "ahltl/formula.hpp"
#include "ahltl/oracle.hpp"
#include "random_instances.hpp"

using namespace ahltl;

TEST_CASE("parse an asynchronous formula") {
    Formula f = parse_formula("forall p. exists q. E G (a[p] <-> a[q]) & F b[q]");
    REQUIRE(f.prefix.size() == 2);
    CHECK(f.prefix[0] == Quantifier{Quant::Forall, "p"});
    CHECK(f.prefix[1] == Quantifier{Quant::Exists, "q"});
    REQUIRE(f.modality.has_value());
    CHECK(*f.modality == Modality::E);
    CHECK_FALSE(f.is_hyperltl());
    CHECK(f.body->op == Op::And);
    CHECK(f.body->lhs->op == Op::Globally);
    CHECK(f.body->rhs->op == Op::Finally);
    CHECK(f.var_index("q") == 1);
    CHECK(f.vars() == std::vector<std::string>{"p", "q"});
}

TEST_CASE("a formula without modality is synchronous HyperLTL") {
    Formula f = parse_formula("forall p. forall q. G (o[p] <-> o[q])");
    CHECK(f.is_hyperltl());
}

TEST_CASE("operator precedence") {
    // U binds tighter than &, which binds tighter than |, then ->, then <->.
    Expr e = parse_body("a[p] U b[p] & c[p] | d[p] -> e[p] <-> f[p]");
    REQUIRE(e->op == Op::Iff);
    REQUIRE(e->lhs->op == Op::Implies);
    REQUIRE(e->lhs->lhs->op == Op::Or);
    REQUIRE(e->lhs->lhs->lhs->op == Op::And);
    CHECK(e->lhs->lhs->lhs->lhs->op == Op::Until);

    Expr r = parse_body("a[p] -> b[p] -> c[p]");
    CHECK(r->rhs->op == Op::Implies);
    Expr u = parse_body("a[p] U b[p] U c[p]");
    CHECK(u->rhs->op == Op::Until);
    Expr g = parse_body("G !X a[p]");
    CHECK(g->op == Op::Globally);
    CHECK(g->lhs->op == Op::Not);
    CHECK(g->lhs->lhs->op == Op::Next);
}

TEST_CASE("parenthesized conjunction names a derived proposition") {
    Expr e = parse_body("(a & b)[p] & c[q]");
    REQUIRE(e->op == Op::And);
    CHECK(e->lhs->op == Op::Atom);
    CHECK(e->lhs->prop == "a&b");
    CHECK(e->lhs->var == "p");
    Expr grouped = parse_body("(a[p] & b[p])");
    CHECK(grouped->op == Op::And);
}

TEST_CASE("printing round-trips through the parser") {
    for (const char* text : {"forall p. exists q. E G (a[p] <-> a[q]) & F b[q]",
                             "exists x. forall y. A !(a[x] U X b[y]) | true",
                             "forall p. G ((a & b)[p] -> F false)"}) {
        Formula f = parse_formula(text);
        Formula g = parse_formula(to_string(f));
        CHECK(g.prefix == f.prefix);
        CHECK(g.modality == f.modality);
        CHECK(equal(g.body, f.body));
    }
}

TEST_CASE("malformed formulas") {
    CHECK_THROWS_AS(parse_formula("forall p. E a[p] &"), ParseError);
    CHECK_THROWS_AS(parse_formula("forall p. E a[p] $ b[p]"), ParseError);
    CHECK_THROWS_AS(parse_formula("forall p. E a"), ParseError);
    try {
        parse_formula("forall p. E a[q]");
        FAIL("expected an unbound variable error");
    } catch (const FormulaError& e) {
        CHECK(e.kind() == FormulaErrorKind::UnboundVariable);
    }
    try {
        parse_formula("forall p. exists p. E a[p]");
        FAIL("expected a duplicate quantifier error");
    } catch (const FormulaError& e) {
        CHECK(e.kind() == FormulaErrorKind::DuplicateQuantifier);
    }
    try {
        parse_formula("forall p. E a[p] & E b[p]");
        FAIL("expected a nested modality error");
    } catch (const FormulaError& e) {
        CHECK(e.kind() == FormulaErrorKind::NestedModality);
    }
}

TEST_CASE("syntactic queries") {
    Expr e = parse_body("G (a[p] <-> a[q]) & F b[q] & c[p]");
    CHECK(vars_of(e) == std::set<std::string>{"p", "q"});
    CHECK(props_of(e) == std::set<std::string>{"a", "b", "c"});
    CHECK(count_temporal(e) == 2);
    CHECK_FALSE(is_temporal_free(e));
    CHECK(is_temporal_free(parse_body("a[p] -> !b[q]")));
    CHECK(has_next(parse_body("F X a[p]")));
    CHECK_FALSE(has_next(parse_body("a[p] U b[p]")));
    CHECK(equal(rename_vars(parse_body("a[p] U b[q]"), {{"p", "x"}}), parse_body("a[x] U b[q]")));
}

namespace {

AdmissibilityReport classify_text(const char* text) {
    Formula f = parse_formula(text);
    return classify(f.body, f.prefix);
}

}  // namespace

TEST_CASE("fragment classification") {
    CHECK(classify_text("forall p. exists q. E G (h[p] <-> h[q])").cls == FragmentClass::SimpleAdmissible);
    CHECK(classify_text("forall p. forall q. E (li[p] <-> li[q]) -> G ((l0[p] <-> l0[q]) & (l1[p] <-> l1[q]))").cls ==
          FragmentClass::SimpleAdmissible);
    CHECK(classify_text("forall p. forall q. forall r. E G ((a[p] <-> a[q]) & (b[q] <-> b[r]))").cls ==
          FragmentClass::Admissible);
    CHECK(classify_text("forall p. forall q. E F !(a[p] <-> a[q])").cls == FragmentClass::CoAdmissible);
    CHECK(classify_text("forall p. forall q. E G (a[p] <-> a[q]) -> F b[p]").cls == FragmentClass::CoAdmissible);
    CHECK(classify_text("forall p. forall q. E F a[p] & G b[q]").cls == FragmentClass::StateMonadicOnly);

    auto nx = classify_text("forall p. forall q. E G (a[p] <-> a[q]) & F X b[p]");
    CHECK(nx.cls == FragmentClass::NotAdmissible);
    CHECK(nx.reason.find("X") != std::string::npos);
    CHECK(classify_text("forall p. forall q. E (b[p] <-> b[q]) U G (a[p] <-> a[q])").cls ==
          FragmentClass::NotAdmissible);
    CHECK(classify_text("forall p. forall q. E G (a[p] <-> a[q]) & G (b[p] <-> b[q]) | F c[p] & G (c[p] <-> c[q])")
              .cls == FragmentClass::NotAdmissible);
    CHECK(classify_text("forall p. forall q. E G (a[p] <-> a[q]) <-> F b[p]").cls == FragmentClass::NotAdmissible);
}

TEST_CASE("phase specs merge inside one conjunction") {
    auto r = classify_text("forall p. forall q. E G (a[p] <-> a[q]) & F c[p] & G (b[p] <-> b[q])");
    CHECK(r.cls == FragmentClass::SimpleAdmissible);
    REQUIRE(r.phase.size() == 1);
    CHECK(r.phase[0] == PhaseSpec{"p", "q", {"a", "b"}});
    CHECK(r.sites.size() == 2);
    CHECK(r.monadic_parts.size() == 1);
    CHECK(r.shared_props() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("polarity and site substitution") {
    Formula f = parse_formula("forall p. forall q. E (i[p] <-> i[q]) -> G (o[p] <-> o[q])");
    auto r = classify(f.body, f.prefix);
    CHECK(r.polarity == Polarity::Positive);
    CHECK_FALSE(r.cophase_site);
    CHECK(equal(phase_formula(r), parse_body("G (o[p] <-> o[q])")));
    CHECK(equal(substitute_phase(f.body, r, mk_true()), parse_body("(i[p] <-> i[q]) -> true")));

    Formula c = parse_formula("forall p. forall q. E F !(o[p] <-> o[q]) | a[p]");
    auto rc = classify(c.body, c.prefix);
    CHECK(rc.cophase_site);
    CHECK(rc.polarity == Polarity::Negative);
    CHECK(equal(substitute_phase(c.body, rc, mk_true()), parse_body("!true | a[p]")));
    CHECK(equal(replace_phase_site(c.body, rc, mk_false()), parse_body("false | a[p]")));
}

TEST_CASE("A formulas dualize to E formulas") {
    Formula f = parse_formula("forall p. exists q. A G (a[p] <-> a[q])");
    Formula g = negate_to_positive(f);
    CHECK(g.prefix[0].quant == Quant::Exists);
    CHECK(g.prefix[1].quant == Quant::Forall);
    CHECK(*g.modality == Modality::E);
    CHECK(equal(g.body, parse_body("F !(a[p] <-> a[q])")));
    CHECK_THROWS_AS(negate_to_positive(parse_formula("forall p. E a[p]")), Error);
}

TEST_CASE("property: negation normal form is the semantic negation") {
    testing::Rng rng(5);
    const std::vector<std::string> vars{"p", "q"};
    const std::vector<std::string> props{"a", "b"};
    for (int round = 0; round < 300; ++round) {
        Expr e = testing::coin(rng) ? testing::random_admissible(rng, vars, props, false)
                                    : testing::random_monadic(rng, "p", props, 3);
        Expr n = negate_nnf(e);
        for (int w = 0; w < 5; ++w) {
            Word word = testing::random_word(rng, 2, 2);
            for (std::size_t pos = 0; pos < word.size(); ++pos)
                CHECK(eval_word_at(word, n, vars, props, pos) != eval_word_at(word, e, vars, props, pos));
        }
    }
}

TEST_CASE("property: desugaring preserves meaning") {
    testing::Rng rng(6);
    const std::vector<std::string> vars{"p", "q"};
    const std::vector<std::string> props{"a", "b"};
    for (int round = 0; round < 200; ++round) {
        Expr e = testing::random_admissible(rng, vars, props, false);
        Expr d = desugar(e);
        Word word = testing::random_word(rng, 2, 2);
        for (std::size_t pos = 0; pos < word.size(); ++pos)
            CHECK(eval_word_at(word, d, vars, props, pos) == eval_word_at(word, e, vars, props, pos));
    }
}

TEST_CASE("co-phase monadic replacement") {
    Expr m = cophase_to_monadic({PhaseSpec{"p", "q", {"a"}}});
    CHECK(vars_of(m) == std::set<std::string>{"p", "q"});
    CHECK_THROWS_AS(cophase_to_monadic({}), Error);
}
