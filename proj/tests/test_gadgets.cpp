#include "doctest.h"

#include "ahltl/gadgets.hpp"
#include "ahltl/oracle.hpp"
#include "random_instances.hpp"

using namespace ahltl;

TEST_CASE("domino parsing") {
    PcpInstance inst = parse_dominos("b/ca, a/ab,ca/a , abc/c");
    CHECK(inst.alphabet == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(inst.dominos.size() == 4);
    CHECK(inst.dominos[0] == std::pair<std::string, std::string>{"b", "ca"});
    CHECK(inst.dominos[3] == std::pair<std::string, std::string>{"abc", "c"});

    CHECK(parse_dominos("a/aa").alphabet == std::vector<std::string>{"a", "b"});
    CHECK_THROWS_AS(parse_dominos("ab"), ParseError);
    CHECK_THROWS_AS(parse_dominos("a//b"), ParseError);
    CHECK_THROWS_AS(parse_dominos("a/"), ModelError);
    CHECK_THROWS_AS(parse_dominos("v/w"), ModelError);
}

TEST_CASE("PCP structure shape") {
    PcpInstance inst = parse_dominos("b/ca,a/ab,ca/a,abc/c");
    KripkeStructure k = pcp_structure(inst);
    std::size_t letters = 0;
    for (const auto& [w, v] : inst.dominos) letters += w.size() + v.size();
    CHECK(k.num_states() == static_cast<int>(2 + 2 * letters));
    // Per letter: into s, s to u; per word: back to init; plus end loop and init to end.
    CHECK(k.num_transitions() == 2 * letters + 2 * inst.dominos.size() + 2);
    CHECK(k.names[k.init[0]] == "init");

    const int s = k.state_index("w4_s3");
    const int u = k.state_index("w4_u3");
    REQUIRE(s >= 0);
    REQUIRE(u >= 0);
    CHECK(k.holds(s, k.prop_index("c")));
    CHECK(k.holds(s, k.prop_index("lc")));
    CHECK(k.holds(s, k.prop_index("w")));
    CHECK(k.holds(u, k.prop_index("dom4")));
    CHECK_FALSE(k.holds(u, k.prop_index("lc")));
    CHECK(k.succ[u] == std::vector<int>{k.state_index("init")});
}

TEST_CASE("a one-letter word is a two-state chain") {
    KripkeStructure k = pcp_structure(parse_dominos("a/b"));
    const int s = k.state_index("v1_s1");
    const int u = k.state_index("v1_u1");
    CHECK(k.succ[s] == std::vector<int>{u});
    CHECK(k.holds(u, k.prop_index("dom1")));
    CHECK(k.holds(s, k.prop_index("b")));
}

TEST_CASE("reading a pair of PCP traces") {
    KripkeStructure k = pcp_structure(parse_dominos("b/ca,a/ab,ca/a,abc/c"));
    auto id = [&](const char* n) { return k.state_index(n); };
    const Lasso tw{{id("init"), id("w2_s1"), id("w2_u1"), id("init"), id("w1_s1"), id("w1_u1"), id("init")}, {id("end")}};
    const Lasso tv{{id("init"), id("v2_s1"), id("v2_u1"), id("v2_s2"), id("v2_u2"), id("init")}, {id("end")}};
    REQUIRE(is_path(k, tw));
    REQUIRE(is_path(k, tv));
    PcpReading r = read_pcp_traces(k, tw, tv);
    CHECK(r.w_word == "ab");
    CHECK(r.v_word == "ab");
    CHECK(r.w_dominos == std::vector<int>{2, 1});
    CHECK(r.v_dominos == std::vector<int>{2});
}

TEST_CASE("a one-domino solution is refuted at a small bound") {
    Gadget g = pcp_gadget(parse_dominos("ab/ab,a/b"));
    BoundedVerdict v = oracle_check(g.model, g.formula, 7, 1);
    CHECK(v.outcome == Outcome::Fails);
    REQUIRE(v.witness.size() == 2);
    PcpReading r = read_pcp_traces(g.model, v.witness[0], v.witness[1]);
    CHECK(r.w_word == r.v_word);
    CHECK(r.w_dominos == r.v_dominos);
}

TEST_CASE("the literal type constraint makes every instance hold") {
    PcpOptions lit;
    lit.literal_type = true;
    Gadget g = pcp_gadget(parse_dominos("ab/ab,a/b"), lit);
    CHECK(oracle_check(g.model, g.formula, 7, 1).outcome != Outcome::Fails);
}

TEST_CASE("sync translation") {
    const std::vector<std::string> vars{"p"};
    CHECK(equal(sync_translate(parse_body("X a[p]"), vars), parse_body("X X a[p]")));
    CHECK(equal(sync_translate(parse_body("a[p] U b[p]"), vars), parse_body("(!sync[p] -> a[p]) U (b[p] & !sync[p])")));
    CHECK(equal(sync_translate(parse_body("a[p] & !b[p]"), vars), parse_body("a[p] & !b[p]")));
}

TEST_CASE("PSPACE gadget sizes are linear") {
    testing::Rng rng(41);
    for (int round = 0; round < 30; ++round) {
        KripkeStructure k = testing::random_kripke(rng, 4, {"a"}, false);
        KripkeStructure g = pspace_structure(k);
        CHECK(g.num_states() == static_cast<int>(k.num_states() + k.num_transitions()));
        CHECK(g.num_transitions() == 2 * k.num_transitions());
    }
    CHECK_THROWS_AS(pspace_gadget(parse_kripke("aps: a\ninit: s\nstate s {}\ntrans s -> s\n"),
                                  parse_formula("forall p. E G a[p]")),
                    FormulaError);
}

TEST_CASE("PSPACE gadget preserves a synchronous verdict") {
    KripkeStructure k = parse_kripke("aps: a\ninit: s0\nstate s0 {}\nstate s1 {a}\ntrans s0 -> s1\ntrans s0 -> s0\n"
                                     "trans s1 -> s1\n");
    Formula phi = parse_formula("forall p. forall q. X (a[p] <-> a[q])");
    CHECK(check_hyperltl(k, phi).verdict == Verdict::Fails);
    Gadget g = pspace_gadget(k, phi);
    CHECK(oracle_check(g.model, g.formula, 6, 3).outcome == Outcome::Fails);
}
