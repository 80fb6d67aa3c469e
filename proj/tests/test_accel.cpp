#include "doctest.h"

#include "ahltl/accel.hpp"
#include "ahltl/corpus.hpp"
#include "ahltl/oracle.hpp"
#include "random_instances.hpp"

using namespace ahltl;

namespace {

const char* kRamp = R"(
aps: a b
init: s0
state s0 {}
state s1 {a}
state s2 {a b}
state s3 {}
trans s0 -> s1
trans s1 -> s2
trans s2 -> s2
trans s2 -> s3
trans s3 -> s0
)";

}  // namespace

TEST_CASE("accelerated structure on a small ramp") {
    KripkeStructure k = parse_kripke(kRamp);
    AccelStructure acc = build_accelerated(k, {"a"});
    CHECK(acc.base_states == 4);
    CHECK_NOTHROW(check_witnesses(acc, k));

    // s1 reaches s3 through the same-coloured s2.
    const auto it = acc.edge_witness.find({1, 3});
    REQUIRE(it != acc.edge_witness.end());
    CHECK(it->second == std::vector<int>{2});
    // s0 and s3 share a colour and s3 -> s0 stays inside it, but no infinite same-colour path exists there.
    CHECK(acc.sink_of[0] < 0);
    CHECK(acc.sink_of[3] < 0);
    REQUIRE(acc.sink_of[1] >= 0);
    CHECK(acc.model.names[acc.sink_of[1]] == "s1_bot");
    CHECK(acc.is_sink(acc.sink_of[1]));
}

TEST_CASE("acc and dec paths keep the colour changes") {
    KripkeStructure k = parse_kripke(kRamp);
    AccelStructure acc = build_accelerated(k, {"a"});

    const Lasso stay{{0, 1}, {2}};
    Lasso up = acc_path(acc, k, stay);
    CHECK(up == Lasso{{0, 1}, {acc.sink_of[1]}});
    Lasso down = dec_path(acc, k, up);
    CHECK(is_path(k, down));
    CHECK(color_changes(k, acc.color, down) == color_changes(k, acc.color, stay));

    const Lasso cycle{{}, {0, 1, 2, 2, 3}};
    Lasso up2 = acc_path(acc, k, cycle);
    CHECK(up2 == Lasso{{0}, {1, 3}});
    CHECK(color_changes(k, acc.color, dec_path(acc, k, up2)) == color_changes(k, acc.color, cycle));

    CHECK_THROWS_AS(acc_path(acc, k, Lasso{{}, {0, 2}}), ModelError);
}

TEST_CASE("colour change sequences") {
    KripkeStructure k = parse_kripke(kRamp);
    const ColorFn c = ColorFn::of(k, {"a"});
    CHECK(color_changes(k, c, Lasso{{0, 1}, {2}}) == BasicLasso<Valuation>{{0}, {1}});
    CHECK(color_changes(k, c, Lasso{{}, {0, 1, 2, 3}}) == BasicLasso<Valuation>{{}, {0, 1}});
    CHECK_THROWS_AS(ColorFn::of(k, {"zz"}), ModelError);
}

TEST_CASE("acceleration refuses bodies outside its fragment") {
    KripkeStructure k = parse_kripke(kRamp);
    CHECK_THROWS_AS(reduce_accel(k, parse_formula("forall p. exists q. A G (a[p] <-> a[q])")), FragmentError);
    CHECK_THROWS_AS(reduce_accel(k, parse_formula("forall p. forall q. forall r. E G ((a[p] <-> a[q]) & (b[q] <-> b[r]))")),
                    FragmentError);
    try {
        reduce_accel(k, parse_formula("forall p. exists q. E G b[q] & G (a[p] <-> a[q])"));
        FAIL("expected a fragment error");
    } catch (const FragmentError& e) {
        CHECK(std::string(e.what()).find("not a phase proposition") != std::string::npos);
    }
}

TEST_CASE("the generalized noninterference formula is rejected by acceleration") {
    for (const auto& f : corpus_files()) {
        if (f.name != "gmni.ahltl") continue;
        KripkeStructure k = parse_kripke("aps: lambda lo\ninit: s\nstate s {lambda}\ntrans s -> s\n");
        CHECK_THROWS_AS(reduce_accel(k, parse_formula(f.text)), FragmentError);
    }
}

TEST_CASE("property: acc then dec preserves colour changes on random structures") {
    testing::Rng rng(21);
    for (int round = 0; round < 100; ++round) {
        KripkeStructure k = testing::random_kripke(rng, 4, {"a", "b"}, false);
        AccelStructure acc = build_accelerated(k, {"a"});
        CHECK_NOTHROW(check_witnesses(acc, k));
        for (const Lasso& rho : enumerate_lassos(k, 4)) {
            Lasso up = acc_path(acc, k, rho);
            CHECK(is_path(acc.model, up));
            Lasso down = dec_path(acc, k, up);
            CHECK(is_path(k, down));
            CHECK(color_changes(k, acc.color, down) == color_changes(k, acc.color, rho));
        }
    }
}

TEST_CASE("property: accelerated verdicts agree with the bounded oracle") {
    const std::vector<std::string> props{"a", "b"};
    const std::vector<std::string> vars{"p", "q"};
    int compared = 0;
    for (int seed = 0; seed < 30; ++seed) {
        testing::Rng rng(seed + 3000);
        KripkeStructure k = testing::random_kripke(rng, 3, props, true);
        Formula f;
        for (const auto& v : vars) f.prefix.push_back({testing::coin(rng) ? Quant::Exists : Quant::Forall, v});
        f.modality = Modality::E;
        f.body = testing::random_simple_admissible(rng, vars, props);
        CAPTURE(to_string(f));
        const Reduction r = reduce_accel(k, f);
        const Verdict v = check_hyperltl(r.model, r.formula).verdict;
        const BoundedVerdict o = oracle_check(k, f, 5, 3);
        if (o.outcome == Outcome::Inconclusive || v == Verdict::Resource) continue;
        ++compared;
        CHECK((v == Verdict::Holds) == (o.outcome == Outcome::Holds));
    }
    CHECK(compared > 15);
}
