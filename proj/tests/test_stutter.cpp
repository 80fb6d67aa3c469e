#include "doctest.h"

#include "ahltl/corpus.hpp"
#include "ahltl/oracle.hpp"
#include "ahltl/stutter.hpp"
#include "worked_traces.hpp"
#include "random_instances.hpp"

using namespace ahltl;

TEST_CASE("stuttering structure doubles states and adds 2|S| edges") {
    for (const auto& fx : corpus_build()) {
        CAPTURE(fx.name);
        KripkeStructure st = build_stuttering(fx.model);
        CHECK(st.num_states() == 2 * fx.model.num_states());
        CHECK(st.num_transitions() == 2 * fx.model.num_transitions() + 2 * fx.model.num_states());
        const int stp = st.prop_index(kStutterProp);
        for (int s = 0; s < fx.model.num_states(); ++s) {
            CHECK_FALSE(st.holds(s, stp));
            CHECK(st.holds(s + fx.model.num_states(), stp));
            CHECK(st.names[s + fx.model.num_states()] == fx.model.names[s] + "_st");
        }
    }
}

TEST_CASE("the stutter proposition is reserved") {
    KripkeStructure k = parse_kripke("aps: st\ninit: s\nstate s {st}\ntrans s -> s\n");
    CHECK_THROWS_AS(build_stuttering(k), ModelError);
}

TEST_CASE("worked trace assignments") {
    auto r = testing::run_worked_traces();
    CHECK(r.align_everywhere_1);
    CHECK(r.not_align_2);
    CHECK(r.missalign_3);
    CHECK(r.phase_3trace);
    CHECK(r.block_3trace);
}

TEST_CASE("spec cycles follow edge direction") {
    const std::vector<PhaseSpec> ring{{"p", "q", {"a"}}, {"q", "r", {"a"}}, {"r", "p", {"a"}}};
    CHECK(spec_cycles(ring) == std::vector<std::vector<int>>{{0, 1, 2}});
    const std::vector<PhaseSpec> chain{{"p", "q", {"a"}}, {"q", "r", {"a"}}, {"p", "r", {"a"}}};
    CHECK(spec_cycles(chain).empty());
    const std::vector<PhaseSpec> two{{"p", "q", {"a"}}, {"q", "p", {"b"}}};
    CHECK(spec_cycles(two).size() == 1);
}

TEST_CASE("reduction rejects what it cannot handle") {
    KripkeStructure k = parse_kripke("aps: a\ninit: s\nstate s {a}\ntrans s -> s\n");
    CHECK_THROWS_AS(reduce_stutter(k, parse_formula("forall p. exists q. E G (a[p] <-> a[q])")), FragmentError);
    CHECK_THROWS_AS(reduce_stutter(k, parse_formula("forall p. forall q. E (a[p] <-> a[q]) U G (a[p] <-> a[q])")),
                    FragmentError);
    CHECK_THROWS_AS(reduce_stutter(k, parse_formula("forall p. forall q. G (a[p] <-> a[q])")), FragmentError);
}

TEST_CASE("reduction routes") {
    KripkeStructure k = parse_kripke("aps: a\ninit: s\nstate s {a}\ntrans s -> s\n");
    Reduction fa = reduce_stutter(k, parse_formula("forall p. forall q. E G (a[p] <-> a[q])"));
    CHECK(fa.route == "forall prefix, psi_sync");
    CHECK_FALSE(fa.negate_verdict);
    CHECK(fa.formula.is_hyperltl());
    CHECK(fa.model.num_states() == 2);

    Reduction ex = reduce_stutter(k, parse_formula("exists p. exists q. A G (a[p] <-> a[q])"));
    CHECK(ex.negate_verdict);
    CHECK(ex.cls == FragmentClass::CoAdmissible);
}

TEST_CASE("observational determinism on the two corpus programs") {
    for (const auto& fx : corpus_build()) {
        if (fx.formula_file != "od.ahltl") continue;
        CAPTURE(fx.name);
        CHECK(to_string(check_reduced(reduce_stutter(fx.model, fx.formula)).verdict) == fx.expected);
    }
}

TEST_CASE("property: stuttering reduction agrees with the bounded oracle") {
    const std::vector<std::string> props{"a", "b"};
    const std::vector<std::string> vars{"p", "q"};
    int compared = 0;
    for (int seed = 0; seed < 40; ++seed) {
        testing::Rng rng(seed + 500);
        KripkeStructure k = testing::random_kripke(rng, 3, props, true);
        Formula f;
        const bool ex = testing::coin(rng);
        for (const auto& v : vars) f.prefix.push_back({ex ? Quant::Exists : Quant::Forall, v});
        f.modality = Modality::E;
        f.body = testing::random_admissible(rng, vars, props, true);
        CAPTURE(to_string(f));
        const Verdict v = check_reduced(reduce_stutter(k, f)).verdict;
        const BoundedVerdict o = oracle_check(k, f, 5, 3);
        if (o.outcome == Outcome::Inconclusive || v == Verdict::Resource) continue;
        ++compared;
        CHECK((v == Verdict::Holds) == (o.outcome == Outcome::Holds));
    }
    CHECK(compared > 20);
}

TEST_CASE("property: co-phase rewriting agrees with the bounded oracle") {
    const std::vector<std::string> props{"a", "b"};
    const std::vector<std::string> vars{"p", "q"};
    int compared = 0;
    for (int seed = 0; seed < 60; ++seed) {
        testing::Rng rng(seed + 900);
        KripkeStructure k = testing::random_kripke(rng, 3, props, testing::coin(rng, 0.7));
        Formula f;
        const bool ex = testing::coin(rng);
        for (const auto& v : vars) f.prefix.push_back({ex ? Quant::Exists : Quant::Forall, v});
        const bool use_a = testing::coin(rng);
        f.modality = use_a ? Modality::A : Modality::E;
        // Under A the phase formula itself is the site; its dual is the co-phase.
        f.body = use_a ? testing::random_admissible(rng, vars, props, true) : testing::random_coadmissible(rng, vars, props);
        CAPTURE(to_string(f));
        const Reduction r = reduce_stutter(k, f);
        if (r.cls != FragmentClass::CoAdmissible) continue;
        const Verdict v = check_reduced(r).verdict;
        const BoundedVerdict o = oracle_check(k, f, 5, 3);
        if (o.outcome == Outcome::Inconclusive || v == Verdict::Resource) continue;
        ++compared;
        CHECK((v == Verdict::Holds) == (o.outcome == Outcome::Holds));
    }
    CHECK(compared > 15);
}
