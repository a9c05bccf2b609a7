#include <doctest.h>

#include <random>

#include "teamlogic/decide.hpp"
#include "teamlogic/teameval.hpp"
#include "test_util.hpp"

using namespace teamlogic;
using testutil::F;

namespace {

// The countermodel of a verdict must actually refute the query.
void check_replay(const Verdict& v, const std::vector<FPtr>& premises, const FPtr& conclusion) {
    REQUIRE(v.found_countermodel());
    REQUIRE(v.model.has_value());
    CHECK_NOTHROW(validate_model(*v.model));
    Evaluator ev(*v.model);
    for (const FPtr& p : premises)
        CHECK(ev.supports(v.state, p));
    CHECK_FALSE(ev.supports(v.state, conclusion));
}

} // namespace

TEST_SUITE_BEGIN("decide");

TEST_CASE("the complete engine proves a law and refutes a non-law") {
    const Verdict law = entails_canonical({}, F("p | ~p"), {{"p"}}, 0);
    CHECK(law.valid());
    CHECK(law.engine == "canonical");
    CHECK(law.models_checked == 1);
    CHECK(law.states_checked == 4); // all teams over the two depth-0 types

    const Verdict non = entails_canonical({}, F("NE | ~NE"));
    check_replay(non, {}, F("NE | ~NE"));
    CHECK(non.state == 0); // the empty team is the counterexample
    CHECK(non.models_checked == 1);
    CHECK(non.states_checked == 1); // the empty team comes first
    CHECK(non.model->size() == 1);  // empty signature: one depth-0 type

    CHECK(entails_canonical({F("p & q")}, F("p")).valid());
    CHECK(entails_canonical({F("p")}, F("p | NE")).found_countermodel());
}

TEST_CASE("the bounded engine finds the classic failure of disjunction idempotence") {
    const FPtr premise = F("(p \\/ ~p) | (p \\/ ~p)");
    const FPtr conclusion = F("p \\/ ~p");
    const Verdict v = refute_bounded({premise}, conclusion, 2);
    check_replay(v, {premise}, conclusion);
    CHECK(v.engine == "bounded");
    CHECK(v.models_checked == 6);
    CHECK(v.states_checked == 16);
    CHECK(v.model->worlds == std::vector<std::string>{"1", "2"});
    CHECK(v.model->rel == std::vector<std::vector<int>>{{}, {}});
    CHECK(v.model->val.at("p") == std::vector<int>{0});
    CHECK(v.state == 0b11);
}

TEST_CASE("an inconclusive bounded search reports its bound and effort") {
    const Verdict v =
        refute_bounded({enrich(F("<>(p | q)"))}, F("<>p & <>q"), 2, {{"p", "q"}});
    CHECK(v.status == Verdict::Status::Inconclusive);
    CHECK(v.bound == 2);
    CHECK(v.models_checked == 264); // 8 + 256 models over two propositions
    CHECK_FALSE(v.model.has_value());
}

TEST_CASE("parallel scanning returns the identical first countermodel") {
    const FPtr premise = F("(p \\/ ~p) | (p \\/ ~p)");
    const FPtr conclusion = F("p \\/ ~p");
    const Verdict serial = refute_bounded({premise}, conclusion, 3);
    const Verdict parallel = refute_bounded({premise}, conclusion, 3, {}, 4);
    REQUIRE(serial.found_countermodel());
    REQUIRE(parallel.found_countermodel());
    CHECK(model_to_json(*serial.model).dump() == model_to_json(*parallel.model).dump());
    CHECK(serial.state == parallel.state);
    CHECK(serial.models_checked == parallel.models_checked);

    const Verdict s2 = refute_bounded({F("p")}, F("p & q"), 3);
    const Verdict p2 = refute_bounded({F("p")}, F("p & q"), 3, {}, 3);
    REQUIRE(s2.found_countermodel());
    CHECK(model_to_json(*s2.model).dump() == model_to_json(*p2.model).dump());
    CHECK(s2.state == p2.state);
}

TEST_CASE("raising the bound never loses a countermodel found below it") {
    const std::vector<FPtr> premises = {F("p")};
    const FPtr conclusion = F("NE");
    const Verdict at1 = refute_bounded(premises, conclusion, 1);
    const Verdict at3 = refute_bounded(premises, conclusion, 3);
    REQUIRE(at1.found_countermodel());
    REQUIRE(at3.found_countermodel());
    // the enumeration is a prefix of the larger one, so the hit is identical
    CHECK(model_to_json(*at1.model).dump() == model_to_json(*at3.model).dump());
    CHECK(at1.state == at3.state);
}

TEST_CASE("the engines agree on random propositional entailments") {
    std::mt19937_64 rng(987654);
    testutil::FormulaGen gen;
    gen.atoms = {"p"};
    gen.max_modal_depth = 1;
    int countermodels = 0;
    for (int round = 0; round < 40; ++round) {
        const FPtr a = gen.draw(rng, 1 + static_cast<int>(rng() % 5));
        const FPtr b = gen.draw(rng, 1 + static_cast<int>(rng() % 5));
        CAPTURE(print_formula(a));
        CAPTURE(print_formula(b));
        const Verdict complete = entails_canonical({a}, b, {{"p"}}, 1);
        const Verdict search = refute_bounded({a}, b, 3, {{"p"}});
        if (complete.valid()) {
            // the bounded engine is sound, so it can never contradict a proof
            CHECK(search.status == Verdict::Status::Inconclusive);
        } else {
            check_replay(complete, {a}, b);
            if (search.found_countermodel()) {
                check_replay(search, {a}, b);
                ++countermodels;
            }
        }
    }
    CHECK(countermodels > 5);
}

TEST_CASE("equivalence in both senses") {
    CHECK(equivalent(F("p | p"), F("p"), EquivMode::Support).valid());
    CHECK(equivalent(F("~~p"), F("p"), EquivMode::Strong).valid());
    CHECK(equivalent(F("p & q"), F("q & p"), EquivMode::Strong).valid());

    // the weak-reading modifier under negation: same support, different
    // anti-support (the negation of the plain formula rejects more teams)
    const FPtr lhs = F("~@NE");
    const FPtr rhs = F("~NE");
    CHECK(equivalent(lhs, rhs, EquivMode::Support).valid());
    const Verdict strong = equivalent(lhs, rhs, EquivMode::Strong);
    CHECK(strong.found_countermodel());

    CHECK(equivalent(F("p"), F("q"), EquivMode::Support).found_countermodel());
}

TEST_CASE("the option record routes to the requested engine") {
    DecideOptions opt;
    opt.engine = "bounded";
    opt.max_worlds = 2;
    const Verdict v = decide_entails({F("(p \\/ ~p) | (p \\/ ~p)")}, F("p \\/ ~p"), opt);
    CHECK(v.engine == "bounded");
    CHECK(v.found_countermodel());

    opt.engine = "canonical";
    opt.k = 0;
    opt.sig = {{"p"}};
    CHECK(decide_entails({}, F("p | ~p"), opt).valid());

    opt.engine = "guesswork";
    CHECK_THROWS_AS((void)decide_entails({}, F("p"), opt), InputError);
}

TEST_CASE("verdict serialization is schema-stable") {
    const Verdict valid = entails_canonical({}, F("p | ~p"), {{"p"}}, 0);
    const nlohmann::json jv = verdict_to_json(valid);
    CHECK(jv.dump() == R"({"checked":4,"engine":"canonical","models":1,"status":"valid"})");

    const Verdict counter = entails_canonical({}, F("NE | ~NE"));
    const nlohmann::json jc = verdict_to_json(counter);
    CHECK(jc.dump() ==
          R"({"checked":1,"engine":"canonical","model":{"relation":[],"valuation":{},"worlds":["L0_0"]},"models":1,"state":[],"status":"countermodel"})");

    const Verdict open =
        refute_bounded({enrich(F("<>(p | q)"))}, F("<>p & <>q"), 3, {{"p", "q"}});
    CHECK(verdict_to_json(open).dump() ==
          R"({"bound":3,"checked":263184,"engine":"bounded","models":33032,"status":"inconclusive"})");
}

TEST_CASE("explicit signatures must cover the formulas") {
    CHECK_THROWS_AS((void)entails_canonical({}, F("p"), {{"q"}}, 0), SignatureError);
    CHECK_THROWS_AS((void)refute_bounded({F("p")}, F("q"), 2, {{"p"}}), SignatureError);
}

TEST_CASE("an explicit depth below the modal depth is rejected") {
    CHECK_THROWS_AS((void)entails_canonical({}, F("<>p"), {{"p"}}, 0), InputError);
}

TEST_CASE("the complete engine respects the budget") {
    Budget tight;
    tight.max_worlds = 4;
    CHECK_THROWS_AS((void)entails_canonical({}, F("<>p"), {{"p"}}, 1, tight), BudgetError);
    Budget fewIters;
    fewIters.max_state_iters = 8;
    CHECK_THROWS_AS((void)entails_canonical({}, F("<>p"), {{"p"}}, 1, fewIters), BudgetError);
}

TEST_SUITE_END();
