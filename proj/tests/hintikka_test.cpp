#include <doctest.h>

#include <cstdlib>
#include <random>

#include "teamlogic/bisim.hpp"
#include "teamlogic/hintikka.hpp"
#include "teamlogic/teameval.hpp"
#include "test_util.hpp"

using namespace teamlogic;
using testutil::F;

namespace {

Model one_p_world() {
    Model m;
    m.worlds = {"w"};
    m.rel = {{}};
    m.val["p"] = {0};
    return m;
}

} // namespace

TEST_SUITE_BEGIN("hintikka");

TEST_CASE("world formulas: literals plus successor description") {
    const Model m = one_p_world();
    CHECK(print_formula(chi_world(m, 0, 0, {"p"})) == "p");
    CHECK(print_formula(chi_world(m, 0, 1, {"p"})) == "p & []bot");
    CHECK(print_formula(chi_world(m, 0, 2, {"p"})) == "p & []bot & []bot");

    const Model f2 = testutil::load_fixture("fig2.json").model;
    CHECK(print_formula(chi_world(f2, f2.world_index("we"), 0, {"p", "q"})) == "~p & ~q");
    CHECK(print_formula(chi_world(f2, f2.world_index("wq"), 1, {"p", "q"})) ==
          "~p & q & []bot");

    const Model f2c = testutil::load_fixture("fig2c.json").model;
    CHECK(print_formula(chi_world(f2c, f2c.world_index("wpq"), 1, {"p", "q"})) ==
          "p & q & (<>(p & ~q) & (<>(~p & q) & [](p & ~q | ~p & q)))");
}

TEST_CASE("team formulas: disjunction of members, exact variant adds NE") {
    const Model f2 = testutil::load_fixture("fig2.json").model;
    const State sb = state_from_names(f2, {"wp", "wq"});
    CHECK(print_formula(chi_state(f2, 0, 1, {"p", "q"})) == "bot");
    CHECK(print_formula(theta_state(f2, 0, 1, {"p", "q"})) == "bot");
    CHECK(print_formula(chi_state(f2, sb, 0, {"p", "q"})) == "p & ~q | ~p & q");
    CHECK(print_formula(theta_state(f2, sb, 0, {"p", "q"})) ==
          "p & ~q & NE | ~p & q & NE");
    CHECK(print_formula(theta_state(f2, state_from_names(f2, {"wq"}), 1, {"p", "q"})) ==
          "~p & q & []bot & NE");
}

TEST_CASE("world formulas pin down worlds up to bounded bisimilarity") {
    std::mt19937_64 rng(271828);
    for (int round = 0; round < 80; ++round) {
        const int k = static_cast<int>(rng() % 3);
        const Model m1 = random_model(rng(), 1 + static_cast<int>(rng() % 3), {"p"});
        const Model m2 = random_model(rng(), 1 + static_cast<int>(rng() % 3), {"p"});
        const int w1 = static_cast<int>(rng() % m1.size());
        const int w2 = static_cast<int>(rng() % m2.size());
        const FPtr chi = chi_world(m1, w1, k, {"p"});
        const bool modeled = supports(m2, State(1) << w2, chi);
        const bool similar = world_bisim(m1, m1.worlds[w1], m2, m2.worlds[w2], k);
        CHECK(modeled == similar);
    }
}

TEST_CASE("exact team formulas pin down teams up to bounded bisimilarity") {
    std::mt19937_64 rng(314159);
    for (int round = 0; round < 80; ++round) {
        const int k = static_cast<int>(rng() % 3);
        const Model m1 = random_model(rng(), 1 + static_cast<int>(rng() % 3), {"p"});
        const Model m2 = random_model(rng(), 1 + static_cast<int>(rng() % 3), {"p"});
        const State s1 = random_state(rng(), m1);
        const State s2 = random_state(rng(), m2);
        const bool modeled = supports(m2, s2, theta_state(m1, s1, k, {"p"}));
        const bool similar = state_bisim(m1, s1, m2, s2, k);
        CHECK(modeled == similar);
    }
}

TEST_CASE("canonical models realize every bounded type exactly once") {
    const CanonicalModel c0 = canonical_model({"p"}, 0);
    CHECK(c0.model.size() == 2);
    CHECK(c0.roots.size() == 2);
    CHECK(c0.model.worlds[0] == "L0_0");

    const CanonicalModel c1 = canonical_model({"p"}, 1);
    CHECK(c1.model.size() == 10);
    CHECK(c1.roots.size() == 8);

    const CanonicalModel cpq = canonical_model({"p", "q"}, 1);
    CHECK(cpq.model.size() == 68);
    CHECK(cpq.roots.size() == 64);

    // sample worlds of small models match exactly one root
    std::mt19937_64 rng(11);
    for (int round = 0; round < 20; ++round) {
        const Model m = random_model(rng(), 1 + static_cast<int>(rng() % 2), {"p"});
        const int w = static_cast<int>(rng() % m.size());
        int matches = 0;
        for (int r : c1.roots)
            if (world_bisim(m, m.worlds[w], c1.model, c1.model.worlds[r], 1))
                ++matches;
        CHECK(matches == 1);
    }
}

TEST_CASE("construction refuses to blow the budget, with exact counts") {
    try {
        (void)canonical_model({"p"}, 3);
        FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
        CHECK(std::string(e.what()) ==
              "canonical model layer 3 would have 2^1 * 2^512 worlds, beyond the budget of 20000");
    }
    try {
        Budget tight;
        tight.max_worlds = 5;
        (void)canonical_model({"p"}, 1, tight);
        FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
        CHECK(std::string(e.what()) ==
              "canonical model needs 10 worlds, beyond the budget of 5");
    }
}

TEST_CASE("the environment variable overrides the default budget") {
    const Budget def = Budget::from_env();
    CHECK(def.max_worlds == 20000);
    CHECK(def.max_state_iters == (std::uint64_t{1} << 20));

    setenv("TEAMLOGIC_BUDGET", "123", 1);
    CHECK(Budget::from_env().max_worlds == 123);
    CHECK(Budget::from_env().max_state_iters == (std::uint64_t{1} << 20));

    setenv("TEAMLOGIC_BUDGET", "50,60", 1);
    CHECK(Budget::from_env().max_worlds == 50);
    CHECK(Budget::from_env().max_state_iters == 60);

    setenv("TEAMLOGIC_BUDGET", "lots", 1);
    CHECK_THROWS_AS((void)Budget::from_env(), InputError);

    unsetenv("TEAMLOGIC_BUDGET");
    CHECK(Budget::from_env().max_worlds == 20000);
}

TEST_CASE("normal forms over the canonical roots: fixed outputs") {
    auto text = [](const FPtr& f) { return print_formula(f); };
    CHECK(text(nf_ml(F("Top"), 0, {{"p"}})) == "p | ~p");
    CHECK(text(nf_ml(F("p | ~p"), 0, {{"p"}})) == "p | ~p");
    CHECK(text(nf_ml(F("p & ~p"), 0, {{"p"}})) == "bot");
    CHECK(text(nf_ml(F("p"))) == "p"); // depth and signature default from the input
    CHECK(text(nf_ml(F("<>p"), {}, {{"p"}})) ==
          "p & (<>p & (<>~p & [](p | ~p))) | (p & (<>p & []p) | "
          "(~p & (<>p & (<>~p & [](p | ~p))) | ~p & (<>p & []p)))");

    CHECK(text(nf_bsmli(F("Bot"))) == "Bot");
    CHECK(text(nf_bsmli(F("NE"), 0, {{"p"}})) ==
          "p & NE \\/ (p & NE | ~p & NE \\/ ~p & NE)");
    CHECK(text(nf_bsmlo(F("p"))) == "@(p & NE) | @bot");
    CHECK(text(nf_bsmlo(F("NE"), 0, {{"p"}})) ==
          "NE & (@(p & NE | ~p & NE) | (@(p & NE) | @(~p & NE)))");
}

TEST_CASE("normal forms reject inputs outside their fragment") {
    CHECK_THROWS_AS((void)nf_ml(F("p & NE")), InputError);
    CHECK_THROWS_AS((void)nf_bsmlo(F("p \\/ q")), InputError);
}

TEST_CASE("normal forms are support-equivalent to their input on small models") {
    // depth 1 only over one proposition: the depth-1 canonical model over
    // two propositions already has more worlds than teams can address
    const std::vector<FPtr> samples = {
        F("<>p"), F("p | (q & NE)"), F("[](p \\/ ~p)"), F("@(p & NE)"), F("~<>~p")};
    const ModelSpace space(2, {"p", "q"});
    for (const FPtr& f : samples) {
        const FPtr n = is_gdis_free(f) ? nf_bsmlo(f) : nf_bsmli(f);
        CAPTURE(print_formula(f));
        for (std::uint64_t i = 0; i < space.total(); ++i) {
            const Model m = space.at(i);
            Evaluator ev(m);
            for (State s = 0; s < (State(1) << m.size()); ++s)
                CHECK(ev.supports(s, f) == ev.supports(s, n));
        }
    }
}

TEST_CASE("characteristic formulas of listed properties") {
    const Model m = one_p_world();
    const PointedModel whole{m, 1};
    const PointedModel nothing{m, 0};

    Model two;
    two.worlds = {"u", "v"};
    two.rel = {{}, {}};
    two.val["p"] = {0};
    const PointedModel mixed{two, 3};

    auto text = [](const FPtr& f) { return print_formula(f); };
    CHECK(text(charf_of_property({whole}, 0, {"p"}, CharfFlavor::Nu)) == "p");
    CHECK(text(charf_of_property({whole}, 0, {"p"}, CharfFlavor::Xi)) == "p & NE");
    CHECK(text(charf_of_property({whole}, 0, {"p"}, CharfFlavor::Zeta)) == "NE & @(p & NE)");

    CHECK(text(charf_of_property({mixed}, 0, {"p"}, CharfFlavor::Nu)) == "p | ~p");
    CHECK(text(charf_of_property({mixed}, 0, {"p"}, CharfFlavor::Xi)) ==
          "p & NE | ~p & NE");
    CHECK(text(charf_of_property({mixed}, 0, {"p"}, CharfFlavor::Zeta)) ==
          "NE & @(p & NE | ~p & NE)");

    // listing a team twice, or a bisimilar copy, changes nothing
    CHECK(text(charf_of_property({whole, whole}, 0, {"p"}, CharfFlavor::Xi)) == "p & NE");
    Model copy = m;
    copy.worlds = {"other"};
    CHECK(text(charf_of_property({whole, PointedModel{copy, 1}}, 0, {"p"},
                                 CharfFlavor::Nu)) == "p");

    // an explicitly listed empty team switches the weak flavor's NE guard off
    CHECK(text(charf_of_property({whole, nothing}, 0, {"p"}, CharfFlavor::Zeta)) ==
          "@(p & NE) | @bot");
    CHECK(text(charf_of_property({nothing}, 0, {"p"}, CharfFlavor::Xi)) == "bot");
}

TEST_SUITE_END();
