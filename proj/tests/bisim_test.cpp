#include <doctest.h>

#include <random>

#include "teamlogic/bisim.hpp"
#include "teamlogic/teameval.hpp"
#include "test_util.hpp"

using namespace teamlogic;
using testutil::F;

namespace {

// worlds: a and b share their (empty) valuation, c carries p;
// a -> c, b has no successors, so depth 1 separates a from b.
Model ladder() {
    Model m;
    m.worlds = {"a", "b", "c"};
    m.rel = {{2}, {}, {}};
    m.val["p"] = {2};
    return m;
}

} // namespace

TEST_SUITE_BEGIN("bisim");

TEST_CASE("level 0 groups by valuation, deeper levels refine by successors") {
    const Model m = ladder();
    const TypePartition t = k_types(m, 2);
    REQUIRE(t.ids.size() == 3);
    CHECK(t.ids[0] == std::vector<int>{0, 0, 1});
    CHECK(t.ids[1] == std::vector<int>{0, 1, 2});
    CHECK(t.ids[2] == std::vector<int>{0, 1, 2});
    CHECK(t.num_classes == std::vector<int>{2, 3, 3});
    CHECK(t.stable_from == 2);
    CHECK(t.type_of(1, 0) != t.type_of(1, 1));
}

TEST_CASE("a model with distinct valuations stabilizes immediately") {
    const Model m = testutil::load_fixture("fig2.json").model;
    const TypePartition t = k_types(m, 5);
    for (int level = 0; level <= 5; ++level) {
        CHECK(t.ids[level] == std::vector<int>{0, 1, 2, 3});
        CHECK(t.num_classes[level] == 4);
    }
    CHECK(t.stable_from == 1);
}

TEST_CASE("the signature restriction coarsens the partition") {
    const Model m = testutil::load_fixture("fig2.json").model;
    const TypePartition t = k_types(m, 1, std::set<std::string>{"q"});
    // wp and we agree on q (both lack it), as do wq and wpq
    CHECK(t.ids[0] == std::vector<int>{0, 1, 1, 0});
    CHECK(t.stable_from == 1);
    CHECK_THROWS_AS((void)k_types(m, 1, std::set<std::string>{"r"}), SignatureError);
}

TEST_CASE("world bisimilarity across models") {
    const Model f2 = testutil::load_fixture("fig2.json").model;
    const Model f2c = testutil::load_fixture("fig2c.json").model;

    // wq is terminal with the same valuation in both pictures
    for (int k : {0, 1, 2, 3})
        CHECK(world_bisim(f2, "wq", f2c, "wq", k));

    // wpq gains successors in the arrowed picture: equal only at depth 0
    CHECK(world_bisim(f2, "wpq", f2c, "wpq", 0));
    CHECK_FALSE(world_bisim(f2, "wpq", f2c, "wpq", 1));

    // distinct valuations differ already at depth 0
    CHECK_FALSE(world_bisim(f2, "wp", f2, "wq", 0));
    // but agree once the separating proposition is dropped
    CHECK(world_bisim(f2, "wp", f2, "we", 1, std::set<std::string>{"q"}));

    CHECK_THROWS_AS((void)world_bisim(f2, "nope", f2c, "wq", 0), InputError);
}

TEST_CASE("team bisimilarity compares type sets") {
    const Model f2 = testutil::load_fixture("fig2.json").model;
    const Model f3b = testutil::load_fixture("fig3b.json").model;

    CHECK(state_bisim(f2, 0, f3b, 0, 3));                       // empty vs empty
    CHECK_FALSE(state_bisim(f2, 0, f3b, 1, 0));                 // empty vs nonempty
    const State wq2 = state_from_names(f2, {"wq"});
    const State wq3 = state_from_names(f3b, {"wq"});
    for (int k : {0, 1, 2})
        CHECK(state_bisim(f2, wq2, f3b, wq3, k)); // terminal q-world on both sides

    // a team equals itself as a set, order of mention irrelevant
    const State sb = state_from_names(f2, {"wp", "wq"});
    CHECK(state_bisim(f2, sb, f2, sb, 4));

    // duplicating a bisimilar world does not change the type set
    Model twin;
    twin.worlds = {"u", "v"};
    twin.rel = {{}, {}};
    twin.val["p"] = {};
    twin.val["q"] = std::vector<int>{0, 1};
    const State one = state_from_names(twin, {"u"});
    const State both = full_state(twin);
    CHECK(state_bisim(twin, one, twin, both, 3));
    CHECK(state_bisim(twin, both, f2, wq2, 3));
}

TEST_CASE("bisimilar teams agree on formulas within the depth bound") {
    std::mt19937_64 rng(60902);
    testutil::FormulaGen gen;
    int agreements = 0;
    for (int round = 0; round < 200; ++round) {
        const int k = static_cast<int>(rng() % 3);
        gen.max_modal_depth = k;
        const Model m1 = random_model(rng(), 1 + static_cast<int>(rng() % 3), {"p", "q"});
        const Model m2 = random_model(rng(), 1 + static_cast<int>(rng() % 3), {"p", "q"});
        const State s1 = random_state(rng(), m1);
        const State s2 = random_state(rng(), m2);
        if (!state_bisim(m1, s1, m2, s2, k))
            continue;
        ++agreements;
        const FPtr f = gen.draw(rng, 1 + static_cast<int>(rng() % 7));
        CAPTURE(print_formula(f));
        REQUIRE(modal_depth(f) <= k);
        CHECK(supports(m1, s1, f) == supports(m2, s2, f));
        CHECK(antisupports(m1, s1, f) == antisupports(m2, s2, f));
    }
    CHECK(agreements > 10); // the sample did exercise the property
}

TEST_CASE("deeper bisimilarity implies shallower bisimilarity") {
    std::mt19937_64 rng(8128);
    for (int round = 0; round < 150; ++round) {
        const Model m1 = random_model(rng(), 1 + static_cast<int>(rng() % 3), {"p"});
        const Model m2 = random_model(rng(), 1 + static_cast<int>(rng() % 3), {"p"});
        const State s1 = random_state(rng(), m1);
        const State s2 = random_state(rng(), m2);
        for (int k = 2; k >= 1; --k)
            if (state_bisim(m1, s1, m2, s2, k))
                CHECK(state_bisim(m1, s1, m2, s2, k - 1));
    }
}

TEST_SUITE_END();
