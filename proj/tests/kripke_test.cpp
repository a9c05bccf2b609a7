#include <doctest.h>

#include <set>

#include "teamlogic/kripke.hpp"
#include "test_util.hpp"

using namespace teamlogic;
using nlohmann::json;

TEST_SUITE_BEGIN("kripke");

TEST_CASE("fixture loading preserves world order and resolves named teams") {
    const ModelFile mf = testutil::load_fixture("fig2.json");
    const Model& m = mf.model;
    CHECK(m.worlds == std::vector<std::string>{"wp", "wq", "wpq", "we"});
    CHECK(m.signature() == std::set<std::string>{"p", "q"});
    CHECK(m.world_index("wq") == 1);
    CHECK(m.world_index("nope") == -1);
    REQUIRE(mf.states.count("sa") == 1);
    CHECK(state_names(m, mf.states.at("sa")) == std::vector<std::string>{"wq"});
    CHECK(state_names(m, mf.states.at("sb")) == std::vector<std::string>{"wp", "wq"});
    for (const auto& succ : m.rel)
        CHECK(succ.empty()); // the base picture has no arrows
}

TEST_CASE("relation edges land on the named source world") {
    const Model m = testutil::load_fixture("fig2c.json").model;
    const int we = m.world_index("we");
    const int wpq = m.world_index("wpq");
    const int wq = m.world_index("wq");
    const int wp = m.world_index("wp");
    CHECK(m.rel[we] == std::vector<int>{wq});
    CHECK(m.rel[wpq] == std::vector<int>{wp, wq});
    CHECK(r_image(m, State(1) << we) == State(1) << wq);
    CHECK(r_image(m, State(1) << wq) == 0);
}

TEST_CASE("json codec round-trips byte-for-byte") {
    for (const char* name : {"fig2.json", "fig2c.json", "fig3b.json", "fig3c.json"}) {
        const ModelFile mf = testutil::load_fixture(name);
        const json once = model_to_json(mf.model, &mf.states);
        const ModelFile again = model_from_json(once);
        CHECK(model_to_json(again.model, &again.states).dump() == once.dump());
    }
}

TEST_CASE("json decoding is strict") {
    json good;
    good["worlds"] = {"a", "b"};
    good["relation"] = json::array({json::array({"a", "b"})});
    good["valuation"] = {{"p", {"a"}}};
    CHECK(model_from_json(good).model.size() == 2);

    auto rejects = [](json j) { CHECK_THROWS_AS((void)model_from_json(j), InputError); };

    json j = good;
    j["extra"] = 1;
    rejects(j); // unknown top-level key

    j = good;
    j["worlds"] = {"a", "a"};
    rejects(j); // duplicate world

    j = good;
    j["worlds"] = json::array();
    rejects(j); // empty world list

    j = good;
    j["relation"] = json::array({json::array({"a", "b"}), json::array({"a", "b"})});
    rejects(j); // duplicate edge

    j = good;
    j["relation"] = json::array({json::array({"a", "c"})});
    rejects(j); // unknown world in an edge

    j = good;
    j["relation"] = json::array({json::array({"a", "b", "a"})});
    rejects(j); // edge is not a pair

    j = good;
    j["valuation"] = {{"p", {"a", "a"}}};
    rejects(j); // duplicate valuation entry

    j = good;
    j["valuation"] = {{"p", {"c"}}};
    rejects(j); // unknown world in a valuation

    j = good;
    j["states"] = {{"s", {"c"}}};
    rejects(j); // unknown world in a named team
}

TEST_CASE("structural validation catches malformed models") {
    Model m;
    m.worlds = {"a", "b"};
    m.rel = {{1}, {}};
    m.val["p"] = {0};
    CHECK_NOTHROW(validate_model(m));

    Model bad = m;
    bad.rel[0] = {1, 1};
    CHECK_THROWS_AS(validate_model(bad), InputError); // duplicate successor

    bad = m;
    bad.rel[0] = {2};
    CHECK_THROWS_AS(validate_model(bad), InputError); // out of range

    bad = m;
    bad.val["p"] = {1, 0};
    CHECK_THROWS_AS(validate_model(bad), InputError); // unsorted

    bad = m;
    bad.worlds = {"a"};
    CHECK_THROWS_AS(validate_model(bad), InputError); // rel size mismatch
}

TEST_CASE("team name resolution") {
    const Model m = testutil::load_fixture("fig2.json").model;
    const State s = state_from_names(m, {"wq", "wp"});
    CHECK(s == 0b011);
    CHECK(state_names(m, s) == std::vector<std::string>{"wp", "wq"});
    CHECK(state_from_names(m, {}) == 0);
    CHECK(full_state(m) == 0b1111);
    CHECK_THROWS_AS((void)state_from_names(m, {"zz"}), InputError);
}

TEST_CASE("disjoint union tags worlds by component") {
    const ModelFile f2 = testutil::load_fixture("fig2.json");
    const ModelFile f3 = testutil::load_fixture("fig3b.json");
    const PointedModel u = disjoint_union({{f2.model, f2.states.at("sa")},
                                           {f3.model, f3.states.at("sb")}});
    CHECK(u.model.size() == f2.model.size() + f3.model.size());
    CHECK(u.model.worlds[0] == "0:wp");
    CHECK(u.model.world_index("1:we") >= 0);
    CHECK(u.model.signature() == std::set<std::string>{"p", "q"});
    // the distinguished team is the union of the tagged parts
    const auto names = state_names(u.model, u.state);
    CHECK(names == std::vector<std::string>{"0:wq", "1:wpq", "1:we"});
    // edges stay inside their component
    const int i = u.model.world_index("1:we");
    REQUIRE(i >= 0);
    CHECK(u.model.rel[i] == std::vector<int>{u.model.world_index("1:wq")});
    CHECK_THROWS_AS((void)disjoint_union({}), InputError);
}

TEST_CASE("model counting follows the closed form") {
    CHECK(count_models(1, 0) == 2);               // 2^(1*1)
    CHECK(count_models(2, 0) == 2 + 16);          // + 2^(2*2)
    CHECK(count_models(3, 1) == 4 + 64 + 4096);   // 4164
    CHECK(count_models(3, 2) == 8 + 256 + 32768); // 33032
    CHECK(count_models(2, 1) == 4 + 64);          // 68
}

TEST_CASE("model enumeration is deterministic and exhaustive") {
    const ModelSpace space(2, {"p"});
    REQUIRE(space.total() == 68);

    // index 0: one world, no edge, empty valuation
    const Model m0 = space.at(0);
    CHECK(m0.worlds == std::vector<std::string>{"1"});
    CHECK(m0.rel[0].empty());
    CHECK(m0.val.at("p").empty());

    // index 5: first two-world block, relation code 0, valuation code 1
    const Model m5 = space.at(5);
    CHECK(m5.worlds == std::vector<std::string>{"1", "2"});
    CHECK(m5.rel[0].empty());
    CHECK(m5.rel[1].empty());
    CHECK(m5.val.at("p") == std::vector<int>{0});

    // all 68 encodings are distinct and structurally valid
    std::set<std::string> seen;
    for (std::uint64_t i = 0; i < space.total(); ++i) {
        const Model m = space.at(i);
        CHECK_NOTHROW(validate_model(m));
        seen.insert(model_to_json(m).dump());
    }
    CHECK(seen.size() == 68);

    CHECK_THROWS_AS((void)space.at(68), InputError);
}

TEST_CASE("enumeration order is world count, then relation, then valuation") {
    const ModelSpace space(2, {"p"});
    // last one-world model: self-loop and p true
    const Model m3 = space.at(3);
    CHECK(m3.size() == 1);
    CHECK(m3.rel[0] == std::vector<int>{0});
    CHECK(m3.val.at("p") == std::vector<int>{0});
    // first two-world model directly after
    CHECK(space.at(4).size() == 2);
    // relation bit 0*m+1 is the edge 1 -> 2
    const Model edge = space.at(4 + 2 * 4); // relation code 2, valuation code 0
    CHECK(edge.rel[0] == std::vector<int>{1});
    CHECK(edge.rel[1].empty());
}

TEST_CASE("random models are seed-deterministic") {
    const auto a = random_model(42, 3, {"p", "q"});
    const auto b = random_model(42, 3, {"p", "q"});
    CHECK(model_to_json(a).dump() == model_to_json(b).dump());
    CHECK(a.worlds == std::vector<std::string>{"1", "2", "3"});
    CHECK(a.signature() == std::set<std::string>{"p", "q"});
    bool differs = false;
    for (std::uint64_t s = 1; s <= 16 && !differs; ++s)
        differs = model_to_json(random_model(s, 3, {"p", "q"})).dump() !=
                  model_to_json(a).dump();
    CHECK(differs);
}

TEST_CASE("random teams cover every subset over enough seeds") {
    const Model m = random_model(7, 3, {"p"});
    std::set<State> seen;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const State s = random_state(seed, m);
        CHECK(s < 8);
        seen.insert(s);
        CHECK(random_state(seed, m) == s); // deterministic
    }
    CHECK(seen.size() == 8);
}

TEST_CASE("teams require at most 64 worlds") {
    Model big;
    for (int i = 0; i < 65; ++i) {
        big.worlds.push_back("w" + std::to_string(i));
        big.rel.emplace_back();
    }
    CHECK_THROWS_AS((void)full_state(big), BudgetError);
}

TEST_SUITE_END();
