#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Runs the installed binary with the given arguments, capturing stdout.
// Arguments are single-quoted for the shell; none of the tested ones
// contain quotes of their own.
RunResult run_cli(const std::vector<std::string>& args) {
    static int counter = 0;
    const std::string out_path =
        std::string("/tmp/teamlogic_cli_out_") + std::to_string(counter++) + ".txt";
    std::string cmd = TEAMLOGIC_CLI_PATH;
    for (const std::string& a : args)
        cmd += " '" + a + "'";
    cmd += " > " + out_path + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    std::ifstream in(out_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    r.out = ss.str();
    std::remove(out_path.c_str());
    return r;
}

std::string fixture(const std::string& name) { return testutil::data_path(name); }

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("evaluation verdicts and exit codes") {
    RunResult r = run_cli({"eval", fixture("fig2.json"), "s=wq", "p|q"});
    CHECK(r.out == "true\n");
    CHECK(r.exit_code == 0);

    r = run_cli({"eval", fixture("fig2.json"), "s=wq", "--enrich", "p|q"});
    CHECK(r.out == "false\n");
    CHECK(r.exit_code == 1);

    r = run_cli({"eval", fixture("fig3b.json"), "s=sb", "[]p | []q"});
    CHECK(r.out == "true\n");
    CHECK(r.exit_code == 0);

    r = run_cli({"eval", fixture("fig2.json"), "s=wq", "--anti", "p"});
    CHECK(r.out == "true\n");
    CHECK(r.exit_code == 0);

    // bare team arguments are comma-separated world names
    r = run_cli({"eval", fixture("fig2.json"), "wp,wq", "--enrich", "p|q"});
    CHECK(r.out == "true\n");

    // the empty team
    r = run_cli({"eval", fixture("fig2.json"), "", "bot"});
    CHECK(r.out == "true\n");
}

TEST_CASE("evaluation json is schema-stable and byte-deterministic") {
    const std::vector<std::string> cmd = {"eval", fixture("fig2.json"), "s=sb", "--json",
                                          "p | q"};
    const RunResult once = run_cli(cmd);
    CHECK(once.out ==
          "{\"formula\":\"p | q\",\"polarity\":\"support\",\"state\":[\"wp\",\"wq\"],"
          "\"verdict\":true}\n");
    CHECK(once.exit_code == 0);
    CHECK(run_cli(cmd).out == once.out);

    const RunResult anti =
        run_cli({"eval", fixture("fig2.json"), "wp,wq", "--anti", "--json", "NE"});
    CHECK(anti.out ==
          "{\"formula\":\"NE\",\"polarity\":\"anti\",\"state\":[\"wp\",\"wq\"],"
          "\"verdict\":false}\n");
    CHECK(anti.exit_code == 1);
}

TEST_CASE("formula utilities") {
    CHECK(run_cli({"parse", "p|q&r"}).out == "p | q & r\n");
    CHECK(run_cli({"parse", "--json", "<>(p & NE)"}).out ==
          "{\"classical\":false,\"depth\":1,\"formula\":\"<>(p & NE)\",\"ne_free\":false,"
          "\"props\":[\"p\"]}\n");
    CHECK(run_cli({"nnf", "~(p|q)"}).out == "~p & ~q\n");
    CHECK(run_cli({"depth", "<>[]p"}).out == "2\n");
    CHECK(run_cli({"enrich", "p|q"}).out == "(p & NE | q & NE) & NE\n");
}

TEST_CASE("entailment via both engines") {
    RunResult r = run_cli(
        {"entails", "--engine", "canonical", "--sig", "p", "--depth", "0", "", "=>", "p|~p"});
    CHECK(r.out == "valid\n");
    CHECK(r.exit_code == 0);

    r = run_cli({"entails", "p", "=>", "p|NE"});
    CHECK(r.out == "countermodel\n"
                   "model: {\"relation\":[],\"valuation\":{\"p\":[\"L0_1\"]},"
                   "\"worlds\":[\"L0_0\",\"L0_1\"]}\n"
                   "state: {}\n");
    CHECK(r.exit_code == 1);

    r = run_cli({"entails", "--engine", "bounded", "--max-worlds", "3", "enrich:<>(p|q)",
                 "=>", "<>p & <>q"});
    CHECK(r.out == "no countermodel with at most 3 worlds\n");
    CHECK(r.exit_code == 0);

    const std::vector<std::string> json_cmd = {
        "entails", "--engine", "bounded",     "--max-worlds", "2",
        "--json",  "(p \\/ ~p) | (p \\/ ~p)", "=>",           "p \\/ ~p"};
    const RunResult jr = run_cli(json_cmd);
    CHECK(jr.out ==
          "{\"checked\":16,\"engine\":\"bounded\",\"model\":{\"relation\":[],"
          "\"valuation\":{\"p\":[\"1\"]},\"worlds\":[\"1\",\"2\"]},\"models\":6,"
          "\"state\":[\"1\",\"2\"],\"status\":\"countermodel\"}\n");
    CHECK(jr.exit_code == 1);
    CHECK(run_cli(json_cmd).out == jr.out); // byte-deterministic
}

TEST_CASE("equivalence queries") {
    RunResult r = run_cli({"equiv", "p | p", "p"});
    CHECK(r.out == "equivalent\n");
    CHECK(r.exit_code == 0);

    r = run_cli({"equiv", "--strong", "~@NE", "~NE"});
    CHECK(r.out == "not equivalent\n"
                   "model: {\"relation\":[],\"valuation\":{},\"worlds\":[\"L0_0\"]}\n"
                   "state: {}\n");
    CHECK(r.exit_code == 1);
}

TEST_CASE("bisimilarity queries classify worlds and teams") {
    RunResult r =
        run_cli({"bisim", fixture("fig2.json"), "wq", fixture("fig2c.json"), "wq", "--k", "2"});
    CHECK(r.out == "true\n");
    CHECK(r.exit_code == 0);

    r = run_cli(
        {"bisim", fixture("fig2.json"), "wpq", fixture("fig2c.json"), "wpq", "--k", "1"});
    CHECK(r.out == "false\n");
    CHECK(r.exit_code == 1);

    r = run_cli({"bisim", fixture("fig2.json"), "s=sa", fixture("fig3b.json"), "s=wq", "--k",
                 "1", "--json"});
    CHECK(r.out == "{\"bisimilar\":true,\"k\":1}\n");
    CHECK(r.exit_code == 0);

    // a world on one side and a team on the other is a usage error
    r = run_cli({"bisim", fixture("fig2.json"), "s=sa", fixture("fig3b.json"), "wq", "--k",
                 "1"});
    CHECK(r.exit_code == 2);
}

TEST_CASE("type partitions") {
    RunResult r = run_cli({"types", fixture("fig2c.json"), "--k", "2"});
    CHECK(r.out == "k=0: wp=0 wq=1 wpq=2 we=3\n"
                   "k=1: wp=0 wq=1 wpq=2 we=3\n"
                   "k=2: wp=0 wq=1 wpq=2 we=3\n"
                   "stable_from: 1\n");
    r = run_cli({"types", fixture("fig2c.json"), "--k", "1", "--json"});
    CHECK(r.out ==
          "{\"k\":1,\"levels\":[[0,1,2,3],[0,1,2,3]],\"num_classes\":[4,4],"
          "\"stable_from\":1,\"worlds\":[\"wp\",\"wq\",\"wpq\",\"we\"]}\n");
}

TEST_CASE("world and team description formulas") {
    RunResult r = run_cli(
        {"hintikka", fixture("fig2.json"), "--state", "wq", "--k", "1", "--sig", "p,q"});
    CHECK(r.out == "~p & q & []bot & NE\n");
    CHECK(r.exit_code == 0);

    r = run_cli(
        {"hintikka", fixture("fig2c.json"), "--world", "wpq", "--k", "1", "--sig", "p,q"});
    CHECK(r.out == "p & q & (<>(p & ~q) & (<>(~p & q) & [](p & ~q | ~p & q)))\n");

    // --chi on a team drops the NE guards
    r = run_cli({"hintikka", fixture("fig2.json"), "--state", "wp,wq", "--k", "0", "--sig",
                 "p,q", "--chi"});
    CHECK(r.out == "p & ~q | ~p & q\n");

    r = run_cli({"hintikka", fixture("fig2.json"), "--world", "wq", "--state", "wq", "--k",
                 "1", "--sig", "p"});
    CHECK(r.exit_code == 2);
}

TEST_CASE("normal form subcommand") {
    CHECK(run_cli({"nf", "Top", "--flavor", "ml", "--k", "0", "--sig", "p"}).out ==
          "p | ~p\n");
    CHECK(run_cli({"nf", "Bot", "--flavor", "bsmli"}).out == "Bot\n");
    CHECK(run_cli({"nf", "p", "--flavor", "bsmlo"}).out == "@(p & NE) | @bot\n");
}

TEST_CASE("proof checking from files") {
    RunResult r = run_cli({"check-proof", fixture("proofs/lemma_bot_e.proof.json")});
    CHECK(r.out == "accepted\n");
    CHECK(r.exit_code == 0);

    r = run_cli({"check-proof", fixture("proofs/m01_ori_ne.proof.json")});
    CHECK(r.out ==
          "line 1 [side-condition-violated]: OrI: the introduced disjunct must be NE-free, "
          "got: NE\n"
          "rejected\n");
    CHECK(r.exit_code == 1);

    r = run_cli({"check-proof", fixture("proofs/m10_andel_shape.proof.json"), "--json"});
    CHECK(r.out ==
          "{\"accepted\":false,\"errors\":[{\"code\":\"wrong-premise-shape\",\"detail\":"
          "\"the premise of AndEL must be a conjunction, got: p | q\",\"line\":1}]}\n");
    CHECK(r.exit_code == 1);
}

TEST_CASE("model generation for corpus building") {
    CHECK(run_cli({"gen", "count", "--max-worlds", "3", "--sig", "p"}).out == "4164\n");
    CHECK(run_cli({"gen", "count", "--max-worlds", "3", "--sig", "p,q"}).out == "33032\n");

    const RunResult enumed =
        run_cli({"gen", "enum", "--index", "5", "--max-worlds", "2", "--sig", "p"});
    CHECK(enumed.out ==
          "{\"relation\":[],\"valuation\":{\"p\":[\"1\"]},\"worlds\":[\"1\",\"2\"]}\n");

    const std::vector<std::string> model_cmd = {"gen",   "model", "--seed", "42",
                                                "--worlds", "3",  "--sig",  "p,q", "--state"};
    const RunResult a = run_cli(model_cmd);
    CHECK(a.out ==
          "{\"relation\":[[\"2\",\"2\"]],\"states\":{\"s0\":[]},\"valuation\":"
          "{\"p\":[\"1\",\"2\"],\"q\":[\"3\"]},\"worlds\":[\"1\",\"2\",\"3\"]}\n");
    CHECK(run_cli(model_cmd).out == a.out);
}

TEST_CASE("usage and input failures exit with code 2") {
    CHECK(run_cli({"parse", "p |"}).exit_code == 2);
    CHECK(run_cli({"eval", "/nope/missing.json", "wq", "p"}).exit_code == 2);
    CHECK(run_cli({"eval", fixture("fig2.json"), "zz", "p"}).exit_code == 2);
    CHECK(run_cli({"eval", fixture("fig2.json"), "wq", "r"}).exit_code == 2);
    CHECK(run_cli({"frobnicate"}).exit_code == 2);
    CHECK(run_cli({"entails", "p", "q"}).exit_code == 2);
    CHECK(run_cli({"check-proof", "/nope/missing.proof.json"}).exit_code == 2);
    CHECK(run_cli({"--help"}).exit_code == 0);
}

TEST_SUITE_END();
