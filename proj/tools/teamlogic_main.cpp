// Command-line front end: parsing, evaluation, entailment, bisimulation,
// characteristic formulas, normal forms, proof checking and model
// generation, with a stable exit-code contract (0 = success / affirmative
// verdict, 1 = negative verdict / countermodel / rejected proof, 2 = usage
// or input error) and byte-deterministic JSON output.

#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "teamlogic/bisim.hpp"
#include "teamlogic/decide.hpp"
#include "teamlogic/errors.hpp"
#include "teamlogic/formula.hpp"
#include "teamlogic/hintikka.hpp"
#include "teamlogic/kripke.hpp"
#include "teamlogic/proofcheck.hpp"
#include "teamlogic/teameval.hpp"

namespace tl = teamlogic;

namespace {

std::vector<std::string> split_csv(const std::string& csv) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : csv) {
        if (c == ',') {
            if (!cur.empty())
                out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

// Formula argument; the "enrich:" prefix applies pragmatic enrichment to
// the (classical) formula after parsing.
tl::FPtr formula_arg(const std::string& text) {
    const std::string prefix = "enrich:";
    if (text.rfind(prefix, 0) == 0)
        return tl::enrich(tl::parse_formula(text.substr(prefix.size())));
    return tl::parse_formula(text);
}

// Team reference: an optional "s=" prefix, then either a named state from
// the model file or a comma-separated list of world names.
tl::State resolve_state(const tl::ModelFile& mf, std::string ref) {
    if (ref.rfind("s=", 0) == 0)
        ref = ref.substr(2);
    auto it = mf.states.find(ref);
    if (it != mf.states.end())
        return it->second;
    return tl::state_from_names(mf.model, split_csv(ref));
}

void print_json(const nlohmann::json& j) { std::cout << j.dump() << "\n"; }

std::string join_names(const std::vector<std::string>& names) {
    std::string out = "{";
    for (std::size_t i = 0; i < names.size(); ++i)
        out += (i ? "," : "") + names[i];
    return out + "}";
}

struct EngineOpts {
    std::string engine = "canonical";
    int max_worlds = 3;
    int jobs = 1;
    std::string sig_csv;
    int depth = 0;
    CLI::Option* sig_opt = nullptr;
    CLI::Option* depth_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--engine", engine, "decision engine")
            ->check(CLI::IsMember({"canonical", "bounded"}))
            ->capture_default_str();
        cmd->add_option("--max-worlds", max_worlds, "world bound of the bounded engine")
            ->capture_default_str();
        cmd->add_option("--jobs", jobs, "parallel workers of the bounded engine")
            ->capture_default_str();
        sig_opt = cmd->add_option("--sig", sig_csv, "signature, comma-separated");
        depth_opt = cmd->add_option("--depth", depth, "depth of the canonical engine");
    }

    tl::DecideOptions to_options() const {
        tl::DecideOptions o;
        o.engine = engine;
        o.max_worlds = max_worlds;
        o.jobs = jobs;
        if (sig_opt->count())
            o.sig = split_csv(sig_csv);
        if (depth_opt->count())
            o.k = depth;
        return o;
    }
};

int report_verdict(const tl::Verdict& v, bool json, const char* yes, const char* no) {
    if (json) {
        print_json(tl::verdict_to_json(v));
    } else if (v.valid()) {
        std::cout << yes << "\n";
    } else if (v.found_countermodel()) {
        std::cout << no << "\n";
        std::cout << "model: " << tl::model_to_json(*v.model).dump() << "\n";
        std::cout << "state: " << join_names(tl::state_names(*v.model, v.state)) << "\n";
    } else {
        std::cout << "no countermodel with at most " << v.bound << " worlds\n";
    }
    return v.found_countermodel() ? 1 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"team-semantics toolkit for bilateral state-based modal logics"};
    app.require_subcommand(1);
    int rc = 0;

    // parse ------------------------------------------------------------------
    auto* cmd_parse = app.add_subcommand("parse", "parse a formula and reprint it");
    struct {
        std::string formula;
        bool json = false;
    } parse_opts;
    cmd_parse->add_option("formula", parse_opts.formula)->required();
    cmd_parse->add_flag("--json", parse_opts.json);
    cmd_parse->callback([&] {
        const tl::FPtr f = formula_arg(parse_opts.formula);
        if (parse_opts.json) {
            nlohmann::json j;
            j["classical"] = tl::is_classical(f);
            j["depth"] = tl::modal_depth(f);
            j["formula"] = tl::print_formula(f);
            j["ne_free"] = tl::is_ne_free(f);
            j["props"] = tl::props(f);
            print_json(j);
        } else {
            std::cout << tl::print_formula(f) << "\n";
        }
    });

    // eval -------------------------------------------------------------------
    auto* cmd_eval = app.add_subcommand("eval", "evaluate a formula on a team of a model");
    struct {
        std::string model, state, formula;
        bool anti = false, do_enrich = false, json = false;
    } eval_opts;
    cmd_eval->add_option("model", eval_opts.model, "model JSON file")->required();
    cmd_eval->add_option("state", eval_opts.state, "team: s=NAME, NAME or w1,w2,...")->required();
    cmd_eval->add_option("formula", eval_opts.formula)->required();
    cmd_eval->add_flag("--anti", eval_opts.anti, "check anti-support instead of support");
    cmd_eval->add_flag("--enrich", eval_opts.do_enrich, "pragmatically enrich the formula first");
    cmd_eval->add_flag("--json", eval_opts.json);
    cmd_eval->callback([&] {
        const tl::ModelFile mf = tl::load_model_file(eval_opts.model);
        const tl::State s = resolve_state(mf, eval_opts.state);
        tl::FPtr f = formula_arg(eval_opts.formula);
        if (eval_opts.do_enrich)
            f = tl::enrich(f);
        const bool verdict = eval_opts.anti ? tl::antisupports(mf.model, s, f)
                                            : tl::supports(mf.model, s, f);
        if (eval_opts.json) {
            nlohmann::json j;
            j["formula"] = tl::print_formula(f);
            j["polarity"] = eval_opts.anti ? "anti" : "support";
            j["state"] = tl::state_names(mf.model, s);
            j["verdict"] = verdict;
            print_json(j);
        } else {
            std::cout << (verdict ? "true" : "false") << "\n";
        }
        rc = verdict ? 0 : 1;
    });

    // enrich / nnf / depth ------------------------------------------------------
    auto* cmd_enrich = app.add_subcommand("enrich", "pragmatically enrich a classical formula");
    static std::string enrich_formula;
    cmd_enrich->add_option("formula", enrich_formula)->required();
    cmd_enrich->callback(
        [&] { std::cout << tl::print_formula(tl::enrich(tl::parse_formula(enrich_formula))) << "\n"; });

    auto* cmd_nnf = app.add_subcommand("nnf", "rewrite into negation normal form");
    static std::string nnf_formula;
    cmd_nnf->add_option("formula", nnf_formula)->required();
    cmd_nnf->callback(
        [&] { std::cout << tl::print_formula(tl::nnf(formula_arg(nnf_formula))) << "\n"; });

    auto* cmd_depth = app.add_subcommand("depth", "print the modal depth");
    static std::string depth_formula;
    cmd_depth->add_option("formula", depth_formula)->required();
    cmd_depth->callback(
        [&] { std::cout << tl::modal_depth(formula_arg(depth_formula)) << "\n"; });

    // entails ------------------------------------------------------------------
    auto* cmd_entails =
        app.add_subcommand("entails", "decide PREMISES... => CONCLUSION over all models");
    struct {
        std::vector<std::string> terms;
        EngineOpts engine;
        bool json = false;
    } ent_opts;
    cmd_entails->add_option("terms", ent_opts.terms, "premises, then =>, then the conclusion")
        ->expected(-1);
    ent_opts.engine.attach(cmd_entails);
    cmd_entails->add_flag("--json", ent_opts.json);
    cmd_entails->callback([&] {
        std::vector<tl::FPtr> premises;
        std::optional<tl::FPtr> conclusion;
        bool seen_sep = false;
        for (const auto& t : ent_opts.terms) {
            if (t == "=>") {
                if (seen_sep)
                    throw tl::InputError("only one => separator is allowed");
                seen_sep = true;
            } else if (t.empty()) {
                continue; // blank premise slots are skipped
            } else if (!seen_sep) {
                premises.push_back(formula_arg(t));
            } else if (!conclusion) {
                conclusion = formula_arg(t);
            } else {
                throw tl::InputError("exactly one conclusion may follow =>");
            }
        }
        if (!seen_sep || !conclusion)
            throw tl::InputError("expected: entails PREMISES... => CONCLUSION");
        const tl::Verdict v =
            tl::decide_entails(premises, *conclusion, ent_opts.engine.to_options());
        rc = report_verdict(v, ent_opts.json, "valid", "countermodel");
    });

    // equiv -------------------------------------------------------------------
    auto* cmd_equiv = app.add_subcommand("equiv", "decide equivalence of two formulas");
    struct {
        std::string lhs, rhs;
        EngineOpts engine;
        bool strong = false, json = false;
    } eq_opts;
    cmd_equiv->add_option("lhs", eq_opts.lhs)->required();
    cmd_equiv->add_option("rhs", eq_opts.rhs)->required();
    eq_opts.engine.attach(cmd_equiv);
    cmd_equiv->add_flag("--strong", eq_opts.strong,
                        "also require equivalent anti-support (negations both ways)");
    cmd_equiv->add_flag("--json", eq_opts.json);
    cmd_equiv->callback([&] {
        const tl::Verdict v =
            tl::equivalent(formula_arg(eq_opts.lhs), formula_arg(eq_opts.rhs),
                           eq_opts.strong ? tl::EquivMode::Strong : tl::EquivMode::Support,
                           eq_opts.engine.to_options());
        rc = report_verdict(v, eq_opts.json, "equivalent", "not equivalent");
    });

    // bisim -------------------------------------------------------------------
    auto* cmd_bisim =
        app.add_subcommand("bisim", "k-bisimilarity of two pointed worlds or two teams");
    struct {
        std::string m1, x1, m2, x2;
        int k = 0;
        std::string sig_csv;
        CLI::Option* sig_opt = nullptr;
        bool json = false;
    } bis_opts;
    cmd_bisim->add_option("model1", bis_opts.m1)->required();
    cmd_bisim->add_option("point1", bis_opts.x1, "w=NAME, s=NAME or a bare name")->required();
    cmd_bisim->add_option("model2", bis_opts.m2)->required();
    cmd_bisim->add_option("point2", bis_opts.x2)->required();
    cmd_bisim->add_option("--k", bis_opts.k, "bisimulation depth")->required();
    bis_opts.sig_opt = cmd_bisim->add_option("--sig", bis_opts.sig_csv);
    cmd_bisim->add_flag("--json", bis_opts.json);
    cmd_bisim->callback([&] {
        const tl::ModelFile f1 = tl::load_model_file(bis_opts.m1);
        const tl::ModelFile f2 = tl::load_model_file(bis_opts.m2);
        auto classify = [](const tl::ModelFile& mf, std::string ref,
                           std::string& world) -> std::optional<tl::State> {
            if (ref.rfind("w=", 0) == 0) {
                world = ref.substr(2);
                return {};
            }
            if (ref.rfind("s=", 0) != 0 && mf.model.world_index(ref) >= 0) {
                world = ref;
                return {};
            }
            return resolve_state(mf, ref);
        };
        std::string w1, w2;
        const auto s1 = classify(f1, bis_opts.x1, w1);
        const auto s2 = classify(f2, bis_opts.x2, w2);
        if (s1.has_value() != s2.has_value())
            throw tl::InputError("cannot compare a single world with a team");
        std::optional<std::set<std::string>> sig;
        if (bis_opts.sig_opt->count()) {
            const auto v = split_csv(bis_opts.sig_csv);
            sig = std::set<std::string>(v.begin(), v.end());
        }
        const bool verdict =
            s1 ? tl::state_bisim(f1.model, *s1, f2.model, *s2, bis_opts.k, sig)
               : tl::world_bisim(f1.model, w1, f2.model, w2, bis_opts.k, sig);
        if (bis_opts.json)
            print_json({{"bisimilar", verdict}, {"k", bis_opts.k}});
        else
            std::cout << (verdict ? "true" : "false") << "\n";
        rc = verdict ? 0 : 1;
    });

    // types -------------------------------------------------------------------
    auto* cmd_types = app.add_subcommand("types", "depth-indexed world partition of a model");
    struct {
        std::string model;
        int k = 0;
        std::string sig_csv;
        CLI::Option* sig_opt = nullptr;
        bool json = false;
    } ty_opts;
    cmd_types->add_option("model", ty_opts.model)->required();
    cmd_types->add_option("--k", ty_opts.k)->required();
    ty_opts.sig_opt = cmd_types->add_option("--sig", ty_opts.sig_csv);
    cmd_types->add_flag("--json", ty_opts.json);
    cmd_types->callback([&] {
        const tl::ModelFile mf = tl::load_model_file(ty_opts.model);
        tl::TypePartition part;
        if (ty_opts.sig_opt->count()) {
            const auto v = split_csv(ty_opts.sig_csv);
            part = tl::k_types(mf.model, ty_opts.k, std::set<std::string>(v.begin(), v.end()));
        } else {
            part = tl::k_types(mf.model, ty_opts.k);
        }
        if (ty_opts.json) {
            nlohmann::json j;
            j["k"] = part.k;
            j["levels"] = part.ids;
            j["num_classes"] = part.num_classes;
            j["stable_from"] = part.stable_from;
            j["worlds"] = mf.model.worlds;
            print_json(j);
        } else {
            for (int level = 0; level <= part.k; ++level) {
                std::cout << "k=" << level << ":";
                for (int w = 0; w < mf.model.size(); ++w)
                    std::cout << " " << mf.model.worlds[w] << "=" << part.type_of(level, w);
                std::cout << "\n";
            }
            std::cout << "stable_from: " << part.stable_from << "\n";
        }
    });

    // hintikka -----------------------------------------------------------------
    auto* cmd_hin = app.add_subcommand(
        "hintikka", "characteristic formula of a world (chi) or a team (theta)");
    struct {
        std::string model, world, state;
        int k = 0;
        std::string sig_csv;
        CLI::Option *world_opt = nullptr, *state_opt = nullptr, *sig_opt = nullptr;
        bool chi = false;
    } hin_opts;
    cmd_hin->add_option("model", hin_opts.model)->required();
    hin_opts.world_opt = cmd_hin->add_option("--world", hin_opts.world);
    hin_opts.state_opt = cmd_hin->add_option("--state", hin_opts.state);
    cmd_hin->add_option("--k", hin_opts.k)->capture_default_str();
    hin_opts.sig_opt = cmd_hin->add_option("--sig", hin_opts.sig_csv);
    cmd_hin->add_flag("--chi", hin_opts.chi,
                      "with --state: print the plain disjunction instead of theta");
    cmd_hin->callback([&] {
        const tl::ModelFile mf = tl::load_model_file(hin_opts.model);
        std::vector<std::string> sig;
        if (hin_opts.sig_opt->count()) {
            sig = split_csv(hin_opts.sig_csv);
        } else {
            const auto s = mf.model.signature();
            sig.assign(s.begin(), s.end());
        }
        if (hin_opts.world_opt->count() == hin_opts.state_opt->count())
            throw tl::InputError("exactly one of --world and --state is required");
        tl::FPtr out;
        if (hin_opts.world_opt->count()) {
            const int w = mf.model.world_index(hin_opts.world);
            if (w < 0)
                throw tl::InputError("unknown world \"" + hin_opts.world + "\"");
            out = tl::chi_world(mf.model, w, hin_opts.k, sig);
        } else {
            const tl::State s = resolve_state(mf, hin_opts.state);
            out = hin_opts.chi ? tl::chi_state(mf.model, s, hin_opts.k, sig)
                               : tl::theta_state(mf.model, s, hin_opts.k, sig);
        }
        std::cout << tl::print_formula(out) << "\n";
    });

    // nf ---------------------------------------------------------------------
    auto* cmd_nf = app.add_subcommand("nf", "normal form via the canonical model");
    struct {
        std::string formula, flavor;
        int k = 0;
        std::string sig_csv;
        CLI::Option *k_opt = nullptr, *sig_opt = nullptr;
    } nf_opts;
    cmd_nf->add_option("formula", nf_opts.formula)->required();
    cmd_nf->add_option("--flavor", nf_opts.flavor, "ml, bsmli or bsmlo")
        ->required()
        ->check(CLI::IsMember({"ml", "bsmli", "bsmlo"}));
    nf_opts.k_opt = cmd_nf->add_option("--k", nf_opts.k);
    nf_opts.sig_opt = cmd_nf->add_option("--sig", nf_opts.sig_csv);
    cmd_nf->callback([&] {
        const tl::FPtr f = formula_arg(nf_opts.formula);
        std::optional<int> k;
        if (nf_opts.k_opt->count())
            k = nf_opts.k;
        std::optional<std::vector<std::string>> sig;
        if (nf_opts.sig_opt->count())
            sig = split_csv(nf_opts.sig_csv);
        tl::FPtr out;
        if (nf_opts.flavor == "ml")
            out = tl::nf_ml(f, k, sig);
        else if (nf_opts.flavor == "bsmli")
            out = tl::nf_bsmli(f, k, sig);
        else
            out = tl::nf_bsmlo(f, k, sig);
        std::cout << tl::print_formula(out) << "\n";
    });

    // check-proof ---------------------------------------------------------------
    auto* cmd_proof = app.add_subcommand("check-proof", "check a natural-deduction proof file");
    struct {
        std::string file;
        bool json = false;
    } pr_opts;
    cmd_proof->add_option("file", pr_opts.file)->required();
    cmd_proof->add_flag("--json", pr_opts.json);
    cmd_proof->callback([&] {
        std::ifstream in(pr_opts.file);
        if (!in)
            throw tl::InputError("cannot open \"" + pr_opts.file + "\"");
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw tl::InputError(std::string("proof JSON: ") + e.what());
        }
        const tl::Proof proof = tl::proof_from_json(j);
        const tl::CheckReport rep = tl::check_proof(proof);
        if (pr_opts.json) {
            print_json(tl::check_report_to_json(rep));
        } else if (rep.accepted) {
            std::cout << "accepted\n";
        } else {
            for (const auto& e : rep.errors)
                std::cout << "line " << e.line << " [" << tl::check_code_name(e.code)
                          << "]: " << e.detail << "\n";
            std::cout << "rejected\n";
        }
        rc = rep.accepted ? 0 : 1;
    });

    // gen --------------------------------------------------------------------
    auto* cmd_gen = app.add_subcommand("gen", "generate models for corpus building");
    cmd_gen->require_subcommand(1);

    auto* gen_model = cmd_gen->add_subcommand("model", "seed-deterministic random model");
    struct {
        std::uint64_t seed = 0;
        int worlds = 3;
        std::string sig_csv = "p,q";
        bool with_state = false;
    } gm_opts;
    gen_model->add_option("--seed", gm_opts.seed)->capture_default_str();
    gen_model->add_option("--worlds", gm_opts.worlds)->capture_default_str();
    gen_model->add_option("--sig", gm_opts.sig_csv)->capture_default_str();
    gen_model->add_flag("--state", gm_opts.with_state, "also draw a random team named s0");
    gen_model->callback([&] {
        const tl::Model m = tl::random_model(gm_opts.seed, gm_opts.worlds, split_csv(gm_opts.sig_csv));
        if (gm_opts.with_state) {
            const std::map<std::string, tl::State> states{{"s0", tl::random_state(gm_opts.seed, m)}};
            print_json(tl::model_to_json(m, &states));
        } else {
            print_json(tl::model_to_json(m));
        }
    });

    auto* gen_enum = cmd_gen->add_subcommand("enum", "model by index in the full enumeration");
    struct {
        std::uint64_t index = 0;
        int max_worlds = 3;
        std::string sig_csv = "p,q";
    } ge_opts;
    gen_enum->add_option("--index", ge_opts.index)->required();
    gen_enum->add_option("--max-worlds", ge_opts.max_worlds)->capture_default_str();
    gen_enum->add_option("--sig", ge_opts.sig_csv)->capture_default_str();
    gen_enum->callback([&] {
        const tl::ModelSpace space(ge_opts.max_worlds, split_csv(ge_opts.sig_csv));
        if (ge_opts.index >= space.total())
            throw tl::InputError("index " + std::to_string(ge_opts.index) +
                                 " is out of range; the space has " +
                                 std::to_string(space.total()) + " models");
        print_json(tl::model_to_json(space.at(ge_opts.index)));
    });

    auto* gen_count = cmd_gen->add_subcommand("count", "size of the full enumeration");
    struct {
        int max_worlds = 3;
        std::string sig_csv = "p,q";
    } gc_opts;
    gen_count->add_option("--max-worlds", gc_opts.max_worlds)->capture_default_str();
    gen_count->add_option("--sig", gc_opts.sig_csv)->capture_default_str();
    gen_count->callback([&] {
        const tl::ModelSpace space(gc_opts.max_worlds, split_csv(gc_opts.sig_csv));
        std::cout << space.total() << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const tl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return rc;
}
