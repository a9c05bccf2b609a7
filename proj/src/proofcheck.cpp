#include "teamlogic/proofcheck.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace teamlogic {

// --- names ------------------------------------------------------------------

std::string system_name(System s) {
    switch (s) {
    case System::BSML:
        return "BSML";
    case System::BSMLO:
        return "BSMLO";
    case System::BSMLI:
        return "BSMLI";
    }
    return {};
}

std::optional<System> system_from_name(const std::string& name) {
    if (name == "BSML")
        return System::BSML;
    if (name == "BSMLO")
        return System::BSMLO;
    if (name == "BSMLI")
        return System::BSMLI;
    return {};
}

namespace {
const std::pair<Rule, const char*> kRuleNames[] = {
    {Rule::AndI, "AndI"},
    {Rule::AndEL, "AndEL"},
    {Rule::AndER, "AndER"},
    {Rule::NegI, "NegI"},
    {Rule::NegE, "NegE"},
    {Rule::NegNegE, "NegNegE"},
    {Rule::NegNegI, "NegNegI"},
    {Rule::DMAnd, "DMAnd"},
    {Rule::DMOr, "DMOr"},
    {Rule::NegNeE, "NegNeE"},
    {Rule::OrI, "OrI"},
    {Rule::OrW, "OrW"},
    {Rule::ComOr, "ComOr"},
    {Rule::OrE, "OrE"},
    {Rule::OrMon, "OrMon"},
    {Rule::BotE, "BotE"},
    {Rule::BotCtr, "BotCtr"},
    {Rule::DiaMon, "DiaMon"},
    {Rule::BoxMon, "BoxMon"},
    {Rule::InterDiaBox, "InterDiaBox"},
    {Rule::DiaSep, "DiaSep"},
    {Rule::DiaJoin, "DiaJoin"},
    {Rule::BoxInst, "BoxInst"},
    {Rule::BoxDiaJoin, "BoxDiaJoin"},
    {Rule::GOrIL, "GOrIL"},
    {Rule::GOrIR, "GOrIR"},
    {Rule::GOrE, "GOrE"},
    {Rule::DistrOrGOr, "DistrOrGOr"},
    {Rule::DMGOr, "DMGOr"},
    {Rule::NeI, "NeI"},
    {Rule::ConvDiaGOrOr, "ConvDiaGOrOr"},
    {Rule::ConvBoxGOrOr, "ConvBoxGOrOr"},
    {Rule::ONeI, "ONeI"},
    {Rule::OIFromBot, "OIFromBot"},
    {Rule::OIFromPhi, "OIFromPhi"},
    {Rule::OE, "OE"},
    {Rule::NegOE, "NegOE"},
    {Rule::DiaOE, "DiaOE"},
    {Rule::BoxOE, "BoxOE"},
    {Rule::BotNeTrs, "BotNeTrs"},
    {Rule::DiaBotNeTrs, "DiaBotNeTrs"},
    {Rule::BoxBotNeTrs, "BoxBotNeTrs"},
    {Rule::Reit, "Reit"},
};
} // namespace

std::string rule_name(Rule r) {
    for (const auto& [rule, name] : kRuleNames)
        if (rule == r)
            return name;
    return {};
}

std::optional<Rule> rule_from_name(const std::string& name) {
    for (const auto& [rule, rname] : kRuleNames)
        if (name == rname)
            return rule;
    return {};
}

bool rule_in_system(Rule r, System s) {
    switch (r) {
    case Rule::GOrIL:
    case Rule::GOrIR:
    case Rule::GOrE:
    case Rule::DistrOrGOr:
    case Rule::DMGOr:
    case Rule::NeI:
    case Rule::ConvDiaGOrOr:
    case Rule::ConvBoxGOrOr:
        return s == System::BSMLI;
    case Rule::ONeI:
    case Rule::OIFromBot:
    case Rule::OIFromPhi:
    case Rule::OE:
    case Rule::NegOE:
    case Rule::DiaOE:
    case Rule::BoxOE:
        return s == System::BSMLO;
    case Rule::BotNeTrs:
    case Rule::DiaBotNeTrs:
    case Rule::BoxBotNeTrs:
        return s == System::BSML;
    default:
        return true;
    }
}

std::string check_code_name(CheckCode c) {
    switch (c) {
    case CheckCode::WrongPremiseShape:
        return "wrong-premise-shape";
    case CheckCode::SideConditionViolated:
        return "side-condition-violated";
    case CheckCode::RuleNotInSystem:
        return "rule-not-in-system";
    case CheckCode::ScopeViolation:
        return "scope-violation";
    case CheckCode::OccurrenceNotDistributive:
        return "occurrence-not-distributive";
    case CheckCode::MetavariableNotClassical:
        return "metavariable-not-classical";
    }
    return {};
}

// --- preprocessing ------------------------------------------------------------

namespace {

struct RuleErr {
    CheckCode code;
    std::string detail;
};

[[noreturn]] void fail(CheckCode code, std::string detail) {
    throw RuleErr{code, std::move(detail)};
}

// Static index of every id in the proof. Document order equals id order
// (validated), so a subproof's interior is exactly the id interval
// (id, max_id], and visibility checks reduce to parent-chain checks.
struct Index {
    struct Info {
        enum Kind { Premise, Hyp, Derived, Sub } kind = Premise;
        FPtr formula;                   // Premise / Hyp / Derived
        const ProofLine* line = nullptr; // Derived / Sub
        FPtr hyp_formula;               // Sub sharing its id with its hypothesis
        bool also_hyp = false;
        int parent = -1; // enclosing subproof id, -1 at top level
        int max_id = -1; // Sub: largest id inside
    };
    std::map<int, Info> info;
    int num_premises = 0;

    const Info* find(int id) const {
        auto it = info.find(id);
        return it == info.end() ? nullptr : &it->second;
    }

    bool inside(int id, int sub_id) const {
        const Info* s = find(sub_id);
        return s && s->kind == Info::Sub && id > sub_id && id <= s->max_id;
    }
};

void index_block(Index& ix, const std::vector<ProofLine>& lines, int parent, int& prev) {
    for (const auto& line : lines) {
        if (line.id <= prev)
            throw InputError("line ids must increase in document order; id " +
                             std::to_string(line.id) + " follows " + std::to_string(prev));
        prev = line.id;
        if (!line.is_subproof) {
            Index::Info info;
            info.kind = Index::Info::Derived;
            info.formula = line.formula;
            info.line = &line;
            info.parent = parent;
            ix.info.emplace(line.id, std::move(info));
            continue;
        }
        Index::Info info;
        info.kind = Index::Info::Sub;
        info.line = &line;
        info.parent = parent;
        if (line.hyp_ids.size() != line.hypotheses.size())
            throw InputError("subproof " + std::to_string(line.id) +
                             ": hypothesis ids do not match the hypotheses");
        const bool shared = line.hyp_ids.size() == 1 && line.hyp_ids[0] == line.id;
        if (shared) {
            info.also_hyp = true;
            info.hyp_formula = line.hypotheses[0];
        }
        ix.info.emplace(line.id, std::move(info));
        if (!shared) {
            for (std::size_t i = 0; i < line.hyp_ids.size(); ++i) {
                const int hid = line.hyp_ids[i];
                if (hid <= prev)
                    throw InputError("line ids must increase in document order; id " +
                                     std::to_string(hid) + " follows " + std::to_string(prev));
                prev = hid;
                Index::Info h;
                h.kind = Index::Info::Hyp;
                h.formula = line.hypotheses[i];
                h.parent = line.id;
                ix.info.emplace(hid, std::move(h));
            }
        }
        index_block(ix, line.body, line.id, prev);
        ix.info.at(line.id).max_id = prev;
    }
}

Index build_index(const Proof& p) {
    Index ix;
    ix.num_premises = static_cast<int>(p.premises.size());
    for (int i = 0; i < ix.num_premises; ++i) {
        Index::Info info;
        info.kind = Index::Info::Premise;
        info.formula = p.premises[i];
        ix.info.emplace(i, std::move(info));
    }
    int prev = ix.num_premises - 1;
    index_block(ix, p.lines, -1, prev);
    return ix;
}

bool in_tier(const FPtr& f, System s) {
    switch (s) {
    case System::BSML:
        return is_gdis_free(f) && is_oslash_free(f);
    case System::BSMLO:
        return is_gdis_free(f);
    case System::BSMLI:
        return is_oslash_free(f);
    }
    return false;
}

void check_tier(const FPtr& f, System s, const std::string& where) {
    if (f && !in_tier(f, s))
        throw InputError(where + ": formula \"" + print_formula(f) + "\" is outside the " +
                         system_name(s) + " language tier");
}

void check_tier_block(const std::vector<ProofLine>& lines, System s) {
    for (const auto& line : lines) {
        const std::string where = "line " + std::to_string(line.id);
        if (line.is_subproof) {
            for (const auto& h : line.hypotheses)
                check_tier(h, s, where);
            check_tier_block(line.body, s);
        } else {
            check_tier(line.formula, s, where);
            check_tier(line.aux.psi, s, where);
        }
    }
}

// Formulas of lines outside the subproof that are referenced from inside it
// (at any nesting depth), keyed by id. These are the subproof's imports:
// the facts it borrows from the surrounding derivation.
void collect_imports(const Index& ix, const ProofLine& sub, const std::vector<ProofLine>& body,
                     std::map<int, FPtr>& out) {
    const auto& sub_info = ix.info.at(sub.id);
    for (const auto& line : body) {
        if (line.is_subproof) {
            collect_imports(ix, sub, line.body, out);
            continue;
        }
        for (int r : line.refs) {
            if (r >= sub.id && r <= sub_info.max_id)
                continue; // internal
            const Index::Info* ri = ix.find(r);
            if (!ri)
                continue; // unresolvable; reported as a scope violation elsewhere
            switch (ri->kind) {
            case Index::Info::Premise:
            case Index::Info::Hyp:
            case Index::Info::Derived:
                out.emplace(r, ri->formula);
                break;
            case Index::Info::Sub:
                if (ri->also_hyp)
                    out.emplace(r, ri->hyp_formula); // an enclosing hypothesis
                break;
            }
        }
    }
}

std::map<int, FPtr> imports_of(const Index& ix, const ProofLine& sub) {
    std::map<int, FPtr> out;
    collect_imports(ix, sub, sub.body, out);
    return out;
}

// --- reference resolution -------------------------------------------------------

struct Resolved {
    bool is_sub = false;
    FPtr formula;               // formula reference
    const ProofLine* sub = nullptr; // subproof argument
    int id = -1;
};

struct Ctx {
    const Index* ix = nullptr;
    std::vector<int> open; // chain of enclosing subproof ids, outermost first
    int line_id = -1;      // the citing line

    bool is_open(int sub_id) const {
        return std::find(open.begin(), open.end(), sub_id) != open.end();
    }
    int block() const { return open.empty() ? -1 : open.back(); }
};

Resolved resolve(const Ctx& ctx, int ref) {
    const Index::Info* info = ctx.ix->find(ref);
    if (!info)
        fail(CheckCode::ScopeViolation, "reference to unknown line " + std::to_string(ref));
    if (ref >= ctx.line_id)
        fail(CheckCode::ScopeViolation,
             "reference to line " + std::to_string(ref) + " which does not precede this line");
    Resolved out;
    out.id = ref;
    switch (info->kind) {
    case Index::Info::Premise:
        out.formula = info->formula;
        return out;
    case Index::Info::Hyp:
        if (!ctx.is_open(info->parent))
            fail(CheckCode::ScopeViolation, "reference to hypothesis " + std::to_string(ref) +
                                                " of a closed subproof");
        out.formula = info->formula;
        return out;
    case Index::Info::Derived: {
        // Every enclosing subproof of the cited line must still be open.
        for (int anc = info->parent; anc != -1; anc = ctx.ix->info.at(anc).parent)
            if (!ctx.is_open(anc))
                fail(CheckCode::ScopeViolation, "reference to line " + std::to_string(ref) +
                                                    " inside a closed subproof");
        out.formula = info->formula;
        return out;
    }
    case Index::Info::Sub:
        if (ctx.is_open(ref)) {
            // Citing an enclosing subproof from inside it means its hypothesis.
            if (!info->also_hyp)
                fail(CheckCode::ScopeViolation,
                     "line " + std::to_string(ref) +
                         " is the enclosing subproof itself, not a formula");
            out.formula = info->hyp_formula;
            return out;
        }
        // A completed subproof can only be used as a rule argument by a
        // later line of its own block.
        if (info->parent != ctx.block())
            fail(CheckCode::ScopeViolation, "subproof " + std::to_string(ref) +
                                                " can only be cited from its own block");
        out.is_sub = true;
        out.sub = info->line;
        return out;
    }
    fail(CheckCode::ScopeViolation, "reference to unknown line " + std::to_string(ref));
}

// --- rule checking ----------------------------------------------------------

FPtr formula_arg(const std::vector<Resolved>& rs, std::size_t i) {
    if (rs[i].is_sub)
        fail(CheckCode::WrongPremiseShape,
             "reference " + std::to_string(i + 1) + " must be a formula line, not a subproof");
    return rs[i].formula;
}

const ProofLine* sub_arg(const std::vector<Resolved>& rs, std::size_t i) {
    if (!rs[i].is_sub)
        fail(CheckCode::WrongPremiseShape,
             "reference " + std::to_string(i + 1) + " must be a subproof");
    return rs[i].sub;
}

void need_refs(const std::vector<Resolved>& rs, std::size_t n, const char* what) {
    if (rs.size() != n)
        fail(CheckCode::WrongPremiseShape, std::string(what) + " takes " + std::to_string(n) +
                                               " reference(s), got " +
                                               std::to_string(rs.size()));
}

// Single conclusion line of a cited subproof.
FPtr sub_conclusion(const ProofLine* sub) {
    if (sub->body.empty() || sub->body.back().is_subproof)
        fail(CheckCode::WrongPremiseShape,
             "cited subproof " + std::to_string(sub->id) + " does not end in a formula line");
    return sub->body.back().formula;
}

FPtr sub_single_hyp(const ProofLine* sub) {
    if (sub->hypotheses.size() != 1)
        fail(CheckCode::WrongPremiseShape, "cited subproof " + std::to_string(sub->id) +
                                               " must have exactly one hypothesis");
    return sub->hypotheses[0];
}

void expect(bool ok, const std::string& detail) {
    if (!ok)
        fail(CheckCode::WrongPremiseShape, detail);
}

void expect_kind(const FPtr& f, Conn k, const std::string& what) {
    const char* names[] = {"an atom", "NE",           "bot",       "Bot",
                           "Top",     "a negation",   "a diamond", "a box",
                           "@",       "a conjunction", "a local disjunction",
                           "a global disjunction"};
    if (f->kind != k)
        fail(CheckCode::WrongPremiseShape,
             what + " must be " + names[static_cast<int>(k)] + ", got: " + print_formula(f));
}

void check_side_star(const Index& ix, const ProofLine* sub, const char* rule               ) {
    const auto imports = imports_of(ix, *sub);
    if (!imports.empty())
        fail(CheckCode::SideConditionViolated,
             std::string("*: the subproof of ") + rule + " uses line " +
                 std::to_string(imports.begin()->first) + " (" +
                 print_formula(imports.begin()->second) + ") from outside");
}

void check_side_dagger(const Index& ix, const ProofLine* sub, const char* rule) {
    for (const auto& [id, f] : imports_of(ix, *sub))
        if (!is_ne_free(f))
            fail(CheckCode::SideConditionViolated,
                 std::string("+: the subproof of ") + rule + " uses line " + std::to_string(id) +
                     " (" + print_formula(f) + ") whose formula contains NE");
}

void check_classical(const FPtr& f, const std::string& what) {
    if (!is_classical(f))
        fail(CheckCode::MetavariableNotClassical,
             what + " must be classical, got: " + print_formula(f));
}

// Allowed aux fields per rule.
void check_aux_usage(Rule r, const Aux& aux) {
    bool path_ok = false, psi_ok = false, dir_ok = false;
    switch (r) {
    case Rule::OrI:
    case Rule::OE:
    case Rule::BotNeTrs:
    case Rule::DiaOE:
    case Rule::BoxOE:
    case Rule::DiaBotNeTrs:
    case Rule::BoxBotNeTrs:
        path_ok = psi_ok = true;
        break;
    case Rule::GOrIL:
    case Rule::GOrIR:
    case Rule::OIFromBot:
        psi_ok = true;
        break;
    case Rule::DMAnd:
    case Rule::DMOr:
    case Rule::NegNeE:
    case Rule::InterDiaBox:
    case Rule::DMGOr:
    case Rule::NegOE:
    case Rule::ConvDiaGOrOr:
    case Rule::ConvBoxGOrOr:
        dir_ok = true;
        break;
    default:
        break;
    }
    if (aux.path && !path_ok)
        fail(CheckCode::WrongPremiseShape, "aux.path is not used by rule " + rule_name(r));
    if (aux.psi && !psi_ok)
        fail(CheckCode::WrongPremiseShape, "aux.psi is not used by rule " + rule_name(r));
    if (aux.reversed && !dir_ok)
        fail(CheckCode::WrongPremiseShape, "aux.dir is not used by rule " + rule_name(r));
}

Path need_path(const Aux& aux, Rule r) {
    if (!aux.path)
        fail(CheckCode::WrongPremiseShape, "rule " + rule_name(r) + " needs aux.path");
    return *aux.path;
}

void check_aux_psi(const Aux& aux, const FPtr& actual, const char* what) {
    if (aux.psi && !equal(aux.psi, actual))
        fail(CheckCode::WrongPremiseShape,
             std::string("aux.psi (") + print_formula(aux.psi) + ") does not match " + what +
                 " (" + print_formula(actual) + ")");
}

// Two-way rules: left-to-right unless aux says otherwise; with no direction
// given, both are tried.
using Match = bool (*)(const FPtr&, const FPtr&);

void check_two_way(const FPtr& premise, const FPtr& conclusion, const Aux& aux, Match fwd,
                   Match rev, const char* description) {
    if (aux.reversed) {
        if (*aux.reversed ? rev(premise, conclusion) : fwd(premise, conclusion))
            return;
    } else if (fwd(premise, conclusion) || rev(premise, conclusion)) {
        return;
    }
    fail(CheckCode::WrongPremiseShape, std::string("premise and conclusion do not fit ") +
                                           description + "; got " + print_formula(premise) +
                                           " => " + print_formula(conclusion));
}

// Occurrence rules: path must address a subterm that is not under a
// negation, diamond or box within the host formula.
void check_occurrence_distributive(const FPtr& host, const Path& path) {
    try {
        node_at(host, path);
    } catch (const PathError& e) {
        fail(CheckCode::WrongPremiseShape, e.what());
    }
    if (!is_distributive(host, path))
        fail(CheckCode::OccurrenceNotDistributive,
             "the marked occurrence in " + print_formula(host) +
                 " lies under a negation, diamond or box");
}

struct LineView {
    const ProofLine& line;
    std::vector<Resolved> rs;
};

void check_rule_body(const Index& ix, System system, const LineView& v) {
    const ProofLine& L = v.line;
    const auto& rs = v.rs;
    const FPtr& C = L.formula;
    check_aux_usage(L.rule, L.aux);

    switch (L.rule) {
    case Rule::AndI: {
        need_refs(rs, 2, "AndI");
        const FPtr a = formula_arg(rs, 0), b = formula_arg(rs, 1);
        expect(C->kind == Conn::And && equal(C->a, a) && equal(C->b, b),
               "conclusion must conjoin the premises in order");
        return;
    }
    case Rule::AndEL: {
        need_refs(rs, 1, "AndEL");
        const FPtr p = formula_arg(rs, 0);
        expect_kind(p, Conn::And, "the premise of AndEL");
        expect(equal(C, p->a), "conclusion must be the left conjunct of the premise");
        return;
    }
    case Rule::AndER: {
        need_refs(rs, 1, "AndER");
        const FPtr p = formula_arg(rs, 0);
        expect_kind(p, Conn::And, "the premise of AndER");
        expect(equal(C, p->b), "conclusion must be the right conjunct of the premise");
        return;
    }
    case Rule::NegI: {
        need_refs(rs, 1, "NegI");
        const ProofLine* sub = sub_arg(rs, 0);
        const FPtr alpha = sub_single_hyp(sub);
        expect(sub_conclusion(sub)->kind == Conn::Bot,
               "the subproof of NegI must conclude bot");
        expect(C->kind == Conn::Neg && equal(C->a, alpha),
               "conclusion must negate the subproof hypothesis");
        check_classical(alpha, "the hypothesis of NegI");
        check_side_dagger(ix, sub, "NegI");
        return;
    }
    case Rule::NegE: {
        need_refs(rs, 2, "NegE");
        const FPtr a = formula_arg(rs, 0), na = formula_arg(rs, 1);
        expect(na->kind == Conn::Neg && equal(na->a, a),
               "the second premise must negate the first");
        check_classical(a, "the contradicted formula of NegE");
        check_classical(C, "the conclusion of NegE");
        return;
    }
    case Rule::NegNegE: {
        need_refs(rs, 1, "NegNegE");
        const FPtr p = formula_arg(rs, 0);
        expect(p->kind == Conn::Neg && p->a->kind == Conn::Neg && equal(C, p->a->a),
               "premise must be the double negation of the conclusion");
        return;
    }
    case Rule::NegNegI: {
        need_refs(rs, 1, "NegNegI");
        const FPtr p = formula_arg(rs, 0);
        expect(C->kind == Conn::Neg && C->a->kind == Conn::Neg && equal(C->a->a, p),
               "conclusion must be the double negation of the premise");
        return;
    }
    case Rule::DMAnd: {
        need_refs(rs, 1, "DMAnd");
        check_two_way(
            formula_arg(rs, 0), C, L.aux,
            [](const FPtr& p, const FPtr& c) {
                return p->kind == Conn::Neg && p->a->kind == Conn::And && c->kind == Conn::Or &&
                       c->a->kind == Conn::Neg && c->b->kind == Conn::Neg &&
                       equal(c->a->a, p->a->a) && equal(c->b->a, p->a->b);
            },
            [](const FPtr& p, const FPtr& c) {
                return c->kind == Conn::Neg && c->a->kind == Conn::And && p->kind == Conn::Or &&
                       p->a->kind == Conn::Neg && p->b->kind == Conn::Neg &&
                       equal(p->a->a, c->a->a) && equal(p->b->a, c->a->b);
            },
            "~(phi & psi) == ~phi | ~psi");
        return;
    }
    case Rule::DMOr: {
        need_refs(rs, 1, "DMOr");
        check_two_way(
            formula_arg(rs, 0), C, L.aux,
            [](const FPtr& p, const FPtr& c) {
                return p->kind == Conn::Neg && p->a->kind == Conn::Or && c->kind == Conn::And &&
                       c->a->kind == Conn::Neg && c->b->kind == Conn::Neg &&
                       equal(c->a->a, p->a->a) && equal(c->b->a, p->a->b);
            },
            [](const FPtr& p, const FPtr& c) {
                return c->kind == Conn::Neg && c->a->kind == Conn::Or && p->kind == Conn::And &&
                       p->a->kind == Conn::Neg && p->b->kind == Conn::Neg &&
                       equal(p->a->a, c->a->a) && equal(p->b->a, c->a->b);
            },
            "~(phi | psi) == ~phi & ~psi");
        return;
    }
    case Rule::NegNeE: {
        need_refs(rs, 1, "NegNeE");
        check_two_way(
            formula_arg(rs, 0), C, L.aux,
            [](const FPtr& p, const FPtr& c) {
                return p->kind == Conn::Neg && p->a->kind == Conn::Ne && c->kind == Conn::Bot;
            },
            [](const FPtr& p, const FPtr& c) {
                return p->kind == Conn::Bot && c->kind == Conn::Neg && c->a->kind == Conn::Ne;
            },
            "~NE == bot");
        return;
    }
    case Rule::OrI: {
        need_refs(rs, 1, "OrI");
        const FPtr p = formula_arg(rs, 0);
        expect(C->kind == Conn::Or && equal(C->a, p),
               "conclusion must extend the premise with a disjunct on the right");
        if (L.aux.path && *L.aux.path != Path{0})
            fail(CheckCode::WrongPremiseShape,
                 "OrI introduces on the right; aux.path must be [0]");
        check_aux_psi(L.aux, C->b, "the introduced disjunct");
        if (!is_ne_free(C->b))
            fail(CheckCode::SideConditionViolated,
                 "OrI: the introduced disjunct must be NE-free, got: " + print_formula(C->b));
        return;
    }
    case Rule::OrW: {
        need_refs(rs, 1, "OrW");
        const FPtr p = formula_arg(rs, 0);
        expect(C->kind == Conn::Or && equal(C->a, p) && equal(C->b, p),
               "conclusion must disjoin the premise with itself");
        return;
    }
    case Rule::ComOr: {
        need_refs(rs, 1, "ComOr");
        const FPtr p = formula_arg(rs, 0);
        expect_kind(p, Conn::Or, "the premise of ComOr");
        expect(C->kind == Conn::Or && equal(C->a, p->b) && equal(C->b, p->a),
               "conclusion must swap the premise disjuncts");
        return;
    }
    case Rule::OrE: {
        need_refs(rs, 3, "OrE");
        const FPtr p = formula_arg(rs, 0);
        expect_kind(p, Conn::Or, "the major premise of OrE");
        const ProofLine* s1 = sub_arg(rs, 1);
        const ProofLine* s2 = sub_arg(rs, 2);
        expect(equal(sub_single_hyp(s1), p->a),
               "the first subproof must assume the left disjunct");
        expect(equal(sub_single_hyp(s2), p->b),
               "the second subproof must assume the right disjunct");
        expect(equal(sub_conclusion(s1), C) && equal(sub_conclusion(s2), C),
               "both subproofs must conclude the conclusion");
        check_side_dagger(ix, s1, "OrE");
        check_side_dagger(ix, s2, "OrE");
        if (!is_gdis_free(C))
            fail(CheckCode::SideConditionViolated,
                 "++: the conclusion of OrE must not contain global disjunction");
        return;
    }
    case Rule::OrMon: {
        need_refs(rs, 2, "OrMon");
        const FPtr p = formula_arg(rs, 0);
        expect_kind(p, Conn::Or, "the major premise of OrMon");
        const ProofLine* sub = sub_arg(rs, 1);
        expect(equal(sub_single_hyp(sub), p->b),
               "the subproof must assume the right disjunct");
        expect(C->kind == Conn::Or && equal(C->a, p->a) &&
                   equal(C->b, sub_conclusion(sub)),
               "conclusion must keep the left disjunct and replace the right by the "
               "subproof conclusion");
        check_side_dagger(ix, sub, "OrMon");
        return;
    }
    case Rule::BotE: {
        need_refs(rs, 1, "BotE");
        const FPtr p = formula_arg(rs, 0);
        expect(p->kind == Conn::Or && p->a->kind == Conn::Bot && equal(C, p->b),
               "premise must be bot | conclusion");
        return;
    }
    case Rule::BotCtr: {
        need_refs(rs, 1, "BotCtr");
        const FPtr p = formula_arg(rs, 0);
        const bool strong_head =
            p->kind == Conn::Or &&
            (p->a->kind == Conn::BotStrong ||
             (p->a->kind == Conn::And && p->a->a->kind == Conn::Bot &&
              p->a->b->kind == Conn::Ne));
        expect(strong_head,
               "premise must be Bot | phi (or its unfolding (bot & NE) | phi)");
        return;
    }
    case Rule::DiaMon: {
        need_refs(rs, 2, "DiaMon");
        const ProofLine* sub = sub_arg(rs, 0);
        const FPtr d = formula_arg(rs, 1);
        expect_kind(d, Conn::Dia, "the modal premise of DiaMon");
        expect(equal(sub_single_hyp(sub), d->a),
               "the subproof must assume the formula under the diamond");
        expect(C->kind == Conn::Dia && equal(C->a, sub_conclusion(sub)),
               "conclusion must put the subproof conclusion under a diamond");
        check_side_star(ix, sub, "DiaMon");
        return;
    }
    case Rule::BoxMon: {
        if (rs.empty())
            fail(CheckCode::WrongPremiseShape, "BoxMon takes a subproof reference first");
        const ProofLine* sub = sub_arg(rs, 0);
        const auto& hyps = sub->hypotheses;
        if (rs.size() != hyps.size() + 1)
            fail(CheckCode::WrongPremiseShape,
                 "BoxMon needs one boxed premise per subproof hypothesis (" +
                     std::to_string(hyps.size()) + "), got " + std::to_string(rs.size() - 1));
        for (std::size_t i = 0; i < hyps.size(); ++i) {
            const FPtr b = formula_arg(rs, i + 1);
            expect(b->kind == Conn::Box && equal(b->a, hyps[i]),
                   "boxed premise " + std::to_string(i + 1) +
                       " must box the matching subproof hypothesis");
        }
        expect(C->kind == Conn::Box && equal(C->a, sub_conclusion(sub)),
               "conclusion must put the subproof conclusion under a box");
        check_side_star(ix, sub, "BoxMon");
        return;
    }
    case Rule::InterDiaBox: {
        need_refs(rs, 1, "InterDiaBox");
        check_two_way(
            formula_arg(rs, 0), C, L.aux,
            [](const FPtr& p, const FPtr& c) {
                return p->kind == Conn::Neg && p->a->kind == Conn::Dia && c->kind == Conn::Box &&
                       c->a->kind == Conn::Neg && equal(c->a->a, p->a->a);
            },
            [](const FPtr& p, const FPtr& c) {
                return p->kind == Conn::Box && p->a->kind == Conn::Neg && c->kind == Conn::Neg &&
                       c->a->kind == Conn::Dia && equal(c->a->a, p->a->a);
            },
            "~<>phi == []~phi");
        return;
    }
    case Rule::DiaSep: {
        need_refs(rs, 1, "DiaSep");
        const FPtr p = formula_arg(rs, 0);
        const bool shaped = p->kind == Conn::Dia && p->a->kind == Conn::Or &&
                            p->a->b->kind == Conn::And && p->a->b->b->kind == Conn::Ne;
        expect(shaped, "premise must look like <>(phi | (psi & NE))");
        expect(C->kind == Conn::Dia && equal(C->a, p->a->b->a),
               "conclusion must be the diamond of the NE-marked disjunct");
        return;
    }
    case Rule::DiaJoin: {
        need_refs(rs, 2, "DiaJoin");
        const FPtr d1 = formula_arg(rs, 0), d2 = formula_arg(rs, 1);
        expect_kind(d1, Conn::Dia, "the first premise of DiaJoin");
        expect_kind(d2, Conn::Dia, "the second premise of DiaJoin");
        expect(C->kind == Conn::Dia && C->a->kind == Conn::Or && equal(C->a->a, d1->a) &&
                   equal(C->a->b, d2->a),
               "conclusion must be the diamond of the disjunction of the premises");
        return;
    }
    case Rule::BoxInst: {
        need_refs(rs, 1, "BoxInst");
        const FPtr p = formula_arg(rs, 0);
        const bool shaped =
            p->kind == Conn::Box && p->a->kind == Conn::And && p->a->b->kind == Conn::Ne;
        expect(shaped, "premise must look like [](phi & NE)");
        expect(C->kind == Conn::Dia && equal(C->a, p->a->a),
               "conclusion must be the diamond of the boxed conjunct");
        return;
    }
    case Rule::BoxDiaJoin: {
        need_refs(rs, 2, "BoxDiaJoin");
        const FPtr b = formula_arg(rs, 0), d = formula_arg(rs, 1);
        expect_kind(b, Conn::Box, "the first premise of BoxDiaJoin");
        expect_kind(d, Conn::Dia, "the second premise of BoxDiaJoin");
        expect(C->kind == Conn::Box && C->a->kind == Conn::Or && equal(C->a->a, b->a) &&
                   equal(C->a->b, d->a),
               "conclusion must box the disjunction of the boxed and diamond operands");
        return;
    }
    case Rule::GOrIL: {
        need_refs(rs, 1, "GOrIL");
        const FPtr p = formula_arg(rs, 0);
        expect(C->kind == Conn::GOr && equal(C->a, p),
               "conclusion must extend the premise with a global disjunct on the right");
        check_aux_psi(L.aux, C->b, "the introduced disjunct");
        return;
    }
    case Rule::GOrIR: {
        need_refs(rs, 1, "GOrIR");
        const FPtr p = formula_arg(rs, 0);
        expect(C->kind == Conn::GOr && equal(C->b, p),
               "conclusion must extend the premise with a global disjunct on the left");
        check_aux_psi(L.aux, C->a, "the introduced disjunct");
        return;
    }
    case Rule::GOrE: {
        need_refs(rs, 3, "GOrE");
        const FPtr p = formula_arg(rs, 0);
        expect_kind(p, Conn::GOr, "the major premise of GOrE");
        const ProofLine* s1 = sub_arg(rs, 1);
        const ProofLine* s2 = sub_arg(rs, 2);
        expect(equal(sub_single_hyp(s1), p->a),
               "the first subproof must assume the left global disjunct");
        expect(equal(sub_single_hyp(s2), p->b),
               "the second subproof must assume the right global disjunct");
        expect(equal(sub_conclusion(s1), C) && equal(sub_conclusion(s2), C),
               "both subproofs must conclude the conclusion");
        return;
    }
    case Rule::DistrOrGOr: {
        need_refs(rs, 1, "DistrOrGOr");
        const FPtr p = formula_arg(rs, 0);
        const bool shaped = p->kind == Conn::Or && p->b->kind == Conn::GOr;
        expect(shaped, "premise must look like phi | (psi \\/ chi)");
        expect(C->kind == Conn::GOr && C->a->kind == Conn::Or && C->b->kind == Conn::Or &&
                   equal(C->a->a, p->a) && equal(C->a->b, p->b->a) && equal(C->b->a, p->a) &&
                   equal(C->b->b, p->b->b),
               "conclusion must distribute the local disjunct over the global disjunction");
        return;
    }
    case Rule::DMGOr: {
        need_refs(rs, 1, "DMGOr");
        check_two_way(
            formula_arg(rs, 0), C, L.aux,
            [](const FPtr& p, const FPtr& c) {
                return p->kind == Conn::Neg && p->a->kind == Conn::GOr && c->kind == Conn::And &&
                       c->a->kind == Conn::Neg && c->b->kind == Conn::Neg &&
                       equal(c->a->a, p->a->a) && equal(c->b->a, p->a->b);
            },
            [](const FPtr& p, const FPtr& c) {
                return c->kind == Conn::Neg && c->a->kind == Conn::GOr && p->kind == Conn::And &&
                       p->a->kind == Conn::Neg && p->b->kind == Conn::Neg &&
                       equal(p->a->a, c->a->a) && equal(p->b->a, c->a->b);
            },
            "~(phi \\/ psi) == ~phi & ~psi");
        return;
    }
    case Rule::NeI: {
        need_refs(rs, 0, "NeI");
        expect(C->kind == Conn::GOr && C->a->kind == Conn::Bot && C->b->kind == Conn::Ne,
               "NeI concludes exactly bot \\/ NE");
        return;
    }
    case Rule::ConvDiaGOrOr: {
        need_refs(rs, 1, "ConvDiaGOrOr");
        check_two_way(
            formula_arg(rs, 0), C, L.aux,
            [](const FPtr& p, const FPtr& c) {
                return p->kind == Conn::Dia && p->a->kind == Conn::GOr && c->kind == Conn::Or &&
                       c->a->kind == Conn::Dia && c->b->kind == Conn::Dia &&
                       equal(c->a->a, p->a->a) && equal(c->b->a, p->a->b);
            },
            [](const FPtr& p, const FPtr& c) {
                return c->kind == Conn::Dia && c->a->kind == Conn::GOr && p->kind == Conn::Or &&
                       p->a->kind == Conn::Dia && p->b->kind == Conn::Dia &&
                       equal(p->a->a, c->a->a) && equal(p->b->a, c->a->b);
            },
            "<>(phi \\/ psi) == <>phi | <>psi");
        return;
    }
    case Rule::ConvBoxGOrOr: {
        need_refs(rs, 1, "ConvBoxGOrOr");
        check_two_way(
            formula_arg(rs, 0), C, L.aux,
            [](const FPtr& p, const FPtr& c) {
                return p->kind == Conn::Box && p->a->kind == Conn::GOr && c->kind == Conn::Or &&
                       c->a->kind == Conn::Box && c->b->kind == Conn::Box &&
                       equal(c->a->a, p->a->a) && equal(c->b->a, p->a->b);
            },
            [](const FPtr& p, const FPtr& c) {
                return c->kind == Conn::Box && c->a->kind == Conn::GOr && p->kind == Conn::Or &&
                       p->a->kind == Conn::Box && p->b->kind == Conn::Box &&
                       equal(p->a->a, c->a->a) && equal(p->b->a, c->a->b);
            },
            "[](phi \\/ psi) == []phi | []psi");
        return;
    }
    case Rule::ONeI: {
        need_refs(rs, 0, "ONeI");
        expect(C->kind == Conn::Oslash && C->a->kind == Conn::Ne, "ONeI concludes exactly @NE");
        return;
    }
    case Rule::OIFromBot: {
        need_refs(rs, 1, "OIFromBot");
        const FPtr p = formula_arg(rs, 0);
        expect_kind(p, Conn::Bot, "the premise of OIFromBot");
        expect_kind(C, Conn::Oslash, "the conclusion of OIFromBot");
        check_aux_psi(L.aux, C->a, "the weakened formula");
        return;
    }
    case Rule::OIFromPhi: {
        need_refs(rs, 1, "OIFromPhi");
        const FPtr p = formula_arg(rs, 0);
        expect(C->kind == Conn::Oslash && equal(C->a, p),
               "conclusion must weaken exactly the premise");
        return;
    }
    case Rule::OE: {
        need_refs(rs, 3, "OE");
        const FPtr host = formula_arg(rs, 0);
        const Path path = need_path(L.aux, Rule::OE);
        check_occurrence_distributive(host, path);
        const FPtr occ = node_at(host, path);
        expect_kind(occ, Conn::Oslash, "the subterm addressed by aux.path");
        const FPtr psi = occ->a;
        check_aux_psi(L.aux, psi, "the weakened subterm");
        const ProofLine* s1 = sub_arg(rs, 1);
        const ProofLine* s2 = sub_arg(rs, 2);
        expect(equal(sub_single_hyp(s1), replace_at(host, path, psi)),
               "the first subproof must assume the premise with the occurrence unweakened");
        expect(equal(sub_single_hyp(s2), replace_at(host, path, bot())),
               "the second subproof must assume the premise with the occurrence replaced "
               "by bot");
        expect(equal(sub_conclusion(s1), C) && equal(sub_conclusion(s2), C),
               "both subproofs must conclude the conclusion");
        return;
    }
    case Rule::NegOE: {
        need_refs(rs, 1, "NegOE");
        check_two_way(
            formula_arg(rs, 0), C, L.aux,
            [](const FPtr& p, const FPtr& c) {
                return p->kind == Conn::Neg && p->a->kind == Conn::Oslash &&
                       c->kind == Conn::Neg && equal(c->a, p->a->a);
            },
            [](const FPtr& p, const FPtr& c) {
                return c->kind == Conn::Neg && c->a->kind == Conn::Oslash &&
                       p->kind == Conn::Neg && equal(p->a, c->a->a);
            },
            "~@phi == ~phi");
        return;
    }
    case Rule::DiaOE:
    case Rule::BoxOE: {
        const bool is_dia = L.rule == Rule::DiaOE;
        need_refs(rs, 1, is_dia ? "DiaOE" : "BoxOE");
        const FPtr p = formula_arg(rs, 0);
        expect_kind(p, is_dia ? Conn::Dia : Conn::Box, "the premise");
        const FPtr host = p->a;
        const Path path = need_path(L.aux, L.rule);
        check_occurrence_distributive(host, path);
        const FPtr occ = node_at(host, path);
        expect_kind(occ, Conn::Oslash, "the subterm addressed by aux.path");
        const FPtr psi = occ->a;
        check_aux_psi(L.aux, psi, "the weakened subterm");
        const FPtr lhs = replace_at(host, path, psi);
        const FPtr rhs = replace_at(host, path, bot());
        const Conn wrap = is_dia ? Conn::Dia : Conn::Box;
        expect(C->kind == Conn::Or && C->a->kind == wrap && C->b->kind == wrap &&
                   equal(C->a->a, lhs) && equal(C->b->a, rhs),
               "conclusion must split the occurrence into its plain and bot variants "
               "under the modality");
        return;
    }
    case Rule::BotNeTrs: {
        need_refs(rs, 3, "BotNeTrs");
        const FPtr host = formula_arg(rs, 0);
        const Path path = need_path(L.aux, Rule::BotNeTrs);
        check_occurrence_distributive(host, path);
        const FPtr psi = node_at(host, path);
        check_aux_psi(L.aux, psi, "the marked subterm");
        const ProofLine* s1 = sub_arg(rs, 1);
        const ProofLine* s2 = sub_arg(rs, 2);
        expect(equal(sub_single_hyp(s1), replace_at(host, path, conj(psi, ne()))),
               "the first subproof must assume the premise with the occurrence "
               "strengthened by NE");
        expect(equal(sub_single_hyp(s2), replace_at(host, path, conj(psi, bot()))),
               "the second subproof must assume the premise with the occurrence "
               "conjoined with bot");
        expect(equal(sub_conclusion(s1), C) && equal(sub_conclusion(s2), C),
               "both subproofs must conclude the conclusion");
        return;
    }
    case Rule::DiaBotNeTrs:
    case Rule::BoxBotNeTrs: {
        const bool is_dia = L.rule == Rule::DiaBotNeTrs;
        need_refs(rs, 1, is_dia ? "DiaBotNeTrs" : "BoxBotNeTrs");
        const FPtr p = formula_arg(rs, 0);
        expect_kind(p, is_dia ? Conn::Dia : Conn::Box, "the premise");
        const FPtr host = p->a;
        const Path path = need_path(L.aux, L.rule);
        check_occurrence_distributive(host, path);
        const FPtr psi = node_at(host, path);
        check_aux_psi(L.aux, psi, "the marked subterm");
        const FPtr lhs = replace_at(host, path, conj(psi, ne()));
        const FPtr rhs = replace_at(host, path, conj(psi, bot()));
        const Conn wrap = is_dia ? Conn::Dia : Conn::Box;
        expect(C->kind == Conn::Or && C->a->kind == wrap && C->b->kind == wrap &&
                   equal(C->a->a, lhs) && equal(C->b->a, rhs),
               "conclusion must split the occurrence into its NE and bot variants under "
               "the modality");
        return;
    }
    case Rule::Reit: {
        need_refs(rs, 1, "Reit");
        expect(equal(C, formula_arg(rs, 0)), "conclusion must repeat the cited formula");
        return;
    }
    }
    fail(CheckCode::WrongPremiseShape, "unhandled rule");
}

struct Walker {
    const Proof& proof;
    const Index& ix;
    CheckReport& rep;

    void check_line(const ProofLine& line, const Ctx& ctx) {
        try {
            if (!rule_in_system(line.rule, proof.system))
                fail(CheckCode::RuleNotInSystem, "rule " + rule_name(line.rule) +
                                                     " is not part of " +
                                                     system_name(proof.system));
            LineView v{line, {}};
            v.rs.reserve(line.refs.size());
            for (int r : line.refs)
                v.rs.push_back(resolve(ctx, r));
            check_rule_body(ix, proof.system, v);
        } catch (const RuleErr& e) {
            rep.errors.push_back({line.id, e.code, e.detail});
        }
    }

    void walk(const std::vector<ProofLine>& lines, Ctx ctx) {
        for (const auto& line : lines) {
            ctx.line_id = line.id;
            if (line.is_subproof) {
                Ctx inner = ctx;
                inner.open.push_back(line.id);
                walk(line.body, inner);
            } else {
                check_line(line, ctx);
            }
        }
    }
};

} // namespace

CheckReport check_proof(const Proof& p) {
    for (std::size_t i = 0; i < p.premises.size(); ++i)
        check_tier(p.premises[i], p.system, "premise " + std::to_string(i));
    check_tier(p.conclusion, p.system, "conclusion");
    check_tier_block(p.lines, p.system);
    if (!p.conclusion)
        throw InputError("proof needs a conclusion");

    const Index ix = build_index(p);
    CheckReport rep;
    Ctx ctx;
    ctx.ix = &ix;
    Walker{p, ix, rep}.walk(p.lines, ctx);

    if (p.lines.empty() || p.lines.back().is_subproof) {
        rep.errors.push_back({p.lines.empty() ? -1 : p.lines.back().id,
                              CheckCode::WrongPremiseShape,
                              "the proof must end in a formula line matching the conclusion"});
    } else if (!equal(p.lines.back().formula, p.conclusion)) {
        rep.errors.push_back({p.lines.back().id, CheckCode::WrongPremiseShape,
                              "the final line (" + print_formula(p.lines.back().formula) +
                                  ") does not match the claimed conclusion (" +
                                  print_formula(p.conclusion) + ")"});
    }
    std::stable_sort(rep.errors.begin(), rep.errors.end(),
                     [](const CheckError& a, const CheckError& b) { return a.line < b.line; });
    rep.accepted = rep.errors.empty();
    return rep;
}

std::vector<FPtr> undischarged_assumptions(const Proof& p, int line_id) {
    const Index ix = build_index(p);
    const Index::Info* start = ix.find(line_id);
    if (!start)
        throw InputError("no line with id " + std::to_string(line_id));

    std::map<int, FPtr> assumptions;
    std::set<std::pair<int, bool>> visited; // (id, used-as-hypothesis)
    // Worklist of (citing line, referenced id): the citing side decides
    // whether a shared subproof/hypothesis id means the open hypothesis
    // (cited from inside) or the discharged subproof (cited from outside).
    std::vector<std::pair<int, int>> work;

    auto push_refs_of = [&](int id, const ProofLine* line) {
        for (int r : line->refs)
            work.emplace_back(id, r);
    };
    auto push_imports_of = [&](const ProofLine* sub) {
        // Recurse through the subproof body and forward its outside
        // references together with their citing lines.
        struct Rec {
            const Index& ix;
            int lo, hi;
            std::vector<std::pair<int, int>>& work;
            void run(const std::vector<ProofLine>& body) {
                for (const auto& line : body) {
                    if (line.is_subproof) {
                        run(line.body);
                    } else {
                        for (int r : line.refs)
                            if (r < lo || r > hi)
                                work.emplace_back(line.id, r);
                    }
                }
            }
        };
        Rec{ix, sub->id, ix.info.at(sub->id).max_id, work}.run(sub->body);
    };

    switch (start->kind) {
    case Index::Info::Premise:
    case Index::Info::Hyp:
        assumptions.emplace(line_id, start->formula);
        break;
    case Index::Info::Derived:
        push_refs_of(line_id, start->line);
        break;
    case Index::Info::Sub:
        push_imports_of(start->line);
        break;
    }

    while (!work.empty()) {
        const auto [citing, id] = work.back();
        work.pop_back();
        const Index::Info* info = ix.find(id);
        if (!info)
            continue; // unresolvable references are scope errors, not assumptions
        const bool hyp_use =
            info->kind == Index::Info::Hyp ||
            (info->kind == Index::Info::Sub && info->also_hyp && ix.inside(citing, id));
        if (!visited.insert({id, hyp_use}).second)
            continue;
        switch (info->kind) {
        case Index::Info::Premise:
            assumptions.emplace(id, info->formula);
            break;
        case Index::Info::Hyp:
            assumptions.emplace(id, info->formula);
            break;
        case Index::Info::Derived:
            push_refs_of(id, info->line);
            break;
        case Index::Info::Sub:
            if (hyp_use)
                assumptions.emplace(id, info->hyp_formula);
            else
                push_imports_of(info->line);
            break;
        }
    }

    std::vector<FPtr> out;
    out.reserve(assumptions.size());
    for (const auto& kv : assumptions)
        out.push_back(kv.second);
    return out;
}

// --- rule schemas -------------------------------------------------------------

RuleSchema instantiate_rule(Rule r, const Aux& aux) {
    const std::string psi = aux.psi ? print_formula(aux.psi) : "psi";
    auto at_path = [&]() -> std::string {
        if (!aux.path)
            throw InputError("missing-aux: rule " + rule_name(r) +
                             " needs aux.path for its marked occurrence");
        std::string s = "[";
        for (std::size_t i = 0; i < aux.path->size(); ++i)
            s += (i ? "," : "") + std::to_string((*aux.path)[i]);
        return s + "]";
    };
    RuleSchema s;
    s.name = rule_name(r);
    switch (r) {
    case Rule::AndI:
        s.premises = {"phi", "psi"};
        s.conclusion = "phi & psi";
        break;
    case Rule::AndEL:
        s.premises = {"phi & psi"};
        s.conclusion = "phi";
        break;
    case Rule::AndER:
        s.premises = {"phi & psi"};
        s.conclusion = "psi";
        break;
    case Rule::NegI:
        s.subproofs = {"[alpha] ... bot"};
        s.conclusion = "~alpha";
        s.side_conditions = {"alpha is classical",
                             "the subproof imports no formula containing NE"};
        break;
    case Rule::NegE:
        s.premises = {"alpha", "~alpha"};
        s.conclusion = "beta";
        s.side_conditions = {"alpha and beta are classical"};
        break;
    case Rule::NegNegE:
        s.premises = {"~~phi"};
        s.conclusion = "phi";
        break;
    case Rule::NegNegI:
        s.premises = {"phi"};
        s.conclusion = "~~phi";
        break;
    case Rule::DMAnd:
        s.premises = {"~(phi & psi)"};
        s.conclusion = "~phi | ~psi";
        s.side_conditions = {"two-way; aux.dir selects the direction"};
        break;
    case Rule::DMOr:
        s.premises = {"~(phi | psi)"};
        s.conclusion = "~phi & ~psi";
        s.side_conditions = {"two-way; aux.dir selects the direction"};
        break;
    case Rule::NegNeE:
        s.premises = {"~NE"};
        s.conclusion = "bot";
        s.side_conditions = {"two-way; aux.dir selects the direction"};
        break;
    case Rule::OrI:
        s.premises = {"phi"};
        s.conclusion = "phi | " + psi;
        s.side_conditions = {"the introduced disjunct is NE-free"};
        break;
    case Rule::OrW:
        s.premises = {"phi"};
        s.conclusion = "phi | phi";
        break;
    case Rule::ComOr:
        s.premises = {"phi | psi"};
        s.conclusion = "psi | phi";
        break;
    case Rule::OrE:
        s.premises = {"phi | psi"};
        s.subproofs = {"[phi] ... chi", "[psi] ... chi"};
        s.conclusion = "chi";
        s.side_conditions = {"the subproofs import no formula containing NE",
                             "chi contains no global disjunction"};
        break;
    case Rule::OrMon:
        s.premises = {"phi | psi"};
        s.subproofs = {"[psi] ... chi"};
        s.conclusion = "phi | chi";
        s.side_conditions = {"the subproof imports no formula containing NE"};
        break;
    case Rule::BotE:
        s.premises = {"bot | phi"};
        s.conclusion = "phi";
        break;
    case Rule::BotCtr:
        s.premises = {"Bot | phi"};
        s.conclusion = "psi";
        s.side_conditions = {"the head may also be the unfolding bot & NE"};
        break;
    case Rule::DiaMon:
        s.subproofs = {"[phi] ... psi"};
        s.premises = {"<>phi"};
        s.conclusion = "<>psi";
        s.side_conditions = {"the subproof imports nothing"};
        break;
    case Rule::BoxMon:
        s.subproofs = {"[phi_1, ..., phi_n] ... psi"};
        s.premises = {"[]phi_1", "...", "[]phi_n"};
        s.conclusion = "[]psi";
        s.side_conditions = {"the subproof imports nothing", "n may be zero"};
        break;
    case Rule::InterDiaBox:
        s.premises = {"~<>phi"};
        s.conclusion = "[]~phi";
        s.side_conditions = {"two-way; aux.dir selects the direction"};
        break;
    case Rule::DiaSep:
        s.premises = {"<>(phi | (psi & NE))"};
        s.conclusion = "<>psi";
        break;
    case Rule::DiaJoin:
        s.premises = {"<>phi", "<>psi"};
        s.conclusion = "<>(phi | psi)";
        break;
    case Rule::BoxInst:
        s.premises = {"[](phi & NE)"};
        s.conclusion = "<>phi";
        break;
    case Rule::BoxDiaJoin:
        s.premises = {"[]phi", "<>psi"};
        s.conclusion = "[](phi | psi)";
        break;
    case Rule::GOrIL:
        s.premises = {"phi"};
        s.conclusion = "phi \\/ " + psi;
        break;
    case Rule::GOrIR:
        s.premises = {"phi"};
        s.conclusion = psi + " \\/ phi";
        break;
    case Rule::GOrE:
        s.premises = {"phi \\/ psi"};
        s.subproofs = {"[phi] ... chi", "[psi] ... chi"};
        s.conclusion = "chi";
        break;
    case Rule::DistrOrGOr:
        s.premises = {"phi | (psi \\/ chi)"};
        s.conclusion = "(phi | psi) \\/ (phi | chi)";
        break;
    case Rule::DMGOr:
        s.premises = {"~(phi \\/ psi)"};
        s.conclusion = "~phi & ~psi";
        s.side_conditions = {"two-way; aux.dir selects the direction"};
        break;
    case Rule::NeI:
        s.conclusion = "bot \\/ NE";
        break;
    case Rule::ConvDiaGOrOr:
        s.premises = {"<>(phi \\/ psi)"};
        s.conclusion = "<>phi | <>psi";
        s.side_conditions = {"two-way; aux.dir selects the direction"};
        break;
    case Rule::ConvBoxGOrOr:
        s.premises = {"[](phi \\/ psi)"};
        s.conclusion = "[]phi | []psi";
        s.side_conditions = {"two-way; aux.dir selects the direction"};
        break;
    case Rule::ONeI:
        s.conclusion = "@NE";
        break;
    case Rule::OIFromBot:
        s.premises = {"bot"};
        s.conclusion = "@" + psi;
        break;
    case Rule::OIFromPhi:
        s.premises = {"phi"};
        s.conclusion = "@phi";
        break;
    case Rule::OE:
        s.premises = {"phi with @" + psi + " at " + at_path()};
        s.subproofs = {"[phi[" + psi + " for @" + psi + "]] ... chi",
                       "[phi[bot for @" + psi + "]] ... chi"};
        s.conclusion = "chi";
        s.side_conditions = {"the occurrence is not under ~, <> or []"};
        break;
    case Rule::NegOE:
        s.premises = {"~@phi"};
        s.conclusion = "~phi";
        s.side_conditions = {"two-way; aux.dir selects the direction"};
        break;
    case Rule::DiaOE:
        s.premises = {"<>phi with @" + psi + " at " + at_path()};
        s.conclusion = "<>phi[" + psi + " for @" + psi + "] | <>phi[bot for @" + psi + "]";
        s.side_conditions = {"the occurrence is not under ~, <> or []"};
        break;
    case Rule::BoxOE:
        s.premises = {"[]phi with @" + psi + " at " + at_path()};
        s.conclusion = "[]phi[" + psi + " for @" + psi + "] | []phi[bot for @" + psi + "]";
        s.side_conditions = {"the occurrence is not under ~, <> or []"};
        break;
    case Rule::BotNeTrs:
        s.premises = {"phi with " + psi + " at " + at_path()};
        s.subproofs = {"[phi[(" + psi + " & NE) for " + psi + "]] ... chi",
                       "[phi[(" + psi + " & bot) for " + psi + "]] ... chi"};
        s.conclusion = "chi";
        s.side_conditions = {"the occurrence is not under ~, <> or []"};
        break;
    case Rule::DiaBotNeTrs:
        s.premises = {"<>phi with " + psi + " at " + at_path()};
        s.conclusion =
            "<>phi[(" + psi + " & NE) for " + psi + "] | <>phi[(" + psi + " & bot) for " + psi + "]";
        s.side_conditions = {"the occurrence is not under ~, <> or []"};
        break;
    case Rule::BoxBotNeTrs:
        s.premises = {"[]phi with " + psi + " at " + at_path()};
        s.conclusion =
            "[]phi[(" + psi + " & NE) for " + psi + "] | []phi[(" + psi + " & bot) for " + psi + "]";
        s.side_conditions = {"the occurrence is not under ~, <> or []"};
        break;
    case Rule::Reit:
        s.premises = {"phi"};
        s.conclusion = "phi";
        break;
    }
    return s;
}

// --- JSON codec ---------------------------------------------------------------

namespace {
FPtr parse_field(const nlohmann::json& j, const std::string& where) {
    if (!j.is_string())
        throw InputError("proof JSON: " + where + " must be a formula string");
    try {
        return parse_formula(j.get<std::string>());
    } catch (const ParseError& e) {
        throw InputError("proof JSON: " + where + ": " + e.what());
    }
}

int int_field(const nlohmann::json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<long long>() < 0)
        throw InputError("proof JSON: " + where + " must be a nonnegative integer");
    return static_cast<int>(j.get<long long>());
}

Aux aux_from_json(const nlohmann::json& j, const std::string& where) {
    Aux aux;
    if (!j.is_object())
        throw InputError("proof JSON: " + where + ".aux must be an object");
    for (const auto& kv : j.items()) {
        if (kv.key() == "path") {
            if (!kv.value().is_array())
                throw InputError("proof JSON: " + where + ".aux.path must be an array");
            Path path;
            for (const auto& e : kv.value())
                path.push_back(int_field(e, where + ".aux.path entry"));
            aux.path = std::move(path);
        } else if (kv.key() == "psi") {
            aux.psi = parse_field(kv.value(), where + ".aux.psi");
        } else if (kv.key() == "dir") {
            if (kv.value() == "fwd")
                aux.reversed = false;
            else if (kv.value() == "rev")
                aux.reversed = true;
            else
                throw InputError("proof JSON: " + where + ".aux.dir must be \"fwd\" or \"rev\"");
        } else {
            throw InputError("proof JSON: unknown key \"" + kv.key() + "\" in " + where +
                             ".aux");
        }
    }
    return aux;
}

ProofLine line_from_json(const nlohmann::json& j, const std::string& where);

std::vector<ProofLine> lines_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_array())
        throw InputError("proof JSON: " + where + " must be an array");
    std::vector<ProofLine> out;
    int i = 0;
    for (const auto& e : j)
        out.push_back(line_from_json(e, where + "[" + std::to_string(i++) + "]"));
    return out;
}

ProofLine line_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object())
        throw InputError("proof JSON: " + where + " must be an object");
    ProofLine line;
    const bool derived = j.contains("formula");
    const bool single_hyp = j.contains("hypothesis");
    const bool multi_hyp = j.contains("hypotheses");
    if (derived + single_hyp + multi_hyp != 1)
        throw InputError("proof JSON: " + where +
                         " must have exactly one of formula / hypothesis / hypotheses");

    for (const auto& kv : j.items()) {
        const auto& key = kv.key();
        const bool ok =
            key == "id" ||
            (derived && (key == "formula" || key == "rule" || key == "refs" || key == "aux")) ||
            (single_hyp && (key == "hypothesis" || key == "lines")) ||
            (multi_hyp && (key == "hypotheses" || key == "hyp_ids" || key == "lines"));
        if (!ok)
            throw InputError("proof JSON: unknown key \"" + key + "\" in " + where);
    }
    if (!j.contains("id"))
        throw InputError("proof JSON: " + where + " needs an id");
    line.id = int_field(j.at("id"), where + ".id");

    if (derived) {
        line.formula = parse_field(j.at("formula"), where + ".formula");
        if (!j.contains("rule") || !j.at("rule").is_string())
            throw InputError("proof JSON: " + where + " needs a rule name");
        const auto rname = j.at("rule").get<std::string>();
        const auto rule = rule_from_name(rname);
        if (!rule)
            throw InputError("proof JSON: " + where + ": unknown rule \"" + rname + "\"");
        line.rule = *rule;
        if (j.contains("refs")) {
            if (!j.at("refs").is_array())
                throw InputError("proof JSON: " + where + ".refs must be an array");
            for (const auto& e : j.at("refs"))
                line.refs.push_back(int_field(e, where + ".refs entry"));
        }
        if (j.contains("aux"))
            line.aux = aux_from_json(j.at("aux"), where);
        return line;
    }

    line.is_subproof = true;
    if (single_hyp) {
        line.hypotheses.push_back(parse_field(j.at("hypothesis"), where + ".hypothesis"));
        line.hyp_ids.push_back(line.id);
    } else {
        if (!j.at("hypotheses").is_array())
            throw InputError("proof JSON: " + where + ".hypotheses must be an array");
        int i = 0;
        for (const auto& e : j.at("hypotheses"))
            line.hypotheses.push_back(
                parse_field(e, where + ".hypotheses[" + std::to_string(i++) + "]"));
        if (j.contains("hyp_ids")) {
            if (!j.at("hyp_ids").is_array())
                throw InputError("proof JSON: " + where + ".hyp_ids must be an array");
            for (const auto& e : j.at("hyp_ids"))
                line.hyp_ids.push_back(int_field(e, where + ".hyp_ids entry"));
            if (line.hyp_ids.size() != line.hypotheses.size())
                throw InputError("proof JSON: " + where +
                                 ".hyp_ids must match hypotheses in length");
        } else if (line.hypotheses.size() == 1) {
            line.hyp_ids.push_back(line.id);
        } else if (!line.hypotheses.empty()) {
            throw InputError("proof JSON: " + where +
                             " with several hypotheses needs hyp_ids");
        }
    }
    if (!j.contains("lines"))
        throw InputError("proof JSON: " + where + " needs a body under \"lines\"");
    line.body = lines_from_json(j.at("lines"), where + ".lines");
    return line;
}
} // namespace

Proof proof_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw InputError("proof JSON: top level must be an object");
    for (const auto& kv : j.items())
        if (kv.key() != "system" && kv.key() != "premises" && kv.key() != "lines" &&
            kv.key() != "conclusion")
            throw InputError("proof JSON: unknown key \"" + kv.key() + "\"");
    for (const char* key : {"system", "premises", "lines", "conclusion"})
        if (!j.contains(key))
            throw InputError(std::string("proof JSON: missing key \"") + key + "\"");

    Proof p;
    if (!j.at("system").is_string())
        throw InputError("proof JSON: system must be a string");
    const auto sys = system_from_name(j.at("system").get<std::string>());
    if (!sys)
        throw InputError("proof JSON: unknown system \"" +
                         j.at("system").get<std::string>() + "\"");
    p.system = *sys;
    if (!j.at("premises").is_array())
        throw InputError("proof JSON: premises must be an array");
    int i = 0;
    for (const auto& e : j.at("premises"))
        p.premises.push_back(parse_field(e, "premises[" + std::to_string(i++) + "]"));
    p.lines = lines_from_json(j.at("lines"), "lines");
    p.conclusion = parse_field(j.at("conclusion"), "conclusion");
    return p;
}

nlohmann::json check_report_to_json(const CheckReport& rep) {
    nlohmann::json j;
    j["accepted"] = rep.accepted;
    auto errors = nlohmann::json::array();
    for (const auto& e : rep.errors)
        errors.push_back({{"line", e.line},
                          {"code", check_code_name(e.code)},
                          {"detail", e.detail}});
    j["errors"] = std::move(errors);
    return j;
}

} // namespace teamlogic
