#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamlogic/formula.hpp"

namespace teamlogic {

// The three calculi. They share the core boxes; BSMLI adds the global
// disjunction rules, BSMLO the weak-reading rules, BSML the
// contradiction/NE translation rules. Each system is restricted to its own
// language tier: BSML has neither \/ nor @, BSMLI has no @, BSMLO has no \/.
enum class System { BSML, BSMLO, BSMLI };

std::string system_name(System s);
std::optional<System> system_from_name(const std::string& name);

enum class Rule {
    AndI, AndEL, AndER,
    NegI, NegE, NegNegE, NegNegI, DMAnd, DMOr, NegNeE,
    OrI, OrW, ComOr, OrE, OrMon,
    BotE, BotCtr,
    DiaMon, BoxMon, InterDiaBox,
    DiaSep, DiaJoin, BoxInst, BoxDiaJoin,
    GOrIL, GOrIR, GOrE, DistrOrGOr, DMGOr, NeI, ConvDiaGOrOr, ConvBoxGOrOr,
    ONeI, OIFromBot, OIFromPhi, OE, NegOE, DiaOE, BoxOE,
    BotNeTrs, DiaBotNeTrs, BoxBotNeTrs,
    Reit,
};

std::string rule_name(Rule r);
std::optional<Rule> rule_from_name(const std::string& name);
bool rule_in_system(Rule r, System s);

// Rule-specific payload: the occurrence path for the substitution rules
// (and the premise position for disjunction introduction), the substituted
// formula, and the direction for the two-way rules (reversed = right to
// left; when absent both directions are tried).
struct Aux {
    std::optional<Path> path;
    FPtr psi;
    std::optional<bool> reversed;
};

// One step of a Fitch-style proof: either a derived formula with a rule and
// references, or a nested subproof. References address premises (implicit
// ids 0..n-1), earlier formula lines in scope, hypotheses of enclosing
// subproofs, or — as rule arguments — earlier sibling subproofs. A
// single-hypothesis subproof shares its id with its hypothesis; zero- or
// multi-hypothesis subproofs list hyp_ids separately.
struct ProofLine {
    int id = -1;
    bool is_subproof = false;
    // derived line
    FPtr formula;
    Rule rule = Rule::Reit;
    std::vector<int> refs;
    Aux aux;
    // subproof
    std::vector<FPtr> hypotheses;
    std::vector<int> hyp_ids;
    std::vector<ProofLine> body;
};

struct Proof {
    System system = System::BSML;
    std::vector<FPtr> premises;
    std::vector<ProofLine> lines;
    FPtr conclusion;
};

enum class CheckCode {
    WrongPremiseShape,
    SideConditionViolated,
    RuleNotInSystem,
    ScopeViolation,
    OccurrenceNotDistributive,
    MetavariableNotClassical,
};

std::string check_code_name(CheckCode c);

struct CheckError {
    int line = -1;
    CheckCode code = CheckCode::WrongPremiseShape;
    std::string detail;
};

struct CheckReport {
    bool accepted = false;
    std::vector<CheckError> errors;
};

// Checks every line and the final conclusion; collects one diagnostic per
// failing line. Structural problems (ids out of order, formulas outside the
// system's language tier) throw InputError instead.
CheckReport check_proof(const Proof& p);

// The open assumptions (premises and in-scope hypotheses) transitively used
// by the derivation of the given line, in id order. Hypotheses of subproofs
// cited as discharged rule arguments do not count; lines imported into such
// subproofs from outside do.
std::vector<FPtr> undischarged_assumptions(const Proof& p, int line_id);

// Human-readable shape of a rule, with metavariables phi/psi/chi/alpha/beta
// and aux data substituted where given. Rules built around a marked
// occurrence need aux.path (InputError otherwise); a missing aux.psi is
// rendered as the metavariable "psi".
struct RuleSchema {
    std::string name;
    std::vector<std::string> premises;
    std::vector<std::string> subproofs;
    std::string conclusion;
    std::vector<std::string> side_conditions;
};
RuleSchema instantiate_rule(Rule r, const Aux& aux = {});

// Strict JSON codec for proofs; unknown keys and malformed fields raise
// InputError with the offending location.
Proof proof_from_json(const nlohmann::json& j);
nlohmann::json check_report_to_json(const CheckReport& rep);

} // namespace teamlogic
