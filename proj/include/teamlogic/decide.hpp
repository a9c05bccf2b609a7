#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamlogic/formula.hpp"
#include "teamlogic/hintikka.hpp"
#include "teamlogic/kripke.hpp"

namespace teamlogic {

// Outcome of a validity / entailment query. Countermodels are fully
// replayable: the model plus the failing team. `states_checked` counts the
// candidate teams examined in deterministic order, up to and including the
// hit; `bound` is the world bound of an inconclusive bounded search.
struct Verdict {
    enum class Status { Valid, Countermodel, Inconclusive };
    Status status = Status::Inconclusive;
    std::string engine;
    std::uint64_t models_checked = 0;
    std::uint64_t states_checked = 0;
    std::optional<Model> model;
    State state = 0;
    std::uint64_t bound = 0;

    bool valid() const { return status == Status::Valid; }
    bool found_countermodel() const { return status == Status::Countermodel; }
};

nlohmann::json verdict_to_json(const Verdict& v);

// Complete decision via the canonical model: the entailment holds on all
// models iff it holds on every root team of the depth-k canonical model
// over the joint signature. Depth and signature default to what the
// formulas need. Refuses with BudgetError when the canonical model or its
// root-team count exceeds the budget.
Verdict entails_canonical(const std::vector<FPtr>& premises, const FPtr& conclusion,
                          std::optional<std::vector<std::string>> sig = {},
                          std::optional<int> k = {}, const Budget& budget = Budget::from_env());

// Sound refutation search: enumerates every model with up to max_worlds
// worlds over the joint signature and every team, in deterministic order,
// reporting the first countermodel. With jobs > 1 the model space is
// scanned in parallel; the reported countermodel is still the first one.
Verdict refute_bounded(const std::vector<FPtr>& premises, const FPtr& conclusion, int max_worlds,
                       std::optional<std::vector<std::string>> sig = {}, int jobs = 1);

enum class EquivMode { Support, Strong };

struct DecideOptions {
    std::string engine = "canonical"; // "canonical" or "bounded"
    int max_worlds = 3;               // bounded engine
    int jobs = 1;                     // bounded engine
    std::optional<std::vector<std::string>> sig;
    std::optional<int> k; // canonical engine
    Budget budget = Budget::from_env();
};

// Equivalence as mutual entailment; Strong mode additionally checks the
// negations both ways, so it decides equivalence of support and
// anti-support together. Returns the first countermodel found.
Verdict equivalent(const FPtr& lhs, const FPtr& rhs, EquivMode mode,
                   const DecideOptions& options = {});

// Entailment through the engine selected in `options`.
Verdict decide_entails(const std::vector<FPtr>& premises, const FPtr& conclusion,
                       const DecideOptions& options = {});

} // namespace teamlogic
