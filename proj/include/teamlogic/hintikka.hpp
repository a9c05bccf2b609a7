#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "teamlogic/formula.hpp"
#include "teamlogic/kripke.hpp"

namespace teamlogic {

// Resource limits for canonical-model construction and root-state
// iteration. The environment variable TEAMLOGIC_BUDGET ("W" or "W,S")
// overrides the defaults.
struct Budget {
    std::uint64_t max_worlds = 20000;
    std::uint64_t max_state_iters = std::uint64_t{1} << 20;
    static Budget from_env();
};

// The depth-k canonical model over a signature: layer 0 has one world per
// valuation, layer j+1 one world per (valuation, set of layer-j worlds)
// pair, with edges to exactly that set. The top layer realizes every
// k-type of every pointed model exactly once; its worlds are the roots.
struct CanonicalModel {
    Model model;
    std::vector<int> roots;       // world indices of the top layer
    std::vector<std::string> sig; // sorted signature used
    int k = 0;
};
CanonicalModel canonical_model(const std::vector<std::string>& sig, int k,
                               const Budget& budget = Budget::from_env());

// Depth-k Hintikka formula of a world: its literal description refined by
// the diamonds of its successor types and a box over their disjunction.
// Successor contributions are deduplicated up to k-bisimilarity and
// canonically ordered. The signature may restrict the model's.
FPtr chi_world(const Model& m, int world, int k, const std::vector<std::string>& sig);
// Team versions: the disjunction of the member worlds' formulas, and the
// support-exact variant with NE conjoined to each disjunct. The empty team
// yields bot.
FPtr chi_state(const Model& m, State s, int k, const std::vector<std::string>& sig);
FPtr theta_state(const Model& m, State s, int k, const std::vector<std::string>& sig);

// Normal forms via the canonical model: the disjunction / global
// disjunction / weakened disjunction of the formulas of the supporting
// root teams. Depth defaults to the formula's modal depth, the signature
// to its propositions. nf_ml requires a classical input, nf_bsmlo an input
// without global disjunction.
FPtr nf_ml(const FPtr& alpha, std::optional<int> k = {},
           std::optional<std::vector<std::string>> sig = {},
           const Budget& budget = Budget::from_env());
FPtr nf_bsmli(const FPtr& phi, std::optional<int> k = {},
              std::optional<std::vector<std::string>> sig = {},
              const Budget& budget = Budget::from_env());
FPtr nf_bsmlo(const FPtr& phi, std::optional<int> k = {},
              std::optional<std::vector<std::string>> sig = {},
              const Budget& budget = Budget::from_env());

// Characteristic formula of an explicitly listed property (a finite set of
// pointed models), after deduplication up to k-bisimilarity across the
// whole list. Nu disjoins the teams' chi formulas, Xi globally disjoins
// their theta formulas, Zeta disjoins their weakened theta formulas and
// conjoins NE when no empty team is listed.
enum class CharfFlavor { Nu, Xi, Zeta };
FPtr charf_of_property(const std::vector<PointedModel>& property, int k,
                       const std::vector<std::string>& sig, CharfFlavor flavor);

} // namespace teamlogic
