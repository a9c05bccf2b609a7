#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "teamlogic/kripke.hpp"

namespace teamlogic {

// Depth-indexed world partition of one model: level 0 groups worlds by
// their valuation on the chosen signature, level j+1 refines level j by the
// set of level-j classes reachable in one step. Two worlds are
// k-bisimilar exactly when they share a level-k class; ids are dense and
// assigned by first occurrence in world order.
struct TypePartition {
    int k = 0;
    std::vector<std::vector<int>> ids; // ids[level][world], level 0..k
    std::vector<int> num_classes;      // class count per level
    // First level whose partition already equals the previous one; from
    // there on the chain is constant. k+1 when no fixpoint was reached.
    int stable_from = 0;

    int type_of(int level, int world) const { return ids[level][world]; }
};

// Signature must be contained in the model's; defaults to all of it.
TypePartition k_types(const Model& m, int k);
TypePartition k_types(const Model& m, int k, const std::set<std::string>& sig);

// k-bisimilarity of two pointed worlds / two teams, possibly across
// models; computed on the disjoint union. The signature defaults to the
// union of both models' signatures and may be restricted.
bool world_bisim(const Model& m1, const std::string& w1, const Model& m2, const std::string& w2,
                 int k, const std::optional<std::set<std::string>>& sig = {});
bool state_bisim(const Model& m1, State s1, const Model& m2, State s2, int k,
                 const std::optional<std::set<std::string>>& sig = {});

} // namespace teamlogic
