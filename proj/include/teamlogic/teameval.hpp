#pragma once

#include <memory>
#include <vector>

#include "teamlogic/formula.hpp"
#include "teamlogic/kripke.hpp"

namespace teamlogic {

// Bilateral evaluation on teams of one model. The evaluator memoizes
// per-(subformula, team, polarity) results, so repeated queries over the
// same model — many teams, shared subterms — reuse work. Formulas must stay
// within the model's signature (SignatureError otherwise); models are
// limited to 64 worlds.
class Evaluator {
public:
    explicit Evaluator(const Model& m);
    ~Evaluator();
    Evaluator(const Evaluator&) = delete;
    Evaluator& operator=(const Evaluator&) = delete;

    bool supports(State s, const FPtr& f);
    bool antisupports(State s, const FPtr& f);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

bool supports(const Model& m, State s, const FPtr& f);
bool antisupports(const Model& m, State s, const FPtr& f);

// Local consequence on one model: every team supporting all premises
// supports the conclusion. Checks all 2^|worlds| teams; models beyond 24
// worlds are rejected with BudgetError.
bool entails_on(const Model& m, const std::vector<FPtr>& premises, const FPtr& conclusion);

// Closure behaviour of a formula's support set on one model, each flag
// checked exhaustively over all teams. Flatness is checked against its own
// definition (support equals pointwise singleton support); it coincides
// with the conjunction of the other three flags.
struct ClosureReport {
    bool downward = false;
    bool union_closed = false;
    bool empty_state = false;
    bool flat = false;
};
ClosureReport closure_report(const Model& m, const FPtr& f);

} // namespace teamlogic
