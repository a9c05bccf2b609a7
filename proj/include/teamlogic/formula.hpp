#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "teamlogic/errors.hpp"

namespace teamlogic {

// Connectives of the bilateral modal language. `Bot` is the weak
// contradiction (supported exactly by the empty state, surface syntax
// "bot"), `BotStrong` the strong contradiction (never supported, surface
// syntax "Bot"), `Top` the strong tautology (surface syntax "Top").
// `Or` is local (tensor) disjunction "|", `GOr` global disjunction "\/",
// `Oslash` the weak-reading modifier "@".
enum class Conn {
    Atom,
    Ne,
    Bot,
    BotStrong,
    Top,
    Neg,
    Dia,
    Box,
    Oslash,
    And,
    Or,
    GOr,
};

class Formula;
using FPtr = std::shared_ptr<const Formula>;

// Immutable formula node. Subterms are shared; all transforms build fresh
// nodes and never mutate existing ones.
class Formula {
public:
    Conn kind;
    std::string name; // Conn::Atom only
    FPtr a, b;        // unary operand in `a`; binary operands in `a`, `b`

    Formula(Conn k, std::string n, FPtr x, FPtr y)
        : kind(k), name(std::move(n)), a(std::move(x)), b(std::move(y)) {}
};

// A path addresses a subterm by child indices from the root: unary
// connectives have child 0, binary connectives children 0 and 1.
using Path = std::vector<int>;

// --- constructors ---------------------------------------------------------

FPtr atom(std::string name);
FPtr ne();
FPtr bot();        // weak contradiction
FPtr bot_strong(); // strong contradiction
FPtr top();        // strong tautology
FPtr neg(FPtr f);
FPtr dia(FPtr f);
FPtr box(FPtr f);
FPtr oslash(FPtr f);
FPtr conj(FPtr l, FPtr r);
FPtr tensor(FPtr l, FPtr r); // local disjunction |
FPtr gdis(FPtr l, FPtr r);   // global disjunction \/

// Right-nested folds over operand lists. Empty folds produce the unit that
// keeps the intended semantics: an empty conjunction is Top, an empty local
// disjunction is bot, an empty global disjunction is Bot.
FPtr big_and(const std::vector<FPtr>& fs);
FPtr big_or(const std::vector<FPtr>& fs);
FPtr big_gor(const std::vector<FPtr>& fs);

// --- syntax ---------------------------------------------------------------

bool equal(const FPtr& x, const FPtr& y);

// Renders with minimal parentheses: unary binds tighter than "&", which
// binds tighter than "|", which binds tighter than "\/"; binaries are
// left-associative.
std::string print_formula(const FPtr& f);

// Parses the surface syntax accepted by print_formula. Throws ParseError
// with a byte offset and expected-token set on failure.
FPtr parse_formula(std::string_view text);

// Canonical formula ordering: lexicographic on the printed form.
bool canonical_less(const FPtr& x, const FPtr& y);

// Sorts canonically and removes syntactic duplicates.
std::vector<FPtr> sort_unique(std::vector<FPtr> fs);

// --- measures and predicates ------------------------------------------------

int modal_depth(const FPtr& f);
std::set<std::string> props(const FPtr& f);

// NE-freeness counts the strong contradiction as containing NE.
bool is_ne_free(const FPtr& f);
bool is_gdis_free(const FPtr& f);
bool is_oslash_free(const FPtr& f);
// Classical formulas: no NE (hence no strong contradiction), no global
// disjunction, no weak-reading modifier. bot and Top are classical.
bool is_classical(const FPtr& f);

// --- navigation -------------------------------------------------------------

// Subterm at `path`; throws PathError if the path does not address a node.
FPtr node_at(const FPtr& f, const Path& path);

// Replaces the subterm at `path`. Throws PathError on invalid paths.
FPtr replace_at(const FPtr& f, const Path& path, const FPtr& repl);

// True when the occurrence addressed by `path` lies in the scope of no
// negation, diamond, or box (conjunctions and disjunctions above it are
// fine). Used as the side condition of the distributive elimination rules.
bool is_distributive(const FPtr& f, const Path& path);

// --- transforms -------------------------------------------------------------

// Replaces every occurrence of atom `p` by `repl`.
FPtr substitute_all(const FPtr& f, const std::string& p, const FPtr& repl);

// Negation normal form: pushes negation to atoms and NE. Preserves support
// and anti-support when the input has no global disjunction and no
// weak-reading modifier; preserves support in general.
FPtr nnf(const FPtr& f);

// Pragmatic enrichment: conjoins NE at every connective level. Requires a
// classical input; throws InputError otherwise.
FPtr enrich(const FPtr& f);

// Rewrites every box as negation-diamond-negation. Constants are primitive
// and stay as they are.
FPtr expand_defined(const FPtr& f);

} // namespace teamlogic
