#include "teamlogic/teameval.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace teamlogic {

namespace {
// Memo values; Unknown must be zero so fresh storage reads as unknown.
enum : std::uint8_t { Unknown = 0, False = 1, True = 2 };
} // namespace

// Formulas are flattened into an index-based arena (children resolved to
// node ids, atoms to extension masks) so that evaluation does no hashing on
// the hot path. The memo is a dense table for small models and a hash map
// for larger ones.
struct Evaluator::Impl {
    const Model& model;
    int n;
    std::vector<State> succ; // successor set per world, as a mask

    struct Node {
        Conn kind;
        int a = -1, b = -1;
        State ext = 0; // Conn::Atom: extension mask
    };
    std::vector<Node> nodes;
    std::unordered_map<const Formula*, int> index;
    // Keeps every interned formula alive: the index is keyed by node
    // address, so a queried formula must not be freed (and its address
    // reused) while the evaluator can still hand out its memo entries.
    std::vector<FPtr> retained;

    bool dense;
    std::vector<std::uint8_t> memo;                        // dense: [(id*2+pol) << n | mask]
    std::vector<std::unordered_map<State, bool>> memo_big; // sparse: per (id, polarity) slot

    explicit Impl(const Model& m) : model(m), n(m.size()) {
        full_state(m); // enforce the 64-world limit
        succ.assign(n, 0);
        for (int w = 0; w < n; ++w)
            for (int v : m.rel[w])
                succ[w] |= State{1} << v;
        dense = n <= 10;
    }

    int intern(const FPtr& f) {
        if (auto it = index.find(f.get()); it != index.end())
            return it->second;
        Node node;
        node.kind = f->kind;
        switch (f->kind) {
        case Conn::Atom: {
            auto it = model.val.find(f->name);
            if (it == model.val.end())
                throw SignatureError("proposition '" + f->name +
                                     "' is outside the model signature");
            for (int w : it->second)
                node.ext |= State{1} << w;
            break;
        }
        case Conn::Neg:
        case Conn::Dia:
        case Conn::Box:
        case Conn::Oslash:
            node.a = intern(f->a);
            break;
        case Conn::And:
        case Conn::Or:
        case Conn::GOr:
            node.a = intern(f->a);
            node.b = intern(f->b);
            break;
        default:
            break;
        }
        nodes.push_back(node);
        const int id = static_cast<int>(nodes.size()) - 1;
        index.emplace(f.get(), id);
        retained.push_back(f);
        if (dense)
            memo.resize(nodes.size() * 2 << n, Unknown);
        else
            memo_big.resize(nodes.size() * 2);
        return id;
    }

    bool eval(int id, State s, bool pol) {
        const std::uint64_t slot = (static_cast<std::uint64_t>(id) * 2 + (pol ? 1 : 0));
        if (dense) {
            std::uint8_t& cell = memo[slot << n | s];
            if (cell != Unknown)
                return cell == True;
            const bool r = compute(id, s, pol);
            cell = r ? True : False;
            return r;
        }
        auto& slot_memo = memo_big[slot];
        if (auto it = slot_memo.find(s); it != slot_memo.end())
            return it->second;
        const bool r = compute(id, s, pol);
        slot_memo.emplace(s, r);
        return r;
    }

    // Does s split into t and u (t | u == s, overlap allowed) with the left
    // node holding at t and the right at u, under the given polarity?
    bool cover(int left, int right, State s, bool pol) {
        for (State t = s;; t = (t - 1) & s) {
            if (eval(left, t, pol)) {
                const State rest = s & ~t;
                for (State v = t;; v = (v - 1) & t) {
                    if (eval(right, rest | v, pol))
                        return true;
                    if (v == 0)
                        break;
                }
            }
            if (t == 0)
                break;
        }
        return false;
    }

    // Is there a nonempty subteam of r where the node holds?
    bool some_nonempty_sub(int id, State r, bool pol) {
        for (State t = r; t != 0; t = (t - 1) & r) {
            if (eval(id, t, pol))
                return true;
        }
        return false;
    }

    bool compute(int id, State s, bool pol) {
        const Node& nd = nodes[id];
        switch (nd.kind) {
        case Conn::Atom:
            // Support: the atom holds at every world of the team.
            // Anti-support: it fails at every world of the team.
            return pol ? (s & ~nd.ext) == 0 : (s & nd.ext) == 0;
        case Conn::Ne:
            return pol ? s != 0 : s == 0;
        case Conn::Bot:
            return pol ? s == 0 : true;
        case Conn::BotStrong:
            return pol ? false : true;
        case Conn::Top:
            return pol ? true : s == 0;
        case Conn::Neg:
            return eval(nd.a, s, !pol);
        case Conn::And:
            return pol ? eval(nd.a, s, true) && eval(nd.b, s, true)
                       : cover(nd.a, nd.b, s, false);
        case Conn::Or:
            return pol ? cover(nd.a, nd.b, s, true)
                       : eval(nd.a, s, false) && eval(nd.b, s, false);
        case Conn::GOr:
            return pol ? eval(nd.a, s, true) || eval(nd.b, s, true)
                       : eval(nd.a, s, false) && eval(nd.b, s, false);
        case Conn::Dia:
            // Support: every world sees some nonempty subteam of its
            // successors supporting the operand. Anti-support: every
            // world's full successor team anti-supports it.
            for (int w = 0; w < n; ++w) {
                if (!(s >> w & 1))
                    continue;
                if (pol ? !some_nonempty_sub(nd.a, succ[w], true)
                        : !eval(nd.a, succ[w], false))
                    return false;
            }
            return true;
        case Conn::Box:
            // Dual arrangement of the diamond clauses.
            for (int w = 0; w < n; ++w) {
                if (!(s >> w & 1))
                    continue;
                if (pol ? !eval(nd.a, succ[w], true)
                        : !some_nonempty_sub(nd.a, succ[w], false))
                    return false;
            }
            return true;
        case Conn::Oslash:
            // The weak reading adds the empty team to the support set and
            // leaves anti-support untouched.
            return pol ? (s == 0 || eval(nd.a, s, true)) : eval(nd.a, s, false);
        }
        return false;
    }
};

Evaluator::Evaluator(const Model& m) : impl_(std::make_unique<Impl>(m)) {}
Evaluator::~Evaluator() = default;

bool Evaluator::supports(State s, const FPtr& f) { return impl_->eval(impl_->intern(f), s, true); }
bool Evaluator::antisupports(State s, const FPtr& f) {
    return impl_->eval(impl_->intern(f), s, false);
}

bool supports(const Model& m, State s, const FPtr& f) { return Evaluator(m).supports(s, f); }
bool antisupports(const Model& m, State s, const FPtr& f) {
    return Evaluator(m).antisupports(s, f);
}

bool entails_on(const Model& m, const std::vector<FPtr>& premises, const FPtr& conclusion) {
    if (m.size() > 24)
        throw BudgetError("entails_on enumerates all teams; the model has " +
                          std::to_string(m.size()) + " worlds, more than the supported 24");
    Evaluator ev(m);
    const State full = full_state(m);
    for (State s = 0;; ++s) {
        bool all = true;
        for (const auto& g : premises)
            if (!ev.supports(s, g)) {
                all = false;
                break;
            }
        if (all && !ev.supports(s, conclusion))
            return false;
        if (s == full)
            break;
    }
    return true;
}

ClosureReport closure_report(const Model& m, const FPtr& f) {
    if (m.size() > 12)
        throw BudgetError("closure_report enumerates all team pairs; the model has " +
                          std::to_string(m.size()) + " worlds, more than the supported 12");
    Evaluator ev(m);
    const State full = full_state(m);
    const std::size_t count = std::size_t{1} << m.size();
    std::vector<bool> sup(count);
    for (State s = 0; s <= full; ++s)
        sup[s] = ev.supports(s, f);

    ClosureReport rep;
    rep.empty_state = sup[0];

    // Downward closure under single-world removal implies full downward closure.
    rep.downward = true;
    for (State s = 0; s <= full && rep.downward; ++s) {
        if (!sup[s])
            continue;
        for (int w = 0; w < m.size(); ++w)
            if ((s >> w & 1) && !sup[s & ~(State{1} << w)]) {
                rep.downward = false;
                break;
            }
    }

    rep.union_closed = true;
    for (State s = 0; s <= full && rep.union_closed; ++s) {
        if (!sup[s])
            continue;
        for (State t = s; t <= full; ++t)
            if (sup[t] && !sup[s | t]) {
                rep.union_closed = false;
                break;
            }
    }

    rep.flat = true;
    for (State s = 0; s <= full && rep.flat; ++s) {
        bool pointwise = true;
        for (int w = 0; w < m.size(); ++w)
            if ((s >> w & 1) && !sup[State{1} << w]) {
                pointwise = false;
                break;
            }
        if (sup[s] != pointwise)
            rep.flat = false;
    }
    return rep;
}

} // namespace teamlogic
