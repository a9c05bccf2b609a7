#include "teamlogic/hintikka.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>

#include "teamlogic/bisim.hpp"
#include "teamlogic/teameval.hpp"

namespace teamlogic {

Budget Budget::from_env() {
    Budget b;
    const char* raw = std::getenv("TEAMLOGIC_BUDGET");
    if (!raw || !*raw)
        return b;
    const std::string text(raw);
    try {
        const auto comma = text.find(',');
        b.max_worlds = std::stoull(text.substr(0, comma));
        if (comma != std::string::npos)
            b.max_state_iters = std::stoull(text.substr(comma + 1));
    } catch (const std::exception&) {
        throw InputError("TEAMLOGIC_BUDGET must be \"<max-worlds>\" or "
                         "\"<max-worlds>,<max-state-iterations>\", got \"" +
                         text + "\"");
    }
    return b;
}

namespace {
std::vector<std::string> sorted_sig(std::vector<std::string> sig) {
    std::sort(sig.begin(), sig.end());
    sig.erase(std::unique(sig.begin(), sig.end()), sig.end());
    return sig;
}
} // namespace

CanonicalModel canonical_model(const std::vector<std::string>& sig, int k,
                               const Budget& budget) {
    if (k < 0)
        throw InputError("canonical models need depth k >= 0");
    CanonicalModel out;
    out.sig = sorted_sig(sig);
    out.k = k;
    const int nprops = static_cast<int>(out.sig.size());
    if (nprops >= 30)
        throw BudgetError("canonical model over " + std::to_string(nprops) +
                          " propositions is out of reach");

    // Pre-compute layer sizes and check the world budget before building.
    const std::uint64_t vals = std::uint64_t{1} << nprops;
    std::vector<std::uint64_t> layer_size{vals};
    std::uint64_t total = vals;
    for (int j = 1; j <= k; ++j) {
        const std::uint64_t prev = layer_size.back();
        if (prev >= 40)
            throw BudgetError("canonical model layer " + std::to_string(j) + " would have 2^" +
                              std::to_string(nprops) + " * 2^" + std::to_string(prev) +
                              " worlds, beyond the budget of " +
                              std::to_string(budget.max_worlds));
        const std::uint64_t sz = vals << prev;
        total += sz;
        layer_size.push_back(sz);
    }
    if (total > budget.max_worlds)
        throw BudgetError("canonical model needs " + std::to_string(total) +
                          " worlds, beyond the budget of " + std::to_string(budget.max_worlds));

    Model& m = out.model;
    for (const auto& p : out.sig)
        m.val[p] = {};
    std::vector<int> prev_layer; // global indices of the previous layer
    for (int j = 0; j <= k; ++j) {
        std::vector<int> this_layer;
        const std::uint64_t subsets = j == 0 ? 1 : (std::uint64_t{1} << prev_layer.size());
        std::uint64_t local = 0;
        for (std::uint64_t val_code = 0; val_code < vals; ++val_code) {
            for (std::uint64_t subset = 0; subset < subsets; ++subset, ++local) {
                const int w = m.size();
                m.worlds.push_back("L" + std::to_string(j) + "_" + std::to_string(local));
                std::vector<int> succ;
                for (std::size_t t = 0; t < prev_layer.size(); ++t)
                    if (subset >> t & 1)
                        succ.push_back(prev_layer[t]);
                m.rel.push_back(std::move(succ));
                for (int pi = 0; pi < nprops; ++pi)
                    if (val_code >> pi & 1)
                        m.val[out.sig[pi]].push_back(w);
                this_layer.push_back(w);
            }
        }
        prev_layer = std::move(this_layer);
    }
    out.roots = std::move(prev_layer);
    return out;
}

// --- Hintikka formulas --------------------------------------------------------

namespace {
struct ChiBuilder {
    const Model& m;
    std::vector<std::string> sig;
    TypePartition part;
    // One formula per (level, type id); worlds with the same type share it.
    std::vector<std::map<int, FPtr>> memo;

    ChiBuilder(const Model& model, int k, std::vector<std::string> s)
        : m(model), sig(std::move(s)),
          part(k_types(model, k, std::set<std::string>(sig.begin(), sig.end()))) {
        memo.resize(k + 1);
    }

    FPtr build(int level, int world) {
        const int ty = part.type_of(level, world);
        if (auto it = memo[level].find(ty); it != memo[level].end())
            return it->second;
        FPtr result;
        if (level == 0) {
            std::vector<FPtr> literals;
            for (const auto& p : sig) {
                const auto& ext = m.val.at(p);
                const bool holds = std::binary_search(ext.begin(), ext.end(), world);
                literals.push_back(holds ? atom(p) : neg(atom(p)));
            }
            result = big_and(literals);
        } else {
            // One representative successor per (level-1)-type, canonically
            // ordered by the printed subformula.
            std::set<int> seen;
            std::vector<FPtr> succ_chis;
            for (int v : m.rel[world])
                if (seen.insert(part.type_of(level - 1, v)).second)
                    succ_chis.push_back(build(level - 1, v));
            succ_chis = sort_unique(std::move(succ_chis));
            std::vector<FPtr> parts{build(level - 1, world)};
            for (const auto& c : succ_chis)
                parts.push_back(dia(c));
            parts.push_back(box(big_or(succ_chis)));
            result = big_and(parts);
        }
        memo[level].emplace(ty, result);
        return result;
    }

    std::vector<FPtr> team_disjuncts(State s, int level) {
        std::set<int> seen;
        std::vector<FPtr> out;
        for (int w = 0; w < m.size(); ++w)
            if ((s >> w & 1) && seen.insert(part.type_of(level, w)).second)
                out.push_back(build(level, w));
        return out;
    }
};

void check_world(const Model& m, int world) {
    if (world < 0 || world >= m.size())
        throw InputError("world index out of range");
}
} // namespace

// The signature may restrict the model's (k_types rejects names outside it).

FPtr chi_world(const Model& m, int world, int k, const std::vector<std::string>& sig) {
    check_world(m, world);
    ChiBuilder cb(m, k, sorted_sig(sig));
    return cb.build(k, world);
}

FPtr chi_state(const Model& m, State s, int k, const std::vector<std::string>& sig) {
    ChiBuilder cb(m, k, sorted_sig(sig));
    return big_or(sort_unique(cb.team_disjuncts(s, k)));
}

FPtr theta_state(const Model& m, State s, int k, const std::vector<std::string>& sig) {
    ChiBuilder cb(m, k, sorted_sig(sig));
    std::vector<FPtr> disjuncts;
    for (const auto& c : cb.team_disjuncts(s, k))
        disjuncts.push_back(conj(c, ne()));
    return big_or(sort_unique(std::move(disjuncts)));
}

// --- normal forms -------------------------------------------------------------

namespace {
struct NfSetup {
    CanonicalModel canon;
    int k;
    std::vector<std::string> sig;
};

NfSetup nf_setup(const FPtr& f, std::optional<int> k, std::optional<std::vector<std::string>> sig,
                 const Budget& budget) {
    NfSetup s;
    s.k = k.value_or(modal_depth(f));
    if (s.k < modal_depth(f))
        throw InputError("normal-form depth must be at least the formula's modal depth");
    const auto prop_set = props(f);
    const std::vector<std::string> props_of(prop_set.begin(), prop_set.end());
    s.sig = sig ? sorted_sig(*sig) : props_of;
    for (const auto& p : props_of)
        if (!std::binary_search(s.sig.begin(), s.sig.end(), p))
            throw SignatureError("normal-form signature must cover the formula; missing '" + p +
                                 "'");
    s.canon = canonical_model(s.sig, s.k, budget);
    if (s.canon.model.size() > 64)
        throw BudgetError("canonical model has " + std::to_string(s.canon.model.size()) +
                          " worlds; teams are evaluable only up to 64");
    return s;
}

// All root teams of the canonical model that support the formula, as masks,
// in ascending subset order. Gated by the state-iteration budget.
std::vector<State> supporting_root_states(const NfSetup& s, const FPtr& f,
                                          const Budget& budget) {
    const auto& roots = s.canon.roots;
    if (roots.size() >= 63 ||
        (std::uint64_t{1} << roots.size()) > budget.max_state_iters)
        throw BudgetError("normal form would iterate 2^" + std::to_string(roots.size()) +
                          " root teams, beyond the budget of " +
                          std::to_string(budget.max_state_iters));
    Evaluator ev(s.canon.model);
    std::vector<State> out;
    for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << roots.size()); ++subset) {
        State team = 0;
        for (std::size_t t = 0; t < roots.size(); ++t)
            if (subset >> t & 1)
                team |= State{1} << roots[t];
        if (ev.supports(team, f))
            out.push_back(team);
    }
    return out;
}
} // namespace

FPtr nf_ml(const FPtr& alpha, std::optional<int> k, std::optional<std::vector<std::string>> sig,
           const Budget& budget) {
    if (!is_classical(alpha))
        throw InputError("nf_ml requires a classical formula, got: " + print_formula(alpha));
    const auto s = nf_setup(alpha, k, std::move(sig), budget);
    Evaluator ev(s.canon.model);
    ChiBuilder cb(s.canon.model, s.k, s.sig);
    std::vector<FPtr> disjuncts;
    for (int root : s.canon.roots)
        if (ev.supports(State{1} << root, alpha))
            disjuncts.push_back(cb.build(s.k, root));
    return big_or(sort_unique(std::move(disjuncts)));
}

FPtr nf_bsmli(const FPtr& phi, std::optional<int> k, std::optional<std::vector<std::string>> sig,
              const Budget& budget) {
    const auto s = nf_setup(phi, k, std::move(sig), budget);
    ChiBuilder cb(s.canon.model, s.k, s.sig);
    std::vector<FPtr> disjuncts;
    for (State team : supporting_root_states(s, phi, budget)) {
        std::vector<FPtr> inner;
        for (const auto& c : cb.team_disjuncts(team, s.k))
            inner.push_back(conj(c, ne()));
        disjuncts.push_back(big_or(sort_unique(std::move(inner))));
    }
    return big_gor(sort_unique(std::move(disjuncts)));
}

FPtr nf_bsmlo(const FPtr& phi, std::optional<int> k, std::optional<std::vector<std::string>> sig,
              const Budget& budget) {
    if (!is_gdis_free(phi))
        throw InputError("nf_bsmlo requires a formula without global disjunction, got: " +
                         print_formula(phi));
    const auto s = nf_setup(phi, k, std::move(sig), budget);
    ChiBuilder cb(s.canon.model, s.k, s.sig);
    bool empty_supported = false;
    std::vector<FPtr> disjuncts;
    for (State team : supporting_root_states(s, phi, budget)) {
        if (team == 0)
            empty_supported = true;
        std::vector<FPtr> inner;
        for (const auto& c : cb.team_disjuncts(team, s.k))
            inner.push_back(conj(c, ne()));
        disjuncts.push_back(oslash(big_or(sort_unique(std::move(inner)))));
    }
    FPtr body = big_or(sort_unique(std::move(disjuncts)));
    // Without the empty team in the property, the plain disjunction would
    // still admit it; NE cuts it back out.
    return empty_supported ? body : conj(ne(), body);
}

FPtr charf_of_property(const std::vector<PointedModel>& property, int k,
                       const std::vector<std::string>& sig, CharfFlavor flavor) {
    const auto ss = sorted_sig(sig);
    // Deduplicate the listed pointed models up to k-bisimilarity, comparing
    // type sets on the disjoint union of the whole list.
    std::vector<const PointedModel*> kept;
    if (!property.empty()) {
        const auto u = disjoint_union(property);
        const auto part =
            k_types(u.model, k, std::set<std::string>(ss.begin(), ss.end()));
        std::set<std::set<int>> seen;
        int offset = 0;
        for (const auto& pm : property) {
            std::set<int> types;
            for (int w = 0; w < pm.model.size(); ++w)
                if (pm.state >> w & 1)
                    types.insert(part.type_of(k, offset + w));
            if (seen.insert(std::move(types)).second)
                kept.push_back(&pm);
            offset += pm.model.size();
        }
    }

    bool has_empty = false;
    std::vector<FPtr> disjuncts;
    for (const auto* pm : kept) {
        if (pm->state == 0)
            has_empty = true;
        switch (flavor) {
        case CharfFlavor::Nu:
            disjuncts.push_back(chi_state(pm->model, pm->state, k, ss));
            break;
        case CharfFlavor::Xi:
            disjuncts.push_back(theta_state(pm->model, pm->state, k, ss));
            break;
        case CharfFlavor::Zeta:
            disjuncts.push_back(oslash(theta_state(pm->model, pm->state, k, ss)));
            break;
        }
    }
    disjuncts = sort_unique(std::move(disjuncts));
    switch (flavor) {
    case CharfFlavor::Nu:
        return big_or(disjuncts);
    case CharfFlavor::Xi:
        return big_gor(disjuncts);
    case CharfFlavor::Zeta: {
        FPtr body = big_or(disjuncts);
        return has_empty ? body : conj(ne(), body);
    }
    }
    throw InputError("unknown characteristic-formula flavor");
}

} // namespace teamlogic
