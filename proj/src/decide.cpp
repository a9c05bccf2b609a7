#include "teamlogic/decide.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <thread>

#include "teamlogic/teameval.hpp"

namespace teamlogic {

namespace {
std::vector<std::string> joint_signature(const std::vector<FPtr>& premises,
                                         const FPtr& conclusion,
                                         const std::optional<std::vector<std::string>>& sig) {
    if (sig) {
        auto out = *sig;
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        std::set<std::string> have(out.begin(), out.end());
        for (const auto& f : premises)
            for (const auto& p : props(f))
                if (!have.count(p))
                    throw SignatureError("signature must cover the formulas; missing '" + p +
                                         "'");
        for (const auto& p : props(conclusion))
            if (!have.count(p))
                throw SignatureError("signature must cover the formulas; missing '" + p + "'");
        return out;
    }
    std::set<std::string> all;
    for (const auto& f : premises)
        for (const auto& p : props(f))
            all.insert(p);
    for (const auto& p : props(conclusion))
        all.insert(p);
    return {all.begin(), all.end()};
}

int joint_depth(const std::vector<FPtr>& premises, const FPtr& conclusion) {
    int k = modal_depth(conclusion);
    for (const auto& f : premises)
        k = std::max(k, modal_depth(f));
    return k;
}
} // namespace

nlohmann::json verdict_to_json(const Verdict& v) {
    nlohmann::json j;
    switch (v.status) {
    case Verdict::Status::Valid:
        j["status"] = "valid";
        break;
    case Verdict::Status::Countermodel:
        j["status"] = "countermodel";
        break;
    case Verdict::Status::Inconclusive:
        j["status"] = "inconclusive";
        break;
    }
    j["engine"] = v.engine;
    j["checked"] = v.states_checked;
    j["models"] = v.models_checked;
    if (v.model) {
        j["model"] = model_to_json(*v.model);
        j["state"] = state_names(*v.model, v.state);
    }
    if (v.status == Verdict::Status::Inconclusive)
        j["bound"] = v.bound;
    return j;
}

Verdict entails_canonical(const std::vector<FPtr>& premises, const FPtr& conclusion,
                          std::optional<std::vector<std::string>> sig, std::optional<int> k,
                          const Budget& budget) {
    const auto x = joint_signature(premises, conclusion, sig);
    const int depth = k.value_or(joint_depth(premises, conclusion));
    if (depth < joint_depth(premises, conclusion))
        throw InputError("canonical engine depth must be at least the formulas' modal depth");

    const auto canon = canonical_model(x, depth, budget);
    if (canon.model.size() > 64)
        throw BudgetError("canonical model has " + std::to_string(canon.model.size()) +
                          " worlds; teams are evaluable only up to 64");
    if (canon.roots.size() >= 63 ||
        (std::uint64_t{1} << canon.roots.size()) > budget.max_state_iters)
        throw BudgetError("canonical engine would iterate 2^" +
                          std::to_string(canon.roots.size()) +
                          " root teams, beyond the budget of " +
                          std::to_string(budget.max_state_iters));

    Verdict v;
    v.engine = "canonical";
    v.models_checked = 1;
    Evaluator ev(canon.model);
    const std::uint64_t subsets = std::uint64_t{1} << canon.roots.size();
    for (std::uint64_t subset = 0; subset < subsets; ++subset) {
        State team = 0;
        for (std::size_t t = 0; t < canon.roots.size(); ++t)
            if (subset >> t & 1)
                team |= State{1} << canon.roots[t];
        ++v.states_checked;
        bool all = true;
        for (const auto& g : premises)
            if (!ev.supports(team, g)) {
                all = false;
                break;
            }
        if (all && !ev.supports(team, conclusion)) {
            v.status = Verdict::Status::Countermodel;
            v.model = canon.model;
            v.state = team;
            return v;
        }
    }
    v.status = Verdict::Status::Valid;
    return v;
}

namespace {
// Scan one model of the space: returns the failing team plus a flag.
struct ModelScan {
    bool found = false;
    State team = 0;
    std::uint64_t teams_tried = 0;
};

ModelScan scan_model(const Model& m, const std::vector<FPtr>& premises, const FPtr& conclusion) {
    ModelScan out;
    Evaluator ev(m);
    const State full = full_state(m);
    for (State s = 0;; ++s) {
        ++out.teams_tried;
        bool all = true;
        for (const auto& g : premises)
            if (!ev.supports(s, g)) {
                all = false;
                break;
            }
        if (all && !ev.supports(s, conclusion)) {
            out.found = true;
            out.team = s;
            return out;
        }
        if (s == full)
            break;
    }
    return out;
}
} // namespace

Verdict refute_bounded(const std::vector<FPtr>& premises, const FPtr& conclusion, int max_worlds,
                       std::optional<std::vector<std::string>> sig, int jobs) {
    if (max_worlds < 1)
        throw InputError("bounded search needs max_worlds >= 1");
    const auto x = joint_signature(premises, conclusion, sig);
    const ModelSpace space(max_worlds, x);
    const std::uint64_t total = space.total();

    Verdict v;
    v.engine = "bounded";
    v.bound = static_cast<std::uint64_t>(max_worlds);

    std::atomic<std::uint64_t> best_index{total};
    const int workers = std::clamp(jobs, 1, 64);

    auto run = [&](int worker) {
        // Interleaved stripes keep early indices early for every worker, so
        // the winning (lowest) index is found quickly and later indices are
        // skipped once any hit is recorded below them. Each worker stops at
        // its own first hit; only a strictly smaller index can displace it.
        for (std::uint64_t i = worker; i < total; i += workers) {
            if (i >= best_index.load(std::memory_order_relaxed))
                continue;
            const Model m = space.at(i);
            const ModelScan scan = scan_model(m, premises, conclusion);
            if (scan.found) {
                std::uint64_t cur = best_index.load(std::memory_order_relaxed);
                while (i < cur && !best_index.compare_exchange_weak(cur, i)) {
                }
                return;
            }
        }
    };

    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t)
            pool.emplace_back(run, t);
        for (auto& th : pool)
            th.join();
    }

    const std::uint64_t hit = best_index.load();
    if (hit == total) {
        v.status = Verdict::Status::Inconclusive;
        v.models_checked = total;
        std::uint64_t teams = 0;
        for (int m = 1; m <= max_worlds; ++m)
            teams += (std::uint64_t{1} << (m * m + static_cast<int>(x.size()) * m)) *
                     (std::uint64_t{1} << m);
        v.states_checked = teams;
        return v;
    }

    // Deterministic statistics: all candidates preceding the hit in the
    // global order count as checked, plus the position inside the hit model.
    const Model found = space.at(hit);
    const ModelScan scan = scan_model(found, premises, conclusion);
    v.status = Verdict::Status::Countermodel;
    v.model = found;
    v.state = scan.team;
    v.models_checked = hit + 1;
    std::uint64_t teams = 0;
    for (std::uint64_t i = 0; i < hit; ++i)
        teams += std::uint64_t{1} << space.at(i).size();
    v.states_checked = teams + scan.teams_tried;
    return v;
}

Verdict decide_entails(const std::vector<FPtr>& premises, const FPtr& conclusion,
                       const DecideOptions& options) {
    if (options.engine == "canonical")
        return entails_canonical(premises, conclusion, options.sig, options.k, options.budget);
    if (options.engine == "bounded")
        return refute_bounded(premises, conclusion, options.max_worlds, options.sig,
                              options.jobs);
    throw InputError("unknown engine \"" + options.engine +
                     "\"; expected \"canonical\" or \"bounded\"");
}

Verdict equivalent(const FPtr& lhs, const FPtr& rhs, EquivMode mode,
                   const DecideOptions& options) {
    std::vector<std::pair<FPtr, FPtr>> checks{{lhs, rhs}, {rhs, lhs}};
    if (mode == EquivMode::Strong) {
        checks.push_back({neg(lhs), neg(rhs)});
        checks.push_back({neg(rhs), neg(lhs)});
    }
    Verdict agg;
    agg.engine = options.engine;
    agg.bound = static_cast<std::uint64_t>(options.max_worlds);
    bool all_valid = true;
    for (const auto& [from, to] : checks) {
        Verdict v = decide_entails({from}, to, options);
        agg.models_checked += v.models_checked;
        agg.states_checked += v.states_checked;
        if (v.found_countermodel()) {
            v.models_checked = agg.models_checked;
            v.states_checked = agg.states_checked;
            return v;
        }
        if (!v.valid())
            all_valid = false;
    }
    agg.status = all_valid ? Verdict::Status::Valid : Verdict::Status::Inconclusive;
    return agg;
}

} // namespace teamlogic
