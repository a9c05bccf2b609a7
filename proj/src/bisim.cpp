#include "teamlogic/bisim.hpp"

#include <algorithm>
#include <map>

namespace teamlogic {

TypePartition k_types(const Model& m, int k) { return k_types(m, k, m.signature()); }

TypePartition k_types(const Model& m, int k, const std::set<std::string>& sig) {
    if (k < 0)
        throw InputError("k_types needs k >= 0");
    validate_model(m);
    const auto model_sig = m.signature();
    for (const auto& p : sig)
        if (!model_sig.count(p))
            throw SignatureError("requested signature mentions '" + p +
                                 "' outside the model signature");

    const int n = m.size();
    TypePartition part;
    part.k = k;
    part.ids.assign(k + 1, std::vector<int>(n, -1));
    part.num_classes.assign(k + 1, 0);
    part.stable_from = k + 1;

    // Level 0: valuation fingerprints on the chosen signature.
    {
        std::vector<std::vector<bool>> fp(n);
        for (int w = 0; w < n; ++w)
            fp[w].assign(sig.size(), false);
        int pi = 0;
        for (const auto& p : sig) {
            for (int w : m.val.at(p))
                fp[w][pi] = true;
            ++pi;
        }
        std::map<std::vector<bool>, int> classes;
        for (int w = 0; w < n; ++w) {
            auto [it, fresh] = classes.emplace(fp[w], part.num_classes[0]);
            if (fresh)
                ++part.num_classes[0];
            part.ids[0][w] = it->second;
        }
    }

    for (int level = 1; level <= k; ++level) {
        if (part.stable_from <= level) {
            part.ids[level] = part.ids[level - 1];
            part.num_classes[level] = part.num_classes[level - 1];
            continue;
        }
        const auto& prev = part.ids[level - 1];
        std::map<std::pair<int, std::vector<int>>, int> classes;
        for (int w = 0; w < n; ++w) {
            std::vector<int> succ_types;
            succ_types.reserve(m.rel[w].size());
            for (int v : m.rel[w])
                succ_types.push_back(prev[v]);
            std::sort(succ_types.begin(), succ_types.end());
            succ_types.erase(std::unique(succ_types.begin(), succ_types.end()),
                             succ_types.end());
            auto [it, fresh] = classes.emplace(
                std::make_pair(prev[w], std::move(succ_types)), part.num_classes[level]);
            if (fresh)
                ++part.num_classes[level];
            part.ids[level][w] = it->second;
        }
        // Each level refines the previous one, so an unchanged class count
        // means the partition is a fixpoint.
        if (part.num_classes[level] == part.num_classes[level - 1])
            part.stable_from = level;
    }
    return part;
}

namespace {
struct UnionTypes {
    PointedModel u;
    TypePartition part;
    int offset; // index of m2's first world inside the union
};

UnionTypes union_types(const Model& m1, const Model& m2, int k,
                       const std::optional<std::set<std::string>>& sig) {
    UnionTypes out{disjoint_union({{m1, 0}, {m2, 0}}), {}, m1.size()};
    out.part = k_types(out.u.model, k, sig ? *sig : out.u.model.signature());
    return out;
}
} // namespace

bool world_bisim(const Model& m1, const std::string& w1, const Model& m2, const std::string& w2,
                 int k, const std::optional<std::set<std::string>>& sig) {
    const int i1 = m1.world_index(w1);
    const int i2 = m2.world_index(w2);
    if (i1 < 0)
        throw InputError("unknown world name: " + w1);
    if (i2 < 0)
        throw InputError("unknown world name: " + w2);
    const auto ut = union_types(m1, m2, k, sig);
    return ut.part.type_of(k, i1) == ut.part.type_of(k, ut.offset + i2);
}

bool state_bisim(const Model& m1, State s1, const Model& m2, State s2, int k,
                 const std::optional<std::set<std::string>>& sig) {
    if (m1.size() < 64 && (s1 >> m1.size()) != 0)
        throw InputError("team uses worlds outside the first model");
    if (m2.size() < 64 && (s2 >> m2.size()) != 0)
        throw InputError("team uses worlds outside the second model");
    const auto ut = union_types(m1, m2, k, sig);
    std::set<int> t1, t2;
    for (int w = 0; w < m1.size(); ++w)
        if (s1 >> w & 1)
            t1.insert(ut.part.type_of(k, w));
    for (int w = 0; w < m2.size(); ++w)
        if (s2 >> w & 1)
            t2.insert(ut.part.type_of(k, ut.offset + w));
    // Teams are k-bisimilar when they realize the same k-types in both
    // directions; in particular two empty teams always are.
    return t1 == t2;
}

} // namespace teamlogic
