#include "teamlogic/kripke.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace teamlogic {

int Model::world_index(const std::string& name) const {
    for (std::size_t i = 0; i < worlds.size(); ++i)
        if (worlds[i] == name)
            return static_cast<int>(i);
    return -1;
}

std::set<std::string> Model::signature() const {
    std::set<std::string> out;
    for (const auto& kv : val)
        out.insert(kv.first);
    return out;
}

namespace {
bool sorted_unique_in_range(const std::vector<int>& xs, int n) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] < 0 || xs[i] >= n)
            return false;
        if (i > 0 && xs[i] <= xs[i - 1])
            return false;
    }
    return true;
}
} // namespace

void validate_model(const Model& m) {
    if (m.worlds.empty())
        throw InputError("model must have at least one world");
    std::set<std::string> seen;
    for (const auto& w : m.worlds)
        if (!seen.insert(w).second)
            throw InputError("duplicate world name: " + w);
    if (m.rel.size() != m.worlds.size())
        throw InputError("relation must list successors for every world");
    const int n = m.size();
    for (const auto& succ : m.rel)
        if (!sorted_unique_in_range(succ, n))
            throw InputError("successor lists must be sorted, duplicate-free and in range");
    for (const auto& kv : m.val)
        if (!sorted_unique_in_range(kv.second, n))
            throw InputError("valuation of '" + kv.first +
                             "' must be sorted, duplicate-free and in range");
}

State full_state(const Model& m) {
    if (m.size() > 64)
        throw BudgetError("teams are only representable for models with at most 64 worlds; "
                          "this model has " +
                          std::to_string(m.size()));
    return m.size() == 64 ? ~State{0} : ((State{1} << m.size()) - 1);
}

State r_image(const Model& m, State s) {
    full_state(m); // enforce the 64-world limit
    State out = 0;
    for (int w = 0; w < m.size(); ++w)
        if (s >> w & 1)
            for (int v : m.rel[w])
                out |= State{1} << v;
    return out;
}

State state_from_names(const Model& m, const std::vector<std::string>& names) {
    full_state(m);
    State s = 0;
    for (const auto& name : names) {
        const int i = m.world_index(name);
        if (i < 0)
            throw InputError("unknown world name: " + name);
        s |= State{1} << i;
    }
    return s;
}

std::vector<std::string> state_names(const Model& m, State s) {
    std::vector<std::string> out;
    for (int w = 0; w < m.size(); ++w)
        if (s >> w & 1)
            out.push_back(m.worlds[w]);
    return out;
}

PointedModel disjoint_union(const std::vector<PointedModel>& parts) {
    if (parts.empty())
        throw InputError("disjoint union of an empty model list");
    std::set<std::string> sig;
    int total = 0;
    for (const auto& p : parts) {
        total += p.model.size();
        for (const auto& kv : p.model.val)
            sig.insert(kv.first);
    }
    if (total > 64)
        throw BudgetError("disjoint union would have " + std::to_string(total) +
                          " worlds; teams support at most 64");
    PointedModel out;
    for (const auto& prop : sig)
        out.model.val[prop] = {};
    int offset = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const Model& m = parts[i].model;
        for (const auto& w : m.worlds)
            out.model.worlds.push_back(std::to_string(i) + ":" + w);
        for (const auto& succ : m.rel) {
            std::vector<int> shifted;
            shifted.reserve(succ.size());
            for (int v : succ)
                shifted.push_back(v + offset);
            out.model.rel.push_back(std::move(shifted));
        }
        for (const auto& kv : m.val)
            for (int v : kv.second)
                out.model.val[kv.first].push_back(v + offset);
        out.state |= parts[i].state << offset;
        offset += m.size();
    }
    return out;
}

std::uint64_t count_models(int max_worlds, int num_props) {
    if (max_worlds < 0 || num_props < 0)
        throw InputError("model counts need nonnegative arguments");
    std::uint64_t total = 0;
    for (int m = 1; m <= max_worlds; ++m) {
        const int bits = m * m + num_props * m;
        if (bits >= 63)
            throw BudgetError("model space for " + std::to_string(m) + " worlds needs 2^" +
                              std::to_string(bits) + " entries, beyond the enumerable range");
        total += std::uint64_t{1} << bits;
    }
    return total;
}

ModelSpace::ModelSpace(int max_worlds, std::vector<std::string> sig)
    : max_worlds_(max_worlds), sig_(std::move(sig)) {
    std::sort(sig_.begin(), sig_.end());
    sig_.erase(std::unique(sig_.begin(), sig_.end()), sig_.end());
    if (max_worlds_ < 1)
        throw InputError("model enumeration needs max_worlds >= 1");
    total_ = count_models(max_worlds_, static_cast<int>(sig_.size()));
}

Model ModelSpace::at(std::uint64_t index) const {
    if (index >= total_)
        throw InputError("model index out of range");
    const int nprops = static_cast<int>(sig_.size());
    for (int m = 1; m <= max_worlds_; ++m) {
        const std::uint64_t block = std::uint64_t{1} << (m * m + nprops * m);
        if (index >= block) {
            index -= block;
            continue;
        }
        const std::uint64_t val_code = index & ((std::uint64_t{1} << (nprops * m)) - 1);
        const std::uint64_t rel_code = index >> (nprops * m);
        Model out;
        for (int i = 0; i < m; ++i)
            out.worlds.push_back(std::to_string(i + 1));
        out.rel.assign(m, {});
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                if (rel_code >> (i * m + j) & 1)
                    out.rel[i].push_back(j);
        for (int k = 0; k < nprops; ++k) {
            auto& ext = out.val[sig_[k]];
            for (int i = 0; i < m; ++i)
                if (val_code >> (k * m + i) & 1)
                    ext.push_back(i);
        }
        return out;
    }
    throw InputError("model index out of range");
}

Model random_model(std::uint64_t seed, int num_worlds, const std::vector<std::string>& sig) {
    if (num_worlds < 1)
        throw InputError("random models need at least one world");
    std::vector<std::string> props(sig);
    std::sort(props.begin(), props.end());
    props.erase(std::unique(props.begin(), props.end()), props.end());
    std::mt19937_64 rng(seed);
    Model out;
    for (int i = 0; i < num_worlds; ++i)
        out.worlds.push_back(std::to_string(i + 1));
    out.rel.assign(num_worlds, {});
    for (int i = 0; i < num_worlds; ++i)
        for (int j = 0; j < num_worlds; ++j)
            if (rng() & 1)
                out.rel[i].push_back(j);
    for (const auto& p : props) {
        auto& ext = out.val[p];
        for (int i = 0; i < num_worlds; ++i)
            if (rng() & 1)
                ext.push_back(i);
    }
    return out;
}

State random_state(std::uint64_t seed, const Model& m) {
    full_state(m);
    std::mt19937_64 rng(seed);
    State s = 0;
    for (int w = 0; w < m.size(); ++w)
        if (rng() & 1)
            s |= State{1} << w;
    return s;
}

// --- JSON codec -------------------------------------------------------------

namespace {
const nlohmann::json& require_key(const nlohmann::json& j, const char* key, const char* what) {
    auto it = j.find(key);
    if (it == j.end())
        throw InputError(std::string("model JSON: missing key \"") + key + "\" in " + what);
    return *it;
}

std::vector<std::string> string_array(const nlohmann::json& j, const std::string& what) {
    if (!j.is_array())
        throw InputError("model JSON: " + what + " must be an array");
    std::vector<std::string> out;
    for (const auto& e : j) {
        if (!e.is_string())
            throw InputError("model JSON: " + what + " must contain strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

std::vector<int> world_list(const Model& m, const std::vector<std::string>& names,
                            const std::string& what) {
    std::vector<int> out;
    for (const auto& name : names) {
        const int i = m.world_index(name);
        if (i < 0)
            throw InputError("model JSON: unknown world \"" + name + "\" in " + what);
        out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    if (std::adjacent_find(out.begin(), out.end()) != out.end())
        throw InputError("model JSON: duplicate world in " + what);
    return out;
}
} // namespace

ModelFile model_from_json(const nlohmann::json& j) {
    if (!j.is_object())
        throw InputError("model JSON: top level must be an object");
    for (const auto& kv : j.items())
        if (kv.key() != "worlds" && kv.key() != "relation" && kv.key() != "valuation" &&
            kv.key() != "states")
            throw InputError("model JSON: unknown key \"" + kv.key() + "\"");

    ModelFile out;
    out.model.worlds = string_array(require_key(j, "worlds", "model"), "\"worlds\"");
    if (out.model.worlds.empty())
        throw InputError("model JSON: \"worlds\" must be nonempty");
    {
        std::set<std::string> seen;
        for (const auto& w : out.model.worlds)
            if (!seen.insert(w).second)
                throw InputError("model JSON: duplicate world \"" + w + "\"");
    }
    out.model.rel.assign(out.model.worlds.size(), {});

    const auto& rel = require_key(j, "relation", "model");
    if (!rel.is_array())
        throw InputError("model JSON: \"relation\" must be an array of pairs");
    std::set<std::pair<int, int>> edges;
    for (const auto& e : rel) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
            throw InputError("model JSON: \"relation\" entries must be [source, target] pairs");
        const int u = out.model.world_index(e[0].get<std::string>());
        const int v = out.model.world_index(e[1].get<std::string>());
        if (u < 0 || v < 0)
            throw InputError("model JSON: unknown world in \"relation\" pair");
        if (!edges.insert({u, v}).second)
            throw InputError("model JSON: duplicate edge in \"relation\"");
    }
    for (const auto& uv : edges)
        out.model.rel[uv.first].push_back(uv.second);

    const auto& valj = require_key(j, "valuation", "model");
    if (!valj.is_object())
        throw InputError("model JSON: \"valuation\" must be an object");
    for (const auto& kv : valj.items())
        out.model.val[kv.key()] =
            world_list(out.model, string_array(kv.value(), "valuation of \"" + kv.key() + "\""),
                       "valuation of \"" + kv.key() + "\"");

    if (auto it = j.find("states"); it != j.end()) {
        if (!it->is_object())
            throw InputError("model JSON: \"states\" must be an object");
        for (const auto& kv : it->items()) {
            const auto names = string_array(kv.value(), "state \"" + kv.key() + "\"");
            // Reuse the duplicate check, then turn indices into a mask.
            const auto idx = world_list(out.model, names, "state \"" + kv.key() + "\"");
            State s = 0;
            full_state(out.model);
            for (int i : idx)
                s |= State{1} << i;
            out.states[kv.key()] = s;
        }
    }
    validate_model(out.model);
    return out;
}

nlohmann::json model_to_json(const Model& m, const std::map<std::string, State>* states) {
    nlohmann::json j;
    j["worlds"] = m.worlds;
    auto rel = nlohmann::json::array();
    for (int i = 0; i < m.size(); ++i)
        for (int v : m.rel[i])
            rel.push_back({m.worlds[i], m.worlds[v]});
    j["relation"] = std::move(rel);
    auto val = nlohmann::json::object();
    for (const auto& kv : m.val) {
        auto arr = nlohmann::json::array();
        for (int i : kv.second)
            arr.push_back(m.worlds[i]);
        val[kv.first] = std::move(arr);
    }
    j["valuation"] = std::move(val);
    if (states) {
        auto st = nlohmann::json::object();
        for (const auto& kv : *states)
            st[kv.first] = state_names(m, kv.second);
        j["states"] = std::move(st);
    }
    return j;
}

ModelFile load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open model file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("invalid JSON in " + path + ": " + e.what());
    }
    return model_from_json(j);
}

} // namespace teamlogic
