#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "teamlogic/errors.hpp"

namespace teamlogic {

// A team (set of worlds) over a model, as a bitmask on world indices.
// Teams are only representable for models with at most 64 worlds; every
// operation that manipulates teams enforces that limit.
using State = std::uint64_t;

struct Model {
    std::vector<std::string> worlds;             // nonempty, unique
    std::vector<std::vector<int>> rel;           // per world: sorted successor indices
    std::map<std::string, std::vector<int>> val; // prop -> sorted world indices; keys form the signature

    int size() const { return static_cast<int>(worlds.size()); }
    int world_index(const std::string& name) const; // -1 when absent
    std::set<std::string> signature() const;
};

// Checks structural well-formedness: worlds nonempty and unique, successor
// and valuation lists sorted, duplicate-free and in range. Throws InputError.
void validate_model(const Model& m);

struct PointedModel {
    Model model;
    State state = 0;
};

State full_state(const Model& m);
State r_image(const Model& m, State s);

// Resolves world names to a team; every name must exist. Throws InputError.
State state_from_names(const Model& m, const std::vector<std::string>& names);
// World names of a team, in model order.
std::vector<std::string> state_names(const Model& m, State s);

// Disjoint union of one or more pointed models. Worlds are tagged with
// their 0-based component index ("0:w", "1:w", ...); the signature is the
// union of component signatures; the distinguished state is the union of
// the tagged component states. Throws InputError on an empty list.
PointedModel disjoint_union(const std::vector<PointedModel>& parts);

// Number of models with 1..max_worlds worlds over num_props propositions:
// the sum over m of 2^(m*m) * 2^(num_props*m).
std::uint64_t count_models(int max_worlds, int num_props);

// Deterministic enumeration of all models with 1..max_worlds worlds over a
// fixed signature. Index order: world count ascending; within a world
// count, relation code (major) then valuation code (minor), both ascending.
// Relation bit i*m+j encodes the edge i -> j; valuation bit k*m+i puts
// world i in the extension of the k-th proposition (signature sorted).
// Worlds are named "1".."m".
class ModelSpace {
public:
    ModelSpace(int max_worlds, std::vector<std::string> sig);
    std::uint64_t total() const { return total_; }
    Model at(std::uint64_t index) const;

private:
    int max_worlds_;
    std::vector<std::string> sig_;
    std::uint64_t total_;
};

// Seed-deterministic random model: every edge and every membership bit is
// an independent fair coin. Worlds are named "1".."n".
Model random_model(std::uint64_t seed, int num_worlds, const std::vector<std::string>& sig);
// Seed-deterministic random team: each world is included with probability 1/2.
State random_state(std::uint64_t seed, const Model& m);

struct ModelFile {
    Model model;
    std::map<std::string, State> states; // named teams from the input file
};

// Strict JSON codec. Objects carry exactly the keys worlds / relation /
// valuation and optionally states; unknown keys, unknown world names and
// duplicate entries are rejected with InputError.
ModelFile model_from_json(const nlohmann::json& j);
nlohmann::json model_to_json(const Model& m,
                             const std::map<std::string, State>* states = nullptr);
ModelFile load_model_file(const std::string& path);

} // namespace teamlogic
