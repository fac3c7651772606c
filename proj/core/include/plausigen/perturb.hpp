#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "plausigen/config.hpp"
#include "plausigen/geometry.hpp"
#include "plausigen/rng.hpp"
#include "plausigen/scene.hpp"

namespace plausigen {

// One applied implausibility operation. pose_before/pose_after describe the
// target object only; dependents are re-derived from the delta on commit.
struct TransformRecord {
    ImplausibilityType type = ImplausibilityType::Gravity;
    std::string object_id;
    Pose3 pose_before;
    Pose3 pose_after;
    std::map<std::string, double> draw_params;
};

// Running balance of transformed objects per size category, used to weight
// object selection toward the configured target distribution.
struct SelectionState {
    std::map<SizeCategory, double> target_dist;
    std::map<SizeCategory, long long> transformed_counts;
    uint64_t rng_seed = 0;

    static SelectionState from_config(const GenerationConfig& config, uint64_t seed);

    long long total() const;
    void record_transform(SizeCategory c) { ++transformed_counts[c]; }
    void validate() const;  // throws SchemaError
};

bool is_transformation_allowed(const SceneObject& obj, ImplausibilityType t);

struct CandidateSet {
    std::vector<std::string> objects;
    std::vector<double> weights;
};

// Weight = max(0, target(cat) - transformed(cat)/total), with the current
// distribution taken as 0 on a fresh state. If fewer than n_needed weights
// are strictly positive, every weight falls back to the category target.
// Throws NoCandidates when no object allows the transformation.
CandidateSet candidate_weights(const Scene& scene, ImplausibilityType t,
                               const SelectionState& state, size_t n_needed);

// Weighted sampling without replacement; stops early once only zero-weight
// candidates remain. Deterministic for a given rng state.
std::vector<std::string> select_objects(const std::vector<std::string>& objects,
                                        const std::vector<double>& weights,
                                        size_t count, Rng& rng);

// The six operations. Each draws parameters, trials the move on the given
// scene/geometry, and restores both before returning; only the returned
// record carries the result. Throws TransformFailed when no draw satisfies
// the operation's postcondition within config.retry_budget, NotAllowed when
// the object does not allow the type.
TransformRecord op_gravity(Scene& scene, SceneGeometry& geo, const std::string& id,
                           Rng& rng, const GenerationConfig& config);
TransformRecord op_intersection(Scene& scene, SceneGeometry& geo, const std::string& id,
                                Rng& rng, const GenerationConfig& config);
TransformRecord op_pose(Scene& scene, SceneGeometry& geo, const std::string& id,
                        Rng& rng, const GenerationConfig& config);
TransformRecord op_size(Scene& scene, SceneGeometry& geo, const std::string& id,
                        Rng& rng, const GenerationConfig& config);
TransformRecord op_cooccurrence_location(Scene& scene, SceneGeometry& geo,
                                         const std::string& id, Rng& rng,
                                         const GenerationConfig& config);
TransformRecord op_cooccurrence_rotation(Scene& scene, SceneGeometry& geo,
                                         const std::string& id, Rng& rng,
                                         const GenerationConfig& config);

// Dispatch by type. The returned record is not committed; commit happens
// after camera validation.
TransformRecord find_transformation(Scene& scene, SceneGeometry& geo,
                                    ImplausibilityType t, const std::string& id,
                                    Rng& rng, const GenerationConfig& config);

// Pose changes are not propagated to dependents (an upside-down chair does
// not carry its contents); every other type co-moves them.
bool transform_moves_dependents(ImplausibilityType t);

// Applies a validated record: the target takes pose_after verbatim and, for
// co-moving types, dependents receive the equivalent world delta. Updates
// the geometry cache when one is supplied.
void commit_transform(Scene& scene, SceneGeometry* geo, const TransformRecord& record);

namespace detail {
bool rotation_negligible(const Quat& q);
}

}  // namespace plausigen
