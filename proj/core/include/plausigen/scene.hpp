#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "plausigen/mesh.hpp"
#include "plausigen/pose.hpp"

namespace plausigen {

enum class SizeCategory { Small, Medium, Large };

const char* to_string(SizeCategory c);
std::optional<SizeCategory> size_category_from_string(const std::string& s);

enum class ImplausibilityType {
    Gravity,
    Intersection,
    Pose,
    Size,
    CoOccurrenceLocation,
    CoOccurrenceRotation,
};

inline constexpr int kImplausibilityTypeCount = 6;

const char* to_string(ImplausibilityType t);
std::optional<ImplausibilityType> implausibility_type_from_string(const std::string& s);
std::vector<ImplausibilityType> all_implausibility_types();

struct SceneObject {
    std::string id;
    std::string class_label;
    SizeCategory size_category = SizeCategory::Small;
    std::string mesh_ref;  // key into Scene::meshes
    Pose3 pose;
    std::set<ImplausibilityType> allowed_transforms;
};

// Which object rests on which; supporter -> directly supported ids.
struct DependencyTree {
    std::map<std::string, std::vector<std::string>> edges;

    std::optional<std::string> supporter_of(const std::string& id) const;
    size_t edge_count() const;
};

class Scene {
public:
    std::string name;
    std::string units = "cm";
    std::vector<SceneObject> objects;
    std::map<std::string, std::shared_ptr<const Mesh>> meshes;
    DependencyTree dependency_tree;

    const SceneObject& object(const std::string& id) const;
    SceneObject& object(const std::string& id);
    int object_index(const std::string& id) const;  // -1 if absent
    const Mesh& mesh_of(const SceneObject& obj) const;

    // Validates every type invariant (unique ids, resolvable mesh refs,
    // dependency tree acyclic with at most one supporter per object, pose
    // rotations orthonormal, positive scales). Throws SchemaError.
    void validate() const;
};

// Tight axis-aligned bounds of the object's transformed mesh.
Box3 world_aabb(const Scene& scene, const std::string& object_id);

// Transitive closure of supported objects in topological order (supporter
// before supported, siblings ordered by id). Empty for leaves.
std::vector<std::string> dependents_of(const Scene& scene, const std::string& object_id);

// Composes a world-frame delta onto the object's pose. With move_dependents,
// every transitive dependent receives the identical delta, so relative
// placement is preserved exactly.
void apply_pose_delta(Scene& scene, const std::string& object_id, const Pose3& delta,
                      bool move_dependents);

}  // namespace plausigen
