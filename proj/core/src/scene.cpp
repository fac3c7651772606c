#include "plausigen/scene.hpp"

#include <algorithm>
#include <cmath>

#include "plausigen/errors.hpp"

namespace plausigen {

const char* to_string(SizeCategory c) {
    switch (c) {
        case SizeCategory::Small: return "small";
        case SizeCategory::Medium: return "medium";
        case SizeCategory::Large: return "large";
    }
    return "small";
}

std::optional<SizeCategory> size_category_from_string(const std::string& s) {
    if (s == "small") return SizeCategory::Small;
    if (s == "medium") return SizeCategory::Medium;
    if (s == "large") return SizeCategory::Large;
    return std::nullopt;
}

const char* to_string(ImplausibilityType t) {
    switch (t) {
        case ImplausibilityType::Gravity: return "gravity";
        case ImplausibilityType::Intersection: return "intersection";
        case ImplausibilityType::Pose: return "pose";
        case ImplausibilityType::Size: return "size";
        case ImplausibilityType::CoOccurrenceLocation: return "cooccurrence_location";
        case ImplausibilityType::CoOccurrenceRotation: return "cooccurrence_rotation";
    }
    return "gravity";
}

std::optional<ImplausibilityType> implausibility_type_from_string(const std::string& s) {
    for (ImplausibilityType t : all_implausibility_types())
        if (s == to_string(t)) return t;
    return std::nullopt;
}

std::vector<ImplausibilityType> all_implausibility_types() {
    return {ImplausibilityType::Gravity,
            ImplausibilityType::Intersection,
            ImplausibilityType::Pose,
            ImplausibilityType::Size,
            ImplausibilityType::CoOccurrenceLocation,
            ImplausibilityType::CoOccurrenceRotation};
}

std::optional<std::string> DependencyTree::supporter_of(const std::string& id) const {
    for (const auto& [supporter, supported] : edges)
        if (std::find(supported.begin(), supported.end(), id) != supported.end())
            return supporter;
    return std::nullopt;
}

size_t DependencyTree::edge_count() const {
    size_t n = 0;
    for (const auto& [_, supported] : edges) n += supported.size();
    return n;
}

const SceneObject& Scene::object(const std::string& id) const {
    int i = object_index(id);
    if (i < 0) throw UnknownObject("no object with id '" + id + "' in scene '" + name + "'");
    return objects[static_cast<size_t>(i)];
}

SceneObject& Scene::object(const std::string& id) {
    int i = object_index(id);
    if (i < 0) throw UnknownObject("no object with id '" + id + "' in scene '" + name + "'");
    return objects[static_cast<size_t>(i)];
}

int Scene::object_index(const std::string& id) const {
    for (size_t i = 0; i < objects.size(); ++i)
        if (objects[i].id == id) return static_cast<int>(i);
    return -1;
}

const Mesh& Scene::mesh_of(const SceneObject& obj) const {
    auto it = meshes.find(obj.mesh_ref);
    if (it == meshes.end())
        throw MissingMesh("object '" + obj.id + "' references unknown mesh '" +
                          obj.mesh_ref + "'");
    return *it->second;
}

void Scene::validate() const {
    if (objects.empty()) throw SchemaError("scene '" + name + "' contains no objects");

    std::set<std::string> ids;
    for (const SceneObject& obj : objects) {
        if (obj.id.empty()) throw SchemaError("object with empty id");
        if (!ids.insert(obj.id).second)
            throw SchemaError("duplicate object id '" + obj.id + "'");
        if (obj.class_label.empty())
            throw SchemaError("object '" + obj.id + "' has empty class label");
        if (meshes.find(obj.mesh_ref) == meshes.end())
            throw MissingMesh("object '" + obj.id + "' references unknown mesh '" +
                              obj.mesh_ref + "'");
        if (obj.pose.scale.x <= 0 || obj.pose.scale.y <= 0 || obj.pose.scale.z <= 0)
            throw SchemaError("object '" + obj.id + "' has non-positive scale");

        Mat3 r = obj.pose.rotation_matrix();
        Mat3 should_be_identity = r * r.transposed();
        double dev = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                dev = std::max(dev, std::abs(should_be_identity(i, j) - (i == j ? 1.0 : 0.0)));
        if (dev > 1e-6 || std::abs(r.determinant() - 1.0) > 1e-6)
            throw SchemaError("object '" + obj.id + "' rotation is not a proper rotation");
    }

    // Dependency tree: known ids, at most one supporter, acyclic.
    std::map<std::string, std::string> supporter;
    for (const auto& [sup, supported] : dependency_tree.edges) {
        if (!ids.count(sup))
            throw SchemaError("dependency edge references unknown supporter '" + sup + "'");
        for (const std::string& dep : supported) {
            if (!ids.count(dep))
                throw SchemaError("dependency edge references unknown object '" + dep + "'");
            if (dep == sup)
                throw SchemaError("object '" + dep + "' cannot support itself");
            auto [it, inserted] = supporter.emplace(dep, sup);
            if (!inserted)
                throw SchemaError("object '" + dep + "' has more than one supporter");
        }
    }
    for (const auto& [start, _] : supporter) {
        std::string cur = start;
        size_t hops = 0;
        while (true) {
            auto it = supporter.find(cur);
            if (it == supporter.end()) break;
            cur = it->second;
            if (cur == start || ++hops > supporter.size())
                throw SchemaError("dependency tree contains a cycle through '" + start + "'");
        }
    }
}

Box3 world_aabb(const Scene& scene, const std::string& object_id) {
    const SceneObject& obj = scene.object(object_id);
    const Mesh& mesh = scene.mesh_of(obj);
    Box3 box;
    Mat3 r = obj.pose.rotation_matrix();
    for (const Vec3& v : mesh.vertices)
        box.expand(obj.pose.translation + r * cwise_mul(obj.pose.scale, v));
    return box;
}

namespace {
void collect_dependents(const Scene& scene, const std::string& id,
                        std::vector<std::string>& out) {
    auto it = scene.dependency_tree.edges.find(id);
    if (it == scene.dependency_tree.edges.end()) return;
    std::vector<std::string> children = it->second;
    std::sort(children.begin(), children.end());
    for (const std::string& child : children) {
        out.push_back(child);
        collect_dependents(scene, child, out);
    }
}
}  // namespace

std::vector<std::string> dependents_of(const Scene& scene, const std::string& object_id) {
    scene.object(object_id);  // throws UnknownObject
    std::vector<std::string> out;
    collect_dependents(scene, object_id, out);
    return out;
}

void apply_pose_delta(Scene& scene, const std::string& object_id, const Pose3& delta,
                      bool move_dependents) {
    SceneObject& obj = scene.object(object_id);
    obj.pose = apply_world_delta(delta, obj.pose);
    if (move_dependents) {
        for (const std::string& dep : dependents_of(scene, object_id)) {
            SceneObject& d = scene.object(dep);
            d.pose = apply_world_delta(delta, d.pose);
        }
    }
}

}  // namespace plausigen
