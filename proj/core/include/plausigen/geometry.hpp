#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plausigen/bvh.hpp"
#include "plausigen/scene.hpp"

namespace plausigen {

struct HitRecord {
    std::string object_id;
    double distance = 0.0;
    Vec3 point;
};

// Half-open pixel rectangle [min_x, max_x) x [min_y, max_y); a box covering
// exactly pixel (x, y) is (x, y, x+1, y+1).
struct ScreenBox {
    int min_x = 0, min_y = 0, max_x = 0, max_y = 0;

    long long area() const {
        return static_cast<long long>(max_x - min_x) * static_cast<long long>(max_y - min_y);
    }
    bool operator==(const ScreenBox& o) const {
        return min_x == o.min_x && min_y == o.min_y && max_x == o.max_x && max_y == o.max_y;
    }
};

// Exact union area in pixels (coordinate-compression sweep, not a grid).
long long box_union_area(const std::vector<ScreenBox>& boxes);

// Two-sided triangle-triangle intersection; contact within 1e-9 counts as
// intersecting so the predicate is deterministic under exact touching.
bool tri_tri_intersect(const Vec3& a0, const Vec3& a1, const Vec3& a2,
                       const Vec3& b0, const Vec3& b1, const Vec3& b2);

// Read-only geometric view of a scene: world-space vertices, per-object BVHs
// and bounds. Queries are safe from many threads; after mutating an object's
// pose the caller must call update_object (one mutation epoch per rebuild).
class SceneGeometry {
public:
    explicit SceneGeometry(const Scene& scene);

    const Scene& scene() const { return *scene_; }

    void update_object(const std::string& object_id);
    void update_objects(const std::vector<std::string>& ids);

    // Nearest intersection across all scene objects; deterministic tie-break
    // by (distance, object id). `exclude` skips one object, `only` restricts
    // to one object; both are scene object indices (-1 = unused).
    std::optional<HitRecord> first_hit(const Ray& ray, int exclude = -1,
                                       int only = -1) const;

    bool meshes_intersect(const std::string& id_a, const std::string& id_b) const;

    // Ids of objects intersecting `id`, in scene order.
    std::vector<std::string> intersecting(const std::string& id) const;

    // Largest downward Z translation that leaves the object resting on the
    // first surface below it (other objects or the implicit floor plane z=0).
    // Always <= 0; 0 when already within contact tolerance of support.
    double drop_to_support(const std::string& object_id, double contact_tolerance = 1e-3,
                           int grid = 8) const;

    Box3 object_aabb(int index) const { return objects_[static_cast<size_t>(index)].aabb; }
    Box3 object_aabb(const std::string& id) const;
    const std::vector<Vec3>& world_vertices(int index) const {
        return objects_[static_cast<size_t>(index)].world_vertices;
    }

    // Odd/even parity test against one object's (closed) mesh.
    bool point_inside(const Vec3& p, int object_index) const;

private:
    struct ObjectData {
        std::vector<Vec3> world_vertices;
        Bvh bvh;
        Box3 aabb;
    };

    void rebuild(size_t index);

    const Scene* scene_;
    std::vector<ObjectData> objects_;
};

// One-off convenience wrappers matching the library-level operations; they
// build a temporary SceneGeometry, so hot paths should hold one instead.
std::optional<HitRecord> ray_first_hit(const Scene& scene, const Ray& ray);
bool meshes_intersect(const Scene& scene, const std::string& id_a, const std::string& id_b);
double drop_to_support(const Scene& scene, const std::string& object_id);

}  // namespace plausigen
