#include "plausigen/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "plausigen/errors.hpp"

namespace plausigen {

namespace {

constexpr double kTouchEps = 1e-9;       // separation below this counts as contact
constexpr double kLandingClearance = 1e-4;  // gap left by drop_to_support

// Fixed skew direction for parity tests; never parallel to the axis-aligned
// planes fixture meshes are made of.
const Vec3 kParityDir = normalized({0.5403023058681398, 0.8414709848078965,
                                    0.30116867893975674});

struct Interval {
    double lo = 0.0, hi = 0.0;
    bool valid = false;
};

// Projection interval of a triangle's plane-crossing segment on one axis.
// p* are the axis projections, d* the signed (unnormalized) distances to the
// other triangle's plane, eps the zero band in the same units as d*.
Interval crossing_interval(double p0, double p1, double p2, double d0, double d1,
                           double d2, double eps) {
    const double p[3] = {p0, p1, p2};
    const double d[3] = {d0, d1, d2};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(d[i]) <= eps) {  // vertex lies in the plane
            lo = std::min(lo, p[i]);
            hi = std::max(hi, p[i]);
            any = true;
        }
        int j = (i + 1) % 3;
        if ((d[i] > eps && d[j] < -eps) || (d[i] < -eps && d[j] > eps)) {
            double t = d[i] / (d[i] - d[j]);
            double x = p[i] + (p[j] - p[i]) * t;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
            any = true;
        }
    }
    return {lo, hi, any};
}

int dominant_axis(const Vec3& n) {
    double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
    return ax >= ay ? (ax >= az ? 0 : 2) : (ay >= az ? 1 : 2);
}

struct P2 {
    double x, y;
};

double orient2d(const P2& a, const P2& b, const P2& c) {
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

bool segments_intersect_2d(const P2& a, const P2& b, const P2& c, const P2& d) {
    double d1 = orient2d(c, d, a);
    double d2 = orient2d(c, d, b);
    double d3 = orient2d(a, b, c);
    double d4 = orient2d(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
        ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    auto on_segment = [](const P2& p, const P2& q, const P2& r) {
        return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
               std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
    };
    if (d1 == 0 && on_segment(c, a, d)) return true;
    if (d2 == 0 && on_segment(c, b, d)) return true;
    if (d3 == 0 && on_segment(a, c, b)) return true;
    if (d4 == 0 && on_segment(a, d, b)) return true;
    return false;
}

bool point_in_triangle_2d(const P2& p, const P2& a, const P2& b, const P2& c) {
    double d1 = orient2d(a, b, p);
    double d2 = orient2d(b, c, p);
    double d3 = orient2d(c, a, p);
    bool has_neg = d1 < 0 || d2 < 0 || d3 < 0;
    bool has_pos = d1 > 0 || d2 > 0 || d3 > 0;
    return !(has_neg && has_pos);
}

bool coplanar_tri_tri(const Vec3& n, const Vec3& a0, const Vec3& a1, const Vec3& a2,
                      const Vec3& b0, const Vec3& b1, const Vec3& b2) {
    int drop = dominant_axis(n);
    int u = drop == 0 ? 1 : 0;
    int v = drop == 2 ? 1 : 2;
    P2 a[3] = {{a0[u], a0[v]}, {a1[u], a1[v]}, {a2[u], a2[v]}};
    P2 b[3] = {{b0[u], b0[v]}, {b1[u], b1[v]}, {b2[u], b2[v]}};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (segments_intersect_2d(a[i], a[(i + 1) % 3], b[j], b[(j + 1) % 3]))
                return true;
    if (point_in_triangle_2d(a[0], b[0], b[1], b[2])) return true;
    if (point_in_triangle_2d(b[0], a[0], a[1], a[2])) return true;
    return false;
}

}  // namespace

bool tri_tri_intersect(const Vec3& a0, const Vec3& a1, const Vec3& a2,
                       const Vec3& b0, const Vec3& b1, const Vec3& b2) {
    Vec3 nb = cross(b1 - b0, b2 - b0);
    double db = -dot(nb, b0);
    double da0 = dot(nb, a0) + db;
    double da1 = dot(nb, a1) + db;
    double da2 = dot(nb, a2) + db;
    double eps_b = kTouchEps * norm(nb);
    if (da0 > eps_b && da1 > eps_b && da2 > eps_b) return false;
    if (da0 < -eps_b && da1 < -eps_b && da2 < -eps_b) return false;

    Vec3 na = cross(a1 - a0, a2 - a0);
    double da = -dot(na, a0);
    double db0 = dot(na, b0) + da;
    double db1 = dot(na, b1) + da;
    double db2 = dot(na, b2) + da;
    double eps_a = kTouchEps * norm(na);
    if (db0 > eps_a && db1 > eps_a && db2 > eps_a) return false;
    if (db0 < -eps_a && db1 < -eps_a && db2 < -eps_a) return false;

    bool a_in_plane = std::abs(da0) <= eps_b && std::abs(da1) <= eps_b && std::abs(da2) <= eps_b;
    if (a_in_plane) return coplanar_tri_tri(nb, a0, a1, a2, b0, b1, b2);

    // Project onto the dominant axis of the plane-intersection line.
    Vec3 line_dir = cross(na, nb);
    int axis = dominant_axis(line_dir);
    Interval ia = crossing_interval(a0[axis], a1[axis], a2[axis], da0, da1, da2, eps_b);
    Interval ib = crossing_interval(b0[axis], b1[axis], b2[axis], db0, db1, db2, eps_a);
    if (!ia.valid || !ib.valid) return false;
    return ia.lo <= ib.hi + kTouchEps && ib.lo <= ia.hi + kTouchEps;
}

long long box_union_area(const std::vector<ScreenBox>& boxes) {
    std::vector<int> xs;
    xs.reserve(boxes.size() * 2);
    for (const ScreenBox& b : boxes) {
        if (b.min_x < b.max_x && b.min_y < b.max_y) {
            xs.push_back(b.min_x);
            xs.push_back(b.max_x);
        }
    }
    if (xs.empty()) return 0;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    long long area = 0;
    std::vector<std::pair<int, int>> spans;
    for (size_t i = 0; i + 1 < xs.size(); ++i) {
        int x0 = xs[i], x1 = xs[i + 1];
        spans.clear();
        for (const ScreenBox& b : boxes)
            if (b.min_x <= x0 && b.max_x >= x1 && b.min_y < b.max_y)
                spans.emplace_back(b.min_y, b.max_y);
        if (spans.empty()) continue;
        std::sort(spans.begin(), spans.end());
        long long covered = 0;
        int cur_lo = spans[0].first, cur_hi = spans[0].second;
        for (size_t k = 1; k < spans.size(); ++k) {
            if (spans[k].first > cur_hi) {
                covered += cur_hi - cur_lo;
                cur_lo = spans[k].first;
                cur_hi = spans[k].second;
            } else {
                cur_hi = std::max(cur_hi, spans[k].second);
            }
        }
        covered += cur_hi - cur_lo;
        area += covered * static_cast<long long>(x1 - x0);
    }
    return area;
}

SceneGeometry::SceneGeometry(const Scene& scene) : scene_(&scene) {
    objects_.resize(scene.objects.size());
    for (size_t i = 0; i < objects_.size(); ++i) rebuild(i);
}

void SceneGeometry::rebuild(size_t index) {
    const SceneObject& obj = scene_->objects[index];
    const Mesh& mesh = scene_->mesh_of(obj);
    ObjectData& data = objects_[index];
    Mat3 r = obj.pose.rotation_matrix();
    data.world_vertices.resize(mesh.vertices.size());
    Box3 box;
    for (size_t v = 0; v < mesh.vertices.size(); ++v) {
        data.world_vertices[v] =
            obj.pose.translation + r * cwise_mul(obj.pose.scale, mesh.vertices[v]);
        box.expand(data.world_vertices[v]);
    }
    data.aabb = box;
    data.bvh = Bvh(data.world_vertices, mesh.triangles);
}

void SceneGeometry::update_object(const std::string& object_id) {
    int i = scene_->object_index(object_id);
    if (i < 0) throw UnknownObject("no object with id '" + object_id + "'");
    rebuild(static_cast<size_t>(i));
}

void SceneGeometry::update_objects(const std::vector<std::string>& ids) {
    for (const std::string& id : ids) update_object(id);
}

std::optional<HitRecord> SceneGeometry::first_hit(const Ray& ray, int exclude,
                                                  int only) const {
    double best_t = std::numeric_limits<double>::infinity();
    const std::string* best_id = nullptr;
    for (size_t i = 0; i < objects_.size(); ++i) {
        if (static_cast<int>(i) == exclude) continue;
        if (only >= 0 && static_cast<int>(i) != only) continue;
        auto hit = objects_[i].bvh.first_hit(ray);
        if (!hit) continue;
        const std::string& id = scene_->objects[i].id;
        if (hit->distance < best_t ||
            (hit->distance == best_t && best_id && id < *best_id)) {
            best_t = hit->distance;
            best_id = &id;
        }
    }
    if (!best_id) return std::nullopt;
    return HitRecord{*best_id, best_t, ray.origin + ray.direction * best_t};
}

bool SceneGeometry::meshes_intersect(const std::string& id_a,
                                     const std::string& id_b) const {
    int ia = scene_->object_index(id_a);
    int ib = scene_->object_index(id_b);
    if (ia < 0) throw UnknownObject("no object with id '" + id_a + "'");
    if (ib < 0) throw UnknownObject("no object with id '" + id_b + "'");
    if (ia == ib) throw std::invalid_argument("meshes_intersect requires distinct objects");

    const ObjectData& a = objects_[static_cast<size_t>(ia)];
    const ObjectData& b = objects_[static_cast<size_t>(ib)];
    if (!a.aabb.overlaps(b.aabb)) return false;

    std::vector<std::pair<uint32_t, uint32_t>> pairs;
    a.bvh.overlap_candidates(b.bvh, pairs);
    const Mesh& mesh_a = scene_->mesh_of(scene_->objects[static_cast<size_t>(ia)]);
    const Mesh& mesh_b = scene_->mesh_of(scene_->objects[static_cast<size_t>(ib)]);
    for (const auto& [ta, tb] : pairs) {
        const Triangle& t1 = mesh_a.triangles[ta];
        const Triangle& t2 = mesh_b.triangles[tb];
        if (tri_tri_intersect(a.world_vertices[t1.a], a.world_vertices[t1.b],
                              a.world_vertices[t1.c], b.world_vertices[t2.a],
                              b.world_vertices[t2.b], b.world_vertices[t2.c]))
            return true;
    }

    // No surface crossing: one mesh may still fully contain the other.
    if (!a.world_vertices.empty() && point_inside(a.world_vertices[0], ib)) return true;
    if (!b.world_vertices.empty() && point_inside(b.world_vertices[0], ia)) return true;
    return false;
}

std::vector<std::string> SceneGeometry::intersecting(const std::string& id) const {
    int idx = scene_->object_index(id);
    if (idx < 0) throw UnknownObject("no object with id '" + id + "'");
    std::vector<std::string> out;
    const Box3& box = objects_[static_cast<size_t>(idx)].aabb;
    for (size_t i = 0; i < objects_.size(); ++i) {
        if (static_cast<int>(i) == idx) continue;
        if (!box.overlaps(objects_[i].aabb)) continue;
        if (meshes_intersect(id, scene_->objects[i].id)) out.push_back(scene_->objects[i].id);
    }
    return out;
}

bool SceneGeometry::point_inside(const Vec3& p, int object_index) const {
    const ObjectData& data = objects_[static_cast<size_t>(object_index)];
    if (!data.aabb.contains(p)) return false;
    int hits = data.bvh.count_hits(Ray{p, kParityDir}, 1e-12);
    return (hits % 2) == 1;
}

double SceneGeometry::drop_to_support(const std::string& object_id,
                                      double contact_tolerance, int grid) const {
    int idx = scene_->object_index(object_id);
    if (idx < 0) throw UnknownObject("no object with id '" + object_id + "'");
    const Box3& box = objects_[static_cast<size_t>(idx)].aabb;

    double best_gap = std::numeric_limits<double>::infinity();
    for (int gy = 0; gy < grid; ++gy) {
        for (int gx = 0; gx < grid; ++gx) {
            double x = box.min.x + (gx + 0.5) / grid * (box.max.x - box.min.x);
            double y = box.min.y + (gy + 0.5) / grid * (box.max.y - box.min.y);

            // The object's own lowest surface along this column.
            Ray up{{x, y, box.min.z - 1.0}, {0, 0, 1}};
            auto self_hit = first_hit(up, -1, idx);
            if (!self_hit) continue;
            double z_obj = up.origin.z + self_hit->distance;

            // Nearest surface below it: other objects or the floor plane z=0.
            Ray down{{x, y, z_obj - kTouchEps}, {0, 0, -1}};
            auto hit = first_hit(down, idx);
            double z_support = hit ? down.origin.z - hit->distance
                                   : -std::numeric_limits<double>::infinity();
            z_support = std::max(z_support, 0.0);
            best_gap = std::min(best_gap, z_obj - z_support);
        }
    }
    if (!std::isfinite(best_gap)) best_gap = box.min.z;  // no sample column hit the object
    if (best_gap <= contact_tolerance) return 0.0;
    return -(best_gap - kLandingClearance);
}

Box3 SceneGeometry::object_aabb(const std::string& id) const {
    int i = scene_->object_index(id);
    if (i < 0) throw UnknownObject("no object with id '" + id + "'");
    return objects_[static_cast<size_t>(i)].aabb;
}

std::optional<HitRecord> ray_first_hit(const Scene& scene, const Ray& ray) {
    return SceneGeometry(scene).first_hit(ray);
}

bool meshes_intersect(const Scene& scene, const std::string& id_a, const std::string& id_b) {
    return SceneGeometry(scene).meshes_intersect(id_a, id_b);
}

double drop_to_support(const Scene& scene, const std::string& object_id) {
    return SceneGeometry(scene).drop_to_support(object_id);
}

}  // namespace plausigen
