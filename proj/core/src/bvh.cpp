#include "plausigen/bvh.hpp"

#include <algorithm>
#include <limits>

namespace plausigen {

std::optional<double> ray_triangle(const Ray& ray, const Vec3& a, const Vec3& b,
                                   const Vec3& c, double t_min) {
    constexpr double kParallelEps = 1e-12;
    Vec3 e1 = b - a;
    Vec3 e2 = c - a;
    Vec3 p = cross(ray.direction, e2);
    double det = dot(e1, p);
    if (std::abs(det) < kParallelEps) return std::nullopt;
    double inv_det = 1.0 / det;
    Vec3 s = ray.origin - a;
    double u = dot(s, p) * inv_det;
    if (u < 0.0 || u > 1.0) return std::nullopt;
    Vec3 q = cross(s, e1);
    double v = dot(ray.direction, q) * inv_det;
    if (v < 0.0 || u + v > 1.0) return std::nullopt;
    double t = dot(e2, q) * inv_det;
    if (t < t_min) return std::nullopt;
    return t;
}

Bvh::Bvh(const std::vector<Vec3>& vertices, const std::vector<Triangle>& triangles)
    : vertices_(&vertices), triangles_(&triangles) {
    if (triangles.empty()) return;
    order_.resize(triangles.size());
    for (uint32_t i = 0; i < triangles.size(); ++i) order_[i] = i;
    nodes_.reserve(triangles.size() * 2);
    build(order_, 0, static_cast<int32_t>(order_.size()));
}

int32_t Bvh::build(std::vector<uint32_t>& order, int32_t begin, int32_t end) {
    int32_t node_index = static_cast<int32_t>(nodes_.size());
    nodes_.push_back({});

    Box3 box;
    Box3 centroid_box;
    for (int32_t i = begin; i < end; ++i) {
        const Triangle& t = (*triangles_)[order[static_cast<size_t>(i)]];
        Box3 tb;
        tb.expand((*vertices_)[t.a]);
        tb.expand((*vertices_)[t.b]);
        tb.expand((*vertices_)[t.c]);
        box.expand(tb);
        centroid_box.expand(tb.center());
    }
    nodes_[static_cast<size_t>(node_index)].box = box;

    int32_t count = end - begin;
    constexpr int32_t kLeafSize = 4;
    Vec3 ext = centroid_box.extents();
    int axis = ext.x >= ext.y ? (ext.x >= ext.z ? 0 : 2) : (ext.y >= ext.z ? 1 : 2);
    if (count <= kLeafSize || ext[axis] <= 0.0) {
        nodes_[static_cast<size_t>(node_index)].left = begin;
        nodes_[static_cast<size_t>(node_index)].count = count;
        return node_index;
    }

    int32_t mid = begin + count / 2;
    std::nth_element(order.begin() + begin, order.begin() + mid, order.begin() + end,
                     [this, axis](uint32_t lhs, uint32_t rhs) {
                         auto centroid = [this](uint32_t ti, int ax) {
                             const Triangle& t = (*triangles_)[ti];
                             return ((*vertices_)[t.a][ax] + (*vertices_)[t.b][ax] +
                                     (*vertices_)[t.c][ax]) / 3.0;
                         };
                         double ca = centroid(lhs, axis);
                         double cb = centroid(rhs, axis);
                         return ca != cb ? ca < cb : lhs < rhs;
                     });

    int32_t left = build(order, begin, mid);
    int32_t right = build(order, mid, end);
    nodes_[static_cast<size_t>(node_index)].left = left;
    nodes_[static_cast<size_t>(node_index)].right = right;
    nodes_[static_cast<size_t>(node_index)].count = 0;
    return node_index;
}

bool Bvh::ray_box(const Ray& ray, const Vec3& inv_dir, const Box3& box, double t_max) {
    double t0 = 0.0, t1 = t_max;
    for (int ax = 0; ax < 3; ++ax) {
        double near = (box.min[ax] - ray.origin[ax]) * inv_dir[ax];
        double far = (box.max[ax] - ray.origin[ax]) * inv_dir[ax];
        if (near > far) std::swap(near, far);
        t0 = std::max(t0, near);
        t1 = std::min(t1, far);
        if (t0 > t1) return false;
    }
    return true;
}

std::optional<TriangleHit> Bvh::first_hit(const Ray& ray, double t_min) const {
    if (nodes_.empty()) return std::nullopt;
    Vec3 inv_dir{1.0 / ray.direction.x, 1.0 / ray.direction.y, 1.0 / ray.direction.z};

    double best_t = std::numeric_limits<double>::infinity();
    uint32_t best_tri = 0;
    bool found = false;

    int32_t stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node& node = nodes_[static_cast<size_t>(stack[--sp])];
        if (!ray_box(ray, inv_dir, node.box, best_t)) continue;
        if (node.count > 0) {
            for (int32_t i = node.left; i < node.left + node.count; ++i) {
                uint32_t ti = order_[static_cast<size_t>(i)];
                const Triangle& t = (*triangles_)[ti];
                auto hit = ray_triangle(ray, (*vertices_)[t.a], (*vertices_)[t.b],
                                        (*vertices_)[t.c], t_min);
                if (hit && (*hit < best_t || (*hit == best_t && found && ti < best_tri))) {
                    best_t = *hit;
                    best_tri = ti;
                    found = true;
                }
            }
        } else {
            stack[sp++] = node.right;
            stack[sp++] = node.left;
        }
    }
    if (!found) return std::nullopt;
    return TriangleHit{best_t, best_tri};
}

int Bvh::count_hits(const Ray& ray, double t_min) const {
    if (nodes_.empty()) return 0;
    Vec3 inv_dir{1.0 / ray.direction.x, 1.0 / ray.direction.y, 1.0 / ray.direction.z};
    double inf = std::numeric_limits<double>::infinity();
    int count = 0;

    int32_t stack[64];
    int sp = 0;
    stack[sp++] = 0;
    while (sp > 0) {
        const Node& node = nodes_[static_cast<size_t>(stack[--sp])];
        if (!ray_box(ray, inv_dir, node.box, inf)) continue;
        if (node.count > 0) {
            for (int32_t i = node.left; i < node.left + node.count; ++i) {
                const Triangle& t = (*triangles_)[order_[static_cast<size_t>(i)]];
                auto hit = ray_triangle(ray, (*vertices_)[t.a], (*vertices_)[t.b],
                                        (*vertices_)[t.c], t_min);
                if (hit && *hit > t_min) ++count;
            }
        } else {
            stack[sp++] = node.right;
            stack[sp++] = node.left;
        }
    }
    return count;
}

void Bvh::overlap_candidates(const Bvh& other,
                             std::vector<std::pair<uint32_t, uint32_t>>& out) const {
    if (nodes_.empty() || other.nodes_.empty()) return;
    std::vector<std::pair<int32_t, int32_t>> stack;
    stack.emplace_back(0, 0);
    while (!stack.empty()) {
        auto [ia, ib] = stack.back();
        stack.pop_back();
        const Node& na = nodes_[static_cast<size_t>(ia)];
        const Node& nb = other.nodes_[static_cast<size_t>(ib)];
        if (!na.box.overlaps(nb.box)) continue;
        bool leaf_a = na.count > 0;
        bool leaf_b = nb.count > 0;
        if (leaf_a && leaf_b) {
            for (int32_t i = na.left; i < na.left + na.count; ++i)
                for (int32_t j = nb.left; j < nb.left + nb.count; ++j)
                    out.emplace_back(order_[static_cast<size_t>(i)],
                                     other.order_[static_cast<size_t>(j)]);
        } else if (leaf_a || (!leaf_b && nb.box.max_extent() > na.box.max_extent())) {
            stack.emplace_back(ia, nb.left);
            stack.emplace_back(ia, nb.right);
        } else {
            stack.emplace_back(na.left, ib);
            stack.emplace_back(na.right, ib);
        }
    }
}

}  // namespace plausigen
