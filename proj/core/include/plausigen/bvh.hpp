#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "plausigen/math.hpp"
#include "plausigen/mesh.hpp"

namespace plausigen {

struct Ray {
    Vec3 origin;
    Vec3 direction;  // unit length
};

// Triangle hit candidate local to one BVH (object resolution happens above).
struct TriangleHit {
    double distance = 0.0;
    uint32_t triangle = 0;
};

// Moeller-Trumbore, two-sided. Returns the ray parameter t >= t_min or
// nothing. Degenerate (near-parallel) configurations count as misses.
std::optional<double> ray_triangle(const Ray& ray, const Vec3& a, const Vec3& b,
                                   const Vec3& c, double t_min = 0.0);

// Binary BVH over a fixed triangle soup (world-space vertices). Median split
// on the largest centroid axis, leaves of up to 4 triangles.
class Bvh {
public:
    Bvh() = default;
    Bvh(const std::vector<Vec3>& vertices, const std::vector<Triangle>& triangles);

    const Box3& bounds() const { return nodes_.empty() ? empty_box_ : nodes_[0].box; }
    bool empty() const { return nodes_.empty(); }

    // Nearest triangle hit with t >= t_min; ties resolved toward the lower
    // original triangle index.
    std::optional<TriangleHit> first_hit(const Ray& ray, double t_min = 0.0) const;

    // Number of hits with t > t_min (for parity point-in-mesh tests).
    int count_hits(const Ray& ray, double t_min) const;

    // Pairs of triangle indices (one from each tree) whose leaf boxes overlap.
    void overlap_candidates(const Bvh& other,
                            std::vector<std::pair<uint32_t, uint32_t>>& out) const;

    const std::vector<Vec3>* vertices() const { return vertices_; }
    const std::vector<Triangle>* triangles() const { return triangles_; }

private:
    struct Node {
        Box3 box;
        int32_t left = -1;    // internal: child index; leaf: first triangle slot
        int32_t count = 0;    // leaf: number of triangles; internal: 0
        int32_t right = -1;
    };

    int32_t build(std::vector<uint32_t>& order, int32_t begin, int32_t end);
    static bool ray_box(const Ray& ray, const Vec3& inv_dir, const Box3& box, double t_max);

    const std::vector<Vec3>* vertices_ = nullptr;
    const std::vector<Triangle>* triangles_ = nullptr;
    std::vector<Node> nodes_;
    std::vector<uint32_t> order_;  // triangle indices grouped by leaf
    Box3 empty_box_;
};

}  // namespace plausigen
