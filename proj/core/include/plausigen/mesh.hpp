#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plausigen/math.hpp"

namespace plausigen {

struct Triangle {
    uint32_t a = 0, b = 0, c = 0;
};

struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::vector<Vec3> normals;  // per-vertex, optional (empty if absent)

    Box3 local_aabb() const {
        Box3 box;
        for (const Vec3& v : vertices) box.expand(v);
        return box;
    }
};

// Loads a Wavefront OBJ file. Polygon faces are fan-triangulated, negative
// indices resolved, and zero-area triangles dropped (with a warning counter
// available to the caller). Throws MissingMesh if the file does not exist,
// DegenerateGeometry if no triangle survives cleanup.
Mesh load_obj(const std::string& path, int* dropped_degenerate = nullptr);

}  // namespace plausigen
