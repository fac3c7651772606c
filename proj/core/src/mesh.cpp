#include "plausigen/mesh.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "plausigen/errors.hpp"

namespace plausigen {

namespace {

// OBJ face corners look like "v", "v/vt", "v//vn" or "v/vt/vn".
struct FaceCorner {
    long v = 0;
    long vn = 0;
    bool has_vn = false;
};

FaceCorner parse_corner(const std::string& token) {
    FaceCorner c;
    size_t s1 = token.find('/');
    if (s1 == std::string::npos) {
        c.v = std::stol(token);
        return c;
    }
    c.v = std::stol(token.substr(0, s1));
    size_t s2 = token.find('/', s1 + 1);
    if (s2 == std::string::npos) return c;  // vt only
    std::string vn = token.substr(s2 + 1);
    if (!vn.empty()) {
        c.vn = std::stol(vn);
        c.has_vn = true;
    }
    return c;
}

uint32_t resolve_index(long idx, size_t count, const std::string& path) {
    long r = idx > 0 ? idx - 1 : static_cast<long>(count) + idx;
    if (r < 0 || r >= static_cast<long>(count))
        throw DegenerateGeometry("OBJ index out of range in " + path);
    return static_cast<uint32_t>(r);
}

double triangle_area2(const Vec3& a, const Vec3& b, const Vec3& c) {
    return norm2(cross(b - a, c - a));
}

}  // namespace

Mesh load_obj(const std::string& path, int* dropped_degenerate) {
    std::ifstream in(path);
    if (!in) throw MissingMesh("mesh file not found: " + path);

    Mesh mesh;
    std::vector<Vec3> file_normals;
    std::vector<long> corner_normal;  // per mesh vertex, -1 if absent
    int dropped = 0;

    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 v;
            ls >> v.x >> v.y >> v.z;
            if (!ls && ls.fail() && !ls.eof())
                throw DegenerateGeometry("malformed vertex line in " + path);
            mesh.vertices.push_back(v);
            corner_normal.push_back(-1);
        } else if (tag == "vn") {
            Vec3 n;
            ls >> n.x >> n.y >> n.z;
            file_normals.push_back(n);
        } else if (tag == "f") {
            std::vector<FaceCorner> corners;
            std::string token;
            while (ls >> token) corners.push_back(parse_corner(token));
            if (corners.size() < 3)
                throw DegenerateGeometry("face with fewer than 3 vertices in " + path);
            std::vector<uint32_t> idx;
            idx.reserve(corners.size());
            for (const FaceCorner& c : corners) {
                uint32_t vi = resolve_index(c.v, mesh.vertices.size(), path);
                if (c.has_vn)
                    corner_normal[vi] = static_cast<long>(
                        resolve_index(c.vn, file_normals.size(), path));
                idx.push_back(vi);
            }
            for (size_t k = 1; k + 1 < idx.size(); ++k) {
                Triangle t{idx[0], idx[k], idx[k + 1]};
                if (triangle_area2(mesh.vertices[t.a], mesh.vertices[t.b],
                                   mesh.vertices[t.c]) <= 0.0) {
                    ++dropped;
                    continue;
                }
                mesh.triangles.push_back(t);
            }
        }
        // Other tags (vt, o, g, s, usemtl, mtllib) are ignored.
    }

    if (mesh.triangles.empty())
        throw DegenerateGeometry("mesh has no non-degenerate triangles: " + path);

    if (!file_normals.empty()) {
        bool all_present = true;
        for (long ni : corner_normal)
            if (ni < 0) { all_present = false; break; }
        if (all_present) {
            mesh.normals.reserve(corner_normal.size());
            for (long ni : corner_normal)
                mesh.normals.push_back(normalized(file_normals[static_cast<size_t>(ni)]));
        }
    }

    if (dropped_degenerate) *dropped_degenerate = dropped;
    if (dropped > 0 && !dropped_degenerate)
        std::fprintf(stderr, "warning: dropped %d degenerate triangle(s) in %s\n",
                     dropped, path.c_str());
    return mesh;
}

}  // namespace plausigen
