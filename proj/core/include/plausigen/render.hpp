#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "plausigen/camera.hpp"
#include "plausigen/geometry.hpp"

namespace plausigen {

struct ObjectRenderInfo {
    ScreenBox box;               // tight half-open pixel bounds
    long long pixel_count = 0;   // id-map cells owned by the object
    double visible_fraction = 0; // pixel_count / pixels when rendered alone
};

struct RenderOutput {
    int image_size = 0;
    std::vector<uint8_t> color;    // RGB8, row-major from the top-left
    std::vector<uint16_t> id_map;  // 0 = background, otherwise object index + 1
    std::map<std::string, ObjectRenderInfo> per_object;  // visible objects only

    uint16_t id_at(int x, int y) const {
        return id_map[static_cast<size_t>(y) * image_size + x];
    }
};

struct PlausibilityScore {
    double value = 1.0;
};

// Deterministic per-class flat color.
std::array<uint8_t, 3> class_color(const std::string& class_label);

// Z-buffered rasterization of the scene: one pass fills the color image and
// the object-ID map at identical depth resolution. Flat Lambertian shading,
// one fixed directional light, no back-face culling (room interiors must
// render). Bit-identical across runs. Throws DegenerateCamera.
RenderOutput render(const Scene& scene, const SceneGeometry& geometry,
                    const CameraSpec& camera);
RenderOutput render(const Scene& scene, const CameraSpec& camera);

// 1 - union(screen boxes of visible transformed objects) / image area.
// Transformed objects with no pixels contribute nothing; no transforms (or
// none visible) scores exactly 1.
PlausibilityScore plausibility_score(const RenderOutput& output,
                                     const std::vector<std::string>& transformed_ids);

}  // namespace plausigen
