#include "plausigen/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "plausigen/errors.hpp"

namespace plausigen {

namespace {

const Vec3 kLightDir = normalized({0.3, 0.5, 0.8});
constexpr double kAmbient = 0.35;
constexpr double kDiffuse = 0.65;
constexpr uint8_t kBackground[3] = {40, 40, 48};

std::array<uint8_t, 3> hsv_to_rgb(double h, double s, double v) {
    double r = 0, g = 0, b = 0;
    double i = std::floor(h * 6.0);
    double f = h * 6.0 - i;
    double p = v * (1.0 - s);
    double q = v * (1.0 - f * s);
    double t = v * (1.0 - (1.0 - f) * s);
    switch (static_cast<int>(i) % 6) {
        case 0: r = v; g = t; b = p; break;
        case 1: r = q; g = v; b = p; break;
        case 2: r = p; g = v; b = t; break;
        case 3: r = p; g = q; b = v; break;
        case 4: r = t; g = p; b = v; break;
        case 5: r = v; g = p; b = q; break;
    }
    auto to8 = [](double x) {
        return static_cast<uint8_t>(std::lround(std::clamp(x, 0.0, 1.0) * 255.0));
    };
    return {to8(r), to8(g), to8(b)};
}

struct ViewVertex {
    Vec3 view;  // camera-space coordinates, z = depth
};

// Clip a triangle against the near plane (z = near). Returns 0..4 vertices.
int clip_near(const ViewVertex in[3], double near, ViewVertex out[4]) {
    int count = 0;
    for (int i = 0; i < 3; ++i) {
        const ViewVertex& a = in[i];
        const ViewVertex& b = in[(i + 1) % 3];
        bool a_in = a.view.z >= near;
        bool b_in = b.view.z >= near;
        if (a_in) out[count++] = a;
        if (a_in != b_in) {
            double t = (near - a.view.z) / (b.view.z - a.view.z);
            out[count++] = {a.view + (b.view - a.view) * t};
        }
    }
    return count;
}

double edge(double ax, double ay, double bx, double by, double px, double py) {
    return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
}

struct RasterTarget {
    int size = 0;
    std::vector<double> inv_depth;
    std::vector<uint16_t> ids;
    std::vector<uint8_t>* color = nullptr;  // optional

    void reset(int image_size) {
        size = image_size;
        inv_depth.assign(static_cast<size_t>(size) * size, 0.0);
        ids.assign(static_cast<size_t>(size) * size, 0);
    }
};

void rasterize_object(const SceneGeometry& geometry, const CameraFrame& frame,
                      int object_index, RasterTarget& target) {
    const Scene& scene = geometry.scene();
    const SceneObject& obj = scene.objects[static_cast<size_t>(object_index)];
    const Mesh& mesh = scene.mesh_of(obj);
    const std::vector<Vec3>& world = geometry.world_vertices(object_index);
    uint16_t write_id = static_cast<uint16_t>(object_index + 1);
    std::array<uint8_t, 3> base = class_color(obj.class_label);
    int size = target.size;

    for (const Triangle& tri : mesh.triangles) {
        const Vec3& w0 = world[tri.a];
        const Vec3& w1 = world[tri.b];
        const Vec3& w2 = world[tri.c];

        ViewVertex tv[3] = {{frame.view_coords(w0)},
                            {frame.view_coords(w1)},
                            {frame.view_coords(w2)}};
        ViewVertex clipped[4];
        int n = clip_near(tv, frame.near_clip, clipped);
        if (n < 3) continue;

        uint8_t shaded[3] = {0, 0, 0};
        if (target.color) {
            Vec3 normal = normalized(cross(w1 - w0, w2 - w0));
            double intensity = kAmbient + kDiffuse * std::abs(dot(normal, kLightDir));
            for (int c = 0; c < 3; ++c)
                shaded[c] = static_cast<uint8_t>(
                    std::lround(std::clamp(base[c] * intensity, 0.0, 255.0)));
        }

        // fan triangulation of the clipped polygon
        for (int piece = 0; piece + 2 < n; ++piece) {
            const ViewVertex* p0 = &clipped[0];
            const ViewVertex* p1 = &clipped[piece + 1];
            const ViewVertex* p2 = &clipped[piece + 2];

            CameraFrame::Projected s0 = frame.to_pixel(p0->view);
            CameraFrame::Projected s1 = frame.to_pixel(p1->view);
            CameraFrame::Projected s2 = frame.to_pixel(p2->view);
            double area = edge(s0.x, s0.y, s1.x, s1.y, s2.x, s2.y);
            if (area == 0.0) continue;

            double min_x = std::min({s0.x, s1.x, s2.x});
            double max_x = std::max({s0.x, s1.x, s2.x});
            double min_y = std::min({s0.y, s1.y, s2.y});
            double max_y = std::max({s0.y, s1.y, s2.y});
            int x0 = std::max(0, static_cast<int>(std::floor(min_x - 0.5)));
            int x1 = std::min(size - 1, static_cast<int>(std::ceil(max_x)));
            int y0 = std::max(0, static_cast<int>(std::floor(min_y - 0.5)));
            int y1 = std::min(size - 1, static_cast<int>(std::ceil(max_y)));
            if (x0 > x1 || y0 > y1) continue;

            double iz0 = 1.0 / s0.depth;
            double iz1 = 1.0 / s1.depth;
            double iz2 = 1.0 / s2.depth;
            double inv_area = 1.0 / area;

            for (int y = y0; y <= y1; ++y) {
                double py = y + 0.5;
                for (int x = x0; x <= x1; ++x) {
                    double px = x + 0.5;
                    double e0 = edge(s1.x, s1.y, s2.x, s2.y, px, py);
                    double e1 = edge(s2.x, s2.y, s0.x, s0.y, px, py);
                    double e2 = edge(s0.x, s0.y, s1.x, s1.y, px, py);
                    bool inside = area > 0.0 ? (e0 >= 0 && e1 >= 0 && e2 >= 0)
                                             : (e0 <= 0 && e1 <= 0 && e2 <= 0);
                    if (!inside) continue;
                    double b0 = e0 * inv_area;
                    double b1 = e1 * inv_area;
                    double b2 = e2 * inv_area;
                    // 1/z is affine in screen space, so this interpolation is
                    // perspective-correct for the depth test.
                    double inv_z = b0 * iz0 + b1 * iz1 + b2 * iz2;
                    size_t idx = static_cast<size_t>(y) * size + x;
                    if (inv_z > target.inv_depth[idx]) {
                        target.inv_depth[idx] = inv_z;
                        target.ids[idx] = write_id;
                        if (target.color) {
                            uint8_t* px_color = target.color->data() + idx * 3;
                            px_color[0] = shaded[0];
                            px_color[1] = shaded[1];
                            px_color[2] = shaded[2];
                        }
                    }
                }
            }
        }
    }
}

}  // namespace

std::array<uint8_t, 3> class_color(const std::string& class_label) {
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : class_label) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    double hue = static_cast<double>(h % 3600) / 3600.0;
    return hsv_to_rgb(hue, 0.55, 0.85);
}

RenderOutput render(const Scene& scene, const SceneGeometry& geometry,
                    const CameraSpec& camera) {
    CameraFrame frame = CameraFrame::from_spec(camera);
    int size = camera.image_size;

    RenderOutput out;
    out.image_size = size;
    out.color.assign(static_cast<size_t>(size) * size * 3, 0);
    for (size_t i = 0; i < out.color.size(); i += 3) {
        out.color[i] = kBackground[0];
        out.color[i + 1] = kBackground[1];
        out.color[i + 2] = kBackground[2];
    }

    RasterTarget target;
    target.reset(size);
    target.color = &out.color;
    for (size_t i = 0; i < scene.objects.size(); ++i)
        rasterize_object(geometry, frame, static_cast<int>(i), target);
    out.id_map = std::move(target.ids);

    // Tight boxes and pixel counts from the id map.
    std::map<uint16_t, ObjectRenderInfo> infos;
    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            uint16_t id = out.id_map[static_cast<size_t>(y) * size + x];
            if (id == 0) continue;
            auto [it, fresh] = infos.try_emplace(id);
            ObjectRenderInfo& info = it->second;
            if (fresh) info.box = {x, y, x + 1, y + 1};
            info.box.min_x = std::min(info.box.min_x, x);
            info.box.min_y = std::min(info.box.min_y, y);
            info.box.max_x = std::max(info.box.max_x, x + 1);
            info.box.max_y = std::max(info.box.max_y, y + 1);
            ++info.pixel_count;
        }
    }

    // Visible fraction: pixels owned in the full frame over pixels the
    // object covers when rendered alone with the same camera.
    RasterTarget solo;
    for (auto& [id, info] : infos) {
        int object_index = static_cast<int>(id) - 1;
        solo.reset(size);
        solo.color = nullptr;
        rasterize_object(geometry, frame, object_index, solo);
        long long alone = 0;
        for (uint16_t v : solo.ids)
            if (v != 0) ++alone;
        info.visible_fraction =
            alone > 0 ? static_cast<double>(info.pixel_count) / static_cast<double>(alone)
                      : 0.0;
        out.per_object.emplace(scene.objects[static_cast<size_t>(object_index)].id, info);
    }
    return out;
}

RenderOutput render(const Scene& scene, const CameraSpec& camera) {
    SceneGeometry geometry(scene);
    return render(scene, geometry, camera);
}

PlausibilityScore plausibility_score(const RenderOutput& output,
                                     const std::vector<std::string>& transformed_ids) {
    std::vector<ScreenBox> boxes;
    for (const std::string& id : transformed_ids) {
        auto it = output.per_object.find(id);
        if (it != output.per_object.end() && it->second.pixel_count > 0)
            boxes.push_back(it->second.box);
    }
    double area = static_cast<double>(box_union_area(boxes));
    double total = static_cast<double>(output.image_size) * output.image_size;
    return {1.0 - area / total};
}

}  // namespace plausigen
