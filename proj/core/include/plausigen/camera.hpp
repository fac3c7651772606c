#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "plausigen/config.hpp"
#include "plausigen/geometry.hpp"
#include "plausigen/perturb.hpp"
#include "plausigen/rng.hpp"

namespace plausigen {

struct CameraSpec {
    Vec3 location;
    Vec3 target;
    double vertical_fov_deg = 50.0;
    int image_size = 512;
};

// World -> pixel mapping shared by the visibility tests and the rasterizer,
// so frustum decisions and rendered pixels always agree. Top-left pixel
// origin, pixel centers at (x + 0.5, y + 0.5), square images.
struct CameraFrame {
    Vec3 position;
    Vec3 forward, right, up;
    double half_extent = 0.0;  // tan(fov/2)
    double near_clip = 1.0;
    int image_size = 512;

    static CameraFrame from_spec(const CameraSpec& spec);  // throws DegenerateCamera

    Vec3 view_coords(const Vec3& world) const {
        Vec3 d = world - position;
        return {dot(d, right), dot(d, up), dot(d, forward)};
    }

    struct Projected {
        double x = 0.0, y = 0.0;  // continuous pixel coordinates
        double depth = 0.0;       // view-space depth
    };

    // Continuous pixel coordinates of a view-space point (depth must be > 0).
    Projected to_pixel(const Vec3& view) const {
        double inv = 1.0 / view.z;
        double ndc_x = view.x * inv / half_extent;
        double ndc_y = view.y * inv / half_extent;
        return {(ndc_x + 1.0) * 0.5 * image_size, (1.0 - ndc_y) * 0.5 * image_size, view.z};
    }

    // Projection with frustum test: in front of the near plane and inside
    // the image rectangle.
    std::optional<Projected> project(const Vec3& world) const {
        Vec3 v = view_coords(world);
        if (v.z < near_clip) return std::nullopt;
        Projected p = to_pixel(v);
        if (p.x < 0.0 || p.x >= image_size || p.y < 0.0 || p.y >= image_size)
            return std::nullopt;
        return p;
    }
};

struct VisibilityReport {
    std::map<std::string, double> visible_fraction;
    int objects_in_view = 0;
};

// Evaluates candidate cameras against one fixed set of transforms: the
// original scene and a scratch copy with every record committed are indexed
// once, then each candidate costs only ray casts.
class CameraValidator {
public:
    CameraValidator(const Scene& scene, const std::vector<TransformRecord>& records,
                    const GenerationConfig& config);

    // True iff every transformed object is sufficiently visible at its post
    // pose, every one was also visible at its pre pose from this camera, and
    // at least n_min objects are in view.
    bool check_visibility(const CameraSpec& camera) const;

    // True iff some transformed object is essentially invisible because
    // other geometry blocks the line toward it (in which case moving along
    // the view ray cannot help).
    bool check_obscuration(const CameraSpec& camera) const;

    // Centroid of the transformed objects' positions before and after their
    // transforms; the look-at target of the search.
    Vec3 centroid() const { return centroid_; }

    VisibilityReport report(const CameraSpec& camera) const;

    double visible_fraction_post(const CameraSpec& camera, const std::string& id) const;
    double visible_fraction_pre(const CameraSpec& camera, const std::string& id) const;

private:
    double fraction(const CameraFrame& frame, const SceneGeometry& geo, int index) const;

    const Scene* pre_scene_;
    std::unique_ptr<Scene> post_scene_;
    std::unique_ptr<SceneGeometry> pre_geo_;
    std::unique_ptr<SceneGeometry> post_geo_;
    std::vector<TransformRecord> records_;
    GenerationConfig config_;
    Vec3 centroid_;
    std::vector<std::vector<Vec3>> local_samples_;  // per object, mesh space
};

// Uniform draw from the configured box above the centroid, aimed at it.
CameraSpec random_initial_camera(Rng& rng, const Vec3& centroid,
                                 const GenerationConfig& config);

struct CameraSearchStep {
    int iteration = 0;
    int direction = 0;  // -1 or +1
    Vec3 location;
    bool visibility_passed = false;
    bool obscuration_detected = false;
};

struct CameraSearchTrace {
    Vec3 centroid;
    Vec3 initial_location;
    double step_length = 0.0;
    std::vector<CameraSearchStep> steps;
};

// Line search along the centroid->initial-location direction, alternating
// sides, abandoning a side once occlusion is detected there. Candidate i
// sits at centroid + v * (floor(i/2) + 1) * d * step. Returns the first
// camera passing check_visibility, or nothing.
std::optional<CameraSpec> find_camera(const Scene& scene,
                                      const std::vector<TransformRecord>& records,
                                      Rng& rng, const GenerationConfig& config,
                                      int n_iter, double step_length,
                                      CameraSearchTrace* trace = nullptr);

// As above with n_iter from config and step = step_fraction * |initial - centroid|.
std::optional<CameraSpec> find_camera(const Scene& scene,
                                      const std::vector<TransformRecord>& records,
                                      Rng& rng, const GenerationConfig& config,
                                      CameraSearchTrace* trace = nullptr);

}  // namespace plausigen
