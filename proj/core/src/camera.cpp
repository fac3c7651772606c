#include "plausigen/camera.hpp"

#include <algorithm>
#include <cmath>

#include "plausigen/errors.hpp"

namespace plausigen {

namespace {

constexpr int kSamplesPerObject = 64;
constexpr uint64_t kSampleSeedSalt = 0x5ca1ab1e;

// Stratified area-weighted surface samples in mesh space. The per-object
// seed keeps the sample set stable across runs and across pre/post states.
std::vector<Vec3> surface_samples(const Mesh& mesh, const std::string& object_id) {
    std::vector<double> cumulative;
    cumulative.reserve(mesh.triangles.size());
    double total = 0.0;
    for (const Triangle& t : mesh.triangles) {
        total += 0.5 * norm(cross(mesh.vertices[t.b] - mesh.vertices[t.a],
                                  mesh.vertices[t.c] - mesh.vertices[t.a]));
        cumulative.push_back(total);
    }

    Rng rng(derive_seed(kSampleSeedSalt, object_id));
    std::vector<Vec3> samples;
    samples.reserve(kSamplesPerObject);
    for (int k = 0; k < kSamplesPerObject; ++k) {
        double pick = (k + rng.uniform()) / kSamplesPerObject * total;
        size_t ti = static_cast<size_t>(
            std::lower_bound(cumulative.begin(), cumulative.end(), pick) -
            cumulative.begin());
        if (ti >= mesh.triangles.size()) ti = mesh.triangles.size() - 1;
        const Triangle& t = mesh.triangles[ti];
        double r1 = std::sqrt(rng.uniform());
        double r2 = rng.uniform();
        double u = 1.0 - r1;
        double v = r1 * (1.0 - r2);
        double w = r1 * r2;
        samples.push_back(mesh.vertices[t.a] * u + mesh.vertices[t.b] * v +
                          mesh.vertices[t.c] * w);
    }
    return samples;
}

}  // namespace

CameraFrame CameraFrame::from_spec(const CameraSpec& spec) {
    Vec3 f = spec.target - spec.location;
    double n = norm(f);
    if (n < 1e-12) throw DegenerateCamera("camera location equals its target");
    CameraFrame frame;
    frame.position = spec.location;
    frame.forward = f / n;
    Vec3 world_up{0, 0, 1};
    if (std::abs(dot(frame.forward, world_up)) > 0.999) world_up = {0, 1, 0};
    frame.right = normalized(cross(frame.forward, world_up));
    frame.up = cross(frame.right, frame.forward);
    frame.half_extent = std::tan(deg_to_rad(spec.vertical_fov_deg) * 0.5);
    frame.image_size = spec.image_size;
    return frame;
}

CameraValidator::CameraValidator(const Scene& scene,
                                 const std::vector<TransformRecord>& records,
                                 const GenerationConfig& config)
    : pre_scene_(&scene), records_(records), config_(config) {
    post_scene_ = std::make_unique<Scene>(scene);
    for (const TransformRecord& r : records_) commit_transform(*post_scene_, nullptr, r);
    pre_geo_ = std::make_unique<SceneGeometry>(*pre_scene_);
    post_geo_ = std::make_unique<SceneGeometry>(*post_scene_);

    Vec3 sum{0, 0, 0};
    int n = 0;
    for (const TransformRecord& r : records_) {
        int idx = scene.object_index(r.object_id);
        if (idx < 0) throw UnknownObject("transform record references unknown object '" +
                                         r.object_id + "'");
        sum += pre_geo_->object_aabb(idx).center();
        sum += post_geo_->object_aabb(idx).center();
        n += 2;
    }
    centroid_ = n > 0 ? sum / n : Vec3{0, 0, 0};

    local_samples_.reserve(scene.objects.size());
    for (const SceneObject& obj : scene.objects)
        local_samples_.push_back(surface_samples(scene.mesh_of(obj), obj.id));
}

double CameraValidator::fraction(const CameraFrame& frame, const SceneGeometry& geo,
                                 int index) const {
    const SceneObject& obj = geo.scene().objects[static_cast<size_t>(index)];
    const std::vector<Vec3>& samples = local_samples_[static_cast<size_t>(index)];
    if (samples.empty()) return 0.0;

    int visible = 0;
    for (const Vec3& local : samples) {
        Vec3 world = obj.pose.apply(local);
        if (!frame.project(world)) continue;
        Vec3 to_point = world - frame.position;
        double dist = norm(to_point);
        if (dist < 1e-12) continue;
        Ray ray{frame.position, to_point / dist};
        auto hit = geo.first_hit(ray);
        if (hit && hit->object_id == obj.id &&
            std::abs(hit->distance - dist) <= 1e-6 * dist + 1e-9)
            ++visible;
    }
    return static_cast<double>(visible) / static_cast<double>(samples.size());
}

bool CameraValidator::check_visibility(const CameraSpec& camera) const {
    CameraFrame frame = CameraFrame::from_spec(camera);
    for (const TransformRecord& r : records_) {
        int idx = pre_scene_->object_index(r.object_id);
        if (fraction(frame, *post_geo_, idx) < config_.v_min) return false;
        if (fraction(frame, *pre_geo_, idx) < config_.v_min) return false;
    }
    int in_view = 0;
    for (size_t i = 0; i < pre_scene_->objects.size(); ++i) {
        if (fraction(frame, *post_geo_, static_cast<int>(i)) >= config_.v_min) ++in_view;
        if (in_view >= config_.n_min) return true;
    }
    return in_view >= config_.n_min;
}

bool CameraValidator::check_obscuration(const CameraSpec& camera) const {
    CameraFrame frame = CameraFrame::from_spec(camera);
    for (const TransformRecord& r : records_) {
        int idx = pre_scene_->object_index(r.object_id);
        if (fraction(frame, *post_geo_, idx) >= config_.o_max) continue;
        Vec3 center = post_geo_->object_aabb(idx).center();
        Vec3 dir = center - frame.position;
        double dist = norm(dir);
        if (dist < 1e-12) continue;
        auto hit = post_geo_->first_hit(Ray{frame.position, dir / dist});
        if (hit && hit->object_id != r.object_id) return true;
    }
    return false;
}

VisibilityReport CameraValidator::report(const CameraSpec& camera) const {
    CameraFrame frame = CameraFrame::from_spec(camera);
    VisibilityReport rep;
    for (size_t i = 0; i < pre_scene_->objects.size(); ++i) {
        double f = fraction(frame, *post_geo_, static_cast<int>(i));
        rep.visible_fraction[pre_scene_->objects[i].id] = f;
        if (f >= config_.v_min) ++rep.objects_in_view;
    }
    return rep;
}

double CameraValidator::visible_fraction_post(const CameraSpec& camera,
                                              const std::string& id) const {
    int idx = pre_scene_->object_index(id);
    if (idx < 0) throw UnknownObject("no object with id '" + id + "'");
    return fraction(CameraFrame::from_spec(camera), *post_geo_, idx);
}

double CameraValidator::visible_fraction_pre(const CameraSpec& camera,
                                             const std::string& id) const {
    int idx = pre_scene_->object_index(id);
    if (idx < 0) throw UnknownObject("no object with id '" + id + "'");
    return fraction(CameraFrame::from_spec(camera), *pre_geo_, idx);
}

CameraSpec random_initial_camera(Rng& rng, const Vec3& centroid,
                                 const GenerationConfig& config) {
    CameraSpec spec;
    spec.location = centroid + Vec3{rng.uniform(-config.camera_box_half_x,
                                                config.camera_box_half_x),
                                    rng.uniform(-config.camera_box_half_y,
                                                config.camera_box_half_y),
                                    rng.uniform(config.camera_box_z_min,
                                                config.camera_box_z_max)};
    spec.target = centroid;
    spec.vertical_fov_deg = config.camera_fov_deg;
    spec.image_size = config.image_size;
    return spec;
}

std::optional<CameraSpec> find_camera(const Scene& scene,
                                      const std::vector<TransformRecord>& records,
                                      Rng& rng, const GenerationConfig& config,
                                      int n_iter, double step_length,
                                      CameraSearchTrace* trace) {
    if (records.empty())
        throw std::invalid_argument("find_camera requires at least one transform record");
    if (n_iter < 1) throw std::invalid_argument("find_camera requires n_iter >= 1");

    CameraValidator validator(scene, records, config);
    Vec3 centroid = validator.centroid();
    CameraSpec initial = random_initial_camera(rng, centroid, config);
    Vec3 offset = initial.location - centroid;
    double initial_dist = norm(offset);
    Vec3 v = offset / initial_dist;
    double step = step_length > 0.0 ? step_length : config.step_fraction * initial_dist;

    if (trace) {
        trace->centroid = centroid;
        trace->initial_location = initial.location;
        trace->step_length = step;
        trace->steps.clear();
    }

    bool alive_pos = true, alive_neg = true;
    for (int i = 0; i <= 2 * n_iter; ++i) {
        int d = (i % 2 == 0) ? 1 : -1;
        bool& alive = d > 0 ? alive_pos : alive_neg;
        if (!alive) {
            if (!alive_pos && !alive_neg) break;
            continue;
        }
        double k = std::floor(i / 2.0) + 1.0;
        CameraSpec candidate{centroid + v * (k * d * step), centroid,
                             config.camera_fov_deg, config.image_size};

        bool vis = validator.check_visibility(candidate);
        bool obs = false;
        if (!vis) obs = validator.check_obscuration(candidate);
        if (trace) trace->steps.push_back({i, d, candidate.location, vis, obs});
        if (vis) return candidate;
        if (obs) alive = false;
    }
    return std::nullopt;
}

std::optional<CameraSpec> find_camera(const Scene& scene,
                                      const std::vector<TransformRecord>& records,
                                      Rng& rng, const GenerationConfig& config,
                                      CameraSearchTrace* trace) {
    return find_camera(scene, records, rng, config, config.n_iter, 0.0, trace);
}

}  // namespace plausigen
