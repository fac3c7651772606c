#include "plausigen/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "plausigen/errors.hpp"

namespace plausigen {

namespace {

// Restores trial mutations on scope exit so operations can explore candidate
// poses on the live scene without leaking state.
class PoseTrial {
public:
    PoseTrial(Scene& scene, SceneGeometry& geo, const std::string& target)
        : scene_(scene), geo_(geo) {
        ids_.push_back(target);
        for (const std::string& dep : dependents_of(scene, target)) ids_.push_back(dep);
        for (const std::string& id : ids_) saved_.push_back(scene.object(id).pose);
    }

    ~PoseTrial() { restore(); }

    void restore() {
        for (size_t i = 0; i < ids_.size(); ++i) scene_.object(ids_[i]).pose = saved_[i];
        geo_.update_objects(ids_);
    }

    // Applies a world delta to the target and co-moves dependents.
    void apply(const Pose3& delta, bool move_dependents) {
        apply_pose_delta(scene_, ids_.front(), delta, move_dependents);
        geo_.update_objects(ids_);
    }

    const std::string& target() const { return ids_.front(); }

private:
    Scene& scene_;
    SceneGeometry& geo_;
    std::vector<std::string> ids_;
    std::vector<Pose3> saved_;
};

Pose3 translation_delta(const Vec3& t) {
    Pose3 d;
    d.translation = t;
    return d;
}

Pose3 rotation_about(const Quat& q, const Vec3& pivot) {
    Pose3 d;
    d.rotation = q;
    d.translation = pivot - q.to_mat3() * pivot;
    return d;
}

Pose3 scale_about(double s, const Vec3& pivot) {
    Pose3 d;
    d.scale = {s, s, s};
    d.translation = pivot * (1.0 - s);
    return d;
}

void require_allowed(const SceneObject& obj, ImplausibilityType t) {
    if (!is_transformation_allowed(obj, t))
        throw NotAllowed("object '" + obj.id + "' does not allow transformation '" +
                         to_string(t) + "'");
}

TransformRecord make_record(ImplausibilityType t, const Scene& scene,
                            const std::string& id, const Pose3& before) {
    TransformRecord r;
    r.type = t;
    r.object_id = id;
    r.pose_before = before;
    r.pose_after = scene.object(id).pose;
    return r;
}

// Direction of the separation walk: from the deepest ray-sampled contact
// point toward the target's centroid.
std::optional<Vec3> separation_direction(const SceneGeometry& geo, const Scene& scene,
                                         const std::string& id,
                                         const std::vector<std::string>& others) {
    int target_idx = scene.object_index(id);
    Vec3 centroid = geo.object_aabb(target_idx).center();

    double best_depth = -1.0;
    Vec3 best_point;
    auto consider = [&](const Vec3& point, int exit_object_idx) {
        Vec3 to_centroid = centroid - point;
        double dist = norm(to_centroid);
        if (dist < 1e-12) return;
        Ray probe{point, to_centroid / dist};
        auto exit = geo.first_hit(probe, -1, exit_object_idx);
        double depth = exit ? exit->distance : 0.0;
        if (depth > best_depth) {
            best_depth = depth;
            best_point = point;
        }
    };

    for (const std::string& other : others) {
        int other_idx = scene.object_index(other);
        for (const Vec3& v : geo.world_vertices(target_idx))
            if (geo.point_inside(v, other_idx)) consider(v, other_idx);
        for (const Vec3& v : geo.world_vertices(other_idx))
            if (geo.point_inside(v, target_idx)) consider(v, target_idx);
    }

    if (best_depth >= 0.0) {
        Vec3 dir = centroid - best_point;
        double n = norm(dir);
        if (n > 1e-12) return dir / n;
    }
    // Edge-to-edge crossing without contained vertices: push away from the
    // first intersecting object's centroid.
    for (const std::string& other : others) {
        Vec3 dir = centroid - geo.object_aabb(scene.object_index(other)).center();
        double n = norm(dir);
        if (n > 1e-12) return dir / n;
    }
    return std::nullopt;
}

}  // namespace

namespace detail {
bool rotation_negligible(const Quat& q) { return q.angle() < 1e-9; }
}  // namespace detail

SelectionState SelectionState::from_config(const GenerationConfig& config, uint64_t seed) {
    SelectionState s;
    s.target_dist[SizeCategory::Small] = config.target_dist_small;
    s.target_dist[SizeCategory::Medium] = config.target_dist_medium;
    s.target_dist[SizeCategory::Large] = config.target_dist_large;
    s.transformed_counts[SizeCategory::Small] = 0;
    s.transformed_counts[SizeCategory::Medium] = 0;
    s.transformed_counts[SizeCategory::Large] = 0;
    s.rng_seed = seed;
    return s;
}

long long SelectionState::total() const {
    long long t = 0;
    for (const auto& [_, n] : transformed_counts) t += n;
    return t;
}

void SelectionState::validate() const {
    double sum = 0.0;
    for (const auto& [_, f] : target_dist) {
        if (f < 0.0 || f > 1.0) throw SchemaError("selection target fraction out of [0, 1]");
        sum += f;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw SchemaError("selection target fractions must sum to 1");
    for (const auto& [_, n] : transformed_counts)
        if (n < 0) throw SchemaError("selection counts must be nonnegative");
}

bool is_transformation_allowed(const SceneObject& obj, ImplausibilityType t) {
    return obj.allowed_transforms.count(t) > 0;
}

CandidateSet candidate_weights(const Scene& scene, ImplausibilityType t,
                               const SelectionState& state, size_t n_needed) {
    state.validate();
    CandidateSet out;
    long long total = state.total();
    for (const SceneObject& obj : scene.objects) {
        if (!is_transformation_allowed(obj, t)) continue;
        double target = state.target_dist.at(obj.size_category);
        double curr = total == 0
                          ? 0.0
                          : static_cast<double>(state.transformed_counts.at(obj.size_category)) /
                                static_cast<double>(total);
        out.objects.push_back(obj.id);
        out.weights.push_back(std::max(0.0, target - curr));
    }
    if (out.objects.empty())
        throw NoCandidates("no object in scene '" + scene.name + "' allows '" +
                           std::string(to_string(t)) + "'");

    size_t positive = 0;
    for (double w : out.weights)
        if (w > 0.0) ++positive;
    if (positive < n_needed) {
        for (size_t i = 0; i < out.objects.size(); ++i)
            out.weights[i] = state.target_dist.at(
                scene.object(out.objects[i]).size_category);
    }
    return out;
}

std::vector<std::string> select_objects(const std::vector<std::string>& objects,
                                        const std::vector<double>& weights,
                                        size_t count, Rng& rng) {
    if (objects.empty()) throw NoCandidates("select_objects called with no candidates");
    if (objects.size() != weights.size())
        throw std::invalid_argument("objects and weights must be parallel");

    std::vector<std::string> pool = objects;
    std::vector<double> w = weights;
    std::vector<std::string> out;
    while (out.size() < count && !pool.empty()) {
        double sum = std::accumulate(w.begin(), w.end(), 0.0);
        if (sum <= 0.0) break;
        double r = rng.uniform() * sum;
        double acc = 0.0;
        size_t pick = pool.size();
        for (size_t i = 0; i < pool.size(); ++i) {
            if (w[i] <= 0.0) continue;
            acc += w[i];
            if (r < acc) {
                pick = i;
                break;
            }
        }
        if (pick == pool.size()) {  // r landed on the accumulated rounding tail
            for (size_t i = pool.size(); i-- > 0;) {
                if (w[i] > 0.0) {
                    pick = i;
                    break;
                }
            }
        }
        out.push_back(pool[pick]);
        pool.erase(pool.begin() + static_cast<long>(pick));
        w.erase(w.begin() + static_cast<long>(pick));
    }
    return out;
}

TransformRecord op_gravity(Scene& scene, SceneGeometry& geo, const std::string& id,
                           Rng& rng, const GenerationConfig&) {
    const SceneObject& obj = scene.object(id);
    require_allowed(obj, ImplausibilityType::Gravity);
    double maxdim = geo.object_aabb(id).max_extent();
    double u = rng.uniform(1.0, 2.0);
    PoseTrial trial(scene, geo, id);
    Pose3 before = obj.pose;
    trial.apply(translation_delta({0, 0, u * maxdim}), true);
    TransformRecord record = make_record(ImplausibilityType::Gravity, scene, id, before);
    record.draw_params["elevation_factor"] = u;
    return record;
}

TransformRecord op_intersection(Scene& scene, SceneGeometry& geo, const std::string& id,
                                Rng& rng, const GenerationConfig& config) {
    const SceneObject& obj = scene.object(id);
    require_allowed(obj, ImplausibilityType::Intersection);
    Vec3 dims = geo.object_aabb(id).extents();
    Pose3 before = obj.pose;

    for (int attempt = 0; attempt < config.retry_budget; ++attempt) {
        double dx = rng.uniform(-dims.x / 2.0, dims.x / 2.0);
        double dy = rng.uniform(-dims.y / 2.0, dims.y / 2.0);
        double v = rng.uniform(1.0 / 3.0, 2.0 / 3.0);
        PoseTrial trial(scene, geo, id);
        trial.apply(translation_delta({dx, dy, -v * dims.z}), true);
        if (!geo.intersecting(id).empty()) {
            TransformRecord record =
                make_record(ImplausibilityType::Intersection, scene, id, before);
            record.draw_params["shift_x_frac"] = dims.x > 0 ? dx / (dims.x / 2.0) : 0.0;
            record.draw_params["shift_y_frac"] = dims.y > 0 ? dy / (dims.y / 2.0) : 0.0;
            record.draw_params["lower_frac"] = v;
            return record;
        }
    }
    throw TransformFailed("intersection: no intersecting placement for '" + id +
                          "' within retry budget");
}

TransformRecord op_pose(Scene& scene, SceneGeometry& geo, const std::string& id,
                        Rng& rng, const GenerationConfig& config) {
    const SceneObject& obj = scene.object(id);
    require_allowed(obj, ImplausibilityType::Pose);
    Pose3 before = obj.pose;

    for (int attempt = 0; attempt < config.retry_budget; ++attempt) {
        double ax = rng.uniform(0.0, 360.0);
        double ay = rng.uniform(0.0, 360.0);
        double az = rng.uniform(0.0, 360.0);
        Quat q = quat_from_euler_zyx(deg_to_rad(ax), deg_to_rad(ay), deg_to_rad(az));
        if (detail::rotation_negligible(q)) continue;

        Box3 box = geo.object_aabb(id);
        PoseTrial trial(scene, geo, id);
        trial.apply(rotation_about(q, box.center()), false);
        double dz = box.min.z - geo.object_aabb(id).min.z;
        trial.apply(translation_delta({0, 0, dz}), false);

        if (approx_equal(scene.object(id).pose, before, 1e-9)) continue;
        TransformRecord record = make_record(ImplausibilityType::Pose, scene, id, before);
        record.draw_params["angle_x_deg"] = ax;
        record.draw_params["angle_y_deg"] = ay;
        record.draw_params["angle_z_deg"] = az;
        return record;
    }
    throw TransformFailed("pose: every draw degenerated to the original pose for '" + id +
                          "'");
}

TransformRecord op_size(Scene& scene, SceneGeometry& geo, const std::string& id,
                        Rng& rng, const GenerationConfig& config) {
    const SceneObject& obj = scene.object(id);
    require_allowed(obj, ImplausibilityType::Size);
    Pose3 before = obj.pose;

    for (int attempt = 0; attempt < config.retry_budget; ++attempt) {
        bool up = rng.bernoulli(config.size_up_probability);
        double s = up ? rng.uniform(2.0, 3.0) : rng.uniform(0.3, 0.5);
        Vec3 pivot = geo.object_aabb(id).center();

        PoseTrial trial(scene, geo, id);
        trial.apply(scale_about(s, pivot), true);
        double height = geo.object_aabb(id).extents().z;
        trial.apply(translation_delta({0, 0, height / 2.0}), true);
        double drop = geo.drop_to_support(id, config.contact_tolerance, config.drop_grid);
        trial.apply(translation_delta({0, 0, drop}), true);

        if (geo.intersecting(id).empty()) {
            TransformRecord record = make_record(ImplausibilityType::Size, scene, id, before);
            record.draw_params["scale_factor"] = s;
            record.draw_params["scale_up"] = up ? 1.0 : 0.0;
            return record;
        }
    }
    throw TransformFailed("size: rescaled '" + id +
                          "' kept intersecting after support drop");
}

TransformRecord op_cooccurrence_location(Scene& scene, SceneGeometry& geo,
                                         const std::string& id, Rng& rng,
                                         const GenerationConfig& config) {
    const SceneObject& obj = scene.object(id);
    require_allowed(obj, ImplausibilityType::CoOccurrenceLocation);
    Pose3 before = obj.pose;

    for (int attempt = 0; attempt < config.retry_budget; ++attempt) {
        Vec3 shift = rng.in_unit_ball() * config.co_loc_radius;
        PoseTrial trial(scene, geo, id);
        trial.apply(translation_delta(shift), true);
        if (geo.object_aabb(id).min.z < 0.0) continue;  // sank below the floor
        double drop = geo.drop_to_support(id, config.contact_tolerance, config.drop_grid);
        trial.apply(translation_delta({0, 0, drop}), true);

        double dz = scene.object(id).pose.translation.z - before.translation.z;
        if (std::abs(dz) > config.epsilon_height && geo.intersecting(id).empty()) {
            TransformRecord record =
                make_record(ImplausibilityType::CoOccurrenceLocation, scene, id, before);
            record.draw_params["radius"] = norm(shift);
            record.draw_params["shift_x"] = shift.x;
            record.draw_params["shift_y"] = shift.y;
            record.draw_params["shift_z"] = shift.z;
            return record;
        }
    }
    throw TransformFailed("cooccurrence_location: no accepted relocation for '" + id +
                          "' within retry budget");
}

TransformRecord op_cooccurrence_rotation(Scene& scene, SceneGeometry& geo,
                                         const std::string& id, Rng& rng,
                                         const GenerationConfig& config) {
    const SceneObject& obj = scene.object(id);
    require_allowed(obj, ImplausibilityType::CoOccurrenceRotation);
    Pose3 before = obj.pose;
    Vec3 dims = geo.object_aabb(id).extents();
    double maxdim = geo.object_aabb(id).max_extent();
    constexpr double kWalkStep = 0.01;

    for (int attempt = 0; attempt < config.retry_budget; ++attempt) {
        double theta = rng.uniform(160.0, 200.0);
        double dx = rng.uniform(-dims.x / 2.0, dims.x / 2.0);
        double dy = rng.uniform(-dims.y / 2.0, dims.y / 2.0);
        Vec3 pivot = geo.object_aabb(id).center();

        PoseTrial trial(scene, geo, id);
        Pose3 delta = rotation_about(Quat::from_axis_angle({0, 0, 1}, deg_to_rad(theta)), pivot);
        delta.translation += Vec3{dx, dy, 0.0};
        trial.apply(delta, true);

        double walked = 0.0;
        bool stuck = false;
        for (;;) {
            std::vector<std::string> others = geo.intersecting(id);
            if (others.empty()) break;
            auto dir = separation_direction(geo, scene, id, others);
            if (!dir || walked > 10.0 * maxdim) {
                stuck = true;
                break;
            }
            trial.apply(translation_delta(*dir * kWalkStep), true);
            walked += kWalkStep;
        }
        if (stuck) continue;

        TransformRecord record =
            make_record(ImplausibilityType::CoOccurrenceRotation, scene, id, before);
        record.draw_params["angle_deg"] = theta;
        record.draw_params["shift_x_frac"] = dims.x > 0 ? dx / (dims.x / 2.0) : 0.0;
        record.draw_params["shift_y_frac"] = dims.y > 0 ? dy / (dims.y / 2.0) : 0.0;
        record.draw_params["walk_distance"] = walked;
        return record;
    }
    throw TransformFailed("cooccurrence_rotation: separation walk exhausted for '" + id +
                          "'");
}

TransformRecord find_transformation(Scene& scene, SceneGeometry& geo,
                                    ImplausibilityType t, const std::string& id,
                                    Rng& rng, const GenerationConfig& config) {
    require_allowed(scene.object(id), t);
    switch (t) {
        case ImplausibilityType::Gravity: return op_gravity(scene, geo, id, rng, config);
        case ImplausibilityType::Intersection:
            return op_intersection(scene, geo, id, rng, config);
        case ImplausibilityType::Pose: return op_pose(scene, geo, id, rng, config);
        case ImplausibilityType::Size: return op_size(scene, geo, id, rng, config);
        case ImplausibilityType::CoOccurrenceLocation:
            return op_cooccurrence_location(scene, geo, id, rng, config);
        case ImplausibilityType::CoOccurrenceRotation:
            return op_cooccurrence_rotation(scene, geo, id, rng, config);
    }
    throw NotAllowed("unknown transformation type");
}

bool transform_moves_dependents(ImplausibilityType t) {
    return t != ImplausibilityType::Pose;
}

void commit_transform(Scene& scene, SceneGeometry* geo, const TransformRecord& record) {
    SceneObject& obj = scene.object(record.object_id);
    Pose3 delta = world_delta_between(record.pose_before, record.pose_after);
    obj.pose = record.pose_after;
    std::vector<std::string> touched{record.object_id};
    if (transform_moves_dependents(record.type)) {
        for (const std::string& dep : dependents_of(scene, record.object_id)) {
            SceneObject& d = scene.object(dep);
            d.pose = apply_world_delta(delta, d.pose);
            touched.push_back(dep);
        }
    }
    if (geo) geo->update_objects(touched);
}

}  // namespace plausigen
