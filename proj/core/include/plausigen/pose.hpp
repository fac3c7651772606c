#pragma once

#include <cmath>
#include <stdexcept>

#include "plausigen/math.hpp"

namespace plausigen {

// Placement of an object in the scene: world = translation + R * (scale . p).
// The rotation is stored as a unit quaternion (matching the scene file
// interchange format); the matrix form is derived on demand.
struct Pose3 {
    Vec3 translation{0, 0, 0};
    Quat rotation = Quat::identity();
    Vec3 scale{1, 1, 1};

    Mat3 rotation_matrix() const { return rotation.to_mat3(); }

    Vec3 apply(const Vec3& local) const {
        return translation + rotation_matrix() * cwise_mul(scale, local);
    }

    bool operator==(const Pose3& o) const {
        return translation == o.translation && rotation == o.rotation && scale == o.scale;
    }
};

inline bool approx_equal(const Pose3& a, const Pose3& b, double tol) {
    auto near3 = [tol](const Vec3& u, const Vec3& v) {
        return std::abs(u.x - v.x) <= tol && std::abs(u.y - v.y) <= tol &&
               std::abs(u.z - v.z) <= tol;
    };
    bool quat_near =
        (std::abs(a.rotation.w - b.rotation.w) <= tol &&
         std::abs(a.rotation.x - b.rotation.x) <= tol &&
         std::abs(a.rotation.y - b.rotation.y) <= tol &&
         std::abs(a.rotation.z - b.rotation.z) <= tol) ||
        // q and -q encode the same rotation
        (std::abs(a.rotation.w + b.rotation.w) <= tol &&
         std::abs(a.rotation.x + b.rotation.x) <= tol &&
         std::abs(a.rotation.y + b.rotation.y) <= tol &&
         std::abs(a.rotation.z + b.rotation.z) <= tol);
    return near3(a.translation, b.translation) && quat_near && near3(a.scale, b.scale);
}

// A world-frame delta applied on top of an existing pose. The delta's scale
// must be uniform, otherwise the TRS form is not closed under composition.
//
//   p -> t_d + s_d * R_d * p
//
// applied to (t, R, s) gives (t_d + s_d * R_d t, R_d R, s_d s).
inline Pose3 apply_world_delta(const Pose3& delta, const Pose3& pose) {
    if (std::abs(delta.scale.x - delta.scale.y) > 1e-12 ||
        std::abs(delta.scale.x - delta.scale.z) > 1e-12)
        throw std::logic_error("apply_world_delta requires a uniform delta scale");
    double s = delta.scale.x;
    Pose3 out;
    out.translation = delta.translation + s * (delta.rotation_matrix() * pose.translation);
    out.rotation = (delta.rotation * pose.rotation).normalized_q();
    out.scale = pose.scale * s;
    return out;
}

// Recovers the world-frame delta mapping `before` onto `after`, assuming the
// scale change is uniform (which every perturbation in this project is).
inline Pose3 world_delta_between(const Pose3& before, const Pose3& after) {
    double s = before.scale.x != 0.0 ? after.scale.x / before.scale.x : 1.0;
    Pose3 delta;
    delta.scale = {s, s, s};
    delta.rotation = (after.rotation * before.rotation.conjugated()).normalized_q();
    delta.translation =
        after.translation - s * (delta.rotation_matrix() * before.translation);
    return delta;
}

}  // namespace plausigen
