#pragma once

#include <map>
#include <string>

#include "plausigen/scene.hpp"

namespace plausigen {

// Knobs for the whole generation pipeline. Defaults reproduce the documented
// behaviour; a TOML-style `key = value` file can override any of them.
struct GenerationConfig {
    // Perturbation operations
    double epsilon_height = 1.0;      // min |dz| for an accepted relocation
    int retry_budget = 50;            // resamples before TransformFailed
    double size_up_probability = 0.5; // scale-up vs scale-down branch
    double co_loc_radius = 60.0;      // relocation ball radius (scene units)

    // Target share of transformed objects per size category
    double target_dist_small = 1.0 / 3.0;
    double target_dist_medium = 1.0 / 3.0;
    double target_dist_large = 1.0 / 3.0;

    // Support drop
    double contact_tolerance = 1e-3;
    int drop_grid = 8;

    // Camera search
    double camera_fov_deg = 50.0;
    double v_min = 0.10;   // min visible fraction per transformed object
    int n_min = 5;         // min objects in view
    double o_max = 0.02;   // visible fraction below which occlusion is probed
    int n_iter = 50;
    double step_fraction = 0.05;
    double camera_box_half_x = 150.0;  // sampling box above the centroid
    double camera_box_half_y = 150.0;
    double camera_box_z_min = 40.0;
    double camera_box_z_max = 220.0;

    // Rendering / dataset
    int image_size = 512;
    int transforms_per_camera = 5;

    double target_dist(SizeCategory c) const {
        switch (c) {
            case SizeCategory::Small: return target_dist_small;
            case SizeCategory::Medium: return target_dist_medium;
            case SizeCategory::Large: return target_dist_large;
        }
        return target_dist_small;
    }

    // Throws SchemaError on out-of-range values (target shares must sum to 1).
    void validate() const;

    // Flat key -> value view, used for the manifest snapshot.
    std::map<std::string, double> as_map() const;
};

// Parses `key = value` lines; '#' comments and [section] headers are
// ignored. Unknown keys are an error. Missing file is an error.
GenerationConfig load_config(const std::string& path);

// Applies one key/value pair (used by the loader and by CLI overrides).
void apply_config_key(GenerationConfig& config, const std::string& key, double value);

}  // namespace plausigen
