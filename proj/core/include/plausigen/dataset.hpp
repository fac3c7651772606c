#pragma once

#include <optional>
#include <string>
#include <vector>

#include "plausigen/config.hpp"
#include "plausigen/metadata.hpp"
#include "plausigen/render.hpp"

namespace plausigen {

struct GeneratedImage {
    RenderOutput output;
    ImageMetadata metadata;
};

// One full camera sequence for (scene, type): selects up to
// config.transforms_per_camera objects, finds transforms, validates and
// shares one camera, then renders the untransformed frame followed by one
// frame per committed transform. Plausibility scores are nonincreasing along
// the sequence; the first is exactly 1. The caller's SelectionState is
// updated for every committed transform. Throws GenerationFailed when no
// transform validates on any camera, NoCandidates when nothing is eligible.
std::vector<GeneratedImage> generate_scene_images(const Scene& scene,
                                                  ImplausibilityType type, Rng& rng,
                                                  const GenerationConfig& config,
                                                  SelectionState& state,
                                                  uint64_t metadata_seed = 0);

// Deterministic scene-level split; train and test are disjoint by
// construction. Throws InsufficientScenes.
DatasetManifest split_scenes(const std::vector<std::string>& scene_names,
                             size_t train_count, size_t test_count, uint64_t seed);

struct DatasetStats {
    long long total_images = 0;
    long long total_transforms = 0;
    std::map<std::string, long long> images_per_class;       // plausible + per type
    std::map<std::string, long long> transforms_per_size;    // small/medium/large
    std::map<std::string, double> target_share_per_size;     // config snapshot
    std::map<std::string, long long> transforms_per_label;   // per object class
    std::map<std::string, long long> images_per_scene;
    std::vector<std::string> cross_split_scenes;             // empty when splits are clean

    std::string to_text() const;
    nlohmann::json to_json() const;
};

// Recounts every metadata file referenced by the manifest. Throws
// CorruptMetadata when a referenced file is missing or invalid.
DatasetStats dataset_stats(const std::string& manifest_path);

struct GenerateOptions {
    std::string scenes_dir;
    std::string out_dir;
    std::vector<ImplausibilityType> types = all_implausibility_types();
    int cameras_per_scene = 1;
    uint64_t master_seed = 0;
    GenerationConfig config;
    std::optional<std::string> split_manifest;  // copy an existing split in
    int workers = 0;  // 0: PLAUSIGEN_WORKERS env var, else hardware count
};

struct GenerateReport {
    int images_written = 0;
    int sequences_written = 0;
    int failed_jobs = 0;
    std::vector<std::string> failures;  // "scene/type[camera]: reason"
};

// Full batch generation: one job per (scene, type), jobs run in a worker
// pool, each job attempts cameras_per_scene camera sequences with seeds
// derived from (master_seed, scene, type, camera index). Failed sequences
// are logged and skipped. Writes images, metadata and out/manifest.json; the
// output tree is independent of the worker count.
GenerateReport run_generation(const GenerateOptions& options);

// Scene files (sorted) under a directory.
std::vector<std::string> list_scene_files(const std::string& dir);

}  // namespace plausigen
