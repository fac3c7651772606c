#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "plausigen/camera.hpp"
#include "plausigen/config.hpp"
#include "plausigen/perturb.hpp"

namespace plausigen {

struct ImageObjectEntry {
    std::string id;
    std::string class_label;
    ScreenBox box;
    double visible_fraction = 0.0;
};

struct TransformEntry {
    TransformRecord record;
    std::string class_label;
    SizeCategory size_category = SizeCategory::Small;
};

// The per-image JSON record written next to every rendered frame.
struct ImageMetadata {
    std::string scene_name;
    CameraSpec camera;
    std::optional<ImplausibilityType> implausibility_type;  // absent when plausible
    int transform_count = 0;
    std::vector<TransformEntry> transforms;
    std::vector<ImageObjectEntry> objects;  // visible objects
    double plausibility_score = 1.0;
    uint64_t seed = 0;

    // Structural invariants: count matches the list, a plausible image has
    // no type and scores exactly 1, transformed ids are distinct.
    void check_invariants() const;  // throws CorruptMetadata
};

nlohmann::json to_json(const ImageMetadata& meta);
ImageMetadata image_metadata_from_json(const nlohmann::json& j);
void save_image_metadata(const ImageMetadata& meta, const std::string& path);
ImageMetadata load_image_metadata(const std::string& path);  // throws CorruptMetadata

struct ManifestImage {
    std::string image_path;     // relative to the manifest
    std::string id_map_path;
    std::string metadata_path;
    std::string scene;
    std::string type;           // "" for the plausible frame of a sequence
    int camera_index = 0;
    int transform_count = 0;
    double plausibility_score = 1.0;
    uint64_t seed = 0;
};

struct DatasetManifest {
    uint64_t master_seed = 0;
    std::map<std::string, double> config_snapshot;
    std::vector<std::string> scenes;        // every scene seen by generation
    std::vector<std::string> train_scenes;  // disjoint from test_scenes
    std::vector<std::string> test_scenes;
    std::vector<ManifestImage> images;

    void check_invariants() const;  // throws CorruptMetadata on split overlap
};

nlohmann::json to_json(const DatasetManifest& manifest);
DatasetManifest manifest_from_json(const nlohmann::json& j);
void save_manifest(const DatasetManifest& manifest, const std::string& path);
DatasetManifest load_manifest(const std::string& path);  // throws CorruptMetadata

// Serialization helpers shared with tests.
nlohmann::json pose_to_json(const Pose3& pose);
Pose3 pose_from_json(const nlohmann::json& j);
nlohmann::json camera_to_json(const CameraSpec& camera);
CameraSpec camera_from_json(const nlohmann::json& j);

}  // namespace plausigen
