#include "plausigen/dataset.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "plausigen/errors.hpp"
#include "plausigen/image_io.hpp"
#include "plausigen/scene_io.hpp"

namespace plausigen {

namespace fs = std::filesystem;

namespace {

ImageMetadata make_metadata(const Scene& scene, const CameraSpec& camera,
                            std::optional<ImplausibilityType> type,
                            const std::vector<TransformRecord>& records,
                            const RenderOutput& output, double score, uint64_t seed) {
    ImageMetadata meta;
    meta.scene_name = scene.name;
    meta.camera = camera;
    meta.implausibility_type = type;
    meta.transform_count = static_cast<int>(records.size());
    for (const TransformRecord& r : records) {
        const SceneObject& obj = scene.object(r.object_id);
        meta.transforms.push_back({r, obj.class_label, obj.size_category});
    }
    for (const auto& [id, info] : output.per_object) {
        meta.objects.push_back(
            {id, scene.object(id).class_label, info.box, info.visible_fraction});
    }
    meta.plausibility_score = score;
    meta.seed = seed;
    return meta;
}

struct PoseSnapshot {
    std::vector<std::pair<std::string, Pose3>> saved;
};

PoseSnapshot snapshot_for(const Scene& scene, const TransformRecord& record) {
    PoseSnapshot snap;
    snap.saved.emplace_back(record.object_id, scene.object(record.object_id).pose);
    if (transform_moves_dependents(record.type))
        for (const std::string& dep : dependents_of(scene, record.object_id))
            snap.saved.emplace_back(dep, scene.object(dep).pose);
    return snap;
}

void restore_snapshot(Scene& scene, SceneGeometry& geo, const PoseSnapshot& snap) {
    std::vector<std::string> ids;
    for (const auto& [id, pose] : snap.saved) {
        scene.object(id).pose = pose;
        ids.push_back(id);
    }
    geo.update_objects(ids);
}

}  // namespace

std::vector<GeneratedImage> generate_scene_images(const Scene& scene,
                                                  ImplausibilityType type, Rng& rng,
                                                  const GenerationConfig& config,
                                                  SelectionState& state,
                                                  uint64_t metadata_seed) {
    size_t max_transforms = static_cast<size_t>(config.transforms_per_camera);
    CandidateSet candidates = candidate_weights(scene, type, state, max_transforms);
    std::vector<std::string> order =
        select_objects(candidates.objects, candidates.weights, candidates.objects.size(),
                       rng);

    // Working copy: transforms are found against the scene with all previous
    // transforms committed, but committed only after a camera validates them.
    Scene work = scene;
    SceneGeometry work_geo(work);
    std::vector<TransformRecord> committed;
    std::optional<CameraSpec> camera;

    for (const std::string& object_id : order) {
        if (committed.size() >= max_transforms) break;
        bool already = false;
        for (const TransformRecord& r : committed)
            if (r.object_id == object_id) already = true;
        if (already) continue;

        TransformRecord record;
        try {
            record = find_transformation(work, work_geo, type, object_id, rng, config);
        } catch (const TransformFailed&) {
            continue;
        }

        std::vector<TransformRecord> trial = committed;
        trial.push_back(record);
        std::optional<CameraSpec> cam = find_camera(scene, trial, rng, config);
        if (!cam) continue;

        commit_transform(work, &work_geo, record);
        committed.push_back(record);
        camera = cam;
        state.record_transform(scene.object(object_id).size_category);
    }

    if (committed.empty() || !camera)
        throw GenerationFailed("no transform of type '" +
                               std::string(to_string(type)) +
                               "' validated for scene '" + scene.name + "'");

    // Render the shared-camera sequence: plausible frame first, then one
    // frame per committed transform. A transform whose frame would raise the
    // score (a rare occlusion artifact) is dropped to keep the sequence
    // monotone.
    Scene render_scene = scene;
    SceneGeometry render_geo(render_scene);
    std::vector<GeneratedImage> out;

    RenderOutput base = render(render_scene, render_geo, *camera);
    double prev_score = plausibility_score(base, {}).value;
    ImageMetadata base_meta = make_metadata(render_scene, *camera, std::nullopt, {},
                                            base, prev_score, metadata_seed);
    out.push_back({std::move(base), std::move(base_meta)});

    std::vector<TransformRecord> kept;
    std::vector<std::string> kept_ids;
    for (const TransformRecord& record : committed) {
        PoseSnapshot snap = snapshot_for(render_scene, record);
        commit_transform(render_scene, &render_geo, record);
        RenderOutput frame = render(render_scene, render_geo, *camera);
        std::vector<std::string> ids = kept_ids;
        ids.push_back(record.object_id);
        double score = plausibility_score(frame, ids).value;
        if (score > prev_score + 1e-12) {
            restore_snapshot(render_scene, render_geo, snap);
            continue;
        }
        kept.push_back(record);
        kept_ids = ids;
        prev_score = score;
        ImageMetadata meta =
            make_metadata(render_scene, *camera, type, kept, frame, score, metadata_seed);
        out.push_back({std::move(frame), std::move(meta)});
    }
    return out;
}

DatasetManifest split_scenes(const std::vector<std::string>& scene_names,
                             size_t train_count, size_t test_count, uint64_t seed) {
    if (train_count + test_count > scene_names.size())
        throw InsufficientScenes("need " + std::to_string(train_count + test_count) +
                                 " scenes, have " + std::to_string(scene_names.size()));
    std::vector<std::string> shuffled = scene_names;
    std::sort(shuffled.begin(), shuffled.end());
    Rng rng(seed);
    for (size_t i = shuffled.size(); i > 1; --i)
        std::swap(shuffled[i - 1], shuffled[rng.uniform_index(i)]);

    DatasetManifest manifest;
    manifest.master_seed = seed;
    manifest.scenes = scene_names;
    manifest.train_scenes.assign(shuffled.begin(),
                                 shuffled.begin() + static_cast<long>(train_count));
    manifest.test_scenes.assign(shuffled.begin() + static_cast<long>(train_count),
                                shuffled.begin() +
                                    static_cast<long>(train_count + test_count));
    std::sort(manifest.train_scenes.begin(), manifest.train_scenes.end());
    std::sort(manifest.test_scenes.begin(), manifest.test_scenes.end());
    manifest.check_invariants();
    return manifest;
}

std::string DatasetStats::to_text() const {
    std::ostringstream os;
    os << "images: " << total_images << "\n";
    os << "transformed objects: " << total_transforms << "\n";
    os << "images per class:\n";
    for (const auto& [k, v] : images_per_class) os << "  " << k << ": " << v << "\n";
    os << "transformed objects per size category (target share):\n";
    for (const auto& [k, v] : transforms_per_size) {
        os << "  " << k << ": " << v;
        auto it = target_share_per_size.find(k);
        if (it != target_share_per_size.end() && total_transforms > 0)
            os << "  (" << static_cast<double>(v) / total_transforms << " vs target "
               << it->second << ")";
        os << "\n";
    }
    os << "transformations per object class:\n";
    for (const auto& [k, v] : transforms_per_label) os << "  " << k << ": " << v << "\n";
    os << "images per scene:\n";
    for (const auto& [k, v] : images_per_scene) os << "  " << k << ": " << v << "\n";
    if (cross_split_scenes.empty()) {
        os << "split leakage: none\n";
    } else {
        os << "split leakage: " << cross_split_scenes.size() << " scene(s):";
        for (const std::string& s : cross_split_scenes) os << " " << s;
        os << "\n";
    }
    return os.str();
}

nlohmann::json DatasetStats::to_json() const {
    return {{"total_images", total_images},
            {"total_transforms", total_transforms},
            {"images_per_class", images_per_class},
            {"transforms_per_size", transforms_per_size},
            {"target_share_per_size", target_share_per_size},
            {"transforms_per_label", transforms_per_label},
            {"images_per_scene", images_per_scene},
            {"cross_split_scenes", cross_split_scenes}};
}

DatasetStats dataset_stats(const std::string& manifest_path) {
    DatasetManifest manifest = load_manifest(manifest_path);
    fs::path base = fs::path(manifest_path).parent_path();

    DatasetStats stats;
    for (const auto& [k, v] : manifest.config_snapshot) {
        if (k == "target_dist_small") stats.target_share_per_size["small"] = v;
        if (k == "target_dist_medium") stats.target_share_per_size["medium"] = v;
        if (k == "target_dist_large") stats.target_share_per_size["large"] = v;
    }

    for (const ManifestImage& img : manifest.images) {
        ImageMetadata meta = load_image_metadata((base / img.metadata_path).string());
        ++stats.total_images;
        ++stats.images_per_scene[meta.scene_name];
        std::string cls = meta.implausibility_type
                              ? std::string(to_string(*meta.implausibility_type))
                              : std::string("plausible");
        ++stats.images_per_class[cls];
        for (const TransformEntry& t : meta.transforms) {
            ++stats.total_transforms;
            ++stats.transforms_per_size[to_string(t.size_category)];
            ++stats.transforms_per_label[t.class_label];
        }
    }

    std::set<std::string> train(manifest.train_scenes.begin(), manifest.train_scenes.end());
    for (const std::string& s : manifest.test_scenes)
        if (train.count(s)) stats.cross_split_scenes.push_back(s);
    return stats;
}

std::vector<std::string> list_scene_files(const std::string& dir) {
    std::vector<std::string> files;
    if (!fs::is_directory(dir)) throw SchemaError("not a directory: " + dir);
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

namespace {

struct Job {
    std::string scene_file;
    ImplausibilityType type;
};

struct JobResult {
    std::vector<ManifestImage> images;
    std::vector<std::string> failures;
    std::string scene_name;
    int sequences = 0;
};

JobResult run_job(const Job& job, const GenerateOptions& options) {
    JobResult result;
    Scene scene = load_scene(job.scene_file);
    result.scene_name = scene.name;
    std::string type_slug = to_string(job.type);

    SelectionState state = SelectionState::from_config(
        options.config, derive_seed(options.master_seed, scene.name, type_slug));

    for (int cam_index = 0; cam_index < options.cameras_per_scene; ++cam_index) {
        uint64_t seed = derive_seed(options.master_seed, scene.name, type_slug,
                                    static_cast<uint64_t>(cam_index));
        Rng rng(seed);
        std::vector<GeneratedImage> sequence;
        try {
            sequence =
                generate_scene_images(scene, job.type, rng, options.config, state, seed);
        } catch (const Error& e) {
            result.failures.push_back(scene.name + "/" + type_slug + "[" +
                                      std::to_string(cam_index) + "]: " + e.what());
            continue;
        }

        fs::path rel_dir = fs::path(scene.name) / type_slug / std::to_string(cam_index);
        fs::path abs_dir = fs::path(options.out_dir) / rel_dir;
        fs::create_directories(abs_dir);
        for (size_t k = 0; k < sequence.size(); ++k) {
            const GeneratedImage& gi = sequence[k];
            std::string stem = "img_" + std::to_string(k);
            fs::path img_rel = rel_dir / (stem + ".png");
            fs::path id_rel = rel_dir / ("id_" + std::to_string(k) + ".png");
            fs::path meta_rel = rel_dir / (stem + ".json");

            write_png_rgb8((fs::path(options.out_dir) / img_rel).string(),
                           gi.output.image_size, gi.output.image_size,
                           gi.output.color.data());
            write_png_gray16((fs::path(options.out_dir) / id_rel).string(),
                             gi.output.image_size, gi.output.image_size,
                             gi.output.id_map.data());
            save_image_metadata(gi.metadata,
                                (fs::path(options.out_dir) / meta_rel).string());

            ManifestImage entry;
            entry.image_path = img_rel.generic_string();
            entry.id_map_path = id_rel.generic_string();
            entry.metadata_path = meta_rel.generic_string();
            entry.scene = scene.name;
            entry.type = gi.metadata.implausibility_type ? type_slug : "";
            entry.camera_index = cam_index;
            entry.transform_count = gi.metadata.transform_count;
            entry.plausibility_score = gi.metadata.plausibility_score;
            entry.seed = seed;
            result.images.push_back(std::move(entry));
        }
        ++result.sequences;
    }
    return result;
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("PLAUSIGEN_WORKERS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

GenerateReport run_generation(const GenerateOptions& options) {
    options.config.validate();
    std::vector<std::string> scene_files = list_scene_files(options.scenes_dir);
    if (scene_files.empty())
        throw InsufficientScenes("no scene files in " + options.scenes_dir);
    fs::create_directories(options.out_dir);

    std::vector<Job> jobs;
    for (const std::string& file : scene_files)
        for (ImplausibilityType t : options.types) jobs.push_back({file, t});

    std::vector<JobResult> results(jobs.size());
    std::atomic<size_t> next{0};
    std::vector<std::string> hard_errors;
    std::mutex error_mutex;

    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                results[i] = run_job(jobs[i], options);
            } catch (const std::exception& e) {
                std::lock_guard lock(error_mutex);
                hard_errors.push_back(jobs[i].scene_file + "/" +
                                      to_string(jobs[i].type) + ": " + e.what());
            }
        }
    };

    int n_workers = std::min<int>(resolve_workers(options.workers),
                                  static_cast<int>(jobs.size()));
    std::vector<std::thread> pool;
    for (int i = 1; i < n_workers; ++i) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    GenerateReport report;
    DatasetManifest manifest;
    manifest.master_seed = options.master_seed;
    manifest.config_snapshot = options.config.as_map();

    std::set<std::string> scene_names;
    for (JobResult& r : results) {
        if (!r.scene_name.empty()) scene_names.insert(r.scene_name);
        report.sequences_written += r.sequences;
        for (ManifestImage& img : r.images) manifest.images.push_back(std::move(img));
        for (std::string& f : r.failures) report.failures.push_back(std::move(f));
    }
    for (const std::string& e : hard_errors) report.failures.push_back(e);
    report.failed_jobs = static_cast<int>(report.failures.size());
    manifest.scenes.assign(scene_names.begin(), scene_names.end());

    if (options.split_manifest) {
        DatasetManifest split = load_manifest(*options.split_manifest);
        manifest.train_scenes = split.train_scenes;
        manifest.test_scenes = split.test_scenes;
    }

    std::sort(manifest.images.begin(), manifest.images.end(),
              [](const ManifestImage& a, const ManifestImage& b) {
                  return a.image_path < b.image_path;
              });
    std::sort(report.failures.begin(), report.failures.end());
    report.images_written = static_cast<int>(manifest.images.size());

    manifest.check_invariants();
    save_manifest(manifest, (fs::path(options.out_dir) / "manifest.json").string());
    return report;
}

}  // namespace plausigen
