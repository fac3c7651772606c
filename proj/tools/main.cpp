// plausigen command-line interface: generate datasets of plausible and
// implausible indoor-scene renders, split scenes into train/test, recount
// dataset statistics, recompute plausibility scores, and validate scene
// files.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "plausigen/dataset.hpp"
#include "plausigen/errors.hpp"
#include "plausigen/geometry.hpp"
#include "plausigen/scene_io.hpp"
#include "plausigen/schema_check.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace plausigen;

namespace {

void print_machine_error(const std::string& kind, const std::string& message) {
    json err{{"error", kind}, {"message", message}};
    std::cerr << err.dump() << "\n";
}

// Looks for the repo's schema directory next to the binary's working tree so
// `validate` can check scene files against the published schema.
std::optional<fs::path> find_schema(const std::string& name) {
    for (fs::path dir : {fs::path("schemas"), fs::path("../schemas")}) {
        fs::path candidate = dir / name;
        if (fs::exists(candidate)) return candidate;
    }
    if (const char* root = std::getenv("PLAUSIGEN_SCHEMA_DIR")) {
        fs::path candidate = fs::path(root) / name;
        if (fs::exists(candidate)) return candidate;
    }
    return std::nullopt;
}

int cmd_generate(const std::string& scenes_dir, const std::string& out_dir,
                 const std::string& type_arg, int per_scene, uint64_t seed,
                 const std::string& config_file, const std::string& split_file,
                 int workers) {
    GenerateOptions options;
    options.scenes_dir = scenes_dir;
    options.out_dir = out_dir;
    options.cameras_per_scene = per_scene;
    options.master_seed = seed;
    options.workers = workers;
    if (!config_file.empty()) options.config = load_config(config_file);
    if (!split_file.empty()) options.split_manifest = split_file;

    if (type_arg != "all") {
        auto t = implausibility_type_from_string(type_arg);
        if (!t) {
            print_machine_error("UsageError", "unknown implausibility type '" + type_arg +
                                                  "'");
            return 2;
        }
        options.types = {*t};
    }

    GenerateReport report = run_generation(options);
    std::cout << "wrote " << report.images_written << " image(s) from "
              << report.sequences_written << " camera sequence(s) to " << out_dir
              << "\n";
    if (!report.failures.empty()) {
        std::cout << report.failures.size() << " sequence(s) failed:\n";
        for (const std::string& f : report.failures) std::cout << "  " << f << "\n";
    }
    return report.images_written > 0 ? 0 : 1;
}

int cmd_split(const std::string& scenes_dir, size_t train, size_t test, uint64_t seed,
              const std::string& out_file) {
    std::vector<std::string> names;
    for (const std::string& file : list_scene_files(scenes_dir))
        names.push_back(load_scene(file).name);
    DatasetManifest manifest = split_scenes(names, train, test, seed);
    save_manifest(manifest, out_file);
    std::cout << "train: " << manifest.train_scenes.size()
              << " scenes, test: " << manifest.test_scenes.size() << " scenes -> "
              << out_file << "\n";
    return 0;
}

int cmd_stats(const std::string& manifest_file, bool as_json) {
    DatasetStats stats = dataset_stats(manifest_file);
    if (as_json)
        std::cout << stats.to_json().dump(2) << "\n";
    else
        std::cout << stats.to_text();
    return stats.cross_split_scenes.empty() ? 0 : 1;
}

int cmd_score(const std::string& meta_file) {
    ImageMetadata meta = load_image_metadata(meta_file);
    std::vector<ScreenBox> boxes;
    for (const TransformEntry& t : meta.transforms)
        for (const ImageObjectEntry& o : meta.objects)
            if (o.id == t.record.object_id) boxes.push_back(o.box);
    double area = static_cast<double>(box_union_area(boxes));
    double total = static_cast<double>(meta.camera.image_size) * meta.camera.image_size;
    printf("%.6f\n", 1.0 - area / total);
    return 0;
}

int cmd_validate(const std::string& scenes_dir) {
    auto schema_path = find_schema("scene.schema.json");
    int failures = 0;
    std::vector<std::string> files = list_scene_files(scenes_dir);
    if (files.empty()) {
        print_machine_error("SchemaError", "no scene files in " + scenes_dir);
        return 1;
    }
    for (const std::string& file : files) {
        try {
            if (schema_path) {
                std::ifstream in(file);
                json doc = json::parse(in);
                check_against_schema_file(doc, schema_path->string());
            }
            Scene scene = load_scene(file);  // runs all model invariants
            SceneGeometry geometry(scene);   // meshes must index cleanly
            std::cout << file << ": ok (" << scene.objects.size() << " objects, "
                      << scene.dependency_tree.edge_count() << " dependency edges)\n";
        } catch (const Error& e) {
            ++failures;
            std::cout << file << ": FAILED\n";
            print_machine_error(e.kind(), e.what());
        } catch (const json::exception& e) {
            ++failures;
            std::cout << file << ": FAILED\n";
            print_machine_error("SchemaError", e.what());
        }
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"plausigen - controlled implausible-scene dataset generator"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "Render a dataset from scene files");
    std::string scenes_dir, out_dir, type_arg = "all", config_file, split_file;
    int per_scene = 1, workers = 0;
    uint64_t seed = 0;
    generate->add_option("--scenes", scenes_dir, "Directory of scene JSON files")
        ->required();
    generate->add_option("--out", out_dir, "Output directory")->required();
    generate->add_option("--type", type_arg,
                         "Implausibility type (gravity, intersection, pose, size, "
                         "cooccurrence_location, cooccurrence_rotation) or 'all'");
    generate->add_option("--per-scene", per_scene, "Camera sequences per scene and type")
        ->check(CLI::PositiveNumber);
    generate->add_option("--seed", seed, "Master seed");
    generate->add_option("--config", config_file, "Config file (key = value lines)");
    generate->add_option("--split", split_file, "Manifest with train/test splits to copy");
    generate->add_option("--workers", workers,
                         "Worker threads (default: PLAUSIGEN_WORKERS or hardware)");

    // split
    auto* split = app.add_subcommand("split", "Split scenes into train/test sets");
    std::string split_scenes_dir, split_out = "split.json";
    size_t train_count = 0, test_count = 0;
    uint64_t split_seed = 0;
    split->add_option("--scenes", split_scenes_dir, "Directory of scene JSON files")
        ->required();
    split->add_option("--train", train_count, "Train scene count")->required();
    split->add_option("--test", test_count, "Test scene count")->required();
    split->add_option("--seed", split_seed, "Split seed");
    split->add_option("--out", split_out, "Output manifest path");

    // stats
    auto* stats = app.add_subcommand("stats", "Recount a generated dataset");
    std::string manifest_file;
    bool stats_json = false;
    stats->add_option("--manifest", manifest_file, "Manifest path")->required();
    stats->add_flag("--json", stats_json, "Emit JSON instead of text");

    // score
    auto* score = app.add_subcommand("score", "Recompute an image's plausibility score");
    std::string meta_file;
    score->add_option("--image-meta", meta_file, "Image metadata JSON path")->required();

    // validate
    auto* validate = app.add_subcommand("validate", "Check scene files against the schema");
    std::string validate_dir;
    validate->add_option("--scenes", validate_dir, "Directory of scene JSON files")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (generate->parsed())
            return cmd_generate(scenes_dir, out_dir, type_arg, per_scene, seed,
                                config_file, split_file, workers);
        if (split->parsed())
            return cmd_split(split_scenes_dir, train_count, test_count, split_seed,
                             split_out);
        if (stats->parsed()) return cmd_stats(manifest_file, stats_json);
        if (score->parsed()) return cmd_score(meta_file);
        if (validate->parsed()) return cmd_validate(validate_dir);
    } catch (const Error& e) {
        print_machine_error(e.kind(), e.what());
        return 1;
    } catch (const std::exception& e) {
        print_machine_error("InternalError", e.what());
        return 1;
    }
    return 2;
}
