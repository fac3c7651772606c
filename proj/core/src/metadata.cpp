#include "plausigen/metadata.hpp"

#include <fstream>
#include <set>

#include "plausigen/errors.hpp"

namespace plausigen {

using nlohmann::json;

namespace {

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec3_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw CorruptMetadata("expected a 3-vector");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json box_to_json(const ScreenBox& b) {
    return json::array({b.min_x, b.min_y, b.max_x, b.max_y});
}

ScreenBox box_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) throw CorruptMetadata("expected a screen box");
    return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

template <typename T>
T get_required(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        throw CorruptMetadata(std::string("missing required key '") + key + "'");
    try {
        return it->get<T>();
    } catch (const json::exception&) {
        throw CorruptMetadata(std::string("key '") + key + "' has the wrong type");
    }
}

}  // namespace

json pose_to_json(const Pose3& pose) {
    return {{"translation", vec3_to_json(pose.translation)},
            {"rotation", json::array({pose.rotation.w, pose.rotation.x, pose.rotation.y,
                                      pose.rotation.z})},
            {"scale", vec3_to_json(pose.scale)}};
}

Pose3 pose_from_json(const json& j) {
    Pose3 p;
    p.translation = vec3_from_json(j.at("translation"));
    const json& r = j.at("rotation");
    if (!r.is_array() || r.size() != 4) throw CorruptMetadata("expected a quaternion");
    p.rotation = {r[0].get<double>(), r[1].get<double>(), r[2].get<double>(),
                  r[3].get<double>()};
    p.scale = vec3_from_json(j.at("scale"));
    return p;
}

json camera_to_json(const CameraSpec& camera) {
    return {{"location", vec3_to_json(camera.location)},
            {"target", vec3_to_json(camera.target)},
            {"vertical_fov_deg", camera.vertical_fov_deg},
            {"image_size", camera.image_size}};
}

CameraSpec camera_from_json(const json& j) {
    CameraSpec c;
    c.location = vec3_from_json(j.at("location"));
    c.target = vec3_from_json(j.at("target"));
    c.vertical_fov_deg = get_required<double>(j, "vertical_fov_deg");
    c.image_size = get_required<int>(j, "image_size");
    return c;
}

void ImageMetadata::check_invariants() const {
    if (transform_count != static_cast<int>(transforms.size()))
        throw CorruptMetadata("transform_count does not match the transforms list");
    if ((transform_count == 0) != !implausibility_type.has_value())
        throw CorruptMetadata("implausibility_type must be present iff transforms exist");
    if (transform_count == 0 && plausibility_score != 1.0)
        throw CorruptMetadata("a plausible image must score exactly 1.0");
    if (plausibility_score < 0.0 || plausibility_score > 1.0)
        throw CorruptMetadata("plausibility_score out of [0, 1]");
    std::set<std::string> ids;
    for (const TransformEntry& t : transforms) {
        if (!ids.insert(t.record.object_id).second)
            throw CorruptMetadata("object '" + t.record.object_id +
                                  "' is transformed twice in one image");
        if (t.record.pose_before == t.record.pose_after)
            throw CorruptMetadata("transform of '" + t.record.object_id +
                                  "' has identical before/after poses");
    }
}

json to_json(const ImageMetadata& meta) {
    json transforms = json::array();
    for (const TransformEntry& t : meta.transforms) {
        json params = json::object();
        for (const auto& [k, v] : t.record.draw_params) params[k] = v;
        transforms.push_back({{"type", to_string(t.record.type)},
                              {"object_id", t.record.object_id},
                              {"class", t.class_label},
                              {"size_category", to_string(t.size_category)},
                              {"pose_before", pose_to_json(t.record.pose_before)},
                              {"pose_after", pose_to_json(t.record.pose_after)},
                              {"draw_params", params}});
    }
    json objects = json::array();
    for (const ImageObjectEntry& o : meta.objects)
        objects.push_back({{"id", o.id},
                           {"class", o.class_label},
                           {"box", box_to_json(o.box)},
                           {"visible_fraction", o.visible_fraction}});
    json j{{"schema_version", 1},
           {"scene_name", meta.scene_name},
           {"camera", camera_to_json(meta.camera)},
           {"transform_count", meta.transform_count},
           {"transforms", transforms},
           {"objects", objects},
           {"plausibility_score", meta.plausibility_score},
           {"seed", meta.seed}};
    if (meta.implausibility_type) j["implausibility_type"] = to_string(*meta.implausibility_type);
    return j;
}

ImageMetadata image_metadata_from_json(const json& j) {
    ImageMetadata meta;
    meta.scene_name = get_required<std::string>(j, "scene_name");
    meta.camera = camera_from_json(j.at("camera"));
    meta.transform_count = get_required<int>(j, "transform_count");
    meta.plausibility_score = get_required<double>(j, "plausibility_score");
    meta.seed = get_required<uint64_t>(j, "seed");
    if (j.contains("implausibility_type")) {
        auto t = implausibility_type_from_string(j["implausibility_type"].get<std::string>());
        if (!t) throw CorruptMetadata("unknown implausibility_type");
        meta.implausibility_type = *t;
    }
    for (const json& jt : j.value("transforms", json::array())) {
        TransformEntry entry;
        auto type = implausibility_type_from_string(get_required<std::string>(jt, "type"));
        if (!type) throw CorruptMetadata("unknown transform type");
        entry.record.type = *type;
        entry.record.object_id = get_required<std::string>(jt, "object_id");
        entry.class_label = get_required<std::string>(jt, "class");
        auto cat = size_category_from_string(get_required<std::string>(jt, "size_category"));
        if (!cat) throw CorruptMetadata("unknown size_category");
        entry.size_category = *cat;
        entry.record.pose_before = pose_from_json(jt.at("pose_before"));
        entry.record.pose_after = pose_from_json(jt.at("pose_after"));
        for (const auto& [k, v] : jt.value("draw_params", json::object()).items())
            entry.record.draw_params[k] = v.get<double>();
        meta.transforms.push_back(std::move(entry));
    }
    for (const json& jo : j.value("objects", json::array())) {
        ImageObjectEntry o;
        o.id = get_required<std::string>(jo, "id");
        o.class_label = get_required<std::string>(jo, "class");
        o.box = box_from_json(jo.at("box"));
        o.visible_fraction = get_required<double>(jo, "visible_fraction");
        meta.objects.push_back(std::move(o));
    }
    meta.check_invariants();
    return meta;
}

void save_image_metadata(const ImageMetadata& meta, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw CorruptMetadata("cannot write metadata file: " + path);
    out << to_json(meta).dump(2) << "\n";
}

ImageMetadata load_image_metadata(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorruptMetadata("cannot open metadata file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw CorruptMetadata("metadata file is not valid JSON (" + path + "): " + e.what());
    }
    return image_metadata_from_json(j);
}

void DatasetManifest::check_invariants() const {
    std::set<std::string> train(train_scenes.begin(), train_scenes.end());
    for (const std::string& s : test_scenes)
        if (train.count(s))
            throw CorruptMetadata("scene '" + s + "' appears in both train and test splits");
}

json to_json(const DatasetManifest& manifest) {
    json images = json::array();
    for (const ManifestImage& img : manifest.images) {
        json e{{"image", img.image_path},
               {"id_map", img.id_map_path},
               {"metadata", img.metadata_path},
               {"scene", img.scene},
               {"camera_index", img.camera_index},
               {"transform_count", img.transform_count},
               {"plausibility_score", img.plausibility_score},
               {"seed", img.seed}};
        if (!img.type.empty()) e["type"] = img.type;
        images.push_back(e);
    }
    json config = json::object();
    for (const auto& [k, v] : manifest.config_snapshot) config[k] = v;
    return {{"schema_version", 1},
            {"master_seed", manifest.master_seed},
            {"config", config},
            {"scenes", manifest.scenes},
            {"splits", {{"train", manifest.train_scenes}, {"test", manifest.test_scenes}}},
            {"images", images}};
}

DatasetManifest manifest_from_json(const json& j) {
    DatasetManifest m;
    m.master_seed = get_required<uint64_t>(j, "master_seed");
    for (const auto& [k, v] : j.value("config", json::object()).items())
        m.config_snapshot[k] = v.get<double>();
    m.scenes = j.value("scenes", std::vector<std::string>{});
    if (j.contains("splits")) {
        m.train_scenes = j["splits"].value("train", std::vector<std::string>{});
        m.test_scenes = j["splits"].value("test", std::vector<std::string>{});
    }
    for (const json& je : j.value("images", json::array())) {
        ManifestImage img;
        img.image_path = get_required<std::string>(je, "image");
        img.id_map_path = get_required<std::string>(je, "id_map");
        img.metadata_path = get_required<std::string>(je, "metadata");
        img.scene = get_required<std::string>(je, "scene");
        img.type = je.value("type", "");
        img.camera_index = get_required<int>(je, "camera_index");
        img.transform_count = get_required<int>(je, "transform_count");
        img.plausibility_score = get_required<double>(je, "plausibility_score");
        img.seed = get_required<uint64_t>(je, "seed");
        m.images.push_back(std::move(img));
    }
    m.check_invariants();
    return m;
}

void save_manifest(const DatasetManifest& manifest, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw CorruptMetadata("cannot write manifest: " + path);
    out << to_json(manifest).dump(2) << "\n";
}

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorruptMetadata("cannot open manifest: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw CorruptMetadata("manifest is not valid JSON (" + path + "): " + e.what());
    }
    return manifest_from_json(j);
}

}  // namespace plausigen
