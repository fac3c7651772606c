#include "plausigen/scene_io.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "plausigen/errors.hpp"

namespace plausigen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Vec3 parse_vec3(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number())
        throw SchemaError(where + " must be an array of 3 numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Quat parse_quat(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 4 || !j[0].is_number())
        throw SchemaError(where + " must be a quaternion array [w, x, y, z]");
    Quat q{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    if (std::abs(q.norm() - 1.0) > 1e-6)
        throw SchemaError(where + " quaternion is not unit length");
    return q;
}

const json& require(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw SchemaError(where + " is missing required key '" + key + "'");
    return *it;
}

json vec3_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }
json quat_to_json(const Quat& q) { return json::array({q.w, q.x, q.y, q.z}); }

}  // namespace

Scene load_scene(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open scene file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw SchemaError("scene file is not valid JSON (" + path + "): " + e.what());
    }
    if (!doc.is_object()) throw SchemaError("scene document must be a JSON object");

    const json& header = require(doc, "header", "scene");
    Scene scene;
    scene.name = require(header, "name", "header").get<std::string>();
    scene.units = require(header, "units", "header").get<std::string>();
    std::string up = header.value("up_axis", "+z");
    if (up != "+z")
        throw SchemaError("scene '" + scene.name + "' declares up_axis '" + up +
                          "'; only +z scenes are accepted");

    fs::path base = fs::path(path).parent_path();

    const json& objects = require(doc, "objects", "scene");
    if (!objects.is_array()) throw SchemaError("'objects' must be an array");
    for (const json& jo : objects) {
        SceneObject obj;
        obj.id = require(jo, "id", "object").get<std::string>();
        obj.class_label = require(jo, "class", "object '" + obj.id + "'").get<std::string>();
        std::string cat =
            require(jo, "size_category", "object '" + obj.id + "'").get<std::string>();
        auto sc = size_category_from_string(cat);
        if (!sc)
            throw SchemaError("object '" + obj.id + "' has unknown size_category '" + cat + "'");
        obj.size_category = *sc;

        obj.mesh_ref = require(jo, "mesh", "object '" + obj.id + "'").get<std::string>();
        if (scene.meshes.find(obj.mesh_ref) == scene.meshes.end()) {
            fs::path mesh_path = base / obj.mesh_ref;
            if (!fs::exists(mesh_path))
                throw MissingMesh("object '" + obj.id + "' references missing mesh file '" +
                                  obj.mesh_ref + "'");
            scene.meshes[obj.mesh_ref] =
                std::make_shared<Mesh>(load_obj(mesh_path.string()));
        }

        const json& jp = require(jo, "pose", "object '" + obj.id + "'");
        obj.pose.translation =
            parse_vec3(require(jp, "translation", "pose"), "pose.translation");
        obj.pose.rotation = parse_quat(require(jp, "rotation", "pose"), "pose.rotation");
        obj.pose.scale = parse_vec3(require(jp, "scale", "pose"), "pose.scale");

        const json& allowed = require(jo, "allowed_transforms", "object '" + obj.id + "'");
        if (!allowed.is_array())
            throw SchemaError("object '" + obj.id + "' allowed_transforms must be an array");
        for (const json& ja : allowed) {
            auto t = implausibility_type_from_string(ja.get<std::string>());
            if (!t)
                throw SchemaError("object '" + obj.id + "' lists unknown transform '" +
                                  ja.get<std::string>() + "'");
            obj.allowed_transforms.insert(*t);
        }
        scene.objects.push_back(std::move(obj));
    }

    if (doc.contains("dependencies")) {
        const json& deps = doc["dependencies"];
        if (!deps.is_array()) throw SchemaError("'dependencies' must be an array");
        for (const json& je : deps) {
            if (!je.is_array() || je.size() != 2)
                throw SchemaError("each dependency edge must be [supporter_id, supported_id]");
            scene.dependency_tree.edges[je[0].get<std::string>()].push_back(
                je[1].get<std::string>());
        }
    }

    scene.validate();
    return scene;
}

std::string scene_to_json_string(const Scene& scene) {
    json doc;
    doc["schema_version"] = 1;
    doc["header"] = {{"name", scene.name}, {"units", scene.units}, {"up_axis", "+z"}};
    json objects = json::array();
    for (const SceneObject& obj : scene.objects) {
        json allowed = json::array();
        for (ImplausibilityType t : obj.allowed_transforms) allowed.push_back(to_string(t));
        objects.push_back({
            {"id", obj.id},
            {"class", obj.class_label},
            {"size_category", to_string(obj.size_category)},
            {"mesh", obj.mesh_ref},
            {"pose",
             {{"translation", vec3_to_json(obj.pose.translation)},
              {"rotation", quat_to_json(obj.pose.rotation)},
              {"scale", vec3_to_json(obj.pose.scale)}}},
            {"allowed_transforms", allowed},
        });
    }
    doc["objects"] = objects;
    json deps = json::array();
    for (const auto& [sup, supported] : scene.dependency_tree.edges)
        for (const std::string& d : supported) deps.push_back(json::array({sup, d}));
    doc["dependencies"] = deps;
    return doc.dump(2) + "\n";
}

void save_scene(const Scene& scene, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw SchemaError("cannot write scene file: " + path);
    out << scene_to_json_string(scene);
}

}  // namespace plausigen
