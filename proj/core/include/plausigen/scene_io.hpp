#pragma once

#include <string>

#include "plausigen/scene.hpp"

namespace plausigen {

// Reads a scene description (JSON, schema v1) plus the OBJ meshes it
// references. Mesh paths are resolved relative to the scene file. Throws
// SchemaError / MissingMesh / DegenerateGeometry.
Scene load_scene(const std::string& path);

// Writes the scene back in the same schema. load(save(load(p))) yields
// componentwise-equal poses and identical topology.
void save_scene(const Scene& scene, const std::string& path);

std::string scene_to_json_string(const Scene& scene);

}  // namespace plausigen
