#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace plausigen {

// Validates a document against the subset of JSON Schema the repo's schema
// files use: type, properties, required, items, enum, minimum, maximum,
// minItems, maxItems, additionalProperties (boolean). Returns human-readable
// violations; empty means valid.
std::vector<std::string> schema_violations(const nlohmann::json& document,
                                           const nlohmann::json& schema);

// Loads a schema file and throws SchemaError listing every violation.
void check_against_schema_file(const nlohmann::json& document,
                               const std::string& schema_path);

}  // namespace plausigen
