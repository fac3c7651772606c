#include "plausigen/schema_check.hpp"

#include <fstream>

#include "plausigen/errors.hpp"

namespace plausigen {

using nlohmann::json;

namespace {

bool type_matches(const json& doc, const std::string& type) {
    if (type == "object") return doc.is_object();
    if (type == "array") return doc.is_array();
    if (type == "string") return doc.is_string();
    if (type == "number") return doc.is_number();
    if (type == "integer") return doc.is_number_integer() || doc.is_number_unsigned();
    if (type == "boolean") return doc.is_boolean();
    if (type == "null") return doc.is_null();
    return false;
}

void validate(const json& doc, const json& schema, const std::string& path,
              std::vector<std::string>& errors) {
    if (schema.contains("type")) {
        const json& t = schema["type"];
        bool ok = false;
        if (t.is_string()) {
            ok = type_matches(doc, t.get<std::string>());
        } else if (t.is_array()) {
            for (const json& opt : t)
                if (type_matches(doc, opt.get<std::string>())) ok = true;
        }
        if (!ok) {
            errors.push_back(path + ": expected type " + t.dump());
            return;
        }
    }

    if (schema.contains("enum")) {
        bool ok = false;
        for (const json& v : schema["enum"])
            if (v == doc) ok = true;
        if (!ok) errors.push_back(path + ": value " + doc.dump() + " not in enum");
    }

    if (doc.is_number()) {
        double v = doc.get<double>();
        if (schema.contains("minimum") && v < schema["minimum"].get<double>())
            errors.push_back(path + ": value below minimum");
        if (schema.contains("maximum") && v > schema["maximum"].get<double>())
            errors.push_back(path + ": value above maximum");
    }

    if (doc.is_object()) {
        if (schema.contains("required"))
            for (const json& key : schema["required"])
                if (!doc.contains(key.get<std::string>()))
                    errors.push_back(path + ": missing required key '" +
                                     key.get<std::string>() + "'");
        const json* props = schema.contains("properties") ? &schema["properties"] : nullptr;
        bool allow_extra = true;
        if (schema.contains("additionalProperties") &&
            schema["additionalProperties"].is_boolean())
            allow_extra = schema["additionalProperties"].get<bool>();
        for (const auto& [key, value] : doc.items()) {
            if (props && props->contains(key)) {
                validate(value, (*props)[key], path + "." + key, errors);
            } else if (!allow_extra) {
                errors.push_back(path + ": unexpected key '" + key + "'");
            }
        }
    }

    if (doc.is_array()) {
        if (schema.contains("minItems") && doc.size() < schema["minItems"].get<size_t>())
            errors.push_back(path + ": fewer items than minItems");
        if (schema.contains("maxItems") && doc.size() > schema["maxItems"].get<size_t>())
            errors.push_back(path + ": more items than maxItems");
        if (schema.contains("items")) {
            for (size_t i = 0; i < doc.size(); ++i)
                validate(doc[i], schema["items"], path + "[" + std::to_string(i) + "]",
                         errors);
        }
    }
}

}  // namespace

std::vector<std::string> schema_violations(const json& document, const json& schema) {
    std::vector<std::string> errors;
    validate(document, schema, "$", errors);
    return errors;
}

void check_against_schema_file(const json& document, const std::string& schema_path) {
    std::ifstream in(schema_path);
    if (!in) throw SchemaError("cannot open schema file: " + schema_path);
    json schema;
    try {
        schema = json::parse(in);
    } catch (const json::exception& e) {
        throw SchemaError("schema file is not valid JSON (" + schema_path + "): " +
                          e.what());
    }
    std::vector<std::string> errors = schema_violations(document, schema);
    if (!errors.empty()) {
        std::string msg = "schema validation failed against " + schema_path + ":";
        for (const std::string& e : errors) msg += "\n  " + e;
        throw SchemaError(msg);
    }
}

}  // namespace plausigen
