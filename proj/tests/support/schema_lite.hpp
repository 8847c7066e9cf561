#pragma once

// Structural validator for the output schemas under docs/schema/.  Supports
// the subset those files use: type (name or list of names), enum, const,
// object properties/required/additionalProperties, array items, and $ref
// into the same document's $defs.  "number" accepts integer values, as in
// JSON Schema; "integer" accepts only integral numbers.

#include <string>
#include <vector>

#include <json.hpp>

namespace schema_lite {

inline bool type_matches(const nlohmann::json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "number") return v.is_number();
    if (t == "integer") return v.is_number_integer() || v.is_number_unsigned();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    return false;
}

inline void validate_node(const nlohmann::json& root, const nlohmann::json& schema,
                          const nlohmann::json& value, const std::string& path,
                          std::vector<std::string>& errors) {
    if (schema.contains("$ref")) {
        const std::string ref = schema["$ref"].get<std::string>();
        const std::string prefix = "#/$defs/";
        if (ref.rfind(prefix, 0) != 0 || !root.contains("$defs") ||
            !root["$defs"].contains(ref.substr(prefix.size()))) {
            errors.push_back(path + ": unresolvable $ref " + ref);
            return;
        }
        validate_node(root, root["$defs"][ref.substr(prefix.size())], value, path, errors);
        return;
    }

    if (schema.contains("const")) {
        if (value != schema["const"])
            errors.push_back(path + ": expected const " + schema["const"].dump() +
                             ", got " + value.dump());
        return;
    }

    if (schema.contains("enum")) {
        bool ok = false;
        for (const auto& e : schema["enum"]) ok = ok || value == e;
        if (!ok) errors.push_back(path + ": " + value.dump() + " not in enum");
        return;
    }

    if (schema.contains("type")) {
        const auto& t = schema["type"];
        bool ok = false;
        if (t.is_string()) ok = type_matches(value, t.get<std::string>());
        else
            for (const auto& name : t) ok = ok || type_matches(value, name.get<std::string>());
        if (!ok) {
            errors.push_back(path + ": type mismatch, got " + value.dump().substr(0, 40));
            return;
        }
    }

    if (value.is_object()) {
        if (schema.contains("required"))
            for (const auto& k : schema["required"])
                if (!value.contains(k.get<std::string>()))
                    errors.push_back(path + ": missing required key " + k.get<std::string>());
        const bool closed = schema.contains("additionalProperties") &&
                            schema["additionalProperties"].is_boolean() &&
                            !schema["additionalProperties"].get<bool>();
        for (const auto& [k, v] : value.items()) {
            if (schema.contains("properties") && schema["properties"].contains(k))
                validate_node(root, schema["properties"][k], v, path + "/" + k, errors);
            else if (closed)
                errors.push_back(path + ": unexpected key " + k);
        }
    }

    if (value.is_array() && schema.contains("items")) {
        std::size_t i = 0;
        for (const auto& v : value)
            validate_node(root, schema["items"], v, path + "/" + std::to_string(i++), errors);
    }
}

inline std::vector<std::string> validate(const nlohmann::json& schema,
                                         const nlohmann::json& value) {
    std::vector<std::string> errors;
    validate_node(schema, schema, value, "", errors);
    return errors;
}

} // namespace schema_lite
