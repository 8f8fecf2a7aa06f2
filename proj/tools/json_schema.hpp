#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

// Validator for the JSON-Schema subset used by the published bedmorph
// schemas: type (single or list, with "integer" admitting integral floats),
// required, properties, additionalProperties:false, enum, numeric bounds,
// items, minItems/maxItems and oneOf.

namespace bedmorph::cli {

using nlohmann::json;

namespace schema_detail {

inline bool matches_type(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "boolean") return value.is_boolean();
  if (type == "null") return value.is_null();
  if (type == "number") return value.is_number();
  if (type == "integer") {
    if (value.is_number_integer()) return true;
    if (value.is_number_float()) {
      const double v = value.get<double>();
      return v == static_cast<double>(static_cast<long long>(v));
    }
    return false;
  }
  return false;
}

inline void validate_node(const json& schema, const json& value, const std::string& path,
                          std::vector<std::string>& errors) {
  if (schema.contains("oneOf")) {
    std::size_t matches = 0;
    for (const auto& option : schema["oneOf"]) {
      std::vector<std::string> sub;
      validate_node(option, value, path, sub);
      if (sub.empty()) ++matches;
    }
    if (matches != 1) {
      errors.push_back(path + ": must match exactly one allowed form");
      return;
    }
  }

  if (schema.contains("type")) {
    const json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = matches_type(value, t.get<std::string>());
    } else if (t.is_array()) {
      for (const auto& alt : t) ok = ok || matches_type(value, alt.get<std::string>());
    }
    if (!ok) {
      errors.push_back(path + ": wrong type, expected " + t.dump());
      return;  // further checks assume the right shape
    }
  }

  if (schema.contains("enum")) {
    bool found = false;
    for (const auto& allowed : schema["enum"]) found = found || (allowed == value);
    if (!found) errors.push_back(path + ": value " + value.dump() + " not in " + schema["enum"].dump());
  }

  if (value.is_number()) {
    const double v = value.get<double>();
    if (schema.contains("minimum") && v < schema["minimum"].get<double>()) {
      errors.push_back(path + ": " + std::to_string(v) + " below minimum");
    }
    if (schema.contains("exclusiveMinimum") && v <= schema["exclusiveMinimum"].get<double>()) {
      errors.push_back(path + ": " + std::to_string(v) + " not above exclusive minimum");
    }
    if (schema.contains("maximum") && v > schema["maximum"].get<double>()) {
      errors.push_back(path + ": " + std::to_string(v) + " above maximum");
    }
    if (schema.contains("exclusiveMaximum") && v >= schema["exclusiveMaximum"].get<double>()) {
      errors.push_back(path + ": " + std::to_string(v) + " not below exclusive maximum");
    }
  }

  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& name : schema["required"]) {
        if (!value.contains(name.get<std::string>())) {
          errors.push_back(path + ": missing required key '" + name.get<std::string>() + "'");
        }
      }
    }
    const json props = schema.value("properties", json::object());
    for (const auto& [key, sub] : value.items()) {
      if (props.contains(key)) {
        validate_node(props[key], sub, path + "/" + key, errors);
      } else if (schema.value("additionalProperties", json(true)) == json(false)) {
        errors.push_back(path + ": unknown key '" + key + "'");
      }
    }
  }

  if (value.is_array()) {
    if (schema.contains("minItems") && value.size() < schema["minItems"].get<std::size_t>()) {
      errors.push_back(path + ": fewer than " + schema["minItems"].dump() + " items");
    }
    if (schema.contains("maxItems") && value.size() > schema["maxItems"].get<std::size_t>()) {
      errors.push_back(path + ": more than " + schema["maxItems"].dump() + " items");
    }
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        validate_node(schema["items"], value[i], path + "/" + std::to_string(i), errors);
      }
    }
  }
}

}  // namespace schema_detail

/// Returns the list of violations of value against schema; empty means valid.
inline std::vector<std::string> schema_violations(const json& schema, const json& value) {
  std::vector<std::string> errors;
  schema_detail::validate_node(schema, value, "#", errors);
  return errors;
}

}  // namespace bedmorph::cli
