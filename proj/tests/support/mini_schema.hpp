#pragma once

// Validates JSON against the subset of JSON Schema used by the files in
// schemas/: type, required, properties, additionalProperties (bool), items,
// enum, minimum, maximum, and local "#/definitions/..." references.

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace rashomon::testing {

class MiniSchema {
 public:
  explicit MiniSchema(nlohmann::json schema) : root_(std::move(schema)) {}

  static MiniSchema load(const std::filesystem::path& path) {
    std::ifstream in(path);
    return MiniSchema(nlohmann::json::parse(in));
  }

  std::vector<std::string> validate(const nlohmann::json& doc) const {
    std::vector<std::string> errors;
    check(root_, doc, "$", errors);
    return errors;
  }

 private:
  const nlohmann::json& resolve(const nlohmann::json& schema) const {
    if (!schema.contains("$ref")) return schema;
    auto ref = schema["$ref"].get<std::string>();
    const std::string prefix = "#/definitions/";
    return root_.at("definitions").at(ref.substr(prefix.size()));
  }

  static bool type_matches(const std::string& type, const nlohmann::json& v) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "integer") return v.is_number_integer();
    if (type == "number") return v.is_number();
    if (type == "boolean") return v.is_boolean();
    if (type == "null") return v.is_null();
    return false;
  }

  void check(const nlohmann::json& raw, const nlohmann::json& v, const std::string& at,
             std::vector<std::string>& errors) const {
    const auto& s = resolve(raw);
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (const auto& t : s["type"]) ok = ok || type_matches(t.get<std::string>(), v);
      } else {
        ok = type_matches(s["type"].get<std::string>(), v);
      }
      if (!ok) {
        errors.push_back(at + ": expected type " + s["type"].dump() + ", got " + v.dump().substr(0, 60));
        return;
      }
    }
    if (s.contains("enum")) {
      bool found = false;
      for (const auto& e : s["enum"]) found = found || e == v;
      if (!found) errors.push_back(at + ": value " + v.dump() + " not in enum");
    }
    if (v.is_number()) {
      if (s.contains("minimum") && v.get<double>() < s["minimum"].get<double>())
        errors.push_back(at + ": below minimum");
      if (s.contains("maximum") && v.get<double>() > s["maximum"].get<double>())
        errors.push_back(at + ": above maximum");
    }
    if (v.is_object()) {
      if (s.contains("required"))
        for (const auto& r : s["required"])
          if (!v.contains(r.get<std::string>())) errors.push_back(at + ": missing " + r.get<std::string>());
      const auto props = s.value("properties", nlohmann::json::object());
      for (const auto& [key, value] : v.items()) {
        if (props.contains(key)) {
          check(props[key], value, at + "." + key, errors);
        } else if (s.contains("additionalProperties")) {
          const auto& extra = s["additionalProperties"];
          if (extra.is_boolean() && !extra.get<bool>()) errors.push_back(at + ": unexpected key " + key);
          if (extra.is_object()) check(extra, value, at + "." + key, errors);
        }
      }
    }
    if (v.is_array() && s.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i) check(s["items"], v[i], at + "[" + std::to_string(i) + "]", errors);
  }

  nlohmann::json root_;
};

}  // namespace rashomon::testing
