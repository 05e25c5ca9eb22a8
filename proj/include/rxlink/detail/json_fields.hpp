#pragma once

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "rxlink/errors.hpp"

namespace rxlink::detail {

using json = nlohmann::json;

inline std::string qualified(std::string_view section, std::string_view key) {
  if (section.empty()) return std::string(key);
  return std::string(section) + "." + std::string(key);
}

inline const json& require_object(const json& doc, std::string_view key,
                                  std::string_view section = {}) {
  auto it = doc.find(std::string(key));
  if (it == doc.end()) throw ParseError(qualified(section, key), "missing section");
  if (!it->is_object()) throw ParseError(qualified(section, key), "expected an object");
  return *it;
}

inline void reject_unknown_keys(const json& obj, std::string_view section,
                                std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : obj.items()) {
    bool found = false;
    for (auto k : known) {
      if (k == key) {
        found = true;
        break;
      }
    }
    if (!found) throw ParseError(qualified(section, key), "unknown key");
  }
}

inline std::optional<double> optional_number(const json& obj, std::string_view key,
                                             std::string_view section) {
  auto it = obj.find(std::string(key));
  if (it == obj.end()) return std::nullopt;
  if (!it->is_number()) throw ParseError(qualified(section, key), "expected a number");
  double v = it->get<double>();
  if (!std::isfinite(v)) throw ParseError(qualified(section, key), "not finite");
  return v;
}

inline double require_number(const json& obj, std::string_view key,
                             std::string_view section) {
  auto v = optional_number(obj, key, section);
  if (!v) throw ParseError(qualified(section, key), "missing field");
  return *v;
}

inline std::string require_string(const json& obj, std::string_view key,
                                  std::string_view section) {
  auto it = obj.find(std::string(key));
  if (it == obj.end()) throw ParseError(qualified(section, key), "missing field");
  if (!it->is_string()) throw ParseError(qualified(section, key), "expected a string");
  return it->get<std::string>();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse_document(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin, e.what());
  }
}

}  // namespace rxlink::detail
