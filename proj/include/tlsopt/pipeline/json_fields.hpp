#pragma once

#include "tlsopt/error.hpp"

#include <json.hpp>

#include <set>
#include <string>

namespace tlsopt {

/// Reads optional fields of a JSON object into existing defaults and rejects
/// keys nobody asked for.
class FieldReader {
 public:
  FieldReader(const nlohmann::json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j_.is_object()) throw ConfigError(where_ + " must be a JSON object");
  }

  template <typename T>
  FieldReader& get(const std::string& key, T& out) {
    seen_.insert(key);
    if (j_.contains(key) && !j_.at(key).is_null()) {
      try {
        out = j_.at(key).get<T>();
      } catch (const nlohmann::json::exception&) {
        throw ConfigError(where_ + "." + key + " has the wrong type");
      }
    }
    return *this;
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }
  const nlohmann::json& at(const std::string& key) const { return j_.at(key); }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError("unknown key " + where_ + "." + k);
  }

 private:
  const nlohmann::json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

}  // namespace tlsopt
