#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <type_traits>

#include <json.hpp>

#include "bpiree/errors.hpp"

namespace bpiree::detail {

template <class T>
const char* type_name() {
  if constexpr (std::is_same_v<T, bool>) return "a boolean";
  else if constexpr (std::is_same_v<T, std::string>) return "a string";
  else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) return "a nonnegative integer";
  else if constexpr (std::is_integral_v<T>) return "an integer";
  else return "a number";
}

/// Converts `j` to T, raising ConfigError("<field> must be ...") on a type
/// mismatch. Integers must be written as integers; numbers accept both.
template <class T>
T as(const nlohmann::json& j, const std::string& field) {
  bool ok = false;
  if constexpr (std::is_same_v<T, bool>) ok = j.is_boolean();
  else if constexpr (std::is_same_v<T, std::string>) ok = j.is_string();
  else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) ok = j.is_number_unsigned();
  else if constexpr (std::is_integral_v<T>) ok = j.is_number_integer();
  else ok = j.is_number();
  if (!ok) throw ConfigError(field + " must be " + type_name<T>());
  return j.get<T>();
}

template <class T>
T require(const nlohmann::json& j, const char* key, const std::string& field) {
  auto it = j.find(key);
  if (it == j.end()) throw ConfigError(field + " is required");
  return as<T>(*it, field);
}

/// Assigns j[key] to `out` when present.
template <class T>
void read_optional(const nlohmann::json& j, const char* key, const std::string& prefix, T& out) {
  auto it = j.find(key);
  if (it != j.end()) out = as<T>(*it, prefix.empty() ? key : prefix + "." + key);
}

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<std::string_view> allowed,
                           const std::string& prefix) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (auto a : allowed) known = known || it.key() == a;
    if (!known) {
      throw ConfigError("unknown key '" + (prefix.empty() ? "" : prefix + ".") + it.key() + "'");
    }
  }
}

}  // namespace bpiree::detail
