#pragma once

// Shared strict-parsing helpers for the YAML config loaders.

#include <yaml-cpp/yaml.h>

#include <initializer_list>
#include <string>
#include <string_view>

#include "ecmkit/error.hpp"

namespace ecmkit::yml {

// Every key in `node` must be in `allowed`; typos fail loudly instead of
// silently falling back to a default.
inline void require_keys(const YAML::Node& node, const std::string& file,
                         std::string_view ctx,
                         std::initializer_list<std::string_view> allowed) {
  if (!node.IsMap()) throw ParseError(file + ": " + std::string(ctx) + " must be a map");
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    bool ok = false;
    for (auto a : allowed)
      if (key == a) {
        ok = true;
        break;
      }
    if (!ok)
      throw ParseError(file + ": unknown key '" + key + "' in " + std::string(ctx));
  }
}

template <typename T>
T require(const YAML::Node& node, const std::string& file, const std::string& key) {
  const YAML::Node v = node[key];
  if (!v) throw ParseError(file + ": missing required key '" + key + "'");
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    throw ParseError(file + ": bad value for '" + key + "'");
  }
}

template <typename T>
T get_or(const YAML::Node& node, const std::string& file, const std::string& key,
         T fallback) {
  const YAML::Node v = node[key];
  if (!v) return fallback;
  try {
    return v.as<T>();
  } catch (const YAML::Exception&) {
    throw ParseError(file + ": bad value for '" + key + "'");
  }
}

}  // namespace ecmkit::yml
