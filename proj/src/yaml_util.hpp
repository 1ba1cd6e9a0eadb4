#pragma once

// Strict accessors over yaml-cpp nodes. Every error names the dotted path of
// the offending node.

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "riskbandit/config.hpp"

namespace riskbandit::yaml {

inline std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline std::string index_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

inline void require_map(const YAML::Node& node, const std::string& path) {
  if (!node.IsMap()) throw ConfigError(path, "expected a mapping");
}

inline void require_sequence(const YAML::Node& node, const std::string& path) {
  if (!node.IsSequence()) throw ConfigError(path, "expected a list");
}

inline void check_keys(const YAML::Node& node, const std::string& path,
                       std::initializer_list<const char*> allowed) {
  require_map(node, path);
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(join(path, key), "unknown key");
  }
}

template <class T>
T scalar(const YAML::Node& node, const std::string& path, const char* what) {
  if (!node.IsScalar()) throw ConfigError(path, std::string("expected ") + what);
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(path, std::string("expected ") + what + ", got '" + node.Scalar() + "'");
  }
}

inline double number(const YAML::Node& node, const std::string& path) {
  return scalar<double>(node, path, "a number");
}

inline std::size_t count(const YAML::Node& node, const std::string& path) {
  const auto s = node.IsScalar() ? node.Scalar() : std::string{};
  if (!s.empty() && s.front() == '-') throw ConfigError(path, "expected a non-negative integer");
  return static_cast<std::size_t>(scalar<std::uint64_t>(node, path, "a non-negative integer"));
}

inline std::string text(const YAML::Node& node, const std::string& path) {
  return scalar<std::string>(node, path, "a string");
}

inline bool boolean(const YAML::Node& node, const std::string& path) {
  return scalar<bool>(node, path, "true or false");
}

/// Accepts a scalar or a list of scalars.
inline std::vector<double> numbers(const YAML::Node& node, const std::string& path) {
  std::vector<double> out;
  if (node.IsScalar()) {
    out.push_back(number(node, path));
    return out;
  }
  require_sequence(node, path);
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(number(node[i], index_path(path, i)));
  return out;
}

inline Eigen::MatrixXd matrix(const YAML::Node& node, const std::string& path) {
  require_sequence(node, path);
  const auto rows = node.size();
  if (rows == 0) throw ConfigError(path, "matrix has no rows");
  std::size_t cols = 0;
  Eigen::MatrixXd m;
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = numbers(node[r], index_path(path, r));
    if (r == 0) {
      cols = row.size();
      m.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      throw ConfigError(index_path(path, r), "ragged matrix row");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c];
    }
  }
  return m;
}

}  // namespace riskbandit::yaml
