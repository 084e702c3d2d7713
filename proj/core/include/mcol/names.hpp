#pragma once

#include <string>
#include <vector>

namespace mcol {

/// Symbolic names for environments and features used by traces, dumps and
/// fixture files. Features are single letters A.., environments are alpha/
/// beta for two-environment fixtures and e00.. otherwise.
struct NameTable {
  std::vector<std::string> envs;
  std::vector<std::string> features;

  static NameTable make(int n_envs, int n_features);

  const std::string& env(int i) const { return envs.at(static_cast<std::size_t>(i)); }
  const std::string& feature(int i) const { return features.at(static_cast<std::size_t>(i)); }
  int env_index(const std::string& name) const;
  int feature_index(const std::string& name) const;
};

}  // namespace mcol
