#include "mcol/names.hpp"

#include <stdexcept>

namespace mcol {

NameTable NameTable::make(int n_envs, int n_features) {
  NameTable t;
  if (n_envs == 2) {
    t.envs = {"alpha", "beta"};
  } else {
    for (int i = 0; i < n_envs; ++i) {
      std::string s = "e";
      s += static_cast<char>('0' + i / 10);
      s += static_cast<char>('0' + i % 10);
      t.envs.push_back(std::move(s));
    }
  }
  for (int i = 0; i < n_features; ++i) {
    std::string s;
    if (i < 26) {
      s = std::string(1, static_cast<char>('A' + i));
    } else {
      s = "F" + std::to_string(i);
    }
    t.features.push_back(std::move(s));
  }
  return t;
}

int NameTable::env_index(const std::string& name) const {
  for (std::size_t i = 0; i < envs.size(); ++i)
    if (envs[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown environment name: " + name);
}

int NameTable::feature_index(const std::string& name) const {
  for (std::size_t i = 0; i < features.size(); ++i)
    if (features[i] == name) return static_cast<int>(i);
  throw std::invalid_argument("unknown feature name: " + name);
}

}  // namespace mcol
