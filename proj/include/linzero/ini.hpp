// Copyright 2026 The LinZero Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Strict key = value / [section] files on top of Boost.PropertyTree.

#ifndef LINZERO_INI_HPP
#define LINZERO_INI_HPP

#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "linzero/error.hpp"

namespace linzero {

using IniTree = boost::property_tree::ptree;

inline IniTree read_ini_file(const std::string& path) {
  IniTree tree;
  try {
    boost::property_tree::ini_parser::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    if (e.line() == 0) throw IoError("cannot read config '" + path + "': " + e.message());
    throw ConfigError("config '" + path + "' line " + std::to_string(e.line()) + ": " + e.message());
  }
  return tree;
}

inline IniTree read_ini_string(const std::string& text) {
  IniTree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("config line " + std::to_string(e.line()) + ": " + e.message());
  }
  return tree;
}

/// Typed reads from one [section], remembering which keys were consumed so
/// leftovers can be rejected.
class IniSection {
 public:
  IniSection(const IniTree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  bool present() const noexcept { return tree_ != nullptr; }
  const std::string& name() const noexcept { return name_; }

  template <class T>
  T get(const std::string& key, T fallback) {
    seen_.insert(key);
    if (!tree_) return fallback;
    const auto child = tree_->get_child_optional(key);
    if (!child) return fallback;
    try {
      return child->get_value<T>();
    } catch (const boost::property_tree::ptree_bad_data&) {
      throw ConfigError("[" + name_ + "] " + key + " = '" + child->data() + "' has the wrong type");
    }
  }

  std::string get_string(const std::string& key, const std::string& fallback) {
    seen_.insert(key);
    if (!tree_) return fallback;
    return tree_->get<std::string>(key, fallback);
  }

  /// Comma-separated list.
  std::vector<std::string> get_list(const std::string& key, std::vector<std::string> fallback) {
    seen_.insert(key);
    if (!tree_) return fallback;
    const auto child = tree_->get_child_optional(key);
    if (!child) return fallback;
    return split_list(child->data());
  }

  void reject_unknown() const {
    if (!tree_) return;
    for (const auto& [key, child] : *tree_) {
      if (!seen_.contains(key)) throw ConfigError("unknown key '" + key + "' in [" + name_ + "]");
    }
  }

  static std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
      const auto first = item.find_first_not_of(" \t");
      const auto last = item.find_last_not_of(" \t");
      if (first == std::string::npos) continue;
      out.push_back(item.substr(first, last - first + 1));
    }
    return out;
  }

 private:
  const IniTree* tree_;
  std::string name_;
  std::set<std::string> seen_;
};

inline IniSection section(const IniTree& tree, const std::string& name) {
  const auto child = tree.get_child_optional(name);
  return IniSection(child ? &*child : nullptr, name);
}

inline void reject_unknown_sections(const IniTree& tree, const std::set<std::string>& known) {
  for (const auto& [key, child] : tree) {
    if (child.empty() && !child.data().empty()) throw ConfigError("key '" + key + "' outside of any [section]");
    if (!known.contains(key)) throw ConfigError("unknown section [" + key + "]");
  }
}

}  // namespace linzero

#endif  // LINZERO_INI_HPP
